#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""
Package timid_tools.simgen simulates multi-robot episodes in a small arena and
writes labelled, featurized datasets for weakly-supervised training.
"""

from .arena import (
    Arena, get_arena, NUM_LAYOUTS, LION, BALL, PROPOSITIONS, DEFAULT_VICINITY_RADIUS,
    distance, segment_point_distance,
  )
from .tasks import Task, MistakeKind, parse_task, parse_mistake, check_mistake_compatible
from .planner import Leg, RobotPlan, EpisodePlan, plan_episode, DEFAULT_MAX_SLOTS
from .simulate import SimulationResult, simulate
from .labels import label_steps, video_label
from .features import raw_state, encoder_map, encode_state, encode_features
from .dataset import (
    GeneratorConfig, Episode, EpisodeSpec, EpisodeRecord, EpisodeData,
    DatasetManifest, Dataset,
    generate_episode, generate_episodes, episode_specs, assign_splits,
    generate_dataset, load_dataset, write_episode,
    MANIFEST_FILE, MANIFEST_VERSION, FEATURE_DTYPE, SPLITS,
  )
