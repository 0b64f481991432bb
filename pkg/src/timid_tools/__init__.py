# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""
Package timid_tools detects time-dependent mistakes in multi-robot
episodes: LTL task rules label simulated episodes, and a weakly-supervised
attention model learns to localize rule violations step by step.
"""

from .version import __version__

from .internal_types import Jsonable, JsonableDict, JsonableList
from .exceptions import (
    TimidError, LtlSyntaxError, UnknownOperatorError, UnknownAtomError,
    ShapeError, ScheduleError, ConfigError, DatasetError,
    NonFiniteLossError, MetricError, EmptyTraceError,
  )
from .util import (
    canonical_json,
    hash_jsonable,
    derive_seed,
    atomic_mv,
    write_bytes_atomic,
    write_text_atomic,
    write_json_file,
    file_contents,
    load_json_file,
    get_file_hash_hex,
    files_are_identical,
    configure_logging,
    resolve_log_level,
    LOG_ENV_VAR,
    YamlLoader,
  )
from .timid_config import load_config_file, build_config, CONFIG_SECTIONS
from .ltl import LtlFormula, parse_ltl, eval_finite, progress, monitor, MonitorStatus, MonitorVerdict
from .simgen import GeneratorConfig, Task, MistakeKind, generate_dataset, load_dataset, Dataset
from .model import ModelConfig, ModelParams, Checkpoint, init_params, load_checkpoint, embed_prompts, forward
from .train import TrainConfig, train_loop
from .eval import average_precision, average_recall, f1_from_ap_ar, build_report, score_dataset
