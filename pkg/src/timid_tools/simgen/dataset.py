#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Episode and dataset generation, and the on-disk dataset format

Layout of a dataset directory::

    manifest.json           dataset manifest (JSON)
    features/<id>.f32       T x D row-major little-endian float32 features
    labels/<id>.json        step labels, video label and proposition trace
"""

from typing import List, Optional, Tuple, Dict, Sequence, Iterator, cast
from dataclasses import dataclass, field

import os
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..exceptions import ConfigError, ScheduleError, DatasetError
from ..internal_types import FloatArray, JsonableDict, Jsonable
from ..ltl import eval_finite, monitor, PropositionState
from ..timid_config import dataclass_to_jsonable, require_positive
from ..util import derive_seed, write_bytes_atomic, write_json_file, load_json_file
from .arena import get_arena, NUM_LAYOUTS, DEFAULT_VICINITY_RADIUS
from .tasks import Task, MistakeKind, parse_task, parse_mistake, check_mistake_compatible
from .planner import plan_episode, DEFAULT_MAX_SLOTS, EpisodePlan
from .simulate import simulate, DEFAULT_STEPS_PER_LEG, DEFAULT_NOISE_SIGMA
from .labels import label_steps
from .features import encode_features, DEFAULT_FEATURE_DIM, DEFAULT_FEATURE_NOISE_SIGMA

logger = logging.getLogger(__name__)

MANIFEST_VERSION = 1
MANIFEST_FILE = 'manifest.json'
FEATURE_DTYPE = np.dtype('<f4')
SPLITS = ('train', 'test')
DEFAULT_SEGMENT_LEN = 16

@dataclass(frozen=True)
class GeneratorConfig:
  task: str = 'mutex'
  n_normal: int = 125
  n_anomalous: int = 125
  layouts: Tuple[int, ...] = (0, 1, 2)
  num_robots: int = 3
  mistakes: Tuple[str, ...] = ()
  """Mistake kinds for anomalous episodes, used round-robin; empty means the task's defaults."""
  test_fraction: float = 0.2
  seed: int = 1
  steps_per_leg: int = DEFAULT_STEPS_PER_LEG
  noise_sigma: float = DEFAULT_NOISE_SIGMA
  vicinity_radius: float = DEFAULT_VICINITY_RADIUS
  feature_dim: int = DEFAULT_FEATURE_DIM
  feature_noise_sigma: float = DEFAULT_FEATURE_NOISE_SIGMA
  encoder_seed: int = 0
  segment_len: int = DEFAULT_SEGMENT_LEN
  max_slots: int = DEFAULT_MAX_SLOTS
  max_attempts: int = 20

  @property
  def task_kind(self) -> Task:
    return parse_task(self.task)

  @property
  def mistake_kinds(self) -> Tuple[MistakeKind, ...]:
    if len(self.mistakes) == 0:
      return self.task_kind.default_mistakes
    return tuple(parse_mistake(m) for m in self.mistakes)

  def validate(self) -> None:
    task = self.task_kind
    if self.n_normal < 0 or self.n_anomalous < 0 or self.n_normal + self.n_anomalous == 0:
      raise ConfigError(f"Episode counts must be non-negative with at least one episode, got {self.n_normal}/{self.n_anomalous}")
    if len(self.layouts) == 0:
      raise ConfigError("At least one layout is required")
    for layout in self.layouts:
      if not 0 <= int(layout) < NUM_LAYOUTS:
        raise ConfigError(f"Layout index must be in [0, {NUM_LAYOUTS - 1}], got {layout}")
    if self.num_robots < 2:
      raise ConfigError(f"num_robots must be at least 2, got {self.num_robots}")
    for m in self.mistake_kinds:
      if m is MistakeKind.NONE:
        raise ConfigError("'none' is not a mistake kind for anomalous episodes")
      try:
        check_mistake_compatible(task, m)
      except ScheduleError as e:
        raise ConfigError(str(e)) from e
    if not 0.0 <= self.test_fraction < 1.0:
      raise ConfigError(f"test_fraction must be in [0, 1), got {self.test_fraction}")
    for name in ('steps_per_leg', 'vicinity_radius', 'feature_dim', 'segment_len', 'max_slots', 'max_attempts'):
      require_positive(name, getattr(self, name))
    if self.noise_sigma < 0 or self.feature_noise_sigma < 0:
      raise ConfigError("Noise levels must be non-negative")

  def to_jsonable(self) -> JsonableDict:
    return dataclass_to_jsonable(self)

@dataclass(frozen=True)
class Episode:
  episode_id: str
  task: Task
  layout: int
  mistake: MistakeKind
  positions: FloatArray
  """(T, robots, 2) per-step robot coordinates"""
  prop_trace: Tuple[Dict[str, bool], ...]
  step_labels: Tuple[bool, ...]
  video_label: bool
  features: FloatArray
  """(T, D) feature matrix"""
  segment_len: int = DEFAULT_SEGMENT_LEN

  @property
  def num_steps(self) -> int:
    return len(self.step_labels)

  @property
  def num_robots(self) -> int:
    return int(self.positions.shape[1])

  @property
  def raw_frame_count(self) -> int:
    return self.num_steps * self.segment_len

  def labels_record(self) -> JsonableDict:
    return {
        'episode_id': self.episode_id,
        'task': self.task.value,
        'layout': self.layout,
        'mistake': self.mistake.value,
        'num_steps': self.num_steps,
        'raw_frame_count': self.raw_frame_count,
        'step_labels': [bool(x) for x in self.step_labels],
        'video_label': bool(self.video_label),
        'prop_trace': [dict(s) for s in self.prop_trace],
      }

def generate_episode(
      config: GeneratorConfig,
      episode_id: str,
      anomalous: bool,
      layout: int,
      mistake: MistakeKind,
    ) -> Episode:
  """Plans, simulates, labels and encodes one episode.

  The LTL monitor is the label oracle: a plan whose simulated trace does not
  have the intended verdict is re-drawn (up to `max_attempts` times).
  """
  task = config.task_kind
  formula = task.formula
  arena = get_arena(layout, config.vicinity_radius)
  plan_mistake = mistake if anomalous else MistakeKind.NONE
  for attempt in range(config.max_attempts):
    base = derive_seed(config.seed, episode_id, attempt)
    try:
      plan: EpisodePlan = plan_episode(
          task, arena, config.num_robots, plan_mistake, derive_seed(base, 'plan'), config.max_slots)
    except ScheduleError as e:
      logger.debug("Episode %s attempt %d: %s", episode_id, attempt, e)
      continue
    sim = simulate(plan, arena, config.steps_per_leg, config.noise_sigma, derive_seed(base, 'sim'))
    verdict = monitor(formula, sim.prop_trace)
    if verdict.violated == anomalous:
      break
    logger.debug("Episode %s attempt %d: monitor verdict %s, redrawing", episode_id, attempt, verdict.status.value)
  else:
    raise ScheduleError(f"Could not generate episode {episode_id} with the intended label in {config.max_attempts} attempts")

  step_labels = label_steps(task, sim.prop_trace)
  video = any(step_labels)
  if video == eval_finite(formula, sim.prop_trace) or video != anomalous:
    raise DatasetError(f"Episode {episode_id}: step labels disagree with the LTL verdict")
  features = encode_features(
      sim.positions, sim.prop_trace, arena,
      feature_dim=config.feature_dim,
      encoder_seed=config.encoder_seed,
      feature_noise_sigma=config.feature_noise_sigma,
      noise_seed=derive_seed(base, 'features'),
    )
  return Episode(
      episode_id=episode_id,
      task=task,
      layout=layout,
      mistake=plan_mistake,
      positions=sim.positions,
      prop_trace=tuple(sim.prop_trace),
      step_labels=tuple(step_labels),
      video_label=video,
      features=features,
      segment_len=config.segment_len,
    )

@dataclass(frozen=True)
class EpisodeSpec:
  episode_id: str
  anomalous: bool
  layout: int
  mistake: MistakeKind

def episode_specs(config: GeneratorConfig) -> List[EpisodeSpec]:
  task = config.task_kind
  specs: List[EpisodeSpec] = []
  for i in range(config.n_normal):
    specs.append(EpisodeSpec(f"{task.value}-n-{i:04d}", False, int(config.layouts[i % len(config.layouts)]), MistakeKind.NONE))
  kinds = config.mistake_kinds
  for i in range(config.n_anomalous):
    specs.append(EpisodeSpec(
        f"{task.value}-a-{i:04d}", True, int(config.layouts[i % len(config.layouts)]), kinds[i % len(kinds)]))
  return specs

def generate_episodes(config: GeneratorConfig, workers: int=1) -> List[Episode]:
  """Generates every configured episode. Each episode's randomness derives from
     (seed, episode_id) only, so the result does not depend on `workers`."""
  config.validate()
  specs = episode_specs(config)
  def _one(spec: EpisodeSpec) -> Episode:
    return generate_episode(config, spec.episode_id, spec.anomalous, spec.layout, spec.mistake)
  if workers > 1:
    with ThreadPoolExecutor(max_workers=workers) as pool:
      return list(pool.map(_one, specs))
  return [_one(s) for s in specs]

def assign_splits(episodes: Sequence[Episode], test_fraction: float, seed: int) -> Dict[str, str]:
  """Stratified train/test split: each video-label group contributes round(n * test_fraction) test episodes."""
  result: Dict[str, str] = {}
  for label in (False, True):
    ids = sorted(e.episode_id for e in episodes if e.video_label == label)
    rng = np.random.default_rng(derive_seed(seed, 'split', int(label)))
    order = rng.permutation(len(ids))
    n_test = int(round(len(ids) * test_fraction))
    for rank, idx in enumerate(order):
      result[ids[int(idx)]] = 'test' if rank < n_test else 'train'
  return result

@dataclass(frozen=True)
class EpisodeRecord:
  episode_id: str
  num_steps: int
  video_label: bool
  split: str
  features_path: str
  labels_path: str
  layout: int
  mistake: str

  def to_jsonable(self) -> JsonableDict:
    return dataclass_to_jsonable(self)

@dataclass(frozen=True)
class DatasetManifest:
  version: int
  task: str
  formula: str
  task_prompt: str
  mistake_prompt: str
  segment_len: int
  feature_dim: int
  num_robots: int
  seed: int
  generator: JsonableDict
  episodes: Tuple[EpisodeRecord, ...] = field(default_factory=tuple)

  def validate(self) -> None:
    ids = [e.episode_id for e in self.episodes]
    if len(set(ids)) != len(ids):
      raise DatasetError("Episode ids in manifest are not unique")
    for e in self.episodes:
      if e.split not in SPLITS:
        raise DatasetError(f"Episode {e.episode_id} has invalid split {e.split!r}")

  def records(self, split: Optional[str]=None) -> List[EpisodeRecord]:
    return [e for e in self.episodes if split is None or e.split == split]

  def summary(self) -> Dict[str, Dict[str, int]]:
    """Episode counts per split and video label."""
    result: Dict[str, Dict[str, int]] = {s: {'normal': 0, 'anomalous': 0} for s in SPLITS}
    for e in self.episodes:
      result[e.split]['anomalous' if e.video_label else 'normal'] += 1
    return result

  def to_jsonable(self) -> JsonableDict:
    return {
        'version': self.version,
        'task': self.task,
        'formula': self.formula,
        'prompts': {'task_prompt': self.task_prompt, 'mistake_prompt': self.mistake_prompt},
        'segment_len': self.segment_len,
        'feature_dim': self.feature_dim,
        'num_robots': self.num_robots,
        'seed': self.seed,
        'generator': self.generator,
        'episodes': [e.to_jsonable() for e in self.episodes],
      }

  @classmethod
  def from_jsonable(cls, data: Jsonable) -> 'DatasetManifest':
    try:
      d = cast(Dict, data)
      result = cls(
          version=int(d['version']),
          task=str(d['task']),
          formula=str(d['formula']),
          task_prompt=str(d['prompts']['task_prompt']),
          mistake_prompt=str(d['prompts']['mistake_prompt']),
          segment_len=int(d['segment_len']),
          feature_dim=int(d['feature_dim']),
          num_robots=int(d['num_robots']),
          seed=int(d['seed']),
          generator=cast(JsonableDict, d['generator']),
          episodes=tuple(EpisodeRecord(**e) for e in d['episodes']),
        )
    except (KeyError, TypeError, ValueError) as e:
      raise DatasetError(f"Malformed dataset manifest: {e}") from e
    if result.version != MANIFEST_VERSION:
      raise DatasetError(f"Unsupported manifest version {result.version}")
    result.validate()
    return result

def write_episode(out_dir: str, episode: Episode) -> Tuple[str, str]:
  features_path = f"features/{episode.episode_id}.f32"
  labels_path = f"labels/{episode.episode_id}.json"
  write_bytes_atomic(os.path.join(out_dir, features_path), episode.features.astype(FEATURE_DTYPE).tobytes(order='C'))
  write_json_file(os.path.join(out_dir, labels_path), episode.labels_record())
  return features_path, labels_path

def generate_dataset(config: GeneratorConfig, out_dir: str, workers: int=1) -> DatasetManifest:
  """Generates, splits and writes a dataset; (config, seed) fully determine every byte written."""
  episodes = generate_episodes(config, workers=workers)
  splits = assign_splits(episodes, config.test_fraction, config.seed)
  task = config.task_kind
  records: List[EpisodeRecord] = []
  try:
    os.makedirs(out_dir, exist_ok=True)
    for ep in episodes:
      features_path, labels_path = write_episode(out_dir, ep)
      records.append(EpisodeRecord(
          episode_id=ep.episode_id,
          num_steps=ep.num_steps,
          video_label=ep.video_label,
          split=splits[ep.episode_id],
          features_path=features_path,
          labels_path=labels_path,
          layout=ep.layout,
          mistake=ep.mistake.value,
        ))
    manifest = DatasetManifest(
        version=MANIFEST_VERSION,
        task=task.value,
        formula=task.formula_text,
        task_prompt=task.task_prompt,
        mistake_prompt=task.mistake_prompt,
        segment_len=config.segment_len,
        feature_dim=config.feature_dim,
        num_robots=config.num_robots,
        seed=config.seed,
        generator=config.to_jsonable(),
        episodes=tuple(records),
      )
    manifest.validate()
    write_json_file(os.path.join(out_dir, MANIFEST_FILE), manifest.to_jsonable())
  except OSError as e:
    raise DatasetError(f"Failed writing dataset to {out_dir}: {e}") from e
  logger.info("Wrote %d episodes to %s", len(records), out_dir)
  return manifest

@dataclass(frozen=True)
class EpisodeData:
  """One episode as read back from disk."""
  record: EpisodeRecord
  features: FloatArray
  step_labels: Tuple[bool, ...]
  prop_trace: Tuple[PropositionState, ...]

  @property
  def episode_id(self) -> str:
    return self.record.episode_id

  @property
  def video_label(self) -> bool:
    return self.record.video_label

  @property
  def num_steps(self) -> int:
    return self.record.num_steps

class Dataset:
  root: str
  manifest: DatasetManifest

  def __init__(self, root: str, manifest: DatasetManifest):
    self.root = root
    self.manifest = manifest

  @property
  def feature_dim(self) -> int:
    return self.manifest.feature_dim

  @property
  def task(self) -> Task:
    return parse_task(self.manifest.task)

  def records(self, split: Optional[str]=None) -> List[EpisodeRecord]:
    return self.manifest.records(split)

  def record(self, episode_id: str) -> EpisodeRecord:
    for r in self.manifest.episodes:
      if r.episode_id == episode_id:
        return r
    raise DatasetError(f"Episode {episode_id!r} is not in the dataset at {self.root}")

  def load_features(self, record: EpisodeRecord) -> FloatArray:
    path = os.path.join(self.root, record.features_path)
    try:
      raw = np.fromfile(path, dtype=FEATURE_DTYPE)
    except OSError as e:
      raise DatasetError(f"Cannot read features for {record.episode_id}: {e}") from e
    expected = record.num_steps * self.feature_dim
    if raw.size != expected:
      raise DatasetError(
          f"Feature file {path} holds {raw.size} values, expected {record.num_steps} x {self.feature_dim}")
    return raw.astype(np.float64).reshape(record.num_steps, self.feature_dim)

  def load_episode(self, record: EpisodeRecord) -> EpisodeData:
    path = os.path.join(self.root, record.labels_path)
    try:
      labels = cast(Dict, load_json_file(path))
    except (OSError, ValueError) as e:
      raise DatasetError(f"Cannot read labels for {record.episode_id}: {e}") from e
    step_labels = tuple(bool(x) for x in labels['step_labels'])
    if len(step_labels) != record.num_steps:
      raise DatasetError(f"Labels for {record.episode_id} have {len(step_labels)} steps, expected {record.num_steps}")
    return EpisodeData(
        record=record,
        features=self.load_features(record),
        step_labels=step_labels,
        prop_trace=tuple(labels['prop_trace']),
      )

  def episodes(self, split: Optional[str]=None) -> Iterator[EpisodeData]:
    for r in self.records(split):
      yield self.load_episode(r)

def load_dataset(root: str) -> Dataset:
  """Opens a dataset directory and checks that every referenced file exists."""
  path = os.path.join(root, MANIFEST_FILE)
  if not os.path.isfile(path):
    raise DatasetError(f"No dataset manifest at {path}")
  try:
    data = load_json_file(path)
  except ValueError as e:
    raise DatasetError(f"Malformed dataset manifest {path}: {e}") from e
  manifest = DatasetManifest.from_jsonable(data)
  for r in manifest.episodes:
    for rel in (r.features_path, r.labels_path):
      if not os.path.isfile(os.path.join(root, rel)):
        raise DatasetError(f"Dataset file missing: {os.path.join(root, rel)}")
  return Dataset(root, manifest)
