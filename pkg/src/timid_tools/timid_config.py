#!/usr/bin/env python3
#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Config file loading and typed config dataclass construction"""

from typing import Optional, Any, Mapping, Type, TypeVar, Dict, Sequence, cast

import os
import dataclasses
import json

import tomlkit
from tomlkit.exceptions import TOMLKitError
import yaml

from .internal_types import JsonableDict
from .util import file_contents, YamlLoader
from .exceptions import ConfigError

CONFIG_SECTIONS = ('gen', 'train', 'model')

T = TypeVar('T')

def load_config_file(config_file: str) -> JsonableDict:
  """Loads a YAML, TOML or JSON config file into plain JSON-style data.

  The top level must be a mapping whose keys are config sections
  ('gen', 'train', 'model').
  """
  config_file = os.path.abspath(os.path.normpath(os.path.expanduser(config_file)))
  try:
    text = file_contents(config_file)
  except FileNotFoundError:
    raise ConfigError(f"Config file not found: {config_file}") from None
  lower = config_file.lower()
  try:
    if lower.endswith('.yaml') or lower.endswith('.yml'):
      data = yaml.load(text, Loader=YamlLoader)
    elif lower.endswith('.toml'):
      data = tomlkit.parse(text).unwrap()
    elif lower.endswith('.json'):
      data = json.loads(text)
    else:
      raise ConfigError(f"Unsupported config file type (expected .yaml, .yml, .toml or .json): {config_file}")
  except (yaml.YAMLError, TOMLKitError, json.JSONDecodeError) as e:
    raise ConfigError(f"Malformed config file {config_file}: {e}") from e
  if data is None:
    data = {}
  if not isinstance(data, dict):
    raise ConfigError(f"Config file {config_file} must contain a mapping at the top level")
  unknown = sorted(set(data) - set(CONFIG_SECTIONS))
  if len(unknown) > 0:
    raise ConfigError(f"Unknown config sections in {config_file}: {unknown}; expected {list(CONFIG_SECTIONS)}")
  for section, value in data.items():
    if not isinstance(value, dict):
      raise ConfigError(f"Config section {section!r} in {config_file} must be a mapping")
  return cast(JsonableDict, data)

def config_section(data: Optional[Mapping[str, Any]], section: str) -> Dict[str, Any]:
  if data is None:
    return {}
  return dict(cast(Mapping[str, Any], data.get(section, {})))

def dataclass_from_mapping(cls: Type[T], values: Mapping[str, Any], section: str='') -> T:
  """Builds a config dataclass, rejecting keys that are not fields of `cls`.

  Sequence-typed fields given as lists are converted to tuples so the
  resulting (frozen) config is hashable.
  """
  assert dataclasses.is_dataclass(cls)
  fields = {f.name: f for f in dataclasses.fields(cls)}
  unknown = sorted(set(values) - set(fields))
  if len(unknown) > 0:
    where = f" in section {section!r}" if section != '' else ''
    raise ConfigError(f"Unknown config keys{where}: {unknown}; expected a subset of {sorted(fields)}")
  kwargs: Dict[str, Any] = {}
  for k, v in values.items():
    if isinstance(v, list):
      v = tuple(v)
    kwargs[k] = v
  try:
    return cast(T, cls(**kwargs))
  except TypeError as e:
    raise ConfigError(f"Invalid {cls.__name__} configuration: {e}") from e

def merge_overrides(base: Mapping[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
  """Flags win: every override that is not None replaces the config-file value."""
  result = dict(base)
  for k, v in overrides.items():
    if v is not None:
      result[k] = v
  return result

def build_config(
      cls: Type[T],
      file_data: Optional[Mapping[str, Any]],
      section: str,
      overrides: Optional[Mapping[str, Any]]=None,
    ) -> T:
  values = merge_overrides(config_section(file_data, section), overrides or {})
  result = dataclass_from_mapping(cls, values, section)
  validate = getattr(result, 'validate', None)
  if validate is not None:
    validate()
  return result

def dataclass_to_jsonable(obj: Any) -> JsonableDict:
  """Converts a config dataclass to JSON data (tuples become lists, enums their values)."""
  def _convert(v: Any) -> Any:
    if isinstance(v, (list, tuple)):
      return [_convert(x) for x in v]
    if isinstance(v, dict):
      return {str(k): _convert(x) for k, x in v.items()}
    if hasattr(v, 'value') and not isinstance(v, (int, float, str, bool)):
      return v.value
    return v
  return {f.name: _convert(getattr(obj, f.name)) for f in dataclasses.fields(obj)}

def require_positive(name: str, value: float) -> None:
  if not value > 0:
    raise ConfigError(f"{name} must be positive, got {value}")

def require_in(name: str, value: Any, allowed: Sequence[Any]) -> None:
  if value not in allowed:
    raise ConfigError(f"{name} must be one of {list(allowed)}, got {value!r}")
