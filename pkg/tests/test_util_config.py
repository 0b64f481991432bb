#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

import logging

import pytest

from timid_tools.exceptions import ConfigError
from timid_tools.simgen import GeneratorConfig
from timid_tools.timid_config import load_config_file, build_config, dataclass_to_jsonable, merge_overrides
from timid_tools.train import TrainConfig
from timid_tools.util import (
    canonical_json, hash_jsonable, derive_seed, write_json_file, load_json_file,
    files_are_identical, resolve_log_level, configure_logging, LOG_ENV_VAR,
  )

def test_canonical_json_is_key_order_independent():
  assert canonical_json({'b': 1, 'a': [1, 2]}) == canonical_json({'a': [1, 2], 'b': 1})
  assert canonical_json({'a': 1}).endswith('\n')
  assert hash_jsonable({'x': 1, 'y': 2}) == hash_jsonable({'y': 2, 'x': 1})
  assert hash_jsonable({'x': 1}) != hash_jsonable({'x': 2})

def test_derive_seed():
  assert derive_seed(1, 'ep', 0) == derive_seed(1, 'ep', 0)
  assert derive_seed(1, 'ep', 0) != derive_seed(1, 'ep', 1)
  assert derive_seed(1, 'ep0') != derive_seed(1, 'ep', 0)
  assert 0 <= derive_seed(123, 'x') < 2 ** 63

def test_json_files(tmp_path):
  a = str(tmp_path / 'sub' / 'a.json')
  b = str(tmp_path / 'b.json')
  write_json_file(a, {'k': [1, 2.5, True]})
  write_json_file(b, {'k': [1, 2.5, True]})
  assert load_json_file(a) == {'k': [1, 2.5, True]}
  assert files_are_identical(a, b)
  assert not (tmp_path / 'sub' / 'a.json.tmp').exists()

def test_log_level(monkeypatch):
  monkeypatch.delenv(LOG_ENV_VAR, raising=False)
  assert resolve_log_level() == logging.WARNING
  monkeypatch.setenv(LOG_ENV_VAR, 'debug')
  assert resolve_log_level() == logging.DEBUG
  assert resolve_log_level('Info') == logging.INFO
  with pytest.raises(ConfigError):
    resolve_log_level('loud')
  assert configure_logging('error') == logging.ERROR
  assert configure_logging('error') == logging.ERROR
  handlers = [h for h in logging.getLogger('timid_tools').handlers if getattr(h, '_timid_handler', False)]
  assert len(handlers) == 1

@pytest.mark.parametrize('name, text', [
    ('c.yaml', 'train:\n  epochs: 7\n  learning_rate: 0.01\n'),
    ('c.toml', '[train]\nepochs = 7\nlearning_rate = 0.01\n'),
    ('c.json', '{"train": {"epochs": 7, "learning_rate": 0.01}}'),
  ])
def test_config_formats(tmp_path, name, text):
  path = tmp_path / name
  path.write_text(text, encoding='utf-8')
  data = load_config_file(str(path))
  config = build_config(TrainConfig, data, 'train', {'epochs': None, 'batch_size': 4})
  assert config == TrainConfig(epochs=7, learning_rate=0.01, batch_size=4)

def test_config_errors(tmp_path):
  with pytest.raises(ConfigError):
    load_config_file(str(tmp_path / 'missing.yaml'))
  bad = tmp_path / 'c.ini'
  bad.write_text('x', encoding='utf-8')
  with pytest.raises(ConfigError):
    load_config_file(str(bad))
  for text in ('evaluate:\n  x: 1\n', '- 1\n', 'train: 3\n', 'train: [\n'):
    path = tmp_path / 'c.yaml'
    path.write_text(text, encoding='utf-8')
    with pytest.raises(ConfigError):
      load_config_file(str(path))
  with pytest.raises(ConfigError):
    build_config(TrainConfig, {'train': {'epoch': 3}}, 'train')
  with pytest.raises(ConfigError):
    build_config(TrainConfig, {'train': {'epochs': 0}}, 'train')

def test_flags_override_file_values():
  assert merge_overrides({'a': 1, 'b': 2}, {'a': None, 'b': 5, 'c': 6}) == {'a': 1, 'b': 5, 'c': 6}
  config = build_config(GeneratorConfig, {'gen': {'layouts': [2, 0], 'seed': 4}}, 'gen', {'seed': 9})
  assert config.layouts == (2, 0)
  assert config.seed == 9
  assert dataclass_to_jsonable(config)['layouts'] == [2, 0]
