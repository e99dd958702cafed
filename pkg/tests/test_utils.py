import logging

import pytest

from utils import ConfigManager, Decision, InputError, LoggerManager, config_manager


def test_default_config_values():
    assert config_manager.get('field.prime') == 101
    assert config_manager.get('homology.cutoff') == 20
    assert config_manager.get('algebra.bound', 'unset') == 'unset'
    assert config_manager.get('no.such.key', 5) == 5


def test_required_config(tmp_path):
    with pytest.raises(InputError):
        ConfigManager(str(tmp_path / "missing.yaml"), required=True)
    assert ConfigManager(str(tmp_path / "missing.yaml")).config == {}
    bad = tmp_path / "bad.yaml"
    bad.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(InputError):
        ConfigManager(str(bad))


def test_optional_config_falls_back_to_defaults(tmp_path):
    broken = tmp_path / "broken.yaml"
    broken.write_text("field: [101\n", encoding="utf-8")
    manager = ConfigManager(str(broken))
    assert manager.config == {}
    assert manager.get("homology.cutoff", 20) == 20
    with pytest.raises(InputError):
        ConfigManager(str(broken), required=True)
    missing = ConfigManager(str(tmp_path / "missing.yaml"))
    assert missing.get("field.prime", 101) == 101


def test_logger_level_override():
    root = LoggerManager.setup_logger(config_manager, 'DEBUG')
    assert root.level == logging.DEBUG
    root = LoggerManager.setup_logger(config_manager)
    assert root.level == logging.WARNING


def test_decision_combination():
    assert Decision.all_of([Decision.TRUE, Decision.TRUE]) is Decision.TRUE
    assert Decision.all_of([Decision.TRUE, Decision.UNKNOWN]) is Decision.UNKNOWN
    assert Decision.all_of([Decision.UNKNOWN, Decision.FALSE]) is Decision.FALSE
    assert Decision.of(False) is Decision.FALSE
    assert not Decision.UNKNOWN
