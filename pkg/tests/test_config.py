import pytest

from valcalc.config import DEFAULT_SEED, Config, get_config, load_config, using_config
from valcalc.errors import ValidationError


def test_defaults():
    cfg = Config()
    assert cfg.max_dim == 6 and cfg.max_complex_dim == 3
    assert cfg.max_facet_hyperplanes == 64 and cfg.weight_degree_cap == 4
    assert cfg.seed == DEFAULT_SEED == 0xA15E5CE1


def test_file_then_overrides(tmp_path):
    f = tmp_path / "caps.cfg"
    f.write_text("max_dim = 5  # smaller\nseed = 0x10\n")
    cfg = load_config(f)
    assert cfg.max_dim == 5 and cfg.seed == 16
    assert load_config(f, max_dim=4).max_dim == 4


def test_environment_variable(tmp_path, monkeypatch):
    f = tmp_path / "caps.cfg"
    f.write_text("weight_degree_cap = 2\n")
    monkeypatch.setenv("VALCALC_CONFIG", str(f))
    assert load_config().weight_degree_cap == 2


def test_bad_files(tmp_path):
    f = tmp_path / "bad.cfg"
    f.write_text("max_dims = 3\n")
    with pytest.raises(ValidationError, match="unknown"):
        load_config(f)
    f.write_text("max_dim = lots\n")
    with pytest.raises(ValidationError, match="integer"):
        load_config(f)
    with pytest.raises(ValidationError):
        load_config(None, bogus=1)


def test_using_config_restores():
    before = get_config()
    with using_config(Config(max_dim=2)):
        assert get_config().max_dim == 2
    assert get_config() is before
