import pytest

from utils.config import THREADS_ENV, Config, SweepAxis
from utils.errors import ConfigError


def test_defaults():
    cfg = Config().to_run_config()
    assert (cfg.m1, cfg.omega1t, cfg.omega2t) == (1.0, 1.0, 2.0)
    assert cfg.kappa == cfg.hbar == 1.0
    assert cfg.sigma0 is None
    assert cfg.drive == "constant"


def test_file_and_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# oscillator\ntheta = 0.25\nhbar=2  # trailing comment\n\ndrive = sinusoidal\n")
    config = Config(str(path))
    config.update_settings({"seed": "7", "out": None, "dt": 0.01})
    cfg = config.to_run_config()
    assert cfg.theta == 0.25
    assert cfg.kappa == 2.0
    assert cfg.seed == 7
    assert cfg.dt == 0.01
    assert cfg.out is None
    assert cfg.drive == "sinusoidal"


@pytest.mark.parametrize("body", ["theta 0.1\n", "unknown = 1\n", "theta = abc\n"])
def test_bad_lines(tmp_path, body):
    path = tmp_path / "run.cfg"
    path.write_text(body)
    with pytest.raises(ConfigError):
        Config(str(path))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        Config(str(tmp_path / "absent.cfg"))


@pytest.mark.parametrize("key,value", [
    ("hbar", 0.0), ("m1", -1.0), ("threads", 0), ("drive", "square"), ("sigma0", -1.0),
])
def test_validation(key, value):
    config = Config()
    config.update_settings({key: value})
    with pytest.raises(ConfigError):
        config.to_run_config()


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert Config().to_run_config().threads == 3
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ConfigError):
        Config().get_threads()
    monkeypatch.delenv(THREADS_ENV)
    assert Config().get_threads() == 1


def test_sweep_axis():
    axis = SweepAxis.parse("theta", "0:0.3:4")
    assert axis.values() == pytest.approx([0.0, 0.1, 0.2, 0.3])
    for name, spec in [("theta", "0:1"), ("theta", "1:0:3"), ("theta", "0:1:1"), ("colour", "0:1:2"),
                       ("dt", "0:1:2"), ("kappa", "0:1:2"), ("seed", "0:1:2")]:
        with pytest.raises(ConfigError):
            SweepAxis.parse(name, spec)


def test_with_values_keeps_axes():
    axis = SweepAxis.parse("eta", "0:1:2")
    cfg = Config().to_run_config([axis])
    moved = cfg.with_values(eta=0.4)
    assert moved.eta == 0.4
    assert moved.axes == [axis]
    assert cfg.eta == 0.1
