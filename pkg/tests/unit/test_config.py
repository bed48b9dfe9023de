"""Unit tests for lib.config."""

from pathlib import Path

import pytest

from lib.config import DEFAULT_TOLERANCES, Tolerances, load_config, load_tolerances
from lib.errors import ConfigError


def _write_toml(path, root=1e-7, nn=1e-10):
    path.write_text(f"[tolerances]\nroot = {root!r}\nnn = {nn!r}\n")


def test_load_config_reads_local_file(tmp_path, monkeypatch):
    local = tmp_path / "local.toml"
    _write_toml(local, root=1e-6)
    monkeypatch.setattr("lib.config._CONFIG_PATHS", [local])
    config, path = load_config()
    assert config == {"tolerances": {"root": 1e-6, "nn": 1e-10}}
    assert path == local


def test_load_config_local_wins_over_home(tmp_path, monkeypatch):
    local = tmp_path / "local.toml"
    home = tmp_path / "home.toml"
    _write_toml(local, root=1e-6)
    _write_toml(home, root=1e-5)
    monkeypatch.setattr("lib.config._CONFIG_PATHS", [local, home])
    config, path = load_config()
    assert config["tolerances"]["root"] == 1e-6
    assert path == local


def test_load_config_falls_back_to_home(tmp_path, monkeypatch):
    missing_local = tmp_path / "nope.toml"
    home = tmp_path / "home.toml"
    _write_toml(home, root=1e-5)
    monkeypatch.setattr("lib.config._CONFIG_PATHS", [missing_local, home])
    config, path = load_config()
    assert config["tolerances"]["root"] == 1e-5
    assert path == home


def test_load_config_without_files_is_empty(tmp_path, monkeypatch):
    monkeypatch.setattr(
        "lib.config._CONFIG_PATHS", [tmp_path / "a.toml", tmp_path / "b.toml"]
    )
    assert load_config() == ({}, None)


def test_load_config_explicit_path_must_exist(tmp_path):
    with pytest.raises(ConfigError, match="missing.toml"):
        load_config(tmp_path / "missing.toml")


def test_load_config_rejects_invalid_toml(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[tolerances\nroot = ")
    with pytest.raises(ConfigError, match="Invalid TOML"):
        load_config(bad)


def test_load_config_returns_path_object(tmp_path, monkeypatch):
    local = tmp_path / "c.toml"
    _write_toml(local)
    monkeypatch.setattr("lib.config._CONFIG_PATHS", [local])
    _, path = load_config()
    assert isinstance(path, Path)


# ---------------------------------------------------------------------------
# Tolerances
# ---------------------------------------------------------------------------


def test_load_tolerances_defaults(tmp_path, monkeypatch):
    monkeypatch.setattr("lib.config._CONFIG_PATHS", [tmp_path / "none.toml"])
    assert load_tolerances() == DEFAULT_TOLERANCES


def test_load_tolerances_file_then_overrides(tmp_path):
    path = tmp_path / "phaseamb.toml"
    _write_toml(path, root=1e-6, nn=1e-10)
    tol = load_tolerances(path, nn=1e-8, pair=None)
    assert tol.root == 1e-6
    assert tol.nn == 1e-8
    assert tol.pair == DEFAULT_TOLERANCES.pair


def test_load_tolerances_sample_file(samples_dir):
    tol = load_tolerances(samples_dir / "phaseamb.toml")
    assert (tol.root, tol.pair, tol.nn) == (1e-8, 1e-6, 1e-9)


@pytest.mark.parametrize(
    "text,match",
    [
        ("[tolerances]\nspeed = 1.0\n", "Unknown tolerance"),
        ("[tolerances]\nroot = -1.0\n", "must be positive"),
        ("[tolerances]\nroot = 'small'\n", "must be positive"),
        ("tolerances = 3\n", "must be a table"),
    ],
)
def test_load_tolerances_rejects_bad_tables(tmp_path, text, match):
    path = tmp_path / "phaseamb.toml"
    path.write_text(text)
    with pytest.raises(ConfigError, match=match):
        load_tolerances(path)


def test_with_overrides_keeps_original():
    tol = Tolerances()
    tighter = tol.with_overrides(dedup=1e-9)
    assert tighter.dedup == 1e-9
    assert tol.dedup == 1e-6
    assert isinstance(tighter.dedup, float)
