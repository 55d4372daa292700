from __future__ import annotations

from pathlib import Path

import pytest

from watkins.errors import ConfigError
from watkins.hecke import DEFAULT_AP_CEILING
from watkins.settings import (
    CampaignConfig,
    CampaignMode,
    OutputFormat,
    Settings,
    load_settings,
    read_yaml,
)


def test_defaults(tmp_path):
    settings = load_settings(env={}, cwd=tmp_path)
    assert settings.threads == 1
    assert settings.ap_ceiling == DEFAULT_AP_CEILING
    assert settings.data_path is None
    assert settings.results_dir == tmp_path / "xdg" / "watkins" / "results"


def test_yaml_then_env_then_overrides(tmp_path):
    (tmp_path / "watkins.yml").write_text(
        "settings:\n  threads: 3\n  ap-ceiling: 5000\n  data: curves.csv\n"
    )
    settings = load_settings(env={}, cwd=tmp_path)
    assert (settings.threads, settings.ap_ceiling) == (3, 5000)
    assert settings.data_path == Path("curves.csv")

    settings = load_settings(env={"WATKINS_AP_CEILING": "7000"}, cwd=tmp_path)
    assert settings.ap_ceiling == 7000

    settings = load_settings(env={"WATKINS_AP_CEILING": "7000"}, cwd=tmp_path, ap_ceiling=9000)
    assert settings.ap_ceiling == 9000


def test_thread_variable_caps_explicit_counts(tmp_path):
    env = {"WATKINS_THREADS": "2"}
    assert load_settings(env=env, cwd=tmp_path).threads == 2
    assert load_settings(env=env, cwd=tmp_path, threads=8).threads == 2
    assert load_settings(env=env, cwd=tmp_path, threads=1).threads == 1


def test_none_overrides_are_ignored(tmp_path):
    assert load_settings(env={}, cwd=tmp_path, threads=None, color=None).color


@pytest.mark.parametrize(
    "content",
    ["settings:\n  colour: true\n", "settings: [1, 2]\n", "- a\n- b\n", "settings: {threads: 0}\n"],
)
def test_invalid_settings_files(tmp_path, content):
    path = tmp_path / "bad.yml"
    path.write_text(content)
    with pytest.raises(ConfigError):
        load_settings(path, env={})


def test_unparsable_yaml(tmp_path):
    path = tmp_path / "broken.yml"
    path.write_text("settings: [unclosed\n")
    with pytest.raises(ConfigError):
        read_yaml(path)
    with pytest.raises(ConfigError):
        read_yaml(tmp_path / "missing.yml")


def test_settings_validation():
    with pytest.raises(ConfigError):
        Settings(threads=-1)
    with pytest.raises(ConfigError):
        Settings(ap_ceiling=1)


def test_campaign_from_yaml_section(tmp_path):
    path = tmp_path / "run.yml"
    path.write_text(
        "settings:\n  threads: 2\n"
        "campaign:\n  mode: congruence-sweep\n  d_max: 45\n  output: csv\n  out: out/run.csv\n"
    )
    config = CampaignConfig.from_yaml(path)
    assert config.mode == CampaignMode.CONGRUENCE_SWEEP
    assert config.d_max == 45
    assert config.output == OutputFormat.CSV
    assert config.out == Path("out/run.csv")


def test_campaign_flat_file(tmp_path):
    path = tmp_path / "flat.yml"
    path.write_text("mode: watkins-sweep\nlabels: 32.a3\nD-max: 10\n")
    config = CampaignConfig.from_yaml(path)
    assert config.labels == ("32.a3",)
    assert config.D_max == 10


@pytest.mark.parametrize(
    "data",
    [
        {"D_max": 5},
        {"mode": "nonsense"},
        {"mode": "tables", "output": "xml"},
        {"mode": "tables", "d_min": 50, "d_max": 10},
        {"mode": "tables", "B": 2000, "ap_ceiling": 1000},
        {"mode": "tables", "verdict_mode": "fast"},
        {"mode": "tables", "unknown": 1},
        {"mode": "tables", "B": "many"},
    ],
)
def test_campaign_validation(data):
    with pytest.raises(ConfigError):
        CampaignConfig.from_mapping(data)
