from __future__ import annotations

import csv
import io
import json
from dataclasses import replace

import pytest

from watkins.campaigns import map_ordered, odd_squarefree, run_campaign, to_csv, to_json, twist_parameters
from watkins.errors import ConfigError
from watkins.reports import CongruenceReport, WatkinsReport
from watkins.settings import CampaignConfig, CampaignMode, OutputFormat, Settings


def test_twist_parameters_order():
    assert twist_parameters(3) == [-1, -2, 2, -3, 3]
    assert 4 not in twist_parameters(10) and -8 not in twist_parameters(10)


def test_odd_squarefree():
    assert odd_squarefree(3, 21, 2) == [3, 5, 7, 11, 13, 15, 17, 19, 21]
    assert odd_squarefree(3, 21, 1) == [3, 5, 7, 11, 13, 17, 19]
    assert odd_squarefree(1, 9, 3) == [3, 5, 7]


def test_map_ordered_keeps_input_order():
    items = list(range(50))
    assert map_ordered(lambda x: x * x, items, 6) == [x * x for x in items]


def test_watkins_sweep_json():
    config = CampaignConfig(mode=CampaignMode.WATKINS_SWEEP, labels=("32.a3", "17.a4"), D_max=12)
    result = run_campaign(config, Settings(threads=2))
    assert result.passed
    assert result.summary.jobs == 2 * len(twist_parameters(12))
    assert all(isinstance(r, WatkinsReport) for r in result.reports)
    data = json.loads(to_json(result))
    assert data["summary"]["failures"] == 0
    assert [r["D"] for r in data["reports"][:3]] == [-1, -2, 2]


def test_watkins_sweep_is_thread_independent():
    config = CampaignConfig(mode=CampaignMode.WATKINS_SWEEP, labels=("128.a2",), D_max=15)
    one = run_campaign(config, Settings(threads=1))
    many = run_campaign(config, Settings(threads=4))
    assert to_json(one) == to_json(many)


def test_congruence_sweep_csv():
    config = CampaignConfig(
        mode=CampaignMode.CONGRUENCE_SWEEP, d_min=3, d_max=15, max_omega=2, B=150,
        output=OutputFormat.CSV,
    )
    result = run_campaign(config, Settings())
    assert result.passed
    assert all(isinstance(r, CongruenceReport) for r in result.reports)
    rows = list(csv.DictReader(io.StringIO(to_csv(result))))
    assert [int(r["d"]) for r in rows] == [3, 5, 7, 11, 13, 15]
    assert {r["passed"] for r in rows} == {"True"}


def test_csv_only_for_sweeps():
    config = CampaignConfig(mode=CampaignMode.TABLES, output=OutputFormat.CSV)
    with pytest.raises(ConfigError):
        run_campaign(config, Settings())


def test_setzer_scan():
    config = CampaignConfig(mode=CampaignMode.SETZER_SCAN, setzer_limit=500)
    result = run_campaign(config, Settings())
    assert result.passed
    assert [r.p for r in result.reports] == [73, 89, 113, 233, 353]


@pytest.mark.slow
def test_tables_campaign():
    config = CampaignConfig(mode=CampaignMode.TABLES, setzer_limit=600)
    result = run_campaign(config, Settings())
    assert result.passed
    assert any("49.a4" in line for line in result.summary.details)


@pytest.mark.slow
def test_lemmas_campaign():
    config = CampaignConfig(
        mode=CampaignMode.LEMMAS, D_max=6, d_min=3, d_max=15, max_omega=2, B=150, q_max=150,
        setzer_limit=120,
    )
    result = run_campaign(config, Settings(threads=2))
    assert result.summary.details == ()
    assert result.passed
    without_setzer = run_campaign(replace(config, setzer_limit=70), Settings(threads=2))
    # 73, 89 and 113 each add two curves to the twist and torsion jobs.
    assert result.summary.jobs - without_setzer.summary.jobs == 3 * 2 * (len(twist_parameters(6)) + 1)
