from __future__ import annotations

import json

import pytest

from watkins.main import run


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_signature(capsys):
    assert run(["signature", "--label", "32.a3"]) == 0
    assert capsys.readouterr().out.strip() == "(4, inf, 6)"


def test_conductor_and_local(capsys):
    assert run(["conductor", "--curve", "0,0,0,-1,0", "--json"]) == 0
    assert _json(capsys)["conductor"] == 32
    assert run(["local", "--label", "32.a3", "-p", "2", "--json"]) == 0
    data = _json(capsys)
    assert (data["kind"], data["f_p"]) == ("additive", 5)


def test_invariants_text(capsys):
    assert run(["invariants", "--label", "17.a4", "--no-color"]) == 0
    out = capsys.readouterr().out
    assert "[1,-1,1,-1,0]" in out
    assert "17" in out


def test_twist_finds_bundled_curve(capsys):
    assert run(["twist", "--label", "128.a2", "-D", "2", "--json"]) == 0
    assert _json(capsys)["label"] == "128.d2"


def test_bound_watkins(capsys):
    assert run(["bound", "watkins", "--label", "17.a4", "-D", "-3", "--json"]) == 0
    data = _json(capsys)
    assert data["verdict"] == "HOLDS_BY_BOUNDS"
    assert data["mdeg_val_lower"] == 3
    assert data["rank_upper"] == 3
    assert data["case"] == "refined"


def test_bound_watkins_text(capsys):
    assert run(["bound", "watkins", "--label", "32.a3", "-D", "6", "--mode", "cased"]) == 0
    assert "HOLDS_BY_BOUNDS" in capsys.readouterr().out


def test_bound_rank_and_petersson(capsys):
    assert run(["bound", "rank", "--dx", "5", "--json"]) == 0
    assert _json(capsys)["rank_upper"] == 2
    assert run(["bound", "rank", "--label", "32.a3", "-D", "6", "--json"]) == 0
    assert _json(capsys)["ab_bound"] == 3
    assert run(["bound", "petersson", "--label", "17.a4", "-D", "5"]) == 0
    assert capsys.readouterr().out.strip() == "5"


def test_verify_congruence(capsys):
    assert run(["verify", "congruence", "-d", "5", "-B", "150", "--json"]) == 0
    data = _json(capsys)
    assert data["bound"] == 3
    assert data["min_observed_val"] == 3


def test_verify_corollary_and_family(capsys):
    assert run(["verify", "corollary", "-p", "7", "--json"]) == 0
    assert _json(capsys)["rank_upper"] == 2
    assert run(["verify", "conductor-family", "-d", "15", "--json"]) == 0
    assert _json(capsys)["ok"] is True


def test_verify_lemmas(capsys):
    assert run(["verify", "lemmas", "-d", "15", "-B", "120", "--q-max", "100"]) == 0


def test_coefficients_csv(capsys):
    assert run(["coeffs", "--label", "17.a4", "-B", "5", "--csv"]) == 0
    assert capsys.readouterr().out == "n,a_n\n1,1\n2,-1\n3,0\n4,-1\n5,-2\n"


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "coeffs.csv"
    assert run(["coeffs", "--label", "17.a4", "-B", "3", "--csv", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text() == "n,a_n\n1,1\n2,-1\n3,0\n"


def test_setzer(capsys):
    assert run(["setzer", "-p", "89", "--json"]) == 0
    assert _json(capsys)["89.a2"] == "[1,1,0,4,5]"
    assert run(["setzer", "--limit", "200"]) == 0


def test_campaign_file(tmp_path, capsys):
    target = tmp_path / "sweep.json"
    config = tmp_path / "run.yml"
    config.write_text(
        "campaign:\n  mode: watkins-sweep\n  labels: [32.a3]\n  D_max: 6\n"
        f"  output: json\n  out: {target}\n"
    )
    assert run(["campaign", str(config)]) == 0
    data = json.loads(target.read_text())
    assert data["summary"]["failures"] == 0


def test_campaign_save_uses_results_dir(tmp_path):
    config = tmp_path / "run.yml"
    config.write_text("campaign:\n  mode: setzer-scan\n  setzer_limit: 100\n")
    assert run(["campaign", str(config), "--save"]) == 0
    assert (tmp_path / "xdg" / "watkins" / "results" / "setzer-scan.txt").exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["twist", "--label", "17.a4", "-D", "4"],
        ["invariants", "--label", "11.a9"],
        ["invariants", "--curve", "0,0,0,0,0"],
        ["bound", "watkins", "--curve", "0,-1,1,-10,-20", "-D", "5"],
        ["coeffs", "--label", "17.a4", "-B", "10", "--threads", "0"],
        ["verify", "congruence", "-d", "4"],
        ["campaign", "missing.yml"],
        ["ap", "--label", "32.a3", "-q", "0"],
        ["ap", "--label", "32.a3", "-q", "-5"],
        ["ap", "--label", "32.a3", "-q", "1"],
        ["ap", "--label", "32.a3", "-q", "9"],
        ["ap", "--label", "32.a3", "-q", "15"],
        ["signature", "--label", "32.a3", "-p", "4"],
    ],
)
def test_input_errors_exit_2(argv, capsys):
    assert run(argv) == 2
    assert "error" in capsys.readouterr().err


def test_usage_errors():
    assert run([]) == 2
    assert run(["bound"]) == 2
    assert run(["signature", "--label", "32.a3", "--curve", "0,0,0,-1,0"]) == 2
    assert run(["--help"]) == 0
