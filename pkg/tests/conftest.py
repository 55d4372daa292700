from __future__ import annotations

import random

import pytest

from watkins.bounds import classify
from watkins.families import CurveBundle, load_bundle


@pytest.fixture(scope="session")
def bundle() -> CurveBundle:
    return load_bundle()


@pytest.fixture(scope="session")
def classified(bundle):
    """Label -> ClassifiedCurve for every bundled curve."""
    return {record.label: classify(record) for record in bundle}


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240617)


@pytest.fixture(autouse=True)
def _isolate_env(monkeypatch, tmp_path):
    for name in ("WATKINS_DATA", "WATKINS_THREADS", "WATKINS_AP_CEILING", "WATKINS_RESULTS_DIR"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("XDG_DATA_HOME", str(tmp_path / "xdg"))
    monkeypatch.chdir(tmp_path)
