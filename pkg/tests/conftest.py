from __future__ import annotations

import numpy as np
import pytest

from ardlkit.pipeline import bundled_config_path, load_config, prepare_data
from ardlkit.tsdata import load_dataset

MASTER_SEED = 20240101


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def bundled_config():
    return load_config(bundled_config_path())


@pytest.fixture(scope="session")
def snapshot(bundled_config):
    return load_dataset(bundled_config.input)


@pytest.fixture(scope="session")
def prepared(bundled_config):
    """Bundled snapshot after the replication transforms."""
    return prepare_data(bundled_config)


def write_csv(path, text):
    path.write_text(text, encoding="utf-8")
    return path


_ACCEPTANCE = pytest.StashKey[dict]()


class AcceptanceLog:
    """Collects one verdict line per acceptance criterion."""

    def __init__(self, store: dict):
        self._store = store

    def record(self, criterion: int, passed: bool, detail: str, note: str = "") -> bool:
        status = "PASS" if passed else "FAIL"
        if passed and note:
            status = "PASS (with divergence note)"
        line = f"criterion {criterion:>2}: {status}  {detail}"
        if note:
            line += f"\n              note: {note}"
        self._store[criterion] = line
        print(line)
        return passed


@pytest.fixture
def acceptance(request):
    return AcceptanceLog(request.config.stash.setdefault(_ACCEPTANCE, {}))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(lines):
        terminalreporter.write_line(lines[key])
