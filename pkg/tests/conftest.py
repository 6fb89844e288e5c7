import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dtaikit import model, synthetic  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_schema():
    return (
        model.ColumnSchema("length"),
        model.ColumnSchema("thickness"),
        model.ColumnSchema.categorical("material", ["Steel", "Alu"]),
    )


@pytest.fixture(scope="session")
def synthetic_dataset():
    """The shipped synthetic dataset with adjusted performance."""
    return model.adjust_set(synthetic.make_dataset(), synthetic.OBJECTIVES)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
