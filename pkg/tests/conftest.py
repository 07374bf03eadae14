import pytest

from lisa_kit import bth_dataset
from lisa_kit.cli import Analysis, run_analysis


@pytest.fixture(scope="session")
def analysis2000() -> Analysis:
    return run_analysis(bth_dataset("bth2000"))


@pytest.fixture(scope="session")
def analysis2010() -> Analysis:
    return run_analysis(bth_dataset("bth2010"))
