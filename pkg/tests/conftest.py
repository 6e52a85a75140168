import numpy as np
import pytest

from netfolio.synthetic import synthetic_panel


@pytest.fixture(scope="session")
def small_panel():
    """3 assets, 30 months of weekdays, mild correlation."""
    return synthetic_panel(2, 0.5, 1, months=30, daily_vol=0.01, seed=11)


@pytest.fixture(scope="session")
def acceptance_panel():
    """The 10-asset, 36-month block universe used by the acceptance runs."""
    return synthetic_panel(5, 0.9, 5, months=36, daily_vol=0.01, seed=2024)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
