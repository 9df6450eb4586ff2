import numpy as np
import pytest

from bzcap import make_channel
from bzcap.codec import TrellisSpec, TurboConfig, load_label_table, shipped_table_path


@pytest.fixture(scope="session")
def ch():
    """The reference channel used throughout: arms (0.15, 0.6)."""
    return make_channel(0.15, 0.6)


@pytest.fixture(scope="session")
def table1():
    return load_label_table(shipped_table_path(1))


@pytest.fixture(scope="session")
def table2():
    return load_label_table(shipped_table_path(2))


@pytest.fixture(scope="session")
def spec1(table1):
    return TrellisSpec(table1)


@pytest.fixture(scope="session")
def spec2(table2):
    return TrellisSpec(table2)


@pytest.fixture(scope="session")
def small_cfg1(spec1):
    """K=64 user-1 config: fast decode paths for unit tests."""
    return TurboConfig(spec1, interleaver_length=64, interleaver_seed=3, iterations=2)


@pytest.fixture(scope="session")
def small_cfg2(spec2):
    return TurboConfig(spec2, interleaver_length=64, interleaver_seed=5, iterations=2)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(1234)
