import pytest

import hardyloc as hl


@pytest.fixture(scope="session")
def grid1():
    return hl.make_grid(1, 8.0, 257)


@pytest.fixture(scope="session")
def grid2():
    return hl.make_grid(2, 4.0, 65)


@pytest.fixture(scope="session")
def w_exp(grid1):
    return hl.make_weight(hl.WeightFamily("exponential", c=1.0), grid1)


@pytest.fixture(scope="session")
def w_const(grid1):
    return hl.make_weight(hl.WeightFamily("constant"), grid1)


@pytest.fixture(scope="session")
def bump():
    return hl.BumpSpec()


@pytest.fixture(scope="session")
def ladder(grid1):
    return hl.ScaleLadder.for_grid(grid1)
