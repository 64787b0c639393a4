import pytest

from kmt.rootdata import (enumerate_roots, loop_sl2_datum,
                          simply_connected_datum, validate_matrix)


@pytest.fixture(scope="session")
def a1():
    return simply_connected_datum(validate_matrix([[2]]))


@pytest.fixture(scope="session")
def a2():
    return simply_connected_datum(validate_matrix([[2, -1], [-1, 2]]))


@pytest.fixture(scope="session")
def b2():
    return simply_connected_datum(validate_matrix([[2, -1], [-2, 2]]))


@pytest.fixture(scope="session")
def a1t():
    """Simply connected affine sl2 datum."""
    return simply_connected_datum(validate_matrix([[2, -2], [-2, 2]]))


@pytest.fixture(scope="session")
def loop_datum():
    """The rank-one loop datum with Y = Zh."""
    return loop_sl2_datum()


@pytest.fixture(scope="session")
def hyp3():
    return simply_connected_datum(validate_matrix([[2, -3], [-3, 2]]))


@pytest.fixture(scope="session")
def a1t_table(a1t):
    return enumerate_roots(a1t, 6, multiplicities=False)


@pytest.fixture(scope="session")
def a1t_ctx(a1t):
    from kmt.envalg import build_context
    return build_context(a1t, 6)


@pytest.fixture(scope="session")
def a2_ctx(a2):
    from kmt.envalg import build_context
    return build_context(a2, 4)


@pytest.fixture(scope="session")
def hyp3_ctx(hyp3):
    from kmt.envalg import build_context
    return build_context(hyp3, 4)
