import pytest

from matom import NonnegativeMatrix, builtin_example


@pytest.fixture
def six_node():
    return builtin_example("fig-m-graph-6")


@pytest.fixture
def two_cycle():
    return builtin_example("two-cycle")


@pytest.fixture
def graph_supp():
    return builtin_example("graph-supp")


@pytest.fixture
def volterra4():
    return builtin_example("volterra-m", grid=4)


@pytest.fixture
def kernel_k3():
    return builtin_example("kernel-k3-m", grid=4)


@pytest.fixture
def jordan_pair():
    # two self-loop atoms at radius 1 in a chain: ascent 2
    return NonnegativeMatrix([[1, 1], [0, 1]])


@pytest.fixture
def radius_tree():
    # six singleton atoms in the tree  0 -> 1 -> {2, 3}, 2 -> 4, 3 -> 5
    # with self-loop radii 1, 3, 2, 1, 1, 1: distinguished are 1, 2 and the
    # two leaves
    rows = [
        [1, 0, 0, 0, 0, 0],
        [1, 3, 0, 0, 0, 0],
        [0, 1, 2, 0, 0, 0],
        [0, 1, 0, 1, 0, 0],
        [0, 0, 1, 0, 1, 0],
        [0, 0, 0, 1, 0, 1],
    ]
    return NonnegativeMatrix(rows)
