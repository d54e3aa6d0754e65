import numpy as np
import pytest

from curvequad.cellgeom import build_circle, build_puzzle, build_square
from curvequad.kressquad import build_grid
from curvequad.nystrom import NystromSolver


@pytest.fixture(scope="session")
def square():
    return build_square()


@pytest.fixture(scope="session")
def circle():
    return build_circle()


@pytest.fixture(scope="session")
def puzzle():
    return build_puzzle()


@pytest.fixture(scope="session")
def circle_grid(circle):
    return build_grid(circle, 32, 7)


@pytest.fixture(scope="session")
def square_grid(square):
    return build_grid(square, 32, 7)


@pytest.fixture(scope="session")
def square_grid64(square):
    return build_grid(square, 64, 7)


@pytest.fixture(scope="session")
def circle_solver(circle_grid):
    return NystromSolver(circle_grid)


@pytest.fixture(scope="session")
def square_solver(square_grid):
    return NystromSolver(square_grid)


def mid_edge_nodes(grid):
    """Mask for the middle half of every edge, away from the graded corners."""
    m = 2 * grid.n
    k = grid.local_index
    return (k >= m // 4) & (k < 3 * m // 4)


def rng(seed=0):
    return np.random.default_rng(seed)
