import pytest

from imlab.relframe import BirelFrame
from imlab.semantics import BirelModel


@pytest.fixture
def l62_frame():
    # three points, 0 below 1 intuitionistically, both modally below 2
    return BirelFrame.from_edges(3, [(0, 1)], [(0, 2), (1, 2)])


@pytest.fixture
def f2_frame():
    # w=0 modally below v=1, v intuitionistically below u=2
    return BirelFrame.from_edges(3, [(1, 2)], [(0, 1)])


@pytest.fixture
def l1_frame():
    # a single reflexive point
    return BirelFrame.from_edges(1, [], [(0, 0)])


@pytest.fixture
def fork_frame():
    # 0 below two incomparable points
    return BirelFrame.from_edges(3, [(0, 1), (0, 2)], [])


@pytest.fixture
def l62_model(l62_frame):
    return BirelModel(l62_frame, {"p": 0b010, "q": 0b100})


@pytest.fixture
def f2_model(f2_frame):
    return BirelModel(f2_frame, {"p": 0b100, "q": 0})
