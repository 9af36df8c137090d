import pytest

from graphmotion import catalog
from graphmotion.graph import RootedTree


@pytest.fixture
def y():
    return RootedTree(catalog.y_tree(), "r")


@pytest.fixture
def h():
    return RootedTree(catalog.h_tree(), "a")
