import pytest

from towerforms.fields import FieldTower, LevelDescriptor, LAURENT, RATFUNC


def tower(p, k=1, *levels):
    """Shorthand: tower(3, 1, ("t", LAURENT), ("u", LAURENT))."""
    return FieldTower(p, k, tuple(LevelDescriptor(s, kind) for s, kind in levels))


@pytest.fixture
def gf3():
    return tower(3)


@pytest.fixture
def gf3t():
    return tower(3, 1, ("t", LAURENT))


@pytest.fixture
def gf5t():
    return tower(5, 1, ("t", LAURENT))


@pytest.fixture
def gf3tu():
    return tower(3, 1, ("t", LAURENT), ("u", LAURENT))


@pytest.fixture
def gf3x():
    return tower(3, 1, ("X", RATFUNC))
