import pytest

from tree_actions.free_group import GroupPresentation
from tree_actions.trees import BassSerreTree, CayleyTree


@pytest.fixture
def f2():
    return GroupPresentation.free(2)


@pytest.fixture
def f3():
    return GroupPresentation.free(3)


@pytest.fixture
def z2z3():
    return GroupPresentation.parse('Z2*Z3')


@pytest.fixture
def word(f2):
    '''
    Parse words of F2.
    '''
    return f2.word


@pytest.fixture
def cayley(f2):
    return CayleyTree(f2)


@pytest.fixture
def bass_serre(z2z3):
    return BassSerreTree(z2z3)
