import numpy as np
import pytest

from localsim.groups.element import from_table
from localsim.models.similarity import prefix_rewrite
from localsim.models.structures import (
    FiniteEnumeratedStructure,
    MinusStructure,
    MirrorStructure,
    PermutationalStructure,
)
from localsim.models.ultrametric import Ball, FiniteSpace, WordSpace


@pytest.fixture
def w2():
    return WordSpace(2)


@pytest.fixture
def w3():
    return WordSpace(3)


@pytest.fixture
def vd2(w2):
    return PermutationalStructure.trivial(w2)


@pytest.fixture
def v3(w3):
    return PermutationalStructure.trivial(w3)


@pytest.fixture
def vd2_sigma2(w2):
    return PermutationalStructure.full(w2)


@pytest.fixture
def mirror(w2):
    return MirrorStructure(w2)


@pytest.fixture
def vd2_minus(vd2):
    return MinusStructure(vd2)


def finite_structure(tree, pairs):
    """
    Enumerated structure on the finite space @tree generated by the prefix rewrites between @pairs
    """
    space = FiniteSpace(tree)
    gens = [prefix_rewrite(Ball(space, a), Ball(space, b)) for a, b in pairs]
    return FiniteEnumeratedStructure.from_generators(space, gens)


@pytest.fixture
def finite_s3():
    return finite_structure("(....)", [("0", "1"), ("1", "2")])


@pytest.fixture
def finite_swaps():
    return finite_structure("((..)(..))", [("00", "01"), ("10", "11")])


@pytest.fixture
def finite_trivial():
    return finite_structure("((..).)", [])


def element(s, *entries):
    """
    Element from (dom, cod) address pairs with identity tails
    """
    space = s.space
    return from_table(s, [prefix_rewrite(Ball(space, a), Ball(space, b)) for a, b in entries])


@pytest.fixture
def a1(vd2):
    return element(vd2, ("00", "00"), ("01", "10"), ("10", "11"), ("11", "01"))


@pytest.fixture
def a2(vd2):
    return element(vd2, ("00", "00"), ("01", "1"), ("1", "01"))


@pytest.fixture
def thompson_x(vd2):
    return element(vd2, ("00", "0"), ("01", "10"), ("1", "11"))


@pytest.fixture
def rng():
    return np.random.default_rng(seed=0)
