"""
Exhaustive analysis of local similarity groups of finite spaces.

On a finite space every element is determined by where it sends the points, and a permutation of the points is
an element iff each point -> image pair is a similarity of the structure. The group is then a product of
symmetric groups, one per Sim-equivalence class of singleton balls.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

import localsim.macros as macros
from localsim.groups.element import from_table
from localsim.models.similarity import SimilarityClass, classify
from localsim.models.structures import (
    CensusKind,
    FiniteEnumeratedStructure,
    ball_classes,
    decompose_equalizing,
    separating_census,
)
from localsim.models.ultrametric import Ball, SpaceType
from localsim.utils.errors import BudgetExceeded, NotFiniteSpace
from localsim.utils.log_utils import LOCALSIM_DEFAULT_LOGGER as logger


@dataclass(frozen=True)
class FiniteReport:
    """
    Result of finite_analyze()

    Args:
        order (int): number of enumerated group elements

        class_sizes (tuple of int): sizes d_1, ..., d_n of the classes of singleton balls

        separating (int): number of separating similarities in the structure

        separating_finite (bool): whether the census found finitely many separating similarities

        non_identity (int): number of non-identity similarities in the structure

        non_identity_finite (bool): whether counting the non-identity similarities stopped below the closure cap

        group_finite (bool): whether the enumeration closed up to a finite group

        equalizing_checked (int): equalizing similarities whose decomposition into identities and separating
            pieces was recomposed successfully

        elements (tuple of GroupElement): the group
    """

    order: int
    class_sizes: tuple
    separating: int
    separating_finite: bool
    non_identity: int
    equalizing_checked: int
    elements: tuple
    non_identity_finite: bool = True
    group_finite: bool = True

    @property
    def product(self):
        return math.prod(math.factorial(d) for d in self.class_sizes)

    @property
    def product_matches(self):
        return self.order == self.product

    @property
    def conditions_agree(self):
        """
        The group, the set of separating similarities and the set of non-identity similarities are all finite
        or all infinite. In the finite case the counts must fit: the group is non-trivial iff some separating
        similarity exists, separating similarities come in inverse pairs and are among the non-identity ones.
        """
        flags = {self.group_finite, self.separating_finite, self.non_identity_finite}
        if len(flags) != 1:
            return False
        if not self.group_finite:
            return True
        return (
            (self.order > 1) == (self.separating > 0)
            and self.separating % 2 == 0
            and self.separating <= self.non_identity
        )

    def lines(self):
        return [
            "order {}".format(self.order),
            "classes {}".format(" ".join(str(d) for d in self.class_sizes)),
            "product {} {}".format(self.product, "PASS" if self.product_matches else "FAIL"),
            "separating {}".format(self.separating),
            "non-identity {}".format(self.non_identity),
            "equalizing-decompositions {}".format(self.equalizing_checked),
            "conditions {}".format("AGREE" if self.conditions_agree else "DISAGREE"),
        ]


def _leaf_classes(s):
    """
    Sim-equivalence classes of the singleton balls, as lists of leaf addresses ordered by their first leaf
    """
    leaves = set(s.space.leaves)
    deepest = max(len(leaf) for leaf in leaves)
    classes = [[b.address for b in cls if b.address in leaves] for cls in ball_classes(s, deepest)]
    return sorted((sorted(cls) for cls in classes if cls), key=lambda cls: cls[0])


def _recomposes(g, pieces):
    mapping = {}
    for piece in pieces:
        mapping.update(piece.similarity.action.mapping)
    return mapping == g.action.mapping


def finite_analyze(s):
    """
    Enumerates Gamma(Sim) of a structure on a finite space and checks the product formula

    Args:
        s (FiniteEnumeratedStructure): structure on a finite space

    Returns:
        FiniteReport
    """
    space = s.space
    if space.kind != SpaceType.FINITE or not isinstance(s, FiniteEnumeratedStructure):
        raise NotFiniteSpace("{} is not an enumerated finite space structure".format(s.descriptor()))
    leaves = space.leaves
    k = len(leaves)
    if k > macros.FINITE_POINT_CAP:
        raise BudgetExceeded("{} points exceed the cap of {}".format(k, macros.FINITE_POINT_CAP))

    allowed = np.array(
        [[bool(s.sim_set(Ball(space, a), Ball(space, b))) for b in leaves] for a in leaves]
    )
    perms = np.array(
        list(
            tqdm(
                itertools.permutations(range(k)),
                total=math.factorial(k),
                disable=not macros.VERBOSE,
                desc="finite group",
            )
        ),
        dtype=np.int64,
    ).reshape(-1, k)
    keep = allowed[np.arange(k), perms].all(axis=1)
    elements = []
    for row in perms[keep]:
        entries = [
            s.sim_set(Ball(space, leaves[i]), Ball(space, leaves[j]))[0]
            for i, j in enumerate(row)
        ]
        elements.append(from_table(s, entries))
    logger.debug("finite group of order {}".format(len(elements)))

    census = separating_census(s)
    cap = macros.FINITE_CLOSURE_CAP
    non_identity = sum(
        1 for g in itertools.islice(s.similarities, cap + 1) if not g.is_identity
    )

    checked = 0
    for g in s.similarities:
        if classify(g) == SimilarityClass.EQUALIZING and not g.is_identity:
            pieces = decompose_equalizing(s, g)
            if _recomposes(g, pieces):
                checked += 1

    return FiniteReport(
        order=len(elements),
        class_sizes=tuple(len(cls) for cls in _leaf_classes(s)),
        separating=census.count or 0,
        separating_finite=census.kind == CensusKind.FINITE,
        non_identity=non_identity,
        equalizing_checked=checked,
        elements=tuple(elements),
        non_identity_finite=non_identity <= cap,
        group_finite=len(elements) <= math.factorial(k),
    )
