"""
Finitely presented similarity structures.

A similarity structure answers Sim(B1, B2), a finite set of similarities B1 -> B2, for every ordered pair of
balls, and is closed under identities, inverses, compositions and restrictions. Structure classes register
themselves under the keyword used on descriptor lines ("sim permutational ...", "sim mirror", ...).
"""
import abc
import functools
import itertools
import math
from dataclasses import dataclass, field
from enum import IntEnum

import networkx as nx
import numpy as np

import localsim.macros as macros
from localsim.models.similarity import (
    SimilarityClass,
    Similarity,
    TailAction,
    apply,
    classify,
    compose_sim,
    identity_on,
    invert_sim,
    prefix_rewrite,
    restrict,
)
from localsim.models.ultrametric import (
    Ball,
    ClopenSet,
    FiniteSpace,
    SpaceType,
    WordSpace,
    canonicalize,
    check_same_space,
    maximal_proper_subballs,
)
from localsim.utils.errors import (
    BudgetExceeded,
    NotEqualizing,
    SpaceMismatch,
    StructureError,
    WitnessInvalid,
)
from localsim.utils.log_utils import LOCALSIM_DEFAULT_LOGGER as logger

REGISTERED_STRUCTURES = {}


def register_structure(target_class):
    REGISTERED_STRUCTURES[target_class.keyword] = target_class
    return target_class


class SimStructure(abc.ABC):
    """
    Base class for similarity structures on a space.
    """

    keyword = None

    @abc.abstractmethod
    def sim_set(self, b1, b2):
        """
        Returns Sim(b1, b2) as a tuple of similarities in canonical order
        """
        raise NotImplementedError

    @abc.abstractmethod
    def descriptor(self):
        raise NotImplementedError

    def contains(self, g):
        """
        True iff the similarity @g belongs to this structure
        """
        check_same_space(self, g)
        return g in self.sim_set(g.dom, g.cod)

    def carrier_set(self):
        """
        The clopen set whose local similarities form the group of this structure
        """
        return self.space.whole

    def _check(self, *balls):
        for b in balls:
            if b.space != self.space:
                raise SpaceMismatch(
                    "{} does not live in {}".format(b, self.space.descriptor())
                )

    def __str__(self):
        return self.descriptor()


def close_permutations(generators, d):
    """
    Closes a set of tail permutations into the subgroup they generate

    Returns:
        tuple of TailAction: group elements sorted by image tuple, identity first
    """
    identity = TailAction.identity(d)
    group = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in generators:
                b = g.compose(a)
                if b not in group:
                    group.add(b)
                    nxt.append(b)
        frontier = nxt
    return tuple(sorted(group, key=lambda t: t.images))


@register_structure
@dataclass(frozen=True)
class PermutationalStructure(SimStructure):
    """
    Sim(B1, B2) = {prefix rewrite B1 -> B2 with tail permutation s | s in H} for all ball pairs,
    H a subgroup of the symmetric group on the d letters. Its group is the Nekrashevych-Roever group V_d(H);
    H = 1 gives the Higman-Thompson group V_d.

    Args:
        space (WordSpace): word space

        group (tuple of TailAction): the elements of H, closed

        generators (tuple of TailAction): generators H was closed from (for descriptors only)
    """

    space: WordSpace
    group: tuple
    generators: tuple = field(default=(), compare=False)
    keyword = "permutational"

    @classmethod
    def from_generators(cls, space, generators=()):
        if space.kind != SpaceType.WORD:
            raise StructureError("permutational structures need a word space")
        generators = tuple(generators)
        for g in generators:
            if g.d != space.d:
                raise StructureError("generator {} does not act on {} letters".format(g, space.d))
        group = close_permutations(generators, space.d)
        return cls(space, group, generators)

    @classmethod
    def trivial(cls, space):
        return cls.from_generators(space, ())

    @classmethod
    def full(cls, space):
        d = space.d
        gens = [TailAction(tuple([1, 0] + list(range(2, d))))]
        if d > 2:
            gens.append(TailAction(tuple(list(range(1, d)) + [0])))
        return cls.from_generators(space, gens)

    @property
    def is_full(self):
        return len(self.group) == math.factorial(self.space.d)

    def sim_set(self, b1, b2):
        self._check(b1, b2)
        return tuple(Similarity(b1, b2, s) for s in self.group)

    def contains(self, g):
        check_same_space(self, g)
        return g.action in self.group

    def descriptor(self):
        if len(self.group) == 1:
            h = "trivial"
        elif self.is_full:
            h = "full"
        else:
            h = ",".join(str(g) for g in self.generators)
        return "sim permutational H={}".format(h)


def flip_first(address):
    return ("1" if address[0] == "0" else "0") + address[1:]


@register_structure
@dataclass(frozen=True)
class MirrorStructure(SimStructure):
    """
    Structure on the binary word space generated by the order preserving similarity "0" -> "1": the
    non-trivial similarities are xA -> x'A where x' is x with its first letter changed, e.g. 001 -> 101.
    """

    space: WordSpace
    keyword = "mirror"

    def __post_init__(self):
        if self.space != WordSpace(2):
            raise StructureError("the mirror structure lives on the binary word space")

    def sim_set(self, b1, b2):
        self._check(b1, b2)
        if b1 == b2:
            return (identity_on(b1),)
        if not b1.is_root and b2.address == flip_first(b1.address):
            return (prefix_rewrite(b1, b2),)
        return ()

    def descriptor(self):
        return "sim mirror"


@register_structure
@dataclass(frozen=True)
class FiniteEnumeratedStructure(SimStructure):
    """
    Structure on a finite space given by an explicit set of similarities, closed under the four axioms
    at construction.

    Args:
        space (FiniteSpace): finite space

        similarities (tuple of Similarity): the closed set, sorted

        source (str or None): file the generators were read from (for descriptors only)
    """

    space: FiniteSpace
    similarities: tuple
    source: str = field(default=None, compare=False)
    keyword = "finite"
    _index: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        index = {}
        for g in self.similarities:
            index.setdefault((g.dom.address, g.cod.address), []).append(g)
        object.__setattr__(
            self, "_index", {k: tuple(v) for k, v in index.items()}
        )

    @classmethod
    def from_generators(cls, space, generators=(), source=None, cap=None):
        """
        Closes @generators under identities, inverses, compositions and restrictions

        Args:
            space (FiniteSpace): finite space

            generators (iterable of Similarity): generating similarities

            source (str or None): descriptor file name

            cap (int or None): maximum size of the closure, defaults to macros.FINITE_CLOSURE_CAP
        """
        if space.kind != SpaceType.FINITE:
            raise StructureError("enumerated structures need a finite space")
        cap = cap or macros.FINITE_CLOSURE_CAP
        closed = {identity_on(Ball(space, a)) for a in space.nodes}
        work = list(generators)
        while work:
            g = work.pop()
            if g in closed:
                continue
            closed.add(g)
            if len(closed) > cap:
                raise StructureError(
                    "closure exceeds {} similarities".format(cap), location=source
                )
            new = [invert_sim(g)]
            new += [
                restrict(g, Ball(space, a))
                for a in space.nodes
                if a.startswith(g.dom.address) and a != g.dom.address
            ]
            snapshot = list(closed)
            new += [compose_sim(h, g) for h in snapshot if h.dom == g.cod]
            new += [compose_sim(g, h) for h in snapshot if h.cod == g.dom]
            work.extend(h for h in new if h not in closed)
        logger.debug("finite structure closed to {} similarities".format(len(closed)))
        return cls(space, tuple(sorted(closed, key=Similarity.sort_key)), source)

    def sim_set(self, b1, b2):
        self._check(b1, b2)
        return self._index.get((b1.address, b2.address), ())

    def descriptor(self):
        return "sim finite {}".format(self.source or "<inline>")


@register_structure
@dataclass(frozen=True)
class MinusStructure(SimStructure):
    """
    Sim minus every similarity with exactly one of domain and codomain equal to X. The local similarity
    group does not change but the structure is never dually contracting.
    """

    base: SimStructure
    keyword = "minus"

    @property
    def space(self):
        return self.base.space

    def sim_set(self, b1, b2):
        self._check(b1, b2)
        if b1.is_root != b2.is_root:
            return ()
        return self.base.sim_set(b1, b2)

    def descriptor(self):
        return "sim minus {}".format(self.base.descriptor()[len("sim "):])


@dataclass(frozen=True)
class RestrictedStructure(SimStructure):
    """
    Sim|_Y: the similarities of the base structure whose domain and codomain lie in the carrier Y.
    Group elements over it are tables whose domains partition Y.
    """

    base: SimStructure
    carrier: ClopenSet
    keyword = "restricted"

    @property
    def space(self):
        return self.base.space

    def carrier_set(self):
        return self.carrier

    def sim_set(self, b1, b2):
        self._check(b1, b2)
        if not (self.carrier.contains_ball(b1) and self.carrier.contains_ball(b2)):
            return ()
        return self.base.sim_set(b1, b2)

    def contains(self, g):
        return (
            self.carrier.contains_ball(g.dom)
            and self.carrier.contains_ball(g.cod)
            and self.base.contains(g)
        )

    def descriptor(self):
        return "sim restricted {} to {}".format(
            self.base.descriptor()[len("sim "):], self.carrier
        )


@dataclass(frozen=True)
class DualContractionWitness:
    """
    Two disjoint proper subballs b1, b2 of X with similarities g1: X -> b1 and g2: X -> b2 from the structure
    """

    b1: Ball
    b2: Ball
    g1: Similarity
    g2: Similarity


def dual_contraction(s, depth_budget=None):
    """
    Looks for a dual contraction, scanning proper subballs by depth and address

    Args:
        s (SimStructure): structure to inspect

        depth_budget (int or None): deepest subball considered, defaults to macros.DEPTH_BUDGET

    Returns:
        DualContractionWitness or None: the lexicographically least witness
    """
    depth_budget = depth_budget or macros.DEPTH_BUDGET
    root = s.space.root
    candidates = []
    for n in range(1, depth_budget + 1):
        for b in s.space.balls_at_depth(n):
            sims = s.sim_set(root, b)
            if not sims:
                continue
            for c, g in candidates:
                if c.is_disjoint(b):
                    return DualContractionWitness(c, b, g, sims[0])
            candidates.append((b, sims[0]))
    return None


@dataclass(frozen=True)
class LocalSimWitness:
    """
    A local similarity source -> target: structure similarities whose domains partition the source and
    whose codomains partition the target.
    """

    source: ClopenSet
    target: ClopenSet
    table: tuple

    def inverse(self):
        table = tuple(sorted((invert_sim(g) for g in self.table), key=Similarity.sort_key))
        return LocalSimWitness(self.target, self.source, table)

    def validate(self, s):
        doms = [g.dom for g in self.table]
        cods = [g.cod for g in self.table]
        for balls, whole, side in ((doms, self.source, "domains"), (cods, self.target, "codomains")):
            if any(not a.is_disjoint(b) for a, b in itertools.combinations(balls, 2)):
                raise WitnessInvalid("witness {} overlap".format(side))
            if not balls or canonicalize(balls) != whole:
                raise WitnessInvalid("witness {} do not cover {}".format(side, whole))
        for g in self.table:
            if not s.contains(g):
                raise WitnessInvalid("{} is not in the structure".format(g), location=g.dom.address)


@dataclass(frozen=True)
class SearchBudgetExceeded:
    """
    Result of a bounded search that ended without a decision
    """

    budget: int


def identity_witness(y):
    return LocalSimWitness(y, y, tuple(identity_on(b) for b in y.balls))


def locally_sim_equivalent(s, y, z, depth_budget=None):
    """
    Decides whether there is a local similarity y -> z locally determined by the structure.

    Permutational structures are decided exactly: y and z are equivalent iff their canonical ball counts
    agree modulo d - 1 (splitting a ball adds d - 1 balls and all balls are Sim-equivalent). Every other
    structure goes through search_local_witness().

    Returns:
        LocalSimWitness or None or SearchBudgetExceeded
    """
    check_same_space(s, y, z)
    if y == z:
        return identity_witness(y)
    if isinstance(s, PermutationalStructure):
        return congruence_witness(s, y, z)
    return search_local_witness(s, y, z, depth_budget)


def congruence_witness(s, y, z):
    d = s.space.d
    if (len(y.balls) - len(z.balls)) % (d - 1) != 0:
        return None
    ys, zs = list(y.balls), list(z.balls)
    while len(ys) != len(zs):
        shorter = ys if len(ys) < len(zs) else zs
        first = shorter.pop(0)
        shorter.extend(maximal_proper_subballs(first))
        shorter.sort()
    identity = TailAction.identity(d)
    table = tuple(Similarity(a, b, identity) for a, b in zip(ys, zs))
    return LocalSimWitness(y, z, tuple(sorted(table, key=Similarity.sort_key)))


def _sumset(a, b):
    return np.convolve(a.astype(np.int64), b.astype(np.int64)) > 0


@functools.lru_cache(maxsize=None)
def _size_mask(space, address, max_depth):
    """
    Boolean array m with m[k] true iff the ball at @address splits into exactly k balls of depth <= @max_depth
    """
    kids = space.children_addresses(address)
    mask = np.zeros(2, dtype=bool)
    mask[1] = True
    if kids and len(address) < max_depth:
        total = np.ones(1, dtype=bool)
        for c in kids:
            total = _sumset(total, _size_mask(space, c, max_depth))
        if len(total) > len(mask):
            mask = np.concatenate([mask, np.zeros(len(total) - len(mask), dtype=bool)])
        mask[: len(total)] |= total
    return mask


def decomposition_sizes(y, max_depth):
    """
    Set of ball counts of the decompositions of @y into balls of depth <= @max_depth
    """
    total = np.ones(1, dtype=bool)
    for b in y.balls:
        total = _sumset(total, _size_mask(y.space, b.address, max(max_depth, b.depth)))
    return frozenset(int(k) for k in np.flatnonzero(total))


def _sized_decompositions(space, addresses, size, max_depth):
    """
    Yields decompositions (tuples of addresses) of the balls @addresses with exactly @size balls
    """
    if not addresses:
        if size == 0:
            yield ()
        return
    head, rest = addresses[0], addresses[1:]
    head_mask = _size_mask(space, head, max(max_depth, len(head)))
    rest_sizes = np.ones(1, dtype=bool)
    for a in rest:
        rest_sizes = _sumset(rest_sizes, _size_mask(space, a, max(max_depth, len(a))))
    for k in np.flatnonzero(head_mask):
        k = int(k)
        remaining = size - k
        if remaining < 0 or remaining >= len(rest_sizes) or not rest_sizes[remaining]:
            continue
        for head_part in _ball_decompositions_of_size(space, head, k, max_depth):
            for rest_part in _sized_decompositions(space, rest, remaining, max_depth):
                yield head_part + rest_part


def _ball_decompositions_of_size(space, address, size, max_depth):
    if size == 1:
        yield (address,)
        return
    kids = space.children_addresses(address)
    if kids and len(address) < max_depth:
        yield from _sized_decompositions(space, tuple(kids), size, max_depth)


def _perfect_matching(s, dy, dz, cache):
    graph = nx.Graph()
    top = [("y", a) for a in dy]
    graph.add_nodes_from(top)
    graph.add_nodes_from(("z", b) for b in dz)
    for a in dy:
        for b in dz:
            if (a, b) not in cache:
                cache[(a, b)] = s.sim_set(Ball(s.space, a), Ball(s.space, b))
            if cache[(a, b)]:
                graph.add_edge(("y", a), ("z", b))
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=top)
    if sum(1 for node in top if node in matching) != len(dy):
        return None
    return [(a, matching[("y", a)][1]) for a in dy]


def search_local_witness(s, y, z, depth_budget=None):
    """
    Exhaustive witness search over ball decompositions of y and z of depth <= @depth_budget, by increasing
    number of balls; each pair of equally sized decompositions is tested for a perfect matching along
    non-empty Sim sets.

    Returns:
        LocalSimWitness, None (no witness exists; only claimed when the search covered every decomposition
        of a finite space) or SearchBudgetExceeded
    """
    check_same_space(s, y, z)
    depth_budget = depth_budget or macros.DEPTH_BUDGET
    common = sorted(decomposition_sizes(y, depth_budget) & decomposition_sizes(z, depth_budget))
    cache = {}
    examined = 0
    for size in common:
        for dy in _sized_decompositions(s.space, y.addresses, size, depth_budget):
            for dz in _sized_decompositions(s.space, z.addresses, size, depth_budget):
                examined += 1
                if examined > macros.SEARCH_BUDGET:
                    logger.debug(
                        "local equivalence search stopped after {} decomposition pairs".format(
                            macros.SEARCH_BUDGET
                        )
                    )
                    return SearchBudgetExceeded(macros.SEARCH_BUDGET)
                pairs = _perfect_matching(s, dy, dz, cache)
                if pairs is None:
                    continue
                table = tuple(
                    sorted((cache[(a, b)][0] for a, b in pairs), key=Similarity.sort_key)
                )
                return LocalSimWitness(y, z, table)
    complete = s.space.kind == SpaceType.FINITE and depth_budget >= max(
        len(a) for a in s.space.nodes
    )
    return None if complete else SearchBudgetExceeded(depth_budget)


@dataclass(frozen=True)
class EqualizingPiece:
    """
    One piece of an equalizing similarity: its restriction to @ball is the identity or separating
    """

    ball: Ball
    similarity: Similarity
    is_identity: bool


def decompose_equalizing(s, g, depth_budget=None):
    """
    Writes an equalizing similarity as locally determined by identities and separating elements

    Args:
        s (SimStructure): structure containing @g

        g (Similarity): similarity B -> B

        depth_budget (int or None): deepest level explored below dom(g)

    Returns:
        tuple of EqualizingPiece: pieces whose balls partition dom(g)
    """
    if classify(g) != SimilarityClass.EQUALIZING:
        raise NotEqualizing("{} is not equalizing".format(g), location=g.dom.address)
    depth_budget = depth_budget or macros.DEPTH_BUDGET
    pieces = []

    def visit(h, level):
        if h.is_identity:
            pieces.append(EqualizingPiece(h.dom, h, True))
            return
        if level >= depth_budget:
            raise BudgetExceeded(
                "no decomposition of {} within depth {}".format(g, depth_budget)
            )
        for child in maximal_proper_subballs(h.dom):
            r = restrict(h, child)
            if r.cod == r.dom:
                visit(r, level + 1)
            else:
                assert s.contains(r), "structure is not closed under restriction"
                pieces.append(EqualizingPiece(child, r, False))

    visit(g, 0)
    return tuple(sorted(pieces, key=lambda p: p.ball.address))


class CensusKind(IntEnum):
    FINITE = 0
    INFINITE = 1


@dataclass(frozen=True)
class CensusResult:
    """
    Outcome of separating_census: an exact count, or three distinct separating elements of an infinite family
    """

    kind: CensusKind
    count: int = None
    witness: tuple = ()

    @property
    def balls(self):
        return tuple(g.dom for g in self.witness)


def find_contracting(s, depth_bound):
    """
    Returns a contracting similarity A -> B with B strictly inside A, or None
    """
    for a in s.space.balls_up_to_depth(depth_bound - 1):
        for n in range(a.depth + 1, depth_bound + 1):
            for b in s.space.balls_at_depth(n):
                if a.contains(b):
                    sims = s.sim_set(a, b)
                    if sims:
                        return sims[0]
    return None


def separating_census(s, depth_bound=None):
    """
    Counts separating elements, or exhibits infinitely many of them.

    A contracting g: A -> B (B inside A) gives the separating restrictions of g to C, g(C), g(g(C)), ...
    for a ball C in A minus B. A separating element with infinite domain gives its restrictions to a
    descending chain of subballs.

    Returns:
        CensusResult
    """
    depth_bound = depth_bound or macros.DEPTH_BUDGET
    if isinstance(s, FiniteEnumeratedStructure):
        count = sum(
            1 for g in s.similarities if classify(g) == SimilarityClass.SEPARATING
        )
        return CensusResult(CensusKind.FINITE, count)

    gamma = find_contracting(s, depth_bound)
    if gamma is not None:
        outer = gamma.dom
        c = next(
            k for k in maximal_proper_subballs(outer) if k.is_disjoint(gamma.cod)
        )
        witness = []
        for _ in range(3):
            witness.append(restrict(gamma, c))
            c = apply(gamma, c)
        return CensusResult(CensusKind.INFINITE, witness=tuple(witness))

    separating = []
    for b1 in s.space.balls_up_to_depth(depth_bound):
        for b2 in s.space.balls_up_to_depth(depth_bound):
            if b1.is_disjoint(b2):
                separating.extend(s.sim_set(b1, b2))
    infinite = [g for g in separating if not s.space.is_leaf(g.dom.address)]
    if infinite and s.space.kind == SpaceType.WORD:
        gamma = infinite[0]
        first = s.space.letters[0]
        witness = tuple(
            restrict(gamma, Ball(s.space, gamma.dom.address + first * i)) for i in range(3)
        )
        return CensusResult(CensusKind.INFINITE, witness=witness)
    return CensusResult(CensusKind.FINITE, len(separating))


def ball_classes(s, depth):
    """
    Groups the balls of depth <= @depth into Sim-equivalence classes

    Returns:
        list of tuple of Ball: classes in order of their least ball
    """
    classes = []
    for b in s.space.balls_up_to_depth(depth):
        for cls in classes:
            if s.sim_set(cls[0], b):
                cls.append(b)
                break
        else:
            classes.append([b])
    return [tuple(cls) for cls in classes]


def is_depth_preserving(s, depth):
    """
    True iff Sim(B1, B2) is empty whenever depth(B1) != depth(B2), checked for balls of depth <= @depth
    """
    balls = s.space.balls_up_to_depth(depth)
    return all(
        not s.sim_set(b1, b2) for b1 in balls for b2 in balls if b1.depth != b2.depth
    )
