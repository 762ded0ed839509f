"""
Elements of the local similarity group of a structure.

An element is stored as a finite table of structure similarities whose domains partition the carrier (X, or Y for
a restricted structure) and whose codomains partition it as well. Tables are always kept in maximum-region normal
form: no full family of sibling entries is the restriction of a single parent similarity from the structure.
"""
import itertools
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

import localsim.macros as macros
from localsim.models.similarity import (
    SimilarityClass,
    Similarity,
    apply,
    classify,
    compose_sim,
    evaluate_point,
    identity_on,
    invert_sim,
    merge_siblings,
    restrict,
)
from localsim.models.structures import (
    PermutationalStructure,
    RestrictedStructure,
    ball_classes,
    is_depth_preserving,
)
from localsim.models.ultrametric import (
    Ball,
    ball_decompositions,
    canonicalize,
    check_same_space,
)
from localsim.utils.errors import (
    BudgetExceeded,
    CarrierMismatch,
    CodomainsNotPartition,
    DomainsNotPartition,
    EntryNotInSim,
    SpaceMismatch,
    StructureError,
    WitnessInvalid,
)
from localsim.utils.log_utils import LOCALSIM_DEFAULT_LOGGER as logger


@dataclass(frozen=True)
class GroupElement:
    """
    Element of Gamma(Sim). Build instances with from_table(); the table is sorted by domain address and in
    normal form.

    Args:
        structure (SimStructure): structure the element is locally determined by

        table (tuple of Similarity): maximum regions of the element
    """

    structure: object
    table: tuple

    @property
    def space(self):
        return self.structure.space

    @property
    def regions(self):
        return tuple(e.dom for e in self.table)

    def sort_key(self):
        return tuple(e.sort_key() for e in self.table)

    def __str__(self):
        return "[" + ", ".join(str(e) for e in self.table) + "]"


def _check_prefix_code(balls, carrier, error):
    if not balls:
        raise error("empty table")
    balls = sorted(balls)
    for a, b in zip(balls, balls[1:]):
        if a.contains(b):
            raise error("{} and {} overlap".format(a, b), location=b.address)
    if canonicalize(balls) != carrier:
        raise error("balls {} do not cover {}".format(canonicalize(balls), carrier))


def from_table(s, entries):
    """
    Validates a table of similarities and returns the element it determines.

    Args:
        s (SimStructure): structure

        entries (iterable of Similarity): table entries

    Returns:
        GroupElement: normalized element
    """
    entries = list(entries)
    for e in entries:
        check_same_space(s, e)
        if not s.contains(e):
            raise EntryNotInSim("{} is not in the structure".format(e), location=e.dom.address)
    carrier = s.carrier_set()
    _check_prefix_code([e.dom for e in entries], carrier, DomainsNotPartition)
    _check_prefix_code([e.cod for e in entries], carrier, CodomainsNotPartition)
    return normalize(GroupElement(s, tuple(sorted(entries, key=Similarity.sort_key))))


def _merge_pass(s, table):
    by_parent = {}
    for e in table:
        if not e.dom.is_root:
            by_parent.setdefault(e.dom.address[:-1], {})[e.dom.address] = e
    for parent, kids in sorted(by_parent.items(), key=lambda kv: -len(kv[0])):
        children = s.space.children_addresses(parent)
        if len(kids) != len(children):
            continue
        candidate = merge_siblings(Ball(s.space, parent), [kids[c] for c in children])
        if candidate is not None and s.contains(candidate):
            rest = [e for e in table if e.dom.address not in kids]
            return rest + [candidate], True
    return table, False


def normalize(a):
    """
    Merges full sibling families whose entries are restrictions of one parent similarity until none is left

    Returns:
        GroupElement: element in maximum-region normal form
    """
    table = list(a.table)
    changed = True
    while changed:
        table, changed = _merge_pass(a.structure, table)
    return GroupElement(a.structure, tuple(sorted(table, key=Similarity.sort_key)))


def identity(s):
    return normalize(
        GroupElement(s, tuple(identity_on(b) for b in s.carrier_set().balls))
    )


def check_same_structure(a, b):
    if a.structure != b.structure:
        raise SpaceMismatch(
            "elements over different structures: {} and {}".format(a.structure, b.structure)
        )


def compose_tables(second, first):
    """
    Composes two tables of similarities, @first applied first. The codomains of @first and the domains of
    @second must cover the same set.

    Returns:
        list of Similarity: table over the common refinement
    """
    out = []
    for e in first:
        covering = [f for f in second if f.dom.contains(e.cod)]
        if covering:
            f = covering[0]
            out.append(compose_sim(restrict(f, e.cod), e))
            continue
        inside = [f for f in second if e.cod.contains(f.dom)]
        if not inside:
            raise StructureError("tables do not compose at {}".format(e.cod))
        back = invert_sim(e)
        for f in inside:
            piece = invert_sim(restrict(back, f.dom))
            out.append(compose_sim(f, piece))
    return out


def compose(b, a):
    """
    Product b o a (apply @a first)
    """
    check_same_structure(a, b)
    return normalize(GroupElement(a.structure, tuple(compose_tables(b.table, a.table))))


def inverse(a):
    return normalize(GroupElement(a.structure, tuple(invert_sim(e) for e in a.table)))


def equals(a, b):
    check_same_structure(a, b)
    return a.table == b.table


def is_identity(a):
    return all(e.is_identity for e in a.table)


def depth_of(a):
    """
    Largest depth of a maximum region of @a
    """
    return max(e.dom.depth for e in a.table)


def power(a, k):
    result = identity(a.structure)
    for _ in range(k):
        result = compose(a, result)
    return result


@dataclass(frozen=True)
class OrderResult:
    """
    Finite(order) when @order is set, ExceedsBound(bound) otherwise
    """

    order: int = None
    bound: int = None

    @property
    def is_finite(self):
        return self.order is not None

    def __str__(self):
        if self.is_finite:
            return str(self.order)
        return "exceeds {}".format(self.bound)


def order(a, bound=None):
    """
    Smallest k <= @bound with a^k = identity

    Args:
        a (GroupElement): element

        bound (int or None): search bound, defaults to macros.ORDER_BOUND

    Returns:
        OrderResult
    """
    bound = bound or macros.ORDER_BOUND
    p = a
    for k in range(1, bound + 1):
        if is_identity(p):
            return OrderResult(order=k)
        p = compose(a, p)
    return OrderResult(bound=bound)


def evaluate(a, x):
    """
    Image of the point @x under @a
    """
    for e in a.table:
        if x.in_ball(e.dom):
            return evaluate_point(e, x)
    raise CarrierMismatch("point {} is outside the carrier of the element".format(x))


def image(a, y):
    """
    Exact image of the clopen set @y (inside the carrier) under @a

    Returns:
        ClopenSet
    """
    pieces = []
    for b in y.balls:
        covering = [e for e in a.table if e.dom.contains(b)]
        if covering:
            pieces.append(apply(covering[0], b))
            continue
        inside = [e for e in a.table if b.contains(e.dom)]
        if not inside:
            raise CarrierMismatch("{} is outside the carrier of the element".format(b))
        pieces.extend(e.cod for e in inside)
    return canonicalize(pieces)


@dataclass(frozen=True)
class ClosureResult:
    """
    FiniteSet(elements) when @elements is set, SizeBudgetExceeded(budget) otherwise
    """

    elements: tuple = None
    budget: int = None

    @property
    def is_finite(self):
        return self.elements is not None

    def __len__(self):
        return len(self.elements)


def closure(s, generators, size_budget=None):
    """
    Breadth-first enumeration of the subgroup generated by @generators

    Args:
        s (SimStructure): structure

        generators (list of GroupElement): generators

        size_budget (int or None): largest subgroup enumerated, defaults to macros.CLOSURE_BUDGET

    Returns:
        ClosureResult: elements sorted by their tables, or the tripped budget
    """
    size_budget = size_budget or macros.CLOSURE_BUDGET
    steps = list(generators) + [inverse(g) for g in generators]
    start = identity(s)
    seen = {start}
    frontier = [start]
    progress = tqdm(total=size_budget, disable=not macros.VERBOSE, desc="closure")
    progress.update(1)
    while frontier:
        nxt = []
        for x in frontier:
            for g in steps:
                y = compose(g, x)
                if y in seen:
                    continue
                seen.add(y)
                nxt.append(y)
                progress.update(1)
                if len(seen) > size_budget:
                    progress.close()
                    logger.debug("closure tripped the budget of {} elements".format(size_budget))
                    return ClosureResult(budget=size_budget)
        frontier = nxt
    progress.close()

    if generators:
        bound = max(depth_of(g) for g in generators)
        if is_depth_preserving(s, bound):
            assert all(depth_of(x) <= bound for x in seen), "depth law violated"
    return ClosureResult(elements=tuple(sorted(seen, key=GroupElement.sort_key)))


def embed_restricted(s, y, inner):
    """
    Extends an element of Gamma(Sim|_y) by the identity on X minus @y

    Returns:
        GroupElement: element over @s
    """
    st = inner.structure
    if not isinstance(st, RestrictedStructure) or st.carrier != y or st.base != s:
        raise CarrierMismatch(
            "element is not over the restriction of the structure to {}".format(y)
        )
    entries = list(inner.table)
    rest = s.carrier_set().difference(y)
    if rest is not None:
        entries.extend(identity_on(b) for b in rest.balls)
    return normalize(GroupElement(s, tuple(entries)))


def restricted_iso(s, y, z, w, a):
    """
    Transports an element of Gamma(Sim|_y) to Gamma(Sim|_z) by conjugating with the local similarity @w: y -> z

    Args:
        s (SimStructure): base structure

        y (ClopenSet): source carrier

        z (ClopenSet): target carrier

        w (LocalSimWitness): witness y -> z

        a (GroupElement): element over Sim|_y

    Returns:
        GroupElement: w o a o w^-1 over Sim|_z
    """
    if w.source != y or w.target != z:
        raise WitnessInvalid("witness does not map {} to {}".format(y, z))
    w.validate(s)
    st = a.structure
    if not isinstance(st, RestrictedStructure) or st.carrier != y or st.base != s:
        raise CarrierMismatch("element is not over the restriction to {}".format(y))
    table = compose_tables(w.table, compose_tables(a.table, w.inverse().table))
    return normalize(GroupElement(RestrictedStructure(s, z), tuple(table)))


def involution_from_separating(s, gamma):
    """
    The element acting as @gamma on A = dom(gamma), as its inverse on B = cod(gamma) and as the identity elsewhere
    """
    if classify(gamma) != SimilarityClass.SEPARATING:
        raise StructureError("{} is not separating".format(gamma))
    entries = [gamma, invert_sim(gamma)]
    moved = canonicalize([gamma.dom, gamma.cod])
    rest = s.carrier_set().difference(moved)
    if rest is not None:
        entries.extend(identity_on(b) for b in rest.balls)
    return from_table(s, entries)


def random_prefix_code(space, max_depth, rng, split_prob=0.5, root=""):
    """
    Random decomposition of the ball at @root into balls of depth <= @max_depth
    """
    out = []
    todo = [root]
    while todo:
        a = todo.pop()
        kids = space.children_addresses(a)
        if kids and len(a) < max_depth and (a == root or rng.random() < split_prob):
            todo.extend(kids)
        else:
            out.append(a)
    return sorted(out)


def _random_code_of_size(space, size, max_depth, rng):
    code = [""]
    while len(code) < size:
        splittable = [a for a in code if len(a) < max_depth and space.children_addresses(a)]
        a = splittable[rng.integers(len(splittable))]
        code.remove(a)
        code.extend(space.children_addresses(a))
    return sorted(code)


def random_element(s, max_depth, rng=None, split_prob=0.5):
    """
    Random element of depth <= @max_depth.

    For permutational structures domain and codomain partitions are drawn independently and matched at random
    with random tails. For any other structure the codomains are a permutation of the domains inside each
    Sim-equivalence class.

    Args:
        s (SimStructure): structure with carrier X

        max_depth (int): deepest region

        rng (np.random.Generator): random generator

        split_prob (float): probability of splitting a non-root ball
    """
    rng = rng if rng is not None else np.random.default_rng()
    space = s.space
    doms = random_prefix_code(space, max_depth, rng, split_prob)
    if isinstance(s, PermutationalStructure):
        cods = _random_code_of_size(space, len(doms), max_depth, rng)
        order_ = rng.permutation(len(cods))
        entries = []
        for a, j in zip(doms, order_):
            sims = s.sim_set(Ball(space, a), Ball(space, cods[j]))
            entries.append(sims[rng.integers(len(sims))])
        return from_table(s, entries)

    picked = set(doms)
    classes = [
        [b.address for b in cls if b.address in picked] for cls in ball_classes(s, max_depth)
    ]
    entries = []
    for cls in classes:
        targets = [cls[j] for j in rng.permutation(len(cls))]
        for a, t in zip(cls, targets):
            sims = s.sim_set(Ball(space, a), Ball(space, t))
            entries.append(sims[rng.integers(len(sims))])
    return from_table(s, entries)


def depth_bounded_count(s, max_depth):
    """
    Number of elements of depth <= @max_depth, by enumerating every table over ball decompositions of depth
    <= @max_depth (desk scale only)

    Returns:
        int: number of distinct normalized elements
    """
    space = s.space
    codes = [
        tuple(Ball(space, a) for a in code)
        for code in ball_decompositions(space, "", max_depth)
    ]
    seen = set()
    for doms in codes:
        for cods in codes:
            if len(cods) != len(doms):
                continue
            for perm in itertools.permutations(cods):
                options = [s.sim_set(a, b) for a, b in zip(doms, perm)]
                if not all(options):
                    continue
                for choice in itertools.product(*options):
                    seen.add(normalize(GroupElement(s, tuple(choice))))
                    if len(seen) > macros.ENUMERATION_BUDGET:
                        raise BudgetExceeded(
                            "more than {} elements of depth <= {}".format(
                                macros.ENUMERATION_BUDGET, max_depth
                            )
                        )
    return len(seen)
