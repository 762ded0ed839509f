"""
The poset P_n of partitions of X with at least n blocks locally Sim-equivalent to X, ordered by refinement,
its chains, the action of Gamma(Sim) on it and the isotropy groups of chains.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

import localsim.macros as macros
from localsim.groups.element import (
    compose,
    embed_restricted,
    from_table,
    identity,
    image,
)
from localsim.groups.freeness import split_inside
from localsim.models.similarity import restrict
from localsim.models.structures import (
    LocalSimWitness,
    RestrictedStructure,
    locally_sim_equivalent,
)
from localsim.models.ultrametric import (
    Partition,
    ball_decompositions,
    check_same_space,
)
from localsim.utils.errors import (
    BudgetExceeded,
    CarrierMismatch,
    InvalidChain,
    NotRefinement,
    TooManyBlocks,
)


@dataclass(frozen=True)
class PosetVertex:
    """
    A partition certified to lie in P_n. @marked pairs blocks with their LocalSimWitness block -> X.
    """

    partition: Partition
    n: int
    marked: tuple

    @property
    def marked_blocks(self):
        return tuple(block for block, _ in self.marked)


@dataclass(frozen=True)
class NotMember:
    partition: Partition
    n: int
    marked_count: int


def _partition_of(p):
    return p.partition if isinstance(p, PosetVertex) else p


def is_member(s, p, n, depth_budget=None):
    """
    Marks the blocks of @p that are locally Sim-equivalent to X

    Returns:
        PosetVertex if at least @n blocks are marked, NotMember otherwise
    """
    whole = s.space.whole
    marked = []
    for block in p.blocks:
        w = locally_sim_equivalent(s, block, whole, depth_budget)
        if isinstance(w, LocalSimWitness):
            marked.append((block, w))
    if len(marked) >= n:
        return PosetVertex(p, n, tuple(marked))
    return NotMember(p, n, len(marked))


def refines(p, q):
    """
    True iff @q refines @p, i.e. p <= q in the poset
    """
    p, q = _partition_of(p), _partition_of(q)
    check_same_space(p, q)
    return all(any(qb.is_subset(pb) for pb in p.blocks) for qb in q.blocks)


def common_refinement(s, p, q, n, depth_budget=None):
    """
    A vertex of P_n refining both @p and @q: the block-wise intersection, carved further with split_inside()
    when fewer than @n of its blocks are marked

    Returns:
        PosetVertex or NotMember
    """
    p, q = _partition_of(p), _partition_of(q)
    check_same_space(p, q)
    blocks = []
    for a in p.blocks:
        for b in q.blocks:
            c = a.intersection(b)
            if c is not None:
                blocks.append(c)
    r = Partition.from_blocks(blocks)
    v = is_member(s, r, n, depth_budget)
    if isinstance(v, NotMember):
        v = is_member(s, split_inside(s, r, n), n, depth_budget)
    return v


def act(g, p):
    """
    g{P_1, ..., P_k} = {g(P_1), ..., g(P_k)}
    """
    p = _partition_of(p)
    check_same_space(g, p)
    return Partition.from_blocks([image(g, block) for block in p.blocks])


def refinement_function(p, q):
    """
    The map sending each block of @q to the block of @p containing it

    Returns:
        dict: q-block -> p-block
    """
    p, q = _partition_of(p), _partition_of(q)
    if not refines(p, q):
        raise NotRefinement("{} does not refine {}".format(q, p))
    return {qb: next(pb for pb in p.blocks if qb.is_subset(pb)) for qb in q.blocks}


@dataclass(frozen=True)
class PartitionChain:
    """
    A simplex P_1 < ... < P_k of the order complex, coarsest first
    """

    vertices: tuple

    def __post_init__(self):
        parts = tuple(_partition_of(v) for v in self.vertices)
        if not parts:
            raise InvalidChain("a chain needs at least one vertex")
        for a, b in zip(parts, parts[1:]):
            if a == b or not refines(a, b):
                raise InvalidChain("{} < {} is not a strict refinement".format(a, b))
        object.__setattr__(self, "vertices", parts)

    @property
    def finest(self):
        return self.vertices[-1]

    def __len__(self):
        return len(self.vertices)


def _fibers(chain):
    """
    For every vertex, the index of the block containing each finest block
    """
    finest = chain.finest
    out = []
    for v in chain.vertices[:-1]:
        f = refinement_function(v, finest)
        out.append(np.array([v.index(f[q]) for q in finest.blocks]))
    return out


def _admissible_mask(perms, fibers):
    ok = np.ones(len(perms), dtype=bool)
    for f in fibers:
        images = f[perms]
        same = np.argwhere(np.triu(f[:, None] == f[None, :], k=1))
        for j, k in same:
            ok &= images[:, j] == images[:, k]
    return ok


@dataclass(frozen=True)
class AdmissibleGroup:
    """
    Sigma_sigma: the permutations of the finest blocks that descend to a permutation of every vertex
    """

    chain: PartitionChain
    elements: tuple

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, perm):
        return tuple(perm) in self.elements


def admissible_group(chain):
    """
    Brute-force filter of the symmetric group on the finest blocks

    Returns:
        AdmissibleGroup: admissible permutations as image tuples, sorted
    """
    k = len(chain.finest)
    if k > macros.ADMISSIBLE_BLOCK_CAP:
        raise TooManyBlocks(
            "finest partition has {} blocks, cap is {}".format(k, macros.ADMISSIBLE_BLOCK_CAP)
        )
    perms = np.array(
        list(
            tqdm(
                itertools.permutations(range(k)),
                total=math.factorial(k),
                disable=not macros.VERBOSE,
                desc="admissible",
            )
        ),
        dtype=np.int64,
    ).reshape(-1, k)
    mask = _admissible_mask(perms, _fibers(chain))
    return AdmissibleGroup(chain, tuple(tuple(int(i) for i in row) for row in perms[mask]))


def is_admissible(chain, perm):
    perm = np.array(perm, dtype=np.int64).reshape(1, -1)
    return bool(_admissible_mask(perm, _fibers(chain))[0])


@dataclass(frozen=True)
class IsotropyMembership:
    """
    InIsotropy(permutation) when @permutation is set, NotIn(reason) otherwise
    """

    permutation: tuple = None
    reason: str = None

    @property
    def in_isotropy(self):
        return self.permutation is not None


def isotropy_membership(g, chain):
    """
    Decides whether @g lies in the isotropy group of @chain and returns the induced permutation of the finest
    blocks

    Returns:
        IsotropyMembership
    """
    finest = chain.finest
    perm = []
    for block in finest.blocks:
        img = image(g, block)
        if img not in finest.blocks:
            return IsotropyMembership(reason="{} is mapped onto {}, not a block".format(block, img))
        perm.append(finest.index(img))
    if not is_admissible(chain, perm):
        return IsotropyMembership(reason="block permutation is not admissible")
    return IsotropyMembership(permutation=tuple(perm))


@dataclass(frozen=True)
class IsotropySummary:
    """
    Lambda_sigma, the product of the restricted groups Gamma(Sim|_P) over the finest blocks, and the admissible
    group Sigma_sigma into which Gamma_sigma / Lambda_sigma embeds
    """

    chain: PartitionChain
    lambda_factors: tuple
    admissible: AdmissibleGroup

    @property
    def index_bound(self):
        return self.admissible.order


def lambda_summary(s, chain):
    factors = tuple(RestrictedStructure(s, block) for block in chain.finest.blocks)
    return IsotropySummary(chain, factors, admissible_group(chain))


def lambda_factors_of(s, g, chain):
    """
    Splits an element fixing every finest block into its factors, one element of Gamma(Sim|_P) per block P

    Returns:
        tuple of GroupElement
    """
    factors = []
    for block in chain.finest.blocks:
        pieces = []
        for e in g.table:
            for b in block.balls:
                if e.dom.contains(b):
                    pieces.append(restrict(e, b))
                elif b.contains(e.dom):
                    pieces.append(e)
        if any(not block.contains_ball(e.cod) for e in pieces):
            raise CarrierMismatch("element does not fix the block {}".format(block))
        factors.append(from_table(RestrictedStructure(s, block), pieces))
    return tuple(factors)


def lambda_from_factors(s, chain, factors):
    """
    Inverse of lambda_factors_of(): the product of the factors extended by the identity
    """
    result = identity(s)
    for block, factor in zip(chain.finest.blocks, factors):
        result = compose(embed_restricted(s, block, factor), result)
    return result


def _count_decompositions(space, address, depth_bound):
    kids = space.children_addresses(address)
    if not kids or len(address) >= depth_bound:
        return 1
    return 1 + math.prod(_count_decompositions(space, c, depth_bound) for c in kids)


def enumerate_partitions(space, depth_bound):
    """
    All partitions of X into balls of depth <= @depth_bound, ordered by number of blocks and then by addresses

    Returns:
        list of Partition
    """
    count = _count_decompositions(space, "", depth_bound)
    if count > macros.ENUMERATION_BUDGET:
        raise BudgetExceeded(
            "{} partitions of depth <= {} exceed the budget of {}".format(
                count, depth_bound, macros.ENUMERATION_BUDGET
            )
        )
    codes = sorted(ball_decompositions(space, "", depth_bound), key=lambda c: (len(c), c))
    return [Partition.from_balls([space.ball(a) for a in code]) for code in codes]
