"""
Free subgroups of dually contracting structures.

From a dual contraction g1: X -> A1, g2: X -> A2 we build the ball sequences S_1, S_2, ... of pairwise disjoint
balls similar to X, and the ping-pong pair a1 (order 3) and a2 (order 2) generating Z/3 * Z/2.
"""
from dataclasses import dataclass

import localsim.macros as macros
from localsim.groups.element import (
    compose,
    from_table,
    identity,
    image,
    is_identity,
    order,
)
from localsim.models.similarity import (
    apply,
    chain,
    compose_sim,
    identity_on,
    invert_sim,
    prefix_rewrite,
    restrict,
)
from localsim.models.structures import dual_contraction
from localsim.models.ultrametric import (
    Ball,
    ClopenSet,
    Partition,
    canonicalize,
    maximal_proper_subballs,
    partition_depth_bound,
)
from localsim.utils.errors import MalformedWitness, NotDuallyContracting


def _require_dual_contraction(s):
    w = dual_contraction(s)
    if w is None:
        raise NotDuallyContracting(
            "{} has no similarities from X onto two disjoint proper subballs".format(s.descriptor())
        )
    return w


@dataclass(frozen=True)
class BallSequence:
    """
    Levels S_1, ..., S_imax. levels[i - 1] lists the balls of S_i by address and maps[i - 1] the structure
    similarities X -> B for those balls, in the same order.
    """

    levels: tuple
    maps: tuple
    gamma1: object
    gamma2: object

    def level(self, i):
        return self.levels[i - 1]

    def min_depth(self, i):
        return min(b.depth for b in self.levels[i - 1])


def _next_level(balls, maps, gamma1, gamma2):
    pairs = []
    for gamma in (gamma1, gamma2):
        for b, h in zip(balls, maps):
            pairs.append((apply(gamma, b), compose_sim(restrict(gamma, b), h)))
    pairs.sort(key=lambda p: p[0].address)
    return tuple(p[0] for p in pairs), tuple(p[1] for p in pairs)


def ball_sequence(s, i_max):
    """
    Builds S_1 = {A1, A2} and S_(i+1) = {g1(B), g2(B) | B in S_i}

    Args:
        s (SimStructure): dually contracting structure

        i_max (int): number of levels

    Returns:
        BallSequence
    """
    w = _require_dual_contraction(s)
    pairs = sorted([(w.b1, w.g1), (w.b2, w.g2)], key=lambda p: p[0].address)
    balls, maps = tuple(p[0] for p in pairs), tuple(p[1] for p in pairs)
    levels, all_maps = [], []
    for _ in range(i_max):
        levels.append(balls)
        all_maps.append(maps)
        balls, maps = _next_level(balls, maps, w.g1, w.g2)
    return BallSequence(tuple(levels), tuple(all_maps), w.g1, w.g2)


def split_inside(s, p, n):
    """
    Refines @p so that at least @n of its blocks are balls admitting a similarity from X. Takes the first level
    S_i with depth(S_i) >= partition_depth_bound(p) and |S_i| >= n and carves its balls out of their blocks.

    Returns:
        Partition: refinement of @p
    """
    if n <= 0:
        return p
    w = _require_dual_contraction(s)
    bound = partition_depth_bound(p)
    pairs = sorted([(w.b1, w.g1), (w.b2, w.g2)], key=lambda q: q[0].address)
    balls, maps = tuple(q[0] for q in pairs), tuple(q[1] for q in pairs)
    for _ in range(macros.MAX_SEQUENCE_LEVEL):
        if min(b.depth for b in balls) >= bound and len(balls) >= n:
            break
        balls, maps = _next_level(balls, maps, w.g1, w.g2)
    else:
        raise NotDuallyContracting(
            "no ball sequence level deep enough within {} levels".format(macros.MAX_SEQUENCE_LEVEL)
        )
    blocks = []
    for block in p.blocks:
        carved = [b for b in balls if block.contains_ball(b)]
        if not carved:
            blocks.append(block)
            continue
        rest = block.difference(canonicalize(carved))
        if rest is not None:
            blocks.append(rest)
        blocks.extend(ClopenSet(s.space, (b,)) for b in carved)
    return Partition.from_blocks(blocks)


@dataclass(frozen=True)
class PingPongWitness:
    """
    The ping-pong configuration: A1, A2 the dual contraction balls, B1 = g1(A1), B2 = g1(A2), B3 = g2(A1),
    B4 = g2(A2), deltas (d2, d3, d4) with d2: B2 -> B3, d3: B3 -> B4, d4: B4 -> B2, and X1 = A2, X2 = B2.
    """

    structure: object
    gamma1: object
    gamma2: object
    a_balls: tuple
    b_balls: tuple
    deltas: tuple
    a1: object
    a2: object
    x1: ClopenSet
    x2: ClopenSet


def _identity_off(s, moved):
    rest = s.carrier_set().difference(canonicalize(moved))
    return [] if rest is None else [identity_on(b) for b in rest.balls]


def pingpong_witness(s):
    """
    Constructs a1 and a2 from the dual contraction of @s

    Returns:
        PingPongWitness
    """
    w = _require_dual_contraction(s)
    g1, g2 = w.g1, w.g2
    A1, A2 = w.b1, w.b2
    B1, B2, B3, B4 = apply(g1, A1), apply(g1, A2), apply(g2, A1), apply(g2, A2)
    g1_inv, g2_inv = invert_sim(g1), invert_sim(g2)

    d2 = chain(restrict(g2, A1), g1, g2_inv, restrict(g1_inv, B2))
    d3 = chain(restrict(g2, A2), g2, g1_inv, restrict(g2_inv, B3))
    d4 = chain(restrict(g1, A2), restrict(g2_inv, B4))

    a1 = from_table(s, [d2, d3, d4] + _identity_off(s, [B2, B3, B4]))
    a2 = from_table(
        s,
        [restrict(g1_inv, B2), restrict(g1, A2)] + _identity_off(s, [B2, A2]),
    )
    return PingPongWitness(
        structure=s,
        gamma1=g1,
        gamma2=g2,
        a_balls=(A1, A2),
        b_balls=(B1, B2, B3, B4),
        deltas=(d2, d3, d4),
        a1=a1,
        a2=a2,
        x1=ClopenSet(s.space, (A2,)),
        x2=ClopenSet(s.space, (B2,)),
    )


@dataclass(frozen=True)
class PingPongTranscript:
    checks: tuple
    conclusion: bool

    def lines(self):
        out = [
            "CHECK {}: {}".format(name, "PASS" if ok else "FAIL") for name, ok in self.checks
        ]
        out.append(
            "CONCLUSION <a1,a2> = Z3 * Z2: {}".format("PASS" if self.conclusion else "FAIL")
        )
        return out


def verify_pingpong(w, order_bound=None):
    """
    Machine-checks the ping-pong configuration: the orders of a1 and a2, the three delta cycle identities and
    the containments a1 X2 in X1, a1^2 X2 in X1, a2 X1 in X2 (exact on clopen sets)

    Returns:
        PingPongTranscript
    """
    B1, B2, B3, B4 = w.b_balls
    d2, d3, d4 = w.deltas
    for name, d, dom, cod in (("d2", d2, B2, B3), ("d3", d3, B3, B4), ("d4", d4, B4, B2)):
        if d.dom != dom or d.cod != cod:
            raise MalformedWitness(
                "{} maps {} -> {}, expected {} -> {}".format(name, d.dom, d.cod, dom, cod)
            )

    checks = [
        ("order(a1)=3", order(w.a1, order_bound).order == 3),
        ("order(a2)=2", order(w.a2, order_bound).order == 2),
        ("d4.d3.d2=id_B2", chain(d4, d3, d2) == identity_on(B2)),
        ("d2.d4.d3=id_B3", chain(d2, d4, d3) == identity_on(B3)),
        ("d3.d2.d4=id_B4", chain(d3, d2, d4) == identity_on(B4)),
        ("X1 disjoint X2", w.x1.is_disjoint(w.x2)),
    ]
    a1_x2 = image(w.a1, w.x2)
    checks.append(("a1 X2 in X1", a1_x2.is_subset(w.x1)))
    checks.append(("a1^2 X2 in X1", image(w.a1, a1_x2).is_subset(w.x1)))
    checks.append(("a2 X1 in X2", image(w.a2, w.x1).is_subset(w.x2)))
    return PingPongTranscript(tuple(checks), all(ok for _, ok in checks))


@dataclass(frozen=True)
class ReducedWordResult:
    """
    Pass when @counterexample is None; otherwise the syllables of a reduced word equal to the identity
    """

    checked: int
    counterexample: tuple = None

    @property
    def passed(self):
        return self.counterexample is None


def reduced_words(max_len):
    """
    Yields the non-empty reduced alternating words in {a1, a1^2} and {a2} with at most @max_len syllables
    """
    syllables = {1: ("a1", "a1^2"), 2: ("a2",)}

    def extend(word, last):
        if word:
            yield word
        if len(word) == max_len:
            return
        for side in (1, 2):
            if side == last:
                continue
            for syl in syllables[side]:
                yield from extend(word + (syl,), side)

    yield from extend((), None)


def reduced_word_check(w, max_len=None):
    """
    Evaluates every reduced alternating word of syllable length <= @max_len and confirms none is the identity

    Returns:
        ReducedWordResult
    """
    max_len = max_len or macros.REDUCED_WORD_MAX_LEN
    values = {
        "a1": w.a1,
        "a1^2": compose(w.a1, w.a1),
        "a2": w.a2,
    }
    products = {(): identity(w.structure)}
    checked = 0
    for word in reduced_words(max_len):
        products[word] = compose(products[word[:-1]], values[word[-1]])
        checked += 1
        if is_identity(products[word]):
            return ReducedWordResult(checked, word)
    return ReducedWordResult(checked)


@dataclass(frozen=True)
class ExtensionObstruction:
    """
    Result of testing whether a similarity delta: X -> A could be added to a structure.

    @alpha_table is the local similarity acting as delta|_C on C, as its inverse on D = delta(C) and as the
    identity elsewhere; @in_sim lists the restrictions of delta|_C that the structure already contains.
    """

    delta: object
    c: Ball
    d: Ball
    alpha_table: tuple
    in_sim: tuple

    @property
    def holds(self):
        return not self.in_sim


def extension_obstruction(s, target, depth_budget=None):
    """
    Tests the hypothetical similarity delta: X -> @target (a proper subball, order preserving) against @s.
    When no restriction of delta to C or its subballs lies in the structure, the local similarity alpha built
    from delta|_C is outside Gamma(Sim), so the structure cannot be extended to a dually contracting one
    containing delta without changing its group.

    Returns:
        ExtensionObstruction
    """
    depth_budget = depth_budget or macros.DEPTH_BUDGET
    space = s.space
    delta = prefix_rewrite(space.root, target)
    c = next(k for k in maximal_proper_subballs(space.root) if k.is_disjoint(target))
    hat = restrict(delta, c)
    d = hat.cod
    table = [hat, invert_sim(hat)] + _identity_off(s, [c, d])
    in_sim = []
    for n in range(c.depth, depth_budget + 1):
        for b in space.balls_at_depth(n):
            if c.contains(b):
                r = restrict(hat, b)
                if s.contains(r):
                    in_sim.append(r)
    return ExtensionObstruction(delta, c, d, tuple(table), tuple(in_sim))
