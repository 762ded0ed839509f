"""
Similarities between balls.

In a word space a similarity is a prefix rewrite w1 x1 x2 ... -> w2 s(x1) s(x2) ... with a letter-wise tail
permutation s. In a finite space it is a bijection of leaves scaling every distance by the same factor.
"""
import itertools
from dataclasses import dataclass
from enum import IntEnum

from localsim.models.ultrametric import (
    ALPHABET,
    Ball,
    Point,
    SpaceType,
    check_same_space,
)
from localsim.utils.errors import DomainMismatch, NotASubball, StructureError


class SimilarityClass(IntEnum):
    """
    Enum for the three kinds of similarities, by the relative position of domain and codomain
    """

    CONTRACTING = 0
    SEPARATING = 1
    EQUALIZING = 2


@dataclass(frozen=True)
class TailAction:
    """
    Letter-wise permutation applied to the tail of a word.

    Args:
        images (tuple of int): images[i] is the image of letter i
    """

    images: tuple

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise StructureError("{} is not a permutation".format(self.images))

    @classmethod
    def identity(cls, d):
        return cls(tuple(range(d)))

    @classmethod
    def from_string(cls, text):
        return cls(tuple(int(c) for c in text))

    @property
    def d(self):
        return len(self.images)

    @property
    def is_identity(self):
        return self.images == tuple(range(len(self.images)))

    def __call__(self, letter):
        return ALPHABET[self.images[int(letter)]]

    def apply_word(self, word):
        return "".join(self(c) for c in word)

    def compose(self, other):
        """
        Returns self o other (apply @other first)
        """
        return TailAction(tuple(self.images[i] for i in other.images))

    def inverse(self):
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return TailAction(tuple(inv))

    def sort_key(self):
        return self.images

    def __str__(self):
        if self.is_identity:
            return "id"
        return "".join(str(i) for i in self.images)


@dataclass(frozen=True)
class PointMap:
    """
    Bijection between the leaves of two nodes of a finite space.

    Args:
        pairs (tuple): sorted tuple of (leaf, image leaf) address pairs
    """

    pairs: tuple

    @classmethod
    def from_dict(cls, mapping):
        return cls(tuple(sorted(mapping.items())))

    @property
    def mapping(self):
        return dict(self.pairs)

    @property
    def is_identity(self):
        return all(a == b for a, b in self.pairs)

    def __call__(self, leaf):
        return self.mapping[leaf]

    def compose(self, other):
        mine = self.mapping
        return PointMap(tuple(sorted((a, mine[b]) for a, b in other.pairs)))

    def inverse(self):
        return PointMap(tuple(sorted((b, a) for a, b in self.pairs)))

    def restrict(self, address):
        return PointMap(tuple((a, b) for a, b in self.pairs if a.startswith(address)))

    def sort_key(self):
        return self.pairs

    def __str__(self):
        return "map=" + ",".join("{}>{}".format(a, b) for a, b in self.pairs)


def _lca_depth(a, b):
    n = 0
    while n < min(len(a), len(b)) and a[n] == b[n]:
        n += 1
    return n


@dataclass(frozen=True)
class Similarity:
    """
    A similarity dom -> cod. The action is a TailAction in word spaces and a PointMap in finite spaces.
    Distances get multiplied by exp(depth(dom) - depth(cod)).
    """

    dom: Ball
    cod: Ball
    action: object

    def __post_init__(self):
        check_same_space(self.dom, self.cod)
        space = self.dom.space
        if space.kind == SpaceType.WORD:
            if not isinstance(self.action, TailAction) or self.action.d != space.d:
                raise StructureError(
                    "tail action {} does not act on {} letters".format(self.action, space.d)
                )
            return
        if not isinstance(self.action, PointMap):
            raise StructureError("finite space similarities need a point map")
        mapping = self.action.mapping
        if set(mapping) != set(space.leaves_below(self.dom.address)) or set(
            mapping.values()
        ) != set(space.leaves_below(self.cod.address)):
            raise StructureError(
                "point map is not a bijection {} -> {}".format(self.dom, self.cod)
            )
        shift = self.shift
        for a, b in itertools.combinations(mapping, 2):
            if _lca_depth(mapping[a], mapping[b]) != _lca_depth(a, b) + shift:
                raise StructureError(
                    "point map {} -> {} does not scale distances uniformly".format(
                        self.dom, self.cod
                    ),
                    location=a,
                )

    @property
    def space(self):
        return self.dom.space

    @property
    def shift(self):
        """
        Change of LogDistance under this similarity: depth(cod) - depth(dom)
        """
        return self.cod.depth - self.dom.depth

    @property
    def is_identity(self):
        return self.dom == self.cod and self.action.is_identity

    def sort_key(self):
        return (self.dom.address, self.cod.address, self.action.sort_key())

    def __str__(self):
        return "{} -> {} : {}".format(self.dom, self.cod, self.action)


def prefix_rewrite(dom, cod, tail=None):
    """
    The similarity dom -> cod that keeps the address suffix, optionally permuting the tail letters.
    In finite spaces the two subtrees must have the same shape.

    Args:
        dom (Ball): domain

        cod (Ball): codomain

        tail (TailAction or None): tail permutation, identity if None (word spaces only)
    """
    space = dom.space
    if space.kind == SpaceType.WORD:
        return Similarity(dom, cod, tail or TailAction.identity(space.d))
    pairs = []
    for leaf in space.leaves_below(dom.address):
        image = cod.address + leaf[len(dom.address):]
        if not (space.contains_address(image) and space.is_leaf(image)):
            raise StructureError(
                "subtrees at {} and {} differ in shape".format(dom, cod), location=leaf
            )
        pairs.append((leaf, image))
    return Similarity(dom, cod, PointMap(tuple(pairs)))


def identity_on(ball):
    return prefix_rewrite(ball, ball)


def apply(g, b):
    """
    Image of the subball @b of dom(g)

    Returns:
        Ball: g(b)
    """
    if not g.dom.contains(b):
        raise NotASubball("{} is not inside {}".format(b, g.dom), location=b.address)
    space = g.space
    if space.kind == SpaceType.WORD:
        suffix = b.address[len(g.dom.address):]
        return Ball(space, g.cod.address + g.action.apply_word(suffix))
    images = frozenset(g.action(leaf) for leaf in space.leaves_below(b.address))
    return Ball(space, space.node_by_leaves[images])


def restrict(g, b3):
    """
    Restriction of @g to the subball @b3 of its domain
    """
    image = apply(g, b3)
    if g.space.kind == SpaceType.WORD:
        return Similarity(b3, image, g.action)
    return Similarity(b3, image, g.action.restrict(b3.address))


def compose_sim(g2, g1):
    """
    Returns g2 o g1; requires cod(g1) = dom(g2)
    """
    if g1.cod != g2.dom:
        raise DomainMismatch(
            "cannot compose: codomain {} is not domain {}".format(g1.cod, g2.dom)
        )
    return Similarity(g1.dom, g2.cod, g2.action.compose(g1.action))


def chain(*sims):
    """
    Composes right to left: chain(g3, g2, g1) = g3 o g2 o g1
    """
    result = sims[-1]
    for g in reversed(sims[:-1]):
        result = compose_sim(g, result)
    return result


def invert_sim(g):
    return Similarity(g.cod, g.dom, g.action.inverse())


def classify(g):
    """
    Returns:
        SimilarityClass: EQUALIZING if dom = cod, SEPARATING if disjoint, CONTRACTING if strictly nested
    """
    if g.dom == g.cod:
        return SimilarityClass.EQUALIZING
    if g.dom.is_disjoint(g.cod):
        return SimilarityClass.SEPARATING
    return SimilarityClass.CONTRACTING


def evaluate_point(g, x):
    """
    Image of the point @x of dom(g)
    """
    if not x.in_ball(g.dom):
        raise NotASubball("point {} is not in {}".format(x, g.dom))
    if x.tail is None:
        return Point(x.space, g.action(x.prefix))
    n = len(g.dom.address)
    word = x.word(max(n, len(x.prefix)))
    return Point(
        x.space,
        g.cod.address + g.action.apply_word(word[n:]),
        g.action(x.tail),
    )


def merge_siblings(parent, entries):
    """
    Finds the similarity on @parent whose restrictions to the children of @parent are @entries.

    Args:
        parent (Ball): common parent of the entry domains

        entries (list of Similarity): one similarity per child of @parent, in child order

    Returns:
        Similarity or None: the merged similarity, or None if the entries do not come from one map
    """
    space = parent.space
    if space.kind == SpaceType.WORD:
        tail = entries[0].action
        if any(e.action != tail for e in entries) or entries[0].cod.is_root:
            return None
        prefix = entries[0].cod.address[:-1]
        for e in entries:
            if e.cod.address != prefix + tail(e.dom.address[-1]):
                return None
        return Similarity(parent, Ball(space, prefix), tail)

    pairs = tuple(sorted(p for e in entries for p in e.action.pairs))
    node = space.node_by_leaves.get(frozenset(b for _, b in pairs))
    if node is None:
        return None
    try:
        return Similarity(parent, Ball(space, node), PointMap(pairs))
    except StructureError:
        return None
