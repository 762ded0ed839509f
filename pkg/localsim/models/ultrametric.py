"""
Compact ultrametric spaces with a finitely presented ball hierarchy.

Two families are supported:

    WordSpace(d): infinite words over the alphabet {0, ..., d-1}. The ball "w" is the set of all words
        starting with w, the empty word is the whole space X.

    FiniteSpace(tree): the leaves of a finite rooted tree in which every internal node has at least two
        children. Nodes are addressed by the path of child indices from the root, so "" is X and "01" is
        the second child of the first child of the root.

In both families the depth of a ball is the length of its address and the ball "v" contains the ball "w"
iff v is a prefix of w.
"""
import abc
import functools
import itertools
import os
from dataclasses import dataclass, field
from enum import IntEnum

from localsim.utils.errors import (
    EmptySet,
    InvalidPartition,
    NoSubballs,
    NotASubball,
    SpaceMismatch,
    StructureError,
)

ALPHABET = "0123456789"


class SpaceType(IntEnum):
    """
    Enum for the supported families of compact ultrametric spaces
    """

    WORD = 0
    FINITE = 1


class RelationType(IntEnum):
    """
    Enum for the ball trichotomy
    """

    EQUAL = 0
    NESTED = 1
    DISJOINT = 2


class Space(abc.ABC):
    """
    Base class for compact ultrametric spaces presented through their ball hierarchy.
    """

    kind = None

    @abc.abstractmethod
    def children_addresses(self, address):
        """
        Returns the addresses of the maximal proper subballs of the ball at @address, in canonical order
        """
        raise NotImplementedError

    @abc.abstractmethod
    def contains_address(self, address):
        raise NotImplementedError

    @abc.abstractmethod
    def descriptor(self):
        """
        Returns the descriptor line of this space, e.g. "space word d=2"
        """
        raise NotImplementedError

    @property
    @abc.abstractmethod
    def branching(self):
        """
        Largest number of maximal proper subballs of any ball
        """
        raise NotImplementedError

    @property
    def root(self):
        return Ball(self, "")

    @property
    def whole(self):
        return ClopenSet(self, (self.root,))

    def is_leaf(self, address):
        return len(self.children_addresses(address)) == 0

    def ball(self, address):
        return Ball(self, address)

    def addresses_at_depth(self, depth):
        level = [""]
        for _ in range(depth):
            level = [c for a in level for c in self.children_addresses(a)]
        return level

    def balls_at_depth(self, depth):
        return [Ball(self, a) for a in self.addresses_at_depth(depth)]

    def balls_up_to_depth(self, depth):
        return [b for n in range(depth + 1) for b in self.balls_at_depth(n)]

    def __str__(self):
        return self.descriptor()


@dataclass(frozen=True)
class WordSpace(Space):
    """
    Space of infinite words over a d-letter alphabet with d(x, y) = exp(1 - n), n the first differing position.

    Args:
        d (int): alphabet size, 2 <= d <= 10
    """

    d: int
    kind = SpaceType.WORD

    def __post_init__(self):
        if not isinstance(self.d, int) or not 2 <= self.d <= len(ALPHABET):
            raise StructureError("word space needs 2 <= d <= 10, got {}".format(self.d))

    @property
    def letters(self):
        return ALPHABET[: self.d]

    @property
    def branching(self):
        return self.d

    def children_addresses(self, address):
        return tuple(address + a for a in self.letters)

    def contains_address(self, address):
        return all(a in self.letters for a in address)

    def descriptor(self):
        return "space word d={}".format(self.d)


def parse_tree(tree):
    """
    Parses a nested parenthesis hierarchy such as "((..)(...))" into a dict mapping node addresses
    to the tuple of their children addresses. A "." is a leaf.

    Args:
        tree (str): hierarchy descriptor

    Returns:
        dict: address -> tuple of children addresses
    """
    children = {}

    def parse_node(pos, address):
        if pos >= len(tree):
            raise StructureError("unexpected end of tree descriptor", location=tree)
        if tree[pos] == ".":
            children[address] = ()
            return pos + 1
        if tree[pos] != "(":
            raise StructureError(
                'unexpected character "{}" at position {}'.format(tree[pos], pos),
                location=tree,
            )
        pos += 1
        kids = []
        while pos < len(tree) and tree[pos] != ")":
            child = address + ALPHABET[len(kids)] if len(kids) < len(ALPHABET) else None
            if child is None:
                raise StructureError("a node may have at most 10 children", location=tree)
            pos = parse_node(pos, child)
            kids.append(child)
        if pos >= len(tree):
            raise StructureError("unbalanced parenthesis", location=tree)
        if len(kids) < 2:
            raise StructureError(
                "internal node {} has fewer than 2 children".format(address or "root"),
                location=tree,
            )
        children[address] = tuple(kids)
        return pos + 1

    end = parse_node(0, "")
    if end != len(tree):
        raise StructureError("trailing characters after the root node", location=tree)
    return children


@dataclass(frozen=True)
class FiniteSpace(Space):
    """
    Finite ultrametric space given by its ball hierarchy. Points are leaves and the distance of two
    distinct leaves is exp(-depth) of their lowest common ancestor.

    Args:
        tree (str): nested parenthesis descriptor, e.g. "((..)(...))"
    """

    tree: str
    kind = SpaceType.FINITE
    _children: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_children", parse_tree(self.tree))

    @property
    def branching(self):
        return max(len(kids) for kids in self._children.values())

    @property
    def nodes(self):
        return sorted(self._children)

    @property
    def leaves(self):
        return tuple(a for a in sorted(self._children) if not self._children[a])

    def children_addresses(self, address):
        try:
            return self._children[address]
        except KeyError:
            raise NotASubball("{} is not a node of {}".format(address, self.tree))

    def contains_address(self, address):
        return address in self._children

    def leaves_below(self, address):
        return tuple(a for a in self.leaves if a.startswith(address))

    @functools.cached_property
    def node_by_leaves(self):
        return {frozenset(self.leaves_below(a)): a for a in self._children}

    def descriptor(self):
        return "space finite tree={}".format(self.tree)


@functools.total_ordering
@dataclass(frozen=True)
class Ball:
    """
    A ball of a space, identified by its address in the ball hierarchy.

    Args:
        space (Space): ambient space

        address (str): word over the alphabet (word spaces) or node path (finite spaces)
    """

    space: Space
    address: str

    def __post_init__(self):
        if not self.space.contains_address(self.address):
            raise NotASubball(
                '"{}" is not a ball of {}'.format(self.address, self.space.descriptor()),
                location=self.address,
            )

    def __lt__(self, other):
        return self.address < other.address

    def __str__(self):
        return '"{}"'.format(self.address)

    @property
    def depth(self):
        return len(self.address)

    @property
    def is_root(self):
        return self.address == ""

    @property
    def parent(self):
        if self.is_root:
            return None
        return Ball(self.space, self.address[:-1])

    def contains(self, other):
        """
        True iff @other is a subball of this ball (not necessarily proper)
        """
        return other.address.startswith(self.address)

    def is_disjoint(self, other):
        return not (self.contains(other) or other.contains(self))


@dataclass(frozen=True)
class BallRelation:
    """
    Result of comparing two balls: EQUAL, DISJOINT or NESTED(outer, inner)
    """

    kind: RelationType
    outer: Ball = None
    inner: Ball = None


def check_same_space(*objs):
    spaces = {o.space for o in objs}
    if len(spaces) > 1:
        raise SpaceMismatch(
            "objects live in different spaces: {}".format(
                ", ".join(sorted(s.descriptor() for s in spaces))
            )
        )


def compare(a, b):
    """
    Ball trichotomy: two balls are equal, disjoint or strictly nested

    Args:
        a (Ball): first ball

        b (Ball): second ball

    Returns:
        BallRelation: the relation between @a and @b
    """
    check_same_space(a, b)
    if a.address == b.address:
        return BallRelation(RelationType.EQUAL)
    if b.address.startswith(a.address):
        return BallRelation(RelationType.NESTED, outer=a, inner=b)
    if a.address.startswith(b.address):
        return BallRelation(RelationType.NESTED, outer=b, inner=a)
    return BallRelation(RelationType.DISJOINT)


def depth(b):
    return b.depth


def maximal_proper_subballs(b):
    """
    Returns the children of @b in the ball hierarchy, in canonical letter order
    """
    kids = b.space.children_addresses(b.address)
    if not kids:
        raise NoSubballs("{} is a singleton".format(b), location=b.address)
    return [Ball(b.space, a) for a in kids]


@functools.total_ordering
@dataclass(frozen=True)
class LogDistance:
    """
    Exact distance: n = None encodes distance 0, an integer n >= 1 encodes exp(1 - n).
    Ordering follows the distance, so a larger n is a smaller distance.
    """

    n: int = None

    def _key(self):
        return (0, 0) if self.n is None else (1, -self.n)

    def __lt__(self, other):
        return self._key() < other._key()

    @property
    def is_zero(self):
        return self.n is None

    def shift(self, k):
        if self.n is None:
            return self
        return LogDistance(self.n + k)

    def __str__(self):
        return "0" if self.n is None else "exp({})".format(1 - self.n)


ZERO_DISTANCE = LogDistance()


@dataclass(frozen=True)
class Point:
    """
    A point of a space. In a word space it is the eventually constant word prefix + tail tail tail ...,
    stored in canonical form (the prefix does not end with the tail letter). In a finite space it is a leaf
    and @tail is None.
    """

    space: Space
    prefix: str
    tail: str = None

    def __post_init__(self):
        if self.space.kind == SpaceType.WORD:
            if self.tail is None or len(self.tail) != 1:
                raise StructureError("word space points need a single tail letter")
            if not self.space.contains_address(self.prefix + self.tail):
                raise StructureError(
                    "point {} uses letters outside the alphabet".format(self.prefix)
                )
            object.__setattr__(self, "prefix", self.prefix.rstrip(self.tail))
        else:
            if self.tail is not None:
                raise StructureError("finite space points have no tail")
            if not (
                self.space.contains_address(self.prefix)
                and self.space.is_leaf(self.prefix)
            ):
                raise StructureError("{} is not a leaf".format(self.prefix))

    def letter(self, k):
        """
        Returns the k-th letter (1-based) of a word space point
        """
        if k <= len(self.prefix):
            return self.prefix[k - 1]
        return self.tail

    def word(self, n):
        """
        Returns the first @n letters (word spaces) or the leaf address (finite spaces)
        """
        if self.tail is None:
            return self.prefix
        return self.prefix[:n] + self.tail * max(0, n - len(self.prefix))

    def in_ball(self, ball):
        if self.tail is None:
            return self.prefix.startswith(ball.address)
        return self.word(len(ball.address)) == ball.address

    def __str__(self):
        if self.tail is None:
            return self.prefix
        return "{}({})".format(self.prefix, self.tail)


def distance(x, y):
    """
    Ultrametric distance of two points

    Returns:
        LogDistance: zero iff x = y, otherwise n = first differing position (1-based)
    """
    check_same_space(x, y)
    if x == y:
        return ZERO_DISTANCE
    if x.tail is None:
        common = os.path.commonprefix([x.prefix, y.prefix])
        return LogDistance(len(common) + 1)
    for k in range(1, max(len(x.prefix), len(y.prefix)) + 2):
        if x.letter(k) != y.letter(k):
            return LogDistance(k)
    raise AssertionError("distinct canonical points must differ")


@dataclass(frozen=True)
class ClopenSet:
    """
    Non-empty closed open subset stored as its canonical ball decomposition: pairwise disjoint balls,
    no full family of siblings, sorted by address. Build instances with canonicalize().
    """

    space: Space
    balls: tuple

    def __str__(self):
        return ",".join(str(b) for b in self.balls)

    @property
    def addresses(self):
        return tuple(b.address for b in self.balls)

    @property
    def max_depth(self):
        return max(b.depth for b in self.balls)

    @property
    def is_ball(self):
        return len(self.balls) == 1

    def contains_ball(self, ball):
        return any(b.contains(ball) for b in self.balls)

    def contains_point(self, x):
        return any(x.in_ball(b) for b in self.balls)

    def is_subset(self, other):
        return all(other.contains_ball(b) for b in self.balls)

    def is_disjoint(self, other):
        return all(a.is_disjoint(b) for a in self.balls for b in other.balls)

    def intersection(self, other):
        """
        Returns the intersection as a ClopenSet, or None when it is empty
        """
        check_same_space(self, other)
        pieces = []
        for a in self.balls:
            for b in other.balls:
                if a.contains(b):
                    pieces.append(b)
                elif b.contains(a):
                    pieces.append(a)
        return canonicalize(pieces) if pieces else None

    def difference(self, other):
        """
        Returns self minus @other as a ClopenSet, or None when it is empty
        """
        check_same_space(self, other)
        pieces = []
        for a in self.balls:
            pieces.extend(_subtract(self.space, a.address, other.addresses))
        if not pieces:
            return None
        return canonicalize([Ball(self.space, p) for p in pieces])

    def union(self, other):
        check_same_space(self, other)
        return canonicalize(self.balls + other.balls)

    def expand_to_depth(self, n):
        """
        Returns the balls of depth exactly @n covering this set; singletons shallower than @n are kept
        """
        out = []
        for b in self.balls:
            level = [b.address]
            for _ in range(b.depth, n):
                level = [
                    c
                    for a in level
                    for c in (self.space.children_addresses(a) or (a,))
                ]
            out.extend(level)
        return tuple(Ball(self.space, a) for a in sorted(set(out)))

    def leaves(self):
        """
        Points of a finite space lying in this set
        """
        return tuple(
            leaf
            for leaf in self.space.leaves
            if any(leaf.startswith(a) for a in self.addresses)
        )


def _subtract(space, address, removed):
    if any(address.startswith(r) for r in removed):
        return []
    inner = [r for r in removed if r.startswith(address)]
    if not inner:
        return [address]
    out = []
    for child in space.children_addresses(address):
        out.extend(_subtract(space, child, inner))
    return out


def canonicalize(balls):
    """
    Canonical maximal-ball form of a finite set of pairwise disjoint or nested balls

    Args:
        balls (iterable of Ball): balls to merge

    Returns:
        ClopenSet: the unique decomposition with no full sibling family, sorted by address
    """
    balls = list(balls)
    if not balls:
        raise EmptySet("a clopen set needs at least one ball")
    check_same_space(*balls)
    space = balls[0].space

    addresses = {b.address for b in balls}
    current = {
        a for a in addresses if not any(a[:k] in addresses for k in range(len(a)))
    }
    changed = True
    while changed:
        changed = False
        for a in sorted(current, key=len, reverse=True):
            if a == "" or a not in current:
                continue
            siblings = space.children_addresses(a[:-1])
            if all(s in current for s in siblings):
                current.difference_update(siblings)
                current.add(a[:-1])
                changed = True
    return ClopenSet(space, tuple(Ball(space, a) for a in sorted(current)))


def clopen(space, addresses):
    """
    Shorthand: canonical clopen set from a list of addresses
    """
    return canonicalize([Ball(space, a) for a in addresses])


@dataclass(frozen=True)
class Partition:
    """
    Finite partition of X into clopen blocks, blocks sorted by their ball addresses.
    Build instances with Partition.from_blocks().
    """

    space: Space
    blocks: tuple

    @classmethod
    def from_blocks(cls, blocks):
        blocks = list(blocks)
        if not blocks:
            raise InvalidPartition("a partition needs at least one block")
        check_same_space(*blocks)
        space = blocks[0].space
        all_balls = [b for block in blocks for b in block.balls]
        for a, b in itertools.combinations(all_balls, 2):
            if not a.is_disjoint(b):
                raise InvalidPartition(
                    "blocks overlap at {} and {}".format(a, b), location=a.address
                )
        if canonicalize(all_balls).addresses != ("",):
            raise InvalidPartition("blocks do not cover X")
        return cls(space, tuple(sorted(blocks, key=lambda blk: blk.addresses)))

    @classmethod
    def from_balls(cls, balls):
        """
        Partition whose blocks are single balls
        """
        return cls.from_blocks([ClopenSet(b.space, (b,)) for b in balls])

    def __len__(self):
        return len(self.blocks)

    def __str__(self):
        return "|".join(str(block) for block in self.blocks)

    def block_containing(self, ball):
        for block in self.blocks:
            if block.contains_ball(ball):
                return block
        return None

    def index(self, block):
        return self.blocks.index(block)


def partition_depth_bound(p):
    """
    Depth N such that every ball of depth >= N lies inside exactly one block of @p

    Args:
        p (Partition): partition of X

    Returns:
        int: maximal depth of the canonical balls of all blocks
    """
    return max(block.max_depth for block in p.blocks)


@functools.lru_cache(maxsize=None)
def ball_decompositions(space, address, max_depth):
    """
    All decompositions of the ball at @address into balls of depth <= @max_depth

    Returns:
        tuple of tuple of str: every decomposition as a sorted tuple of addresses
    """
    out = [(address,)]
    kids = space.children_addresses(address)
    if kids and len(address) < max_depth:
        options = [ball_decompositions(space, c, max_depth) for c in kids]
        for combo in itertools.product(*options):
            out.append(tuple(sorted(a for part in combo for a in part)))
    return tuple(out)

