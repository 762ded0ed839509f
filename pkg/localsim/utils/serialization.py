"""
Canonical text formats.

    element:    elem <structure-id>
                "<dom>" -> "<cod>" : <tail>        (one line per maximum region, sorted by domain)

    tail:       id | digit image string such as 10 (word spaces) | map=<leaf>><leaf>,... (finite spaces)
    point:      prefix(tail) such as 001(1) (word spaces) or a leaf address (finite spaces)
    partition:  "00","1"|"01"  (blocks separated by |, balls of a block by commas)
"""
import re

from localsim.groups.element import from_table
from localsim.models.similarity import PointMap, Similarity, TailAction, prefix_rewrite
from localsim.models.ultrametric import (
    Ball,
    Partition,
    Point,
    SpaceType,
    canonicalize,
)
from localsim.utils.errors import DescriptorSyntaxError, LocalSimError, ValidationError

ENTRY_RE = re.compile(r'^"([0-9]*)"\s*->\s*"([0-9]*)"\s*:\s*(\S+)$')
BALL_RE = re.compile(r'^"([0-9]*)"$')
POINT_RE = re.compile(r"^([0-9]*)\(([0-9])\)$")
MAP_PAIR_RE = re.compile(r"^([0-9]+)>([0-9]+)$")


def _ball(space, address, location):
    try:
        return Ball(space, address)
    except LocalSimError as e:
        raise DescriptorSyntaxError(e.message, location=location)


def parse_ball(space, text, location=None):
    m = BALL_RE.match(text.strip())
    if m is None:
        raise DescriptorSyntaxError("malformed ball literal {}".format(text), location=location)
    return _ball(space, m.group(1), location)


def parse_tail(space, dom, cod, text, location=None):
    """
    Parses the tail field of an entry line into a Similarity dom -> cod
    """
    if text == "id":
        try:
            return prefix_rewrite(dom, cod)
        except LocalSimError as e:
            raise DescriptorSyntaxError(e.message, location=location)
    if space.kind == SpaceType.WORD:
        if not text.isdigit() or len(text) != space.d or sorted(text) != list(space.letters):
            raise DescriptorSyntaxError(
                'tail "{}" is not a permutation of {} letters'.format(text, space.d),
                location=location,
            )
        return Similarity(dom, cod, TailAction.from_string(text))
    if not text.startswith("map="):
        raise DescriptorSyntaxError('tail "{}" is not "id" or "map=..."'.format(text), location=location)
    pairs = []
    for item in text[len("map="):].split(","):
        m = MAP_PAIR_RE.match(item)
        if m is None:
            raise DescriptorSyntaxError('malformed map pair "{}"'.format(item), location=location)
        pairs.append((m.group(1), m.group(2)))
    try:
        return Similarity(dom, cod, PointMap(tuple(sorted(pairs))))
    except LocalSimError as e:
        raise DescriptorSyntaxError(e.message, location=location)


def parse_similarity(space, line, location=None):
    """
    Parses an entry line such as "00" -> "0" : id
    """
    m = ENTRY_RE.match(line.strip())
    if m is None:
        raise DescriptorSyntaxError("malformed entry: {}".format(line.strip()), location=location)
    dom = _ball(space, m.group(1), location)
    cod = _ball(space, m.group(2), location)
    return parse_tail(space, dom, cod, m.group(3), location)


def format_tail(g):
    if g.space.kind == SpaceType.WORD:
        return str(g.action)
    try:
        if prefix_rewrite(g.dom, g.cod) == g:
            return "id"
    except LocalSimError:
        pass
    return str(g.action)


def format_similarity(g):
    return "{} -> {} : {}".format(g.dom, g.cod, format_tail(g))


def parse_element(s, text, structure_id=None, source="<text>"):
    """
    Parses an element in the canonical text format

    Args:
        s (SimStructure): structure the element lives over

        text (str): element text

        structure_id (str or None): expected id in the header, not checked if None

        source (str): file name used in diagnostics

    Returns:
        GroupElement: validated, normalized element
    """
    header = None
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        location = "{}:{}".format(source, lineno)
        if header is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "elem":
                raise DescriptorSyntaxError('expected "elem <structure-id>"', location=location)
            header = parts[1]
            if structure_id is not None and header != structure_id:
                raise ValidationError(
                    'element is over "{}", not "{}"'.format(header, structure_id), location=location
                )
            continue
        entries.append(parse_similarity(s.space, line, location))
    if header is None:
        raise DescriptorSyntaxError("missing element header", location=source)
    try:
        return from_table(s, entries)
    except LocalSimError as e:
        raise ValidationError("{}: {}".format(e.code, e.message), location=e.location or source)


def format_element(a, structure_id):
    lines = ["elem {}".format(structure_id)]
    lines.extend(format_similarity(e) for e in a.table)
    return "\n".join(lines) + "\n"


def parse_point(space, text):
    text = text.strip()
    if space.kind == SpaceType.WORD:
        m = POINT_RE.match(text)
        if m is None:
            raise DescriptorSyntaxError('malformed point "{}", expected prefix(tail)'.format(text))
        prefix, tail = m.group(1), m.group(2)
    else:
        prefix, tail = text, None
    try:
        return Point(space, prefix, tail)
    except LocalSimError as e:
        raise DescriptorSyntaxError(e.message, location=text)


def format_point(x):
    return str(x)


def parse_clopen(space, text):
    balls = [parse_ball(space, item) for item in text.split(",") if item.strip()]
    try:
        return canonicalize(balls)
    except LocalSimError as e:
        raise DescriptorSyntaxError(e.message, location=text)


def parse_partition(space, text):
    """
    Parses "00","1"|"01" into a Partition
    """
    blocks = [parse_clopen(space, chunk) for chunk in text.split("|")]
    try:
        return Partition.from_blocks(blocks)
    except LocalSimError as e:
        raise ValidationError(e.message, location=text)


def format_partition(p):
    return str(p)

