"""
Group descriptors: yaml files with a name, a space line and a sim line, e.g.

    name: vd2
    space: space word d=2
    sim: sim permutational H=trivial

Space lines are "space word d=<d>" or "space finite tree=<nested parentheses>". Sim lines are
"sim permutational H=<trivial|full|perm,perm,...>", "sim mirror", "sim minus <sim line without sim>" and
"sim finite <file>", the file being a yaml list of similarity entry lines resolved next to the descriptor.
"""
import os
import re
from dataclasses import dataclass, field

import yaml

from localsim.models.similarity import TailAction
from localsim.models.structure_registry import get_group_path, resolve_group
from localsim.models.structures import (
    REGISTERED_STRUCTURES,
    FiniteEnumeratedStructure,
    MinusStructure,
    MirrorStructure,
    PermutationalStructure,
)
from localsim.models.ultrametric import FiniteSpace, WordSpace
from localsim.utils.errors import DescriptorSyntaxError, LocalSimError
from localsim.utils.serialization import parse_similarity

GROUP_KEYS = ("name", "space", "sim")
WORD_SPACE_RE = re.compile(r"^space word d=(\d+)$")
FINITE_SPACE_RE = re.compile(r"^space finite tree=(\S+)$")


def check_syntax(spec, location=None):
    """
    Checks that a group descriptor dictionary follows syntax rules
    """
    if not isinstance(spec, dict):
        raise DescriptorSyntaxError("a group descriptor is a mapping", location=location)
    for key in spec:
        if key not in GROUP_KEYS:
            raise DescriptorSyntaxError('Invalid key in group descriptor: "{}".'.format(key), location=location)
    for key in ("space", "sim"):
        if key not in spec:
            raise DescriptorSyntaxError('Missing key "{}".'.format(key), location=location)
        if not isinstance(spec[key], str):
            raise DescriptorSyntaxError('"{}" must be a single line'.format(key), location=location)
    if not spec["space"].startswith("space "):
        raise DescriptorSyntaxError('space line must start with "space"', location=location)
    if not spec["sim"].startswith("sim "):
        raise DescriptorSyntaxError('sim line must start with "sim"', location=location)
    kind = spec["sim"].split()[1] if len(spec["sim"].split()) > 1 else None
    if kind not in REGISTERED_STRUCTURES:
        raise DescriptorSyntaxError('Invalid value for sim kind: "{}".'.format(kind), location=location)


def parse_space_line(line, location=None):
    line = line.strip()
    m = WORD_SPACE_RE.match(line)
    if m is not None:
        d = int(m.group(1))
        if not 2 <= d <= 10:
            raise DescriptorSyntaxError("word space needs 2 <= d <= 10", location=location)
        return WordSpace(d)
    m = FINITE_SPACE_RE.match(line)
    if m is not None:
        try:
            return FiniteSpace(m.group(1))
        except LocalSimError as e:
            raise DescriptorSyntaxError(e.message, location=location)
    raise DescriptorSyntaxError('malformed space line "{}"'.format(line), location=location)


def _parse_permutational(space, args, base_dir, location):
    if len(args) != 1 or not args[0].startswith("H="):
        raise DescriptorSyntaxError('expected "H=<trivial|full|perm,...>"', location=location)
    value = args[0][len("H="):]
    if value == "trivial":
        return PermutationalStructure.trivial(space)
    if value == "full":
        return PermutationalStructure.full(space)
    gens = []
    for text in value.split(","):
        if not text.isdigit() or sorted(text) != list(space.letters):
            raise DescriptorSyntaxError(
                '"{}" is not a permutation of {} letters'.format(text, space.d), location=location
            )
        gens.append(TailAction.from_string(text))
    return PermutationalStructure.from_generators(space, gens)


def _parse_mirror(space, args, base_dir, location):
    if args:
        raise DescriptorSyntaxError("sim mirror takes no arguments", location=location)
    return MirrorStructure(space)


def _parse_minus(space, args, base_dir, location):
    if not args:
        raise DescriptorSyntaxError("sim minus needs a base structure", location=location)
    base = parse_sim_line("sim " + " ".join(args), space, base_dir, location)
    return MinusStructure(base)


def _parse_finite(space, args, base_dir, location):
    if len(args) != 1:
        raise DescriptorSyntaxError("sim finite takes one file name", location=location)
    path = args[0]
    full = path if os.path.isabs(path) else os.path.join(base_dir or os.getcwd(), path)
    if not os.path.exists(full):
        raise DescriptorSyntaxError('similarity file "{}" not found'.format(path), location=location)
    with open(full, "r") as f:
        content = yaml.safe_load(f)
    if not isinstance(content, dict) or set(content) != {"similarities"}:
        raise DescriptorSyntaxError('expected a "similarities" list', location=path)
    gens = [
        parse_similarity(space, line, "{}:{}".format(path, i + 1))
        for i, line in enumerate(content["similarities"] or [])
    ]
    return FiniteEnumeratedStructure.from_generators(space, gens, source=path)


SIM_PARSERS = dict(
    permutational=_parse_permutational,
    mirror=_parse_mirror,
    minus=_parse_minus,
    finite=_parse_finite,
)


def parse_sim_line(line, space, base_dir=None, location=None):
    """
    Builds the similarity structure described by a sim line

    Args:
        line (str): sim line

        space (Space): space parsed from the matching space line

        base_dir (str or None): directory "sim finite" files are resolved in

    Returns:
        SimStructure
    """
    tokens = line.split()
    if len(tokens) < 2 or tokens[0] != "sim" or tokens[1] not in SIM_PARSERS:
        raise DescriptorSyntaxError('malformed sim line "{}"'.format(line.strip()), location=location)
    return SIM_PARSERS[tokens[1]](space, tokens[2:], base_dir, location)


@dataclass(frozen=True)
class GroupDescriptor:
    """
    Space line and sim line of a group, plus its name
    """

    name: str
    space_line: str
    sim_line: str
    base_dir: str = field(default=None, compare=False)

    @classmethod
    def from_dict(cls, spec, base_dir=None, location=None):
        check_syntax(spec, location)
        return cls(spec.get("name", "anonymous"), spec["space"].strip(), spec["sim"].strip(), base_dir)

    def to_dict(self):
        return dict(name=self.name, space=self.space_line, sim=self.sim_line)

    def build(self):
        """
        Returns:
            SimStructure: the structure, with its space
        """
        space = parse_space_line(self.space_line, location=self.name)
        return parse_sim_line(self.sim_line, space, self.base_dir, location=self.name)


def parse_descriptor(text, base_dir=None, location=None):
    return GroupDescriptor.from_dict(yaml.safe_load(text), base_dir, location)


def format_descriptor(desc):
    return yaml.safe_dump(desc.to_dict(), sort_keys=False)


def descriptor_of(name, structure):
    """
    Descriptor whose lines rebuild @structure
    """
    return GroupDescriptor(name, structure.space.descriptor(), structure.descriptor())


def load_group(group):
    """
    Loads a named group or a descriptor file

    Args:
        group (str or GroupType): registry name / id or yaml path

    Returns:
        2-tuple:
            - (GroupDescriptor) descriptor
            - (SimStructure) structure
    """
    path = resolve_group(group) if isinstance(group, str) else get_group_path(group)
    with open(path, "r") as f:
        spec = yaml.safe_load(f)
    desc = GroupDescriptor.from_dict(spec, base_dir=os.path.dirname(path), location=path)
    return desc, desc.build()
