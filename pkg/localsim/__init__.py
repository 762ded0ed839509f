# Spaces and structures
from localsim.models.ultrametric import (
    Ball,
    ClopenSet,
    FiniteSpace,
    Partition,
    Point,
    WordSpace,
)
from localsim.models.similarity import Similarity, TailAction, PointMap
from localsim.models.structures import (
    FiniteEnumeratedStructure,
    MinusStructure,
    MirrorStructure,
    PermutationalStructure,
    RestrictedStructure,
)

# Groups
from localsim.groups.element import GroupElement, compose, from_table, identity, inverse, order
from localsim.groups.freeness import pingpong_witness, verify_pingpong
from localsim.groups.finite import finite_analyze

from localsim.models.structure_registry import GroupType
from localsim.utils.config_utils import load_group

import networkx

assert int(networkx.__version__.split(".")[0]) >= 2, "networkx 2.x or later is required"

__version__ = "0.1.0"
