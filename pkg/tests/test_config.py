import pytest

from localsim.models.structure_registry import GroupType, get_group_path, unpack_group_ids
from localsim.models.structures import (
    FiniteEnumeratedStructure,
    MinusStructure,
    MirrorStructure,
    PermutationalStructure,
)
from localsim.models.ultrametric import FiniteSpace, WordSpace
from localsim.utils.config_utils import (
    GroupDescriptor,
    check_syntax,
    descriptor_of,
    format_descriptor,
    load_group,
    parse_descriptor,
    parse_sim_line,
    parse_space_line,
)
from localsim.utils.errors import DescriptorSyntaxError, ValidationError


@pytest.mark.parametrize("group", unpack_group_ids(GroupType.ALL))
def test_every_named_group_loads(group):
    desc, s = load_group(group)
    assert desc.name == group.name.lower()
    assert s.descriptor() == desc.sim_line
    assert s.space.descriptor() == desc.space_line


def test_group_families():
    assert unpack_group_ids(GroupType.DUALLY_CONTRACTING) == [
        GroupType.VD2,
        GroupType.V3,
        GroupType.VD2_SIGMA2,
        GroupType.V3_CYCLIC,
    ]
    assert len(unpack_group_ids(None)) == 9
    assert get_group_path("vd2") == get_group_path(GroupType.VD2) == get_group_path(0)
    with pytest.raises(ValidationError):
        get_group_path("no_such_group")


def test_loaded_structures():
    _, v3_cyclic = load_group("v3_cyclic")
    assert isinstance(v3_cyclic, PermutationalStructure)
    assert len(v3_cyclic.group) == 3
    assert v3_cyclic.descriptor() == "sim permutational H=120"
    _, sigma = load_group("vd2_sigma2")
    assert sigma.is_full
    _, minus = load_group("vd2_minus")
    assert isinstance(minus, MinusStructure)
    assert isinstance(load_group("mirror")[1], MirrorStructure)
    desc, finite = load_group("finite_s3")
    assert isinstance(finite, FiniteEnumeratedStructure)
    assert finite.space == FiniteSpace("(....)")
    assert finite.descriptor() == "sim finite finite_s3_sims.yaml"


def test_descriptor_text_roundtrip():
    for group in unpack_group_ids(GroupType.ALL):
        desc, _ = load_group(group)
        again = parse_descriptor(format_descriptor(desc), base_dir=desc.base_dir)
        assert again == desc
        assert format_descriptor(again) == format_descriptor(desc)


def test_descriptor_of_rebuilds_structure(vd2, v3, vd2_sigma2, mirror, vd2_minus):
    for s in (vd2, v3, vd2_sigma2, mirror, vd2_minus):
        assert descriptor_of("g", s).build() == s


def test_descriptor_file(tmp_path):
    (tmp_path / "sims.yaml").write_text("similarities:\n  - '\"00\" -> \"01\" : id'\n")
    path = tmp_path / "pair.yaml"
    path.write_text("name: pair\nspace: space finite tree=((..).)\nsim: sim finite sims.yaml\n")
    desc, s = load_group(str(path))
    assert desc == GroupDescriptor("pair", "space finite tree=((..).)", "sim finite sims.yaml")
    assert len([g for g in s.similarities if not g.is_identity]) == 2


@pytest.mark.parametrize(
    "spec",
    [
        ["space word d=2"],
        dict(space="space word d=2"),
        dict(space="space word d=2", sim="sim mirror", color="red"),
        dict(space="word d=2", sim="sim mirror"),
        dict(space="space word d=2", sim="mirror"),
        dict(space="space word d=2", sim="sim hyperbolic"),
        dict(space="space word d=2", sim=["sim", "mirror"]),
    ],
)
def test_check_syntax_rejects(spec):
    with pytest.raises(DescriptorSyntaxError):
        check_syntax(spec)


def test_space_lines():
    assert parse_space_line("space word d=3") == WordSpace(3)
    assert parse_space_line("space finite tree=((..).)") == FiniteSpace("((..).)")
    for line in ("space word d=1", "space word d=11", "space finite tree=(.)", "space torus"):
        with pytest.raises(DescriptorSyntaxError):
            parse_space_line(line)


def test_sim_lines(w2, w3, tmp_path):
    assert parse_sim_line("sim permutational H=trivial", w3) == PermutationalStructure.trivial(w3)
    assert len(parse_sim_line("sim permutational H=10", w2).group) == 2
    assert parse_sim_line("sim minus mirror", w2) == MinusStructure(MirrorStructure(w2))
    for line in (
        "sim permutational",
        "sim permutational H=01x",
        "sim mirror please",
        "sim minus",
        "sim finite missing.yaml",
        "sim",
    ):
        with pytest.raises(DescriptorSyntaxError):
            parse_sim_line(line, w2, base_dir=str(tmp_path))
