import pytest

from localsim.scripts.run import run

QUARTERS = '"00"|"01"|"10"|"11"'


def test_order():
    result = run(["order", "--group", "vd2", "--elem", "a1.txt"])
    assert (result.exit_code, result.stdout) == (0, "3\n")
    assert run(["order", "--group", "vd2", "--elem", "a2.txt"]).stdout == "2\n"
    result = run(["order", "--group", "vd2", "--elem", "thompson_x.txt", "--bound", "50"])
    assert (result.exit_code, result.stdout) == (1, "exceeds 50\n")


def test_mul_and_inv():
    result = run(["mul", "--group", "vd2", "--elem", "a2.txt", "--elem", "a2.txt"])
    assert result.stdout == 'elem vd2\n"" -> "" : id\n'
    result = run(["mul", "--group", "vd2", "--elem", "a1.txt", "--elem", "a1.txt", "--elem", "a1.txt"])
    assert result.stdout == 'elem vd2\n"" -> "" : id\n'
    result = run(["inv", "--group", "vd2", "--elem", "thompson_x.txt"])
    assert result.stdout == 'elem vd2\n"0" -> "00" : id\n"10" -> "01" : id\n"11" -> "1" : id\n'
    assert run(["mul", "--group", "vd2", "--elem", "a1.txt"]).exit_code == 2


def test_eval():
    result = run(["eval", "--group", "vd2", "--elem", "a2.txt", "--point", "01(0)"])
    assert result.stdout == "1(0)\n"
    result = run(["eval", "--group", "vd2_sigma2", "--elem", "global_flip.txt", "--point", "001(1)"])
    assert result.stdout == "11(0)\n"


def test_classify():
    result = run(["classify", "--group", "vd2", "--sim", '"0" -> "1" : id'])
    assert result.stdout == "separating\nin-sim yes\n"
    result = run(["classify", "--group", "mirror", "--sim", '"00" -> "01" : id'])
    assert result.stdout == "separating\nin-sim no\n"
    assert run(["classify", "--group", "vd2", "--sim", '"" -> "0" : id']).stdout.startswith("contracting")


def test_dual_contraction():
    result = run(["dual-contraction", "--group", "vd2"])
    assert (result.exit_code, result.stdout) == (0, '"" -> "0" : id\n"" -> "1" : id\n')
    result = run(["dual-contraction", "--group", "mirror"])
    assert (result.exit_code, result.stdout) == (1, "none\n")


@pytest.mark.parametrize("group", ["vd2", "v3", "vd2_sigma2", "v3_cyclic"])
def test_pingpong(group):
    result = run(["pingpong", "--group", group])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert len(lines) == 10
    assert all(line.startswith("CHECK") and line.endswith("PASS") for line in lines[:-1])
    assert lines[-1] == "CONCLUSION <a1,a2> = Z3 * Z2: PASS"


def test_pingpong_words_and_dot():
    result = run(["pingpong", "--group", "vd2", "--words", "2"])
    assert result.stdout.splitlines()[-1] == "WORDS 7 reduced words up to 2 syllables: PASS"
    result = run(["pingpong", "--group", "vd2", "--dot"])
    assert result.stdout.startswith("digraph pingpong {")


def test_pingpong_needs_dual_contraction():
    result = run(["pingpong", "--group", "mirror"])
    assert result.exit_code == 1 and result.stdout == ""
    assert result.diagnostics[0].code == "NotDuallyContracting"


def test_ball_seq():
    result = run(["ball-seq", "--group", "vd2", "--levels", "2"])
    assert result.stdout == 'S1 "0" "1"\nS2 "00" "01" "10" "11"\n'


def test_census():
    assert run(["census", "--group", "finite_s3"]).stdout == "finite 6\n"
    lines = run(["census", "--group", "vd2"]).stdout.splitlines()
    assert lines[0] == "infinite" and len(lines) > 1


def test_closure():
    result = run(["closure", "--group", "mirror", "--elem", "mirror_swap.txt"])
    assert (result.exit_code, result.stdout) == (0, "finite 2\n")
    result = run(["closure", "--group", "vd2", "--elem", "a1.txt", "--elem", "a2.txt", "--budget", "200"])
    assert (result.exit_code, result.stdout) == (1, "budget-exceeded 200\n")
    seeded = ["closure", "--group", "mirror", "--random", "3", "--depth", "3", "--seed", "7"]
    assert run(seeded).stdout == run(seeded).stdout


def test_finite_analyze():
    result = run(["finite-analyze", "--group", "finite_s3"])
    assert result.exit_code == 0
    assert result.stdout.splitlines()[:3] == ["order 6", "classes 3 1", "product 6 PASS"]
    result = run(["finite-analyze", "--group", "vd2"])
    assert result.exit_code == 1
    assert result.diagnostics[0].code == "NotFiniteSpace"


def test_export_dot():
    result = run(["export-dot", "--group", "vd2", "--depth", "1", "--format", "text"])
    assert result.stdout == '"" depth 0\n  "0" depth 1\n  "1" depth 1\n'
    dot = run(["export-dot", "--group", "v3", "--depth", "1"]).stdout
    assert dot.startswith("digraph hierarchy {")
    assert dot.count(" -> ") == 3


def test_poset_member_and_refines():
    result = run(["poset", "member", "--group", "vd2", "--partition", '"0"|"1"', "--n", "2"])
    assert result.stdout == 'member marked 2\nmarked "0"\nmarked "1"\n'
    result = run(["poset", "member", "--group", "v3", "--partition", '"0","1"|"2"', "--n", "2"])
    assert (result.exit_code, result.stdout) == (1, "not-member marked 1\n")
    assert run(["poset", "refines", "--group", "vd2", "--p", '"0"|"1"', "--q", QUARTERS]).stdout == "yes\n"
    result = run(["poset", "refines", "--group", "vd2", "--p", QUARTERS, "--q", '"0"|"1"'])
    assert (result.exit_code, result.stdout) == (1, "no\n")


def test_poset_meet_and_act():
    result = run(["poset", "meet", "--group", "vd2", "--p", '"00","1"|"01"', "--q", '"00","10"|"01","11"', "--n", "4"])
    assert result.stdout == QUARTERS + "\n"
    result = run(["poset", "act", "--group", "vd2", "--elem", "a2.txt", "--partition", '"0"|"1"'])
    assert result.stdout == '"00","1"|"01"\n'


def test_poset_isotropy_and_admissible():
    result = run(["poset", "isotropy", "--group", "vd2", "--elem", "a1.txt", "--vertex", QUARTERS])
    assert result.stdout == "in-isotropy 0 2 3 1\n"
    result = run(["poset", "isotropy", "--group", "vd2", "--elem", "a2.txt", "--vertex", QUARTERS])
    assert result.exit_code == 1 and result.stdout.startswith("not-in")
    result = run(["poset", "admissible", "--group", "vd2", "--vertex", '"0"|"1"', "--vertex", QUARTERS])
    lines = result.stdout.splitlines()
    assert lines[0] == "order 8" and len(lines) == 9
    assert lines[1] == "0 1 2 3"
    result = run(["poset", "admissible", "--group", "vd2", "--vertex", QUARTERS, "--vertex", '"0"|"1"'])
    assert result.exit_code == 1 and result.diagnostics[0].code == "InvalidChain"


def test_poset_enumerate():
    result = run(["poset", "enumerate", "--group", "vd2", "--depth", "2"])
    assert result.stdout.splitlines() == ['""', '"0"|"1"', '"0"|"10"|"11"', '"00"|"01"|"1"', QUARTERS]
    assert len(run(["poset", "enumerate", "--group", "vd2", "--depth", "2", "--n", "3"]).stdout.splitlines()) == 3
    assert run(["poset", "enumerate", "--group", "vd2", "--dot"]).stdout.startswith("digraph hasse {")


def test_usage_errors():
    assert run(["frobnicate"]).exit_code == 2
    assert run([]).exit_code == 2
    result = run(["order", "--elem", "a1.txt"])
    assert result.exit_code == 2 and result.diagnostics[0].code == "UsageError"
    assert run(["export-dot", "--group", "vd2", "--format", "svg"]).exit_code == 2
    assert run(["--help"]).exit_code == 0


def test_domain_errors():
    result = run(["order", "--group", "mirror", "--elem", "a1.txt"])
    assert result.exit_code == 1
    assert result.diagnostics[0].code == "ValidationError"
    assert result.diagnostics[0].location.endswith("a1.txt:1")
    result = run(["order", "--group", "vd2", "--elem", "no_such_element.txt"])
    assert result.exit_code == 1 and "cannot read" in result.diagnostics[0].message
    result = run(["order", "--group", "no_such_group", "--elem", "a1.txt"])
    assert result.diagnostics[0].code == "ValidationError"
    result = run(["eval", "--group", "vd2", "--elem", "a1.txt", "--point", "01"])
    assert result.diagnostics[0].code == "SyntaxError"
    assert str(result.diagnostics[0]).startswith("error[SyntaxError]")


def test_output_is_deterministic():
    argv = ["pingpong", "--group", "v3", "--words", "3"]
    assert len({run(argv).stdout for _ in range(3)}) == 1
