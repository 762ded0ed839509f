"""
Command line driver.

    localsim order --group vd2 --elem a1.txt
    localsim pingpong --group v3 --dot
    localsim poset admissible --group vd2 --vertex '"0"|"1"' --vertex '"00"|"01"|"10"|"11"'

Exit codes: 0 success, 1 negative result or domain error, 2 usage error.
"""
import argparse
import contextlib
import io
import sys
from dataclasses import dataclass

import numpy as np
from termcolor import colored

import localsim.macros as macros
from localsim.groups.element import (
    closure,
    compose,
    evaluate,
    inverse,
    order,
    random_element,
)
from localsim.groups.finite import finite_analyze
from localsim.groups.freeness import (
    ball_sequence,
    pingpong_witness,
    reduced_word_check,
    verify_pingpong,
)
from localsim.groups.poset import (
    NotMember,
    PartitionChain,
    act,
    admissible_group,
    common_refinement,
    enumerate_partitions,
    is_member,
    isotropy_membership,
    refines,
)
from localsim.models.similarity import classify
from localsim.models.structure_registry import get_element_path
from localsim.models.structures import CensusKind, dual_contraction, separating_census
from localsim.utils.config_utils import load_group
from localsim.utils.dot_utils import hasse_to_dot, hierarchy_to_dot, hierarchy_to_text, pingpong_to_dot
from localsim.utils.errors import LocalSimError
from localsim.utils.serialization import (
    format_element,
    format_partition,
    format_point,
    format_similarity,
    parse_element,
    parse_partition,
    parse_point,
    parse_similarity,
)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    location: str
    message: str

    def __str__(self):
        return "error[{}] {}: {}".format(self.code, self.location or "-", self.message)


@dataclass(frozen=True)
class CommandResult:
    """
    Outcome of run(): exit code, canonical stdout text and structured diagnostics
    """

    exit_code: int
    stdout: str
    diagnostics: tuple = ()


class UsageError(Exception):
    pass


class ParserExit(Exception):
    def __init__(self, status, message):
        super().__init__(message)
        self.status = status
        self.message = message


class LocalSimArgumentParser(argparse.ArgumentParser):
    """
    argparse parser that raises instead of terminating the process
    """

    def error(self, message):
        raise UsageError("{}{}: error: {}\n".format(self.format_usage(), self.prog, message))

    def exit(self, status=0, message=None):
        raise ParserExit(status, message)


def _load_element(s, desc, name):
    path = get_element_path(name)
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as e:
        raise LocalSimError("cannot read element file: {}".format(e.strerror), location=path)
    return parse_element(s, text, structure_id=desc.name, source=path)


def cmd_mul(args, desc, s):
    if len(args.elem) < 2:
        raise UsageError("mul needs at least two --elem arguments\n")
    elems = [_load_element(s, desc, e) for e in args.elem]
    result = elems[-1]
    for a in reversed(elems[:-1]):
        result = compose(a, result)
    return 0, format_element(result, desc.name)


def cmd_inv(args, desc, s):
    return 0, format_element(inverse(_load_element(s, desc, args.elem)), desc.name)


def cmd_order(args, desc, s):
    result = order(_load_element(s, desc, args.elem), args.bound)
    return (0 if result.is_finite else 1), "{}\n".format(result)


def cmd_eval(args, desc, s):
    a = _load_element(s, desc, args.elem)
    return 0, format_point(evaluate(a, parse_point(s.space, args.point))) + "\n"


def cmd_classify(args, desc, s):
    g = parse_similarity(s.space, args.sim, location="--sim")
    lines = [classify(g).name.lower()]
    lines.append("in-sim {}".format("yes" if s.contains(g) else "no"))
    return 0, "\n".join(lines) + "\n"


def cmd_dual_contraction(args, desc, s):
    w = dual_contraction(s, args.depth)
    if w is None:
        return 1, "none\n"
    return 0, "{}\n{}\n".format(format_similarity(w.g1), format_similarity(w.g2))


def cmd_pingpong(args, desc, s):
    w = pingpong_witness(s)
    if args.dot:
        return 0, pingpong_to_dot(w)
    transcript = verify_pingpong(w, args.bound)
    lines = transcript.lines()
    ok = transcript.conclusion
    if args.words:
        words = reduced_word_check(w, args.words)
        lines.append(
            "WORDS {} reduced words up to {} syllables: {}".format(
                words.checked, args.words, "PASS" if words.passed else "FAIL"
            )
        )
        ok = ok and words.passed
    return (0 if ok else 1), "\n".join(lines) + "\n"


def cmd_ball_seq(args, desc, s):
    seq = ball_sequence(s, args.levels)
    lines = []
    for i in range(1, args.levels + 1):
        lines.append("S{} {}".format(i, " ".join(str(b) for b in seq.level(i))))
    return 0, "\n".join(lines) + "\n"


def cmd_census(args, desc, s):
    result = separating_census(s, args.depth)
    if result.kind == CensusKind.FINITE:
        return 0, "finite {}\n".format(result.count)
    lines = ["infinite"] + [format_similarity(g) for g in result.witness]
    return 0, "\n".join(lines) + "\n"


def cmd_closure(args, desc, s):
    gens = [_load_element(s, desc, e) for e in args.elem or []]
    if args.random:
        rng = np.random.default_rng(args.seed)
        gens += [random_element(s, args.depth, rng) for _ in range(args.random)]
    result = closure(s, gens, args.budget)
    if not result.is_finite:
        return 1, "budget-exceeded {}\n".format(result.budget)
    return 0, "finite {}\n".format(len(result))


def cmd_finite_analyze(args, desc, s):
    report = finite_analyze(s)
    ok = report.product_matches and report.conditions_agree
    return (0 if ok else 1), "\n".join(report.lines()) + "\n"


def cmd_poset_member(args, desc, s):
    v = is_member(s, parse_partition(s.space, args.partition), args.n, args.depth)
    if isinstance(v, NotMember):
        return 1, "not-member marked {}\n".format(v.marked_count)
    lines = ["member marked {}".format(len(v.marked))]
    lines.extend("marked {}".format(b) for b in v.marked_blocks)
    return 0, "\n".join(lines) + "\n"


def cmd_poset_refines(args, desc, s):
    p, q = parse_partition(s.space, args.p), parse_partition(s.space, args.q)
    return (0, "yes\n") if refines(p, q) else (1, "no\n")


def cmd_poset_meet(args, desc, s):
    p, q = parse_partition(s.space, args.p), parse_partition(s.space, args.q)
    v = common_refinement(s, p, q, args.n, args.depth)
    if isinstance(v, NotMember):
        return 1, "not-member marked {}\n".format(v.marked_count)
    return 0, format_partition(v.partition) + "\n"


def cmd_poset_act(args, desc, s):
    g = _load_element(s, desc, args.elem)
    return 0, format_partition(act(g, parse_partition(s.space, args.partition))) + "\n"


def _chain(s, vertices):
    return PartitionChain(tuple(parse_partition(s.space, v) for v in vertices))


def cmd_poset_isotropy(args, desc, s):
    m = isotropy_membership(_load_element(s, desc, args.elem), _chain(s, args.vertex))
    if not m.in_isotropy:
        return 1, "not-in {}\n".format(m.reason)
    return 0, "in-isotropy {}\n".format(" ".join(str(i) for i in m.permutation))


def cmd_poset_admissible(args, desc, s):
    group = admissible_group(_chain(s, args.vertex))
    lines = ["order {}".format(group.order)]
    lines.extend(" ".join(str(i) for i in perm) for perm in group.elements)
    return 0, "\n".join(lines) + "\n"


def cmd_poset_enumerate(args, desc, s):
    parts = enumerate_partitions(s.space, args.depth)
    if args.n is not None:
        parts = [p for p in parts if not isinstance(is_member(s, p, args.n), NotMember)]
    if args.dot:
        return 0, hasse_to_dot(parts)
    return 0, "".join(format_partition(p) + "\n" for p in parts)


def cmd_export_dot(args, desc, s):
    if args.format == "text":
        return 0, hierarchy_to_text(s.space, args.depth)
    return 0, hierarchy_to_dot(s.space, args.depth)


def _add_group(p):
    p.add_argument(
        "--group",
        type=str,
        required=True,
        help="named group (vd2, v3, mirror, ...) or path to a group descriptor yaml",
    )


def make_parser():
    parser = LocalSimArgumentParser(prog="localsim", description="local similarity groups of ultrametric spaces")
    parser.add_argument("--verbose", action="store_true", help="show progress bars")
    sub = parser.add_subparsers(dest="command", parser_class=LocalSimArgumentParser)
    sub.required = True

    p = sub.add_parser("mul", help="product of elements, the last applied first")
    _add_group(p)
    p.add_argument("--elem", action="append", required=True, help="element file (repeat)")
    p.set_defaults(func=cmd_mul)

    p = sub.add_parser("inv", help="inverse of an element")
    _add_group(p)
    p.add_argument("--elem", required=True)
    p.set_defaults(func=cmd_inv)

    p = sub.add_parser("order", help="order of an element")
    _add_group(p)
    p.add_argument("--elem", required=True)
    p.add_argument("--bound", type=int, default=None)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("eval", help="image of a point")
    _add_group(p)
    p.add_argument("--elem", required=True)
    p.add_argument("--point", required=True, help='point such as 001(1)')
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("classify", help="contracting / separating / equalizing")
    _add_group(p)
    p.add_argument("--sim", required=True, help='entry line such as \'"0" -> "1" : id\'')
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("dual-contraction", help="two similarities from X onto disjoint subballs")
    _add_group(p)
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(func=cmd_dual_contraction)

    p = sub.add_parser("pingpong", help="build and verify the ping-pong pair")
    _add_group(p)
    p.add_argument("--dot", action="store_true", help="emit the configuration as DOT")
    p.add_argument("--bound", type=int, default=None, help="order search bound")
    p.add_argument("--words", type=int, default=None, help="also check reduced words up to this length")
    p.set_defaults(func=cmd_pingpong)

    p = sub.add_parser("ball-seq", help="levels of the ball sequence")
    _add_group(p)
    p.add_argument("--levels", type=int, default=3)
    p.set_defaults(func=cmd_ball_seq)

    p = sub.add_parser("census", help="count separating similarities")
    _add_group(p)
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("closure", help="size of a generated subgroup")
    _add_group(p)
    p.add_argument("--elem", action="append", help="generator file (repeat)")
    p.add_argument("--random", type=int, default=0, help="number of random generators to add")
    p.add_argument("--depth", type=int, default=3, help="depth of random generators")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("finite-analyze", help="enumerate the group of a finite space structure")
    _add_group(p)
    p.set_defaults(func=cmd_finite_analyze)

    p = sub.add_parser("export-dot", help="ball hierarchy down to a depth")
    _add_group(p)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--format", choices=["dot", "text"], default="dot")
    p.set_defaults(func=cmd_export_dot)

    poset = sub.add_parser("poset", help="partition poset commands")
    psub = poset.add_subparsers(dest="poset_command", parser_class=LocalSimArgumentParser)
    psub.required = True

    p = psub.add_parser("member", help="is a partition in P_n")
    _add_group(p)
    p.add_argument("--partition", required=True, help='blocks separated by |, e.g. \'"0"|"1"\'')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(func=cmd_poset_member)

    p = psub.add_parser("refines", help="does q refine p")
    _add_group(p)
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(func=cmd_poset_refines)

    p = psub.add_parser("meet", help="common refinement in P_n")
    _add_group(p)
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(func=cmd_poset_meet)

    p = psub.add_parser("act", help="image of a partition under an element")
    _add_group(p)
    p.add_argument("--elem", required=True)
    p.add_argument("--partition", required=True)
    p.set_defaults(func=cmd_poset_act)

    p = psub.add_parser("isotropy", help="is an element in the isotropy group of a chain")
    _add_group(p)
    p.add_argument("--elem", required=True)
    p.add_argument("--vertex", action="append", required=True, help="chain vertex, coarsest first (repeat)")
    p.set_defaults(func=cmd_poset_isotropy)

    p = psub.add_parser("admissible", help="admissible permutations of a chain")
    _add_group(p)
    p.add_argument("--vertex", action="append", required=True, help="chain vertex, coarsest first (repeat)")
    p.set_defaults(func=cmd_poset_admissible)

    p = psub.add_parser("enumerate", help="partitions into balls of bounded depth")
    _add_group(p)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--n", type=int, default=None, help="keep members of P_n only")
    p.add_argument("--dot", action="store_true", help="emit the Hasse diagram")
    p.set_defaults(func=cmd_poset_enumerate)

    return parser


def run(argv):
    """
    Parses @argv and dispatches to a subcommand

    Args:
        argv (list of str): arguments without the program name

    Returns:
        CommandResult
    """
    parser = make_parser()
    out = io.StringIO()
    try:
        with contextlib.redirect_stdout(out):
            args = parser.parse_args(argv)
    except UsageError as e:
        return CommandResult(2, "", (Diagnostic("UsageError", None, str(e).strip()),))
    except ParserExit as e:
        return CommandResult(e.status, out.getvalue())

    verbose = macros.VERBOSE
    macros.VERBOSE = verbose or args.verbose
    try:
        desc, s = load_group(args.group)
        code, text = args.func(args, desc, s)
    except UsageError as e:
        return CommandResult(2, "", (Diagnostic("UsageError", None, str(e).strip()),))
    except LocalSimError as e:
        return CommandResult(1, "", (Diagnostic(e.code, e.location, e.message),))
    finally:
        macros.VERBOSE = verbose
    return CommandResult(code, text)


def main():
    result = run(sys.argv[1:])
    sys.stdout.write(result.stdout)
    for d in result.diagnostics:
        print(colored(str(d), "red"), file=sys.stderr)
    sys.exit(result.exit_code)


if __name__ == "__main__":
    main()
