"""Command line entry point.

Every subcommand writes one JSON report ``{"header": ..., "body": ...}`` and a
one-line summary on stderr.  The header carries the tool version and SHA-256
digests of the inputs; the body is deterministic, so golden files compare
bodies only.

Exit codes: 0 success or certified, 1 bad input, 2 violations found,
3 enumeration budget exceeded.

Graphs are given as ``--graph FILE`` (JSON) or ``--builtin family:params``,
for example ``complete:5``, ``complete_bipartite:3,3``, ``cycle:6``,
``path:4`` (four vertices), ``empty:3`` or ``petersen``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Any

from . import BudgetExceeded, InputError, __version__
from .cube_complex import (
    CubeComplex,
    check_flag,
    complex_from_json,
    complex_to_json,
    identify_surface,
    reduced_config_space,
)
from .graph_core import (
    SimplicialGraph,
    delta_graph,
    from_jsonable,
    graph_from_json,
    graph_to_json,
    is_planar,
    line_graph,
    morphism_from_json,
    opposite_graph,
    parse_builtin,
    subdivide,
    to_jsonable,
    validate_cover,
    vertex_key,
)
from .maps import (
    check_local_isometry,
    cover_homomorphism,
    fundamental_group_presentation,
    induced_homomorphism,
    phi_map,
    salvetti,
    target_presentation,
)
from .raag import (
    NonTrivial,
    RaagPresentation,
    conjugate,
    delta_reduce,
    identity_certificate,
    normal_form,
    search_square_relation,
    words_equal,
)

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_BUDGET = 0, 1, 2, 3


class Outcome:
    def __init__(self, body: Any, summary: str, code: int = EXIT_OK):
        self.body, self.summary, self.code = body, summary, code


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# inputs ------------------------------------------------------------------------

class Inputs:
    """Loads input files once and remembers their digests for the header."""

    def __init__(self) -> None:
        self.digests: dict = {}

    def _note(self, name: str, raw: bytes) -> None:
        self.digests[name] = hashlib.sha256(raw).hexdigest()

    def json_file(self, name: str, path: str) -> Any:
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        self._note(name, raw)
        try:
            return json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise InputError(f"{path} is not valid UTF-8 JSON: {exc}") from None

    def text(self, name: str, value: str) -> str:
        self._note(name, value.encode("utf-8"))
        return value

    def graph(self, args, name: str = "graph") -> SimplicialGraph:
        if getattr(args, "builtin", None) and getattr(args, "graph", None):
            raise InputError("give either --graph or --builtin, not both")
        if getattr(args, "builtin", None):
            return parse_builtin(self.text(name, args.builtin))
        if getattr(args, "graph", None):
            return graph_from_json(self.json_file(name, args.graph))
        raise InputError("a graph is required (--graph FILE or --builtin family:params)")

    def complex(self, args) -> CubeComplex:
        if getattr(args, "complex", None):
            if getattr(args, "builtin", None) or getattr(args, "graph", None):
                raise InputError("give either --complex or a graph with --n, not both")
            return complex_from_json(self.json_file("complex", args.complex))
        if args.n is None:
            raise InputError("--n is required when the complex is built from a graph")
        self.text("n", str(args.n))
        return reduced_config_space(self.graph(args), args.n, max_cubes=args.max_cubes)


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be strictly positive")
    return value


def parse_vertex(text: str) -> Any:
    """A vertex given on the command line: JSON if it parses, else a plain string."""
    try:
        return from_jsonable(json.loads(text))
    except (json.JSONDecodeError, InputError):
        return text


# commands ----------------------------------------------------------------------

def cmd_config_space(args, inp: Inputs) -> Outcome:
    x = inp.complex(args)
    body = {"f_vector": list(x.f_vector()), "euler_characteristic": x.euler_characteristic()}
    if args.surface:
        body["surface"] = identify_surface(x).to_json()
    if args.emit_complex:
        body["complex"] = complex_to_json(x)
    return Outcome(body, f"f-vector {tuple(x.f_vector())}, chi = {x.euler_characteristic()}")


def _graph_op(op):
    def run(args, inp: Inputs) -> Outcome:
        g = op(inp.graph(args), args)
        return Outcome(graph_to_json(g), f"{len(g.vertices)} vertices, {len(g.edges)} edges")

    return run


def cmd_planar(args, inp: Inputs) -> Outcome:
    g = inp.graph(args)
    v = is_planar(g)
    if v.planar:
        body = {
            "planar": True,
            "rotation": [[to_jsonable(u), [to_jsonable(w) for w in v.rotation[u]]] for u in g.vertices],
        }
        return Outcome(body, "planar (rotation system verified)")
    body = {
        "planar": False,
        "kuratowski_type": v.kuratowski_type,
        "kuratowski": graph_to_json(v.kuratowski),
    }
    return Outcome(body, f"nonplanar ({v.kuratowski_type} subdivision verified)")


def cmd_cover_validate(args, inp: Inputs) -> Outcome:
    p = morphism_from_json(inp.json_file("cover", args.cover))
    inp.text("sheets", str(args.sheets))
    verdict = validate_cover(p, args.sheets)
    body = {"valid": verdict.valid, "vertex": to_jsonable(verdict.vertex), "reason": verdict.reason}
    if verdict.valid:
        return Outcome(body, f"valid {args.sheets}-sheeted cover")
    return Outcome(body, f"not a cover at {verdict.vertex!r}: {verdict.reason}", EXIT_VIOLATION)


def cmd_check_flag(args, inp: Inputs) -> Outcome:
    report = check_flag(inp.complex(args))
    if report.passed:
        return Outcome(report.to_json(), "all vertex links are flag")
    n = len(report.violations)
    return Outcome(report.to_json(), f"{n} empty simplices in vertex links", EXIT_VIOLATION)


def cmd_surface_id(args, inp: Inputs) -> Outcome:
    s = identify_surface(inp.complex(args))
    if not s.is_closed_surface:
        summary = "not a closed surface"
    else:
        summary = f"closed {'orientable' if s.orientable else 'nonorientable'} surface, chi = {s.euler_characteristic}"
    return Outcome(s.to_json(), summary)


def cmd_salvetti(args, inp: Inputs) -> Outcome:
    s = salvetti(inp.graph(args), args.max_dim)
    body = {"f_vector": list(s.complex.f_vector()), "complex": complex_to_json(s.complex)}
    return Outcome(body, f"f-vector {tuple(s.complex.f_vector())}")


def cmd_phi(args, inp: Inputs) -> Outcome:
    g = inp.graph(args)
    inp.text("n", str(args.n))
    f = phi_map(g, args.n, max_cubes=args.max_cubes)
    body: dict = {
        "n": args.n,
        "source_f_vector": list(f.source.f_vector()),
        "generators_used": [
            to_jsonable(gen)
            for gen in sorted({gen for gen, _ in f.assignment.values()}, key=vertex_key)
        ],
    }
    if not args.certify:
        return Outcome(body, f"cubical map from a complex with f-vector {tuple(f.source.f_vector())}")
    report = check_local_isometry(f, jobs=args.jobs)
    body["certificate"] = report.to_json()
    if report.certified:
        return Outcome(body, f"certified local isometry at {len(report.vertices)} vertices")
    bad = len(report.failing_vertices) + len(report.cubical_violations) + len(report.flag_violations)
    return Outcome(body, f"not certified: {bad} violations", EXIT_VIOLATION)


def cmd_presentation(args, inp: Inputs) -> Outcome:
    basepoint = parse_vertex(inp.text("basepoint", args.basepoint)) if args.basepoint else None
    if args.induced:
        if args.complex:
            raise InputError("--induced needs a graph and --n, not --complex")
        f = phi_map(inp.graph(args), args.n, max_cubes=args.max_cubes)
        inp.text("n", str(args.n))
        pres = fundamental_group_presentation(f.source, basepoint)
        hom = induced_homomorphism(f, pres)
        body = {"presentation": pres.to_json(), "induced": hom.to_json(target_presentation(f))}
        summary = f"{len(pres.generators)} generators, {len(pres.relators)} relators"
        if hom.all_trivial:
            return Outcome(body, summary + ", all relator images trivial")
        return Outcome(body, summary + ", NON-TRIVIAL relator images", EXIT_VIOLATION)
    pres = fundamental_group_presentation(inp.complex(args), basepoint)
    return Outcome(pres.to_json(), f"{len(pres.generators)} generators, {len(pres.relators)} relators")


def cmd_cover_hom(args, inp: Inputs) -> Outcome:
    if args.delta:
        d = graph_from_json(inp.json_file("delta", args.delta))
    else:
        d = inp.graph(args, "delta")
    cover = morphism_from_json(inp.json_file("cover", args.cover))
    inp.text("sheets", str(args.sheets))
    hom = cover_homomorphism(RaagPresentation(d), cover, args.sheets, corpus_len=args.corpus_len)
    summary = f"{hom.corpus_size} test words"
    if hom.ok:
        return Outcome(hom.to_json(), summary + ", all images reduced and distinct")
    return Outcome(hom.to_json(), summary + ", violations found", EXIT_VIOLATION)


def _words(args, inp: Inputs, count: int) -> tuple[RaagPresentation, list]:
    P = RaagPresentation(inp.graph(args))
    if len(args.words) != count:
        raise InputError(f"expected {count} word(s), got {len(args.words)}")
    return P, [P.parse(inp.text(f"word{i}", w)) for i, w in enumerate(args.words)]


def _moves_json(cert) -> list:
    return [[m.kind, m.position, to_jsonable(m.letter)] for m in cert.moves]


def cmd_word(args, inp: Inputs) -> Outcome:
    op = args.word_op
    if op == "reduce":
        P, (w,) = _words(args, inp, 1)
        red, cert = delta_reduce(P, w)
        body = {"input": P.format(w), "reduced": P.format(red), "moves": _moves_json(cert)}
        return Outcome(body, f"reduced to '{P.format(red)}' in {len(cert.moves)} moves")
    if op == "nf":
        P, (w,) = _words(args, inp, 1)
        nf = normal_form(P, w)
        return Outcome({"input": P.format(w), "normal_form": P.format(nf)}, f"normal form '{P.format(nf)}'")
    if op == "equal":
        P, (a, b) = _words(args, inp, 2)
        eq = words_equal(P, a, b)
        return Outcome({"equal": eq}, "equal" if eq else "not equal")
    if op == "conj":
        P, (a, b) = _words(args, inp, 2)
        c = conjugate(P, a, b)
        return Outcome({"conjugate": c}, "conjugate" if c else "not conjugate")
    P, (w,) = _words(args, inp, 1)
    cert = identity_certificate(P, w)
    if isinstance(cert, NonTrivial):
        body = {"trivial": False, "normal_form": P.format(cert.normal_form)}
        return Outcome(body, f"not trivial: normal form '{P.format(cert.normal_form)}'", EXIT_VIOLATION)
    counts = cert.counts()
    body = {"trivial": True, "input": P.format(w), "moves": _moves_json(cert)}
    return Outcome(body, f"trivial: {counts['commute']} commutations, {counts['delete']} deletions")


def cmd_search_square(args, inp: Inputs) -> Outcome:
    P = RaagPresentation(inp.graph(args))
    inp.text("max_len", str(args.max_len))
    found = search_square_relation(P, args.max_len, budget=args.budget)
    body = {
        "solutions": [
            {"x": P.format(s.x), "y": P.format(s.y), "z": P.format(s.z), "commuting": s.commuting}
            for s in found
        ],
        "all_commuting": all(s.commuting for s in found),
    }
    if body["all_commuting"]:
        return Outcome(body, f"{len(found)} solutions, all pairwise commuting")
    return Outcome(body, f"{len(found)} solutions, some not commuting", EXIT_VIOLATION)


# parser ------------------------------------------------------------------------

def _graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", metavar="FILE", help="graph JSON file")
    p.add_argument("--builtin", metavar="FAMILY:PARAMS", help="builtin graph, e.g. complete_bipartite:3,3")


def _complex_args(p: argparse.ArgumentParser) -> None:
    _graph_args(p)
    p.add_argument("--complex", metavar="FILE", help="cube complex JSON file")
    p.add_argument("--n", type=positive_int, help="number of points for a configuration space")
    p.add_argument("--max-cubes", type=positive_int, help="abort (exit 3) past this many cubes")


def _out_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", "--report", dest="out", metavar="FILE", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubist",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"cubist {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("config-space", help="reduced configuration space of a graph")
    _complex_args(p)
    p.add_argument("--surface", action="store_true", help="identify the complex as a surface")
    p.add_argument("--emit-complex", action="store_true", help="include the complex in the report")
    p.set_defaults(run=cmd_config_space)

    for name, op, text in [
        ("delta-graph", lambda g, a: delta_graph(g), "disjointness graph of the edges"),
        ("opposite", lambda g, a: opposite_graph(g), "complement graph"),
        ("line-graph", lambda g, a: line_graph(g), "line graph"),
        ("subdivide", lambda g, a: subdivide(g, a.k), "split every edge into k edges"),
    ]:
        p = sub.add_parser(name, help=text)
        _graph_args(p)
        if name == "subdivide":
            p.add_argument("--k", type=positive_int, required=True)
        p.set_defaults(run=_graph_op(op))

    p = sub.add_parser("planar", help="planarity with a verified witness")
    _graph_args(p)
    p.set_defaults(run=cmd_planar)

    p = sub.add_parser("cover", help="graph covers")
    cover_sub = p.add_subparsers(dest="cover_op", required=True)
    q = cover_sub.add_parser("validate", help="check a covering map")
    q.add_argument("--cover", metavar="FILE", required=True)
    q.add_argument("--sheets", type=positive_int, required=True)
    q.set_defaults(run=cmd_cover_validate)

    p = sub.add_parser("check-flag", help="flag condition on every vertex link")
    _complex_args(p)
    p.set_defaults(run=cmd_check_flag)

    p = sub.add_parser("surface-id", help="closed-surface recognition")
    _complex_args(p)
    p.set_defaults(run=cmd_surface_id)

    p = sub.add_parser("salvetti", help="cubed torus of a defining graph")
    _graph_args(p)
    p.add_argument("--max-dim", type=positive_int, default=2)
    p.set_defaults(run=cmd_salvetti)

    p = sub.add_parser("phi", help="the map from a configuration space to the cubed torus")
    _graph_args(p)
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--certify", action="store_true", help="run the local-isometry check")
    p.add_argument("--jobs", type=positive_int, default=1)
    p.add_argument("--max-cubes", type=positive_int)
    p.set_defaults(run=cmd_phi)

    p = sub.add_parser("presentation", help="fundamental group of a square complex")
    _complex_args(p)
    p.add_argument("--basepoint", help="vertex label (JSON or plain string)")
    p.add_argument("--induced", action="store_true", help="also map generators through phi")
    p.set_defaults(run=cmd_presentation)

    p = sub.add_parser("cover-hom", help="homomorphism induced by a cover of opposite graphs")
    _graph_args(p)
    p.add_argument("--delta", metavar="FILE", help="defining graph JSON (alternative to --graph)")
    p.add_argument("--cover", metavar="FILE", required=True)
    p.add_argument("--sheets", type=positive_int, required=True)
    p.add_argument("--corpus-len", type=positive_int, default=3)
    p.set_defaults(run=cmd_cover_hom)

    p = sub.add_parser("word", help="word problems in a right-angled Artin group")
    word_sub = p.add_subparsers(dest="word_op", required=True)
    for op, nwords in [("reduce", 1), ("nf", 1), ("equal", 2), ("conj", 2), ("certify", 1)]:
        q = word_sub.add_parser(op)
        _graph_args(q)
        q.add_argument("words", nargs=nwords, metavar="WORD", help='e.g. "a b^-1 c"')
        q.set_defaults(run=cmd_word)

    p = sub.add_parser("search-square", help="solutions of x^2 y^2 = z^2 up to a length")
    _graph_args(p)
    p.add_argument("--max-len", type=positive_int, default=2)
    p.add_argument("--budget", type=positive_int, default=200_000)
    p.set_defaults(run=cmd_search_square)

    for action in sub.choices.values():
        _add_out(action)
    return parser


def _add_out(p: argparse.ArgumentParser) -> None:
    if p._subparsers is not None:
        for group in p._subparsers._group_actions:
            for child in group.choices.values():
                _add_out(child)
    else:
        _out_arg(p)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    inp = Inputs()
    try:
        outcome = args.run(args, inp)
    except BudgetExceeded as exc:
        print(f"cubist: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InputError as exc:
        print(f"cubist: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    command = args.command + (f" {args.cover_op}" if args.command == "cover" else "")
    command += f" {args.word_op}" if args.command == "word" else ""
    report = {
        "header": {"tool": "cubist", "version": __version__, "command": command, "inputs": inp.digests},
        "body": outcome.body,
    }
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"cubist {command}: {outcome.summary}", file=sys.stderr)
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
