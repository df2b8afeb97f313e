"""Command-line front end: ``torsionkit <command> ...``.

Exit status is 0 on success, 1 when a check finds a counterexample or an
Invalid script, and 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import chern, lattice, profiles
from .chern import ChernError, ChernMatrix
from .engine import ScriptError, mutation_report, replay, rule_catalog
from .profiles import ProfileError
from .verify import DEFAULT_BOUND, SUITES, SearchConfig, default_workers, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# command bodies; each returns (exit code, output text)

def cmd_phi(args) -> tuple[int, str]:
    m = ChernMatrix.parse(args.matrix)
    out = chern.apply_phi_hat(m) if args.hat else chern.apply_phi(m)
    return EXIT_OK, str(out)


def matrix_candidates(m: ChernMatrix, *, strict_leading: bool = True) -> list[str]:
    """C_ij whose canonical profile agrees with the numerical data of ``m``.

    Agreement means equal dimension, dpi within the row-1 bound, a WIT index
    passing the numerical test and, when the transform is nonzero, equal
    transform dimension.  This is a compatibility filter, not a membership proof.
    """
    if not chern.is_sheaf_admissible(m, strict_leading=strict_leading):
        return []
    d, dpi = chern.dim_sheaf(m), chern.dpi_upper(m)
    out = []
    for c, p in profiles.CANONICAL.items():
        i = 0 if p.wit is profiles.Wit.WIT0 else 1
        if p.dim != d or p.dpi > dpi or not chern.wit_necessary(m, i, strict_leading=strict_leading):
            continue
        image = chern.apply_phi(m) if i == 0 else chern.apply_shift(chern.apply_phi(m))
        if not image.is_zero() and chern.dim_sheaf(image) != p.dim_hat:
            continue
        out.append(str(c))
    return out


def _classify_matrix(text: str, strict: bool) -> str:
    m = ChernMatrix.parse(text)
    if m.is_zero():
        return "matrix: [[0,0,0],[0,0,0]]\nzero class: belongs to every category"
    lines = [f"matrix: {m}", f"codim: {chern.codim(m)}", f"dim: {chern.dim_sheaf(m)}",
             f"dpi_upper: {chern.dpi_upper(m)}"]
    note = chern.dpi_upper_note(m)
    if note:
        lines.append(f"note: {note}")
    lines.append(f"admissible: {'yes' if chern.is_sheaf_admissible(m, strict_leading=strict) else 'no'}")
    for i in (0, 1):
        ok = chern.wit_necessary(m, i, strict_leading=strict)
        lines.append(f"wit{i}_numerical: {'pass' if ok else 'fail'}")
    cands = matrix_candidates(m, strict_leading=strict)
    lines.append("candidates: " + (" ".join(cands) if cands else "none"))
    return "\n".join(lines)


def _classify_profile(text: str) -> str:
    p = profiles.parse_profile(text)
    profiles.check(p)
    found = sorted(profiles.classify(p))
    lines = [f"profile: {profiles.format_profile(p)}",
             "classes: " + (" ".join(str(c) for c in found) if found else "none")]
    unknown = [str(c) for c in profiles.ALL_CIJ if profiles.membership(p, c) is profiles.Tri.UNKNOWN]
    if unknown:
        lines.append("unknown: " + " ".join(unknown))
    return "\n".join(lines)


def cmd_classify(args) -> tuple[int, str]:
    text = args.target.strip()
    if text.startswith("["):
        return EXIT_OK, _classify_matrix(text, not args.no_strict)
    return EXIT_OK, _classify_profile(text)


def cmd_lattice(args) -> tuple[int, str]:
    return EXIT_OK, lattice.export_diagram(args.format).rstrip("\n")


def render_catalog() -> str:
    rows = lattice.catalog()
    lines = [f"torsion classes: {len(rows)}"]
    for r in rows:
        alias = f"  = {r['alias']}" if r["alias"] else ""
        lines.append(f"  {r['name']:<9} <{','.join(r['generators'])}>{alias}")
    rules = rule_catalog()
    lines.append(f"rules: {len(rules)}")
    for r in rules:
        kind = "admitted" if r.admitted else "derived"
        extra = " (unused)" if r.decorative else ""
        lines.append(f"  {r.id:<8} {kind:<8} {r.summary}{extra}")
    return "\n".join(lines)


def cmd_catalog(args) -> tuple[int, str]:
    if args.json:
        return EXIT_OK, json.dumps(lattice.catalog(), indent=2)
    return EXIT_OK, render_catalog()


def render_replay(results, trace: bool) -> str:
    lines = []
    for r in results:
        if trace or not r.valid:
            lines += [f"  {t}" for t in r.trace]
        lines.append(r.line())
    n_ok = sum(r.valid for r in results)
    lines.append(f"{n_ok}/{len(results)} Valid")
    return "\n".join(lines)


def cmd_replay(args) -> tuple[int, str]:
    results = replay(args.lemma, disabled=tuple(args.without))
    code = EXIT_OK if all(r.valid for r in results) else EXIT_FAIL
    return code, render_replay(results, not args.quiet)


def cmd_verify(args) -> tuple[int, str]:
    try:
        cfg = SearchConfig(args.suite, args.bound, args.workers or default_workers(),
                           not args.no_strict)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = run_suite(cfg)
    text = rep.to_json(timing=args.timing) if args.json else rep.to_text()
    if args.timing and not args.json:
        text += f"\n  wall time: {rep.seconds:.3f}s"
    return (EXIT_OK if rep.ok else EXIT_FAIL), text


def render_mutations(rows) -> str:
    return "\n".join(r.line() for r in rows)


def cmd_mutations(args) -> tuple[int, str]:
    rows = mutation_report(args.rule or None)
    return EXIT_OK, render_mutations(rows)


def _section(name: str, body: str) -> str:
    return f"=== {name} ===\n{body.rstrip()}\n=== end {name} ==="


def cmd_report(args) -> tuple[int, str]:
    from . import plotting
    from .engine.closure import hull
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    workers = args.workers or default_workers()
    results = replay("all")
    rows = mutation_report()
    reports = [run_suite(SearchConfig(s, args.bound, workers)) for s in SUITES]
    sections = [
        _section("catalog", render_catalog()),
        _section("replay", render_replay(results, trace=False)),
        _section("mutations", render_mutations(rows)),
    ]
    sections += [_section(f"verify {r.suite}", r.to_text()) for r in reports]
    figures = [
        plotting.plot_diagram(out / "diagram.png"),
        plotting.plot_mutations(out / "mutations.png", rows),
        plotting.plot_hull_sizes(out / "closures.png",
                                 {n: len(hull(lattice.generators(n).generators))
                                  for n in lattice.THEOREM_NAMES}),
    ]
    sections.append(_section("figures", "\n".join(f.name for f in figures)))
    text = "\n".join(sections)
    (out / "report.txt").write_text(text + "\n")
    ok = all(r.valid for r in results) and all(r.ok for r in reports)
    return (EXIT_OK if ok else EXIT_FAIL), text


# ---------------------------------------------------------------------------
# parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="torsionkit", description="Chern matrices, profiles and torsion-class proofs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("phi", help="transform a Chern matrix")
    s.add_argument("matrix", help="row-major form, e.g. [[1,2,3],[4,5,6]]")
    s.add_argument("--hat", action="store_true", help="apply the inverse-direction transform")
    s.set_defaults(fn=cmd_phi)

    s = sub.add_parser("classify", help="classify a matrix or a profile")
    s.add_argument("target", help="matrix text or 'dim=.. dpi=.. wit=.. ...'")
    s.add_argument("--no-strict", action="store_true", help="drop the nonnegative-leading-entry condition")
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("lattice", help="export the C_ij diagram")
    s.add_argument("--format", choices=("dot", "json"), default="dot")
    s.set_defaults(fn=cmd_lattice)

    s = sub.add_parser("catalog", help="list the torsion classes and rules")
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=cmd_catalog)

    s = sub.add_parser("replay", help="replay proof scripts")
    s.add_argument("lemma", nargs="?", default="all")
    s.add_argument("--without", action="append", default=[], metavar="RULE",
                   help="remove a rule before replaying (repeatable)")
    s.add_argument("-q", "--quiet", action="store_true", help="verdict lines only")
    s.set_defaults(fn=cmd_replay)

    s = sub.add_parser("verify", help="run an exhaustive search suite")
    s.add_argument("suite", choices=SUITES)
    s.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    s.add_argument("--workers", type=int, default=0, help="default from TORSIONKIT_WORKERS or 1")
    s.add_argument("--no-strict", action="store_true")
    s.add_argument("--json", action="store_true")
    s.add_argument("--timing", action="store_true")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("mutations", help="rule-necessity table")
    s.add_argument("--rule", action="append", default=[])
    s.set_defaults(fn=cmd_mutations)

    s = sub.add_parser("report", help="write a text report and figures to a directory")
    s.add_argument("--out", default="report")
    s.add_argument("--bound", type=int, default=3)
    s.add_argument("--workers", type=int, default=0)
    s.set_defaults(fn=cmd_report)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        code, text = args.fn(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (ChernError, ProfileError, ScriptError, lattice.LatticeError) as exc:
        print(f"torsionkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:          # --help
        return int(exc.code or 0)
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
