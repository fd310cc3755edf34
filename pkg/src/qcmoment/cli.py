"""Command line front end: ``qcmoment validate|analyze|solve PROBLEM.json``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import QCMomentError
from .hankel import build_moment_matrix, column_basis, first_hankel_violation, kernel_relations, rank_and_inertia
from .measure import solve
from .multiindex import format_monomial
from .problem import ProblemError, parse_problem
from .rational import format_rational
from .report import EXIT_CODES, dumps, format_summary, options_dict, report_to_dict


def _read(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ProblemError("schema error at $: top level must be an object")
    return data


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    problem = parse_problem(_read(args.input))
    M = build_moment_matrix(problem.sequence, problem.n)
    bad = first_hankel_violation(M)
    if bad is not None:
        (lam, xi), (gam, eta) = bad
        print(f"not d-Hankel: entry {lam},{xi} differs from {gam},{eta}", file=sys.stderr)
        return 2
    print(f"valid: d={problem.d}, degree={problem.sequence.m}, M({problem.n}) is {M.size}x{M.size}, "
          f"{len(problem.relations)} relation(s)")
    return 0


def _analysis(problem) -> dict:
    M = build_moment_matrix(problem.sequence, problem.n)
    inr = rank_and_inertia(M)
    rels = kernel_relations(M)
    return {
        "d": problem.d,
        "n": problem.n,
        "size": M.size,
        "rank": inr.rank,
        "i_plus": inr.i_plus,
        "i_minus": inr.i_minus,
        "basis": [list(b) for b in column_basis(M)],
        "relations": [
            {
                "target": list(r.target),
                "coeffs": [{"alpha": list(k), "value": format_rational(v)} for k, v in r.coeffs.items()],
                "text": r.format(),
            }
            for r in rels
        ],
    }


def cmd_analyze(args) -> int:
    data = _analysis(parse_problem(_read(args.input)))
    if args.format == "json":
        _emit(dumps(data), args.output)
        return 0
    lines = [
        f"M({data['n']}): {data['size']}x{data['size']}, rank {data['rank']}, "
        f"i+ = {data['i_plus']}, i- = {data['i_minus']}",
        "basis: " + (", ".join(format_monomial(b) for b in data["basis"]) or "(empty)"),
        "column relations:" if data["relations"] else "column relations: none",
    ]
    lines.extend(f"  {r['text']}" for r in data["relations"])
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_solve(args) -> int:
    data = _read(args.input)
    opts = dict(data.get("options") or {})
    for key in ("tol_eig", "tol_match", "seed", "max_degree"):
        val = getattr(args, key)
        if val is not None:
            opts[key] = val
    if args.axis_relations:
        opts["axis_relations"] = True
    data["options"] = opts
    problem = parse_problem(data)
    report = solve(problem.sequence, problem.relations, problem.options)
    doc = report_to_dict(report)
    doc["options"] = options_dict(problem.options)
    if args.output:
        Path(args.output).write_text(dumps(doc), encoding="utf-8")
    if args.format == "json" and not args.output:
        sys.stdout.write(dumps(doc))
    else:
        sys.stdout.write(format_summary(report))
    if report.status != "solved":
        print(f"{report.status}: {report.failure_reason}", file=sys.stderr)
    return EXIT_CODES[report.status]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcmoment",
        description="Rank-preserving extensions and minimal atomic measures for truncated moment sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a problem file and the d-Hankel structure of M(n)")
    p.add_argument("input")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="rank, inertia, column basis and column relations of M(n)")
    p.add_argument("input")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("solve", help="extend, certify and recover a minimal atomic measure")
    p.add_argument("input")
    p.add_argument("--tol-eig", type=float, default=None, help="residual and reality tolerance (default 1e-10)")
    p.add_argument("--tol-match", type=float, default=None, help="point matching tolerance (default 1e-8)")
    p.add_argument("--seed", type=int, default=None, help="seed for the random eigen combination (default 0)")
    p.add_argument("--max-degree", type=int, default=None, help="largest extension degree to try")
    p.add_argument("--axis-relations", action="store_true", help="relations are pure powers X_j^k of any degree")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("-o", "--output", help="write the JSON report here")
    p.set_defaults(func=cmd_solve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QCMomentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
