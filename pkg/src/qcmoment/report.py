"""Serialization of solve reports to JSON-ready dicts and text summaries."""
from __future__ import annotations

import json
from dataclasses import asdict

from .measure import SolveReport
from .multiindex import format_monomial

EXIT_CODES = {"solved": 0, "error": 2, "inconsistent_relations": 3, "no_minimal_measure": 4}


def _num(x: float) -> float:
    # avoid "-0.0" in output
    return float(x) + 0.0


def _complex(z) -> dict:
    z = complex(z)
    return {"re": _num(z.real), "im": _num(z.imag)}


def _inertia(rep) -> dict:
    return {"rank": rep.rank, "i_plus": rep.i_plus, "i_minus": rep.i_minus}


def _opt(x):
    return None if x is None else _num(x)


def report_to_dict(report: SolveReport) -> dict:
    out = {
        "status": report.status,
        "quality": report.quality,
        "d": report.d,
        "n": report.n,
        "degree": report.m,
        "failure": None
        if report.failure_stage is None
        else {"stage": report.failure_stage, "reason": report.failure_reason},
        "ranks": [
            {"degree": k, **_inertia(report.inertia[k])} for k in sorted(report.ranks) if k in report.inertia
        ],
        "stabilized_at": report.stabilized_at,
        "rank_infinity": report.rank_infinity,
        "proof_note": report.proof_note,
        "basis": [list(b) for b in report.basis],
        "certification": None
        if report.commuting is None
        else {
            "commuting": report.commuting,
            "diagonalizable": list(report.diagonalizable),
            "minimal_polynomial_degrees": list(report.minimal_polynomial_degrees),
        },
        "variety": report.variety,
        "classification": None if report.measure is None else report.measure.classification,
        "residuals": None
        if report.status != "solved"
        else {
            "moments": _opt(report.residual),
            "imaginary": _opt(report.imaginary_residual),
            "factorization": _opt(report.factorization_residual),
            "weight_discrepancy": _opt(report.weight_discrepancy),
            "eigen": _opt(report.eigen_residual),
        },
        "condition": _opt(report.condition),
        "inertia": None
        if report.basis_inertia is None
        else {
            "basis": _inertia(report.basis_inertia),
            "jordan": None
            if report.jordan is None
            else {"plus": report.jordan.plus, "minus": report.jordan.minus, "matches": report.jordan.matches},
        },
        "rank_support_bound": report.rank_support_bound,
        "grid_bounds": None
        if report.grid_bounds is None
        else {
            "lower": report.grid_bounds[0],
            "upper": report.grid_bounds[1],
            "atoms": len(report.measure.atoms) if report.measure else 0,
        },
        "seed_used": report.seed_used,
        "warnings": list(report.warnings),
    }
    if report.status == "solved":
        out["atoms"] = [
            {"point": [_complex(z) for z in a.point], "weight": _complex(a.weight)} for a in report.measure.atoms
        ]
    return out


def dumps(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _fmt_complex(z: complex) -> str:
    if z.imag == 0:
        return f"{z.real:.12g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.12g}{sign}{abs(z.imag):.12g}i"


def format_summary(report: SolveReport) -> str:
    lines = [f"status: {report.status}" + (" (warning)" if report.quality == "warning" else "")]
    if report.failure_stage:
        lines.append(f"failed at {report.failure_stage}: {report.failure_reason}")
    if report.ranks:
        lines.append("stage  rank  i+  i-")
        for k in sorted(report.ranks):
            inr = report.inertia.get(k)
            if inr is not None:
                lines.append(f"M({k}){'':<2}{inr.rank:>4}{inr.i_plus:>4}{inr.i_minus:>4}")
    if report.stabilized_at is not None:
        lines.append(f"stabilized at degree {report.stabilized_at}, rank {report.rank_infinity} ({report.proof_note})")
    if report.basis:
        lines.append("basis: " + ", ".join(format_monomial(b) for b in report.basis))
    if report.commuting is not None:
        diag = ", ".join(f"T{j + 1}={'yes' if ok else 'no'}" for j, ok in enumerate(report.diagonalizable))
        lines.append(f"commuting: {'yes' if report.commuting else 'no'}; diagonalizable: {diag}")
    if report.measure is not None:
        mu = report.measure
        lines.append(f"classification: {mu.classification}, {len(mu.atoms)} atoms")
        lines.append("   #  point" + " " * 40 + "weight")
        for i, a in enumerate(mu.atoms, 1):
            pt = "(" + ", ".join(_fmt_complex(z) for z in a.point) + ")"
            lines.append(f"{i:>4}  {pt:<44} {_fmt_complex(a.weight)}")
        lines.append(f"max moment residual: {report.residual:.3e}")
        if report.jordan is not None:
            verdict = "holds" if report.jordan.matches else "FAILS"
            lines.append(
                f"inertia identity: weights (+{report.jordan.plus}, -{report.jordan.minus}) vs "
                f"i(M_B) = ({report.jordan.i_plus}, {report.jordan.i_minus}): {verdict}"
            )
    for w in report.warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def options_dict(opts) -> dict:
    return asdict(opts)
