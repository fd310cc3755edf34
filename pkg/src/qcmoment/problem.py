"""Problem files: JSON parsing, schema validation and conversion to solver inputs."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import MissingMomentError, QCMomentError
from .hankel import ColumnRelation, TruncatedSequence
from .measure import SolveOptions
from .multiindex import degree, enumerate_monomials
from .rational import to_rational


class ProblemError(QCMomentError):
    """Malformed problem file."""


def load_schema(name: str) -> dict:
    text = resources.files("qcmoment").joinpath("schemas", name).read_text(encoding="utf-8")
    return json.loads(text)


@dataclass
class Problem:
    sequence: TruncatedSequence
    relations: list = field(default_factory=list)
    options: SolveOptions = field(default_factory=SolveOptions)

    @property
    def d(self) -> int:
        return self.sequence.d

    @property
    def n(self) -> int:
        return self.sequence.m // 2


def _where(path) -> str:
    parts = [f"[{p}]" if isinstance(p, int) else f".{p}" for p in path]
    return "$" + "".join(parts)


def parse_problem(data: dict) -> Problem:
    """Validate a decoded problem document and build the solver inputs."""
    validator = jsonschema.Draft202012Validator(load_schema("problem.schema.json"))
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ProblemError(f"schema error at {_where(err.absolute_path)}: {err.message}")
    d = data["d"]
    m = data["degree"]
    values = {}
    for i, term in enumerate(data["moments"]):
        alpha = tuple(term["alpha"])
        where = f"$.moments[{i}]"
        if len(alpha) != d:
            raise ProblemError(f"{where}.alpha: expected {d} entries, got {len(alpha)}")
        if degree(alpha) > m:
            raise ProblemError(f"{where}.alpha: degree {degree(alpha)} exceeds {m}")
        if alpha in values:
            raise ProblemError(f"{where}.alpha: duplicate moment {list(alpha)}")
        try:
            values[alpha] = to_rational(term["value"])
        except (ValueError, ZeroDivisionError) as exc:
            raise ProblemError(f"{where}.value: {exc}") from None
    for gamma in enumerate_monomials(m, d):
        if gamma not in values:
            raise MissingMomentError(f"missing moment {list(gamma)}")
    seq = TruncatedSequence(d, m, values)

    raw_opts = data.get("options", {})
    opts = SolveOptions(**{k: v for k, v in raw_opts.items()})
    n = m // 2
    rels = []
    for i, rel in enumerate(data.get("relations", [])):
        where = f"$.relations[{i}]"
        target = tuple(rel["target"])
        if len(target) != d:
            raise ProblemError(f"{where}.target: expected {d} entries")
        coeffs = {}
        for k, term in enumerate(rel["coeffs"]):
            alpha = tuple(term["alpha"])
            if len(alpha) != d:
                raise ProblemError(f"{where}.coeffs[{k}].alpha: expected {d} entries")
            try:
                coeffs[alpha] = coeffs.get(alpha, 0) + to_rational(term["value"])
            except (ValueError, ZeroDivisionError) as exc:
                raise ProblemError(f"{where}.coeffs[{k}].value: {exc}") from None
        if opts.axis_relations:
            if sum(1 for e in target if e) != 1:
                raise ProblemError(f"{where}.target: axis mode needs a pure power X_j^k, got {list(target)}")
        elif degree(target) != n + 1:
            raise ProblemError(
                f"{where}.target: degree {degree(target)} must be {n + 1} (use axis relations for other degrees)"
            )
        try:
            rels.append(ColumnRelation(target, coeffs, strict=False))
        except ValueError as exc:
            raise ProblemError(f"{where}: {exc}") from None
    return Problem(seq, rels, opts)


def load_problem(path) -> Problem:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_problem(data)
