"""JSON documents for instances and results.

Every rational travels as a string (``"3/4"``, ``"-2"``); output is
canonical (sorted keys, lowest terms) so identical inputs give byte-identical
files.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .errors import ValidationError
from .model import (
    ADHZInstance,
    Check,
    EquilibriumReport,
    HZInstance,
    Instance,
    NBInstance,
    PriceSystem,
    TightEvent,
    TraceStep,
    Verdict,
    validate_instance,
)
from .rational import RationalFormatError, format_rational, parse_rational


class InstanceSyntaxError(ValidationError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"JSON syntax error at line {line}: {msg}")
        self.line = line


class SchemaError(ValidationError):
    def __init__(self, field: str, msg: str):
        super().__init__(f"schema error in {field}: {msg}")
        self.field = field


_KIND_FIELD = {"hz": "budgets", "adhz": "endowments", "1dlad": "disagreement"}
_OPTIONAL = {"adhz": {"names"}}


def _load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(exc.lineno, exc.msg) from None


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise SchemaError(where, f"expected a rational string, got {type(value).__name__}")
    if isinstance(value, int):
        return Fraction(value)
    try:
        return parse_rational(value)
    except RationalFormatError as exc:
        raise SchemaError(where, exc.reason) from None


def _vector(value, where: str, n: int | None = None) -> tuple[Fraction, ...]:
    if not isinstance(value, list):
        raise SchemaError(where, "expected a list")
    if n is not None and len(value) != n:
        raise SchemaError(where, f"expected {n} entries, got {len(value)}")
    return tuple(_rational(v, f"{where}[{k}]") for k, v in enumerate(value))


def _matrix(value, where: str, n: int | None = None) -> tuple[tuple[Fraction, ...], ...]:
    if not isinstance(value, list):
        raise SchemaError(where, "expected a list of rows")
    if n is not None and len(value) != n:
        raise SchemaError(where, f"expected {n} rows, got {len(value)}")
    return tuple(_vector(r, f"{where}[{k}]") for k, r in enumerate(value))


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _vec_out(v) -> list[str]:
    return [format_rational(x) for x in v]


def _mat_out(m) -> list[list[str]]:
    return [_vec_out(r) for r in m]


# ----------------------------------------------------------------- instances


def instance_from_dict(doc) -> Instance:
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected an object")
    kind = doc.get("kind")
    if kind not in _KIND_FIELD:
        raise SchemaError("kind", f"expected one of {sorted(_KIND_FIELD)}, got {kind!r}")
    allowed = {"kind", "n", "utilities", _KIND_FIELD[kind]} | _OPTIONAL.get(kind, set())
    for key in sorted(doc):
        if key not in allowed:
            raise SchemaError(key, f"not allowed for kind {kind!r}")
    for key in ("n", "utilities", _KIND_FIELD[kind]):
        if key not in doc:
            raise SchemaError(key, "missing")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SchemaError("n", "expected a positive integer")
    u = _matrix(doc["utilities"], "utilities", n)
    if kind == "hz":
        inst = HZInstance(u, _vector(doc["budgets"], "budgets", n))
    elif kind == "adhz":
        names = doc.get("names")
        if names is not None and (not isinstance(names, list) or len(names) != n or not all(isinstance(s, str) for s in names)):
            raise SchemaError("names", f"expected {n} strings")
        inst = ADHZInstance(u, _matrix(doc["endowments"], "endowments", n), names)
    else:
        inst = NBInstance(u, _vector(doc["disagreement"], "disagreement", n))
    return validate_instance(inst)


def parse_instance(text: str) -> Instance:
    return instance_from_dict(_load(text))


def instance_to_dict(inst: Instance) -> dict:
    doc = {"kind": inst.kind, "n": inst.n, "utilities": _mat_out(inst.utilities.rows)}
    if isinstance(inst, HZInstance):
        doc["budgets"] = _vec_out(inst.budgets)
    elif isinstance(inst, ADHZInstance):
        doc["endowments"] = _mat_out(inst.endowments)
        if inst.names is not None:
            doc["names"] = list(inst.names)
    else:
        doc["disagreement"] = _vec_out(inst.disagreement)
    return doc


def write_instance(inst: Instance) -> str:
    return _dump(instance_to_dict(inst))


def instance_digest(inst: Instance) -> str:
    canon = json.dumps(instance_to_dict(inst), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canon.encode("ascii")).hexdigest()


# ------------------------------------------------------------------- results


def _jsonable(w):
    if isinstance(w, (tuple, list)):
        return [_jsonable(v) for v in w]
    if isinstance(w, Fraction):
        return format_rational(w)
    return w


def _tupled(w):
    if isinstance(w, list):
        return tuple(_tupled(v) for v in w)
    return w


def result_to_dict(report: EquilibriumReport, instance: Instance | None = None, include_trace: bool = True) -> dict:
    doc = {
        "kind": report.kind,
        "allocation": _mat_out(report.allocation),
        "prices": _vec_out(report.prices.prices),
        "offsets": _vec_out(report.prices.offsets),
        "budgets": _vec_out(report.prices.budgets),
        "utilities": _vec_out(report.utilities),
        "iterations": report.iterations,
        "verdicts": [
            {"name": c.name, "passed": c.passed, "witness": _jsonable(c.witness), "detail": c.detail}
            for c in (report.verdict.checks if report.verdict is not None else ())
        ],
        "tight_events": [
            {"theta": format_rational(e.theta), "goods": list(e.goods), "agents": list(e.agents)} for e in report.events
        ],
    }
    if report.epsilon is not None:
        doc["epsilon"] = format_rational(report.epsilon)
    digest = instance_digest(instance) if instance is not None else report.extra.get("instance_digest")
    if digest is not None:
        doc["instance_digest"] = digest
    if include_trace and report.trace:
        doc["trace"] = [
            {"budgets": _vec_out(t.budgets), "prices": _vec_out(t.prices), "allocation": _mat_out(t.allocation)}
            for t in report.trace
        ]
    return doc


def write_result(report: EquilibriumReport, instance: Instance | None = None, include_trace: bool = True) -> str:
    return _dump(result_to_dict(report, instance, include_trace))


def result_from_dict(doc) -> EquilibriumReport:
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected an object")
    for key in ("kind", "allocation", "prices", "offsets", "budgets", "utilities"):
        if key not in doc:
            raise SchemaError(key, "missing")
    x = _matrix(doc["allocation"], "allocation")
    n = len(x)
    verdicts = doc.get("verdicts", [])
    checks = tuple(
        Check(c["name"], bool(c["passed"]), _tupled(c.get("witness")), c.get("detail", "")) for c in verdicts
    )
    events = tuple(
        TightEvent(_rational(e["theta"], "tight_events.theta"), tuple(e["goods"]), tuple(e["agents"]))
        for e in doc.get("tight_events", [])
    )
    trace = tuple(
        TraceStep(
            _vector(t["budgets"], "trace.budgets", n),
            _vector(t["prices"], "trace.prices", n),
            _matrix(t["allocation"], "trace.allocation", n),
        )
        for t in doc.get("trace", [])
    )
    extra = {}
    if "instance_digest" in doc:
        extra["instance_digest"] = doc["instance_digest"]
    return EquilibriumReport(
        kind=doc["kind"],
        allocation=x,
        prices=PriceSystem(
            _vector(doc["prices"], "prices", n),
            _vector(doc["offsets"], "offsets", n),
            _vector(doc["budgets"], "budgets", n),
        ),
        utilities=_vector(doc["utilities"], "utilities", n),
        iterations=int(doc.get("iterations", 1)),
        verdict=Verdict(checks) if verdicts else None,
        trace=trace,
        events=events,
        epsilon=_rational(doc["epsilon"], "epsilon") if "epsilon" in doc else None,
        extra=extra,
    )


def parse_result(text: str) -> EquilibriumReport:
    return result_from_dict(_load(text))
