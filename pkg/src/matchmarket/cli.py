"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or validation error,
3 infeasible instance.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .adhz import solve_eps_adhz
from .audit import AuditSummary, audit_instance
from .errors import Infeasible, MarketError, SolverError, ValidationError
from .hz import solve_hz
from .jsonio import instance_digest, parse_instance, parse_result, write_instance, write_result
from .lottery import bvn_decompose, sample_matching
from .model import (
    ADHZInstance,
    HZInstance,
    NBInstance,
    PriceSystem,
    Verdict,
    counterexample_instance,
    hz_to_adhz,
    scale_prices,
)
from .nb import solve_1dlad
from .rational import RationalFormatError, format_rational, parse_rational
from .verify import (
    WEAK_CORE_MAX_N,
    verify_1dlad_kkt,
    verify_envy_free_equal_type,
    verify_eps_adhz,
    verify_hz,
    verify_individual_rationality_approx,
    verify_weak_core_small,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3

_KIND_TYPES = {"hz": HZInstance, "adhz": ADHZInstance, "1dlad": NBInstance}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _epsilon(text: str | None):
    if text is None:
        return None
    try:
        return parse_rational(text)
    except RationalFormatError as exc:
        raise UsageError(f"--epsilon: {exc}") from None


def _load_instance(path: str, kind: str | None = None):
    inst = parse_instance(_read(path))
    if kind is not None and not isinstance(inst, _KIND_TYPES[kind]):
        raise UsageError(f"--kind {kind} does not match instance kind {inst.kind!r}")
    return inst


# ------------------------------------------------------------------ commands


def cmd_solve(args) -> int:
    inst = _load_instance(args.input, args.kind)
    eps = _epsilon(args.epsilon)
    if args.kind == "adhz":
        if eps is None:
            raise UsageError("solve --kind adhz requires --epsilon")
        report = solve_eps_adhz(inst, eps)
    elif args.kind == "hz":
        report = solve_hz(inst)
    else:
        report = solve_1dlad(inst)
    _write(args.output, write_result(report, inst, include_trace=args.trace))
    return EXIT_OK if report.verdict is None or report.verdict.ok else EXIT_FAIL


def verdict_for(inst, result, eps=None) -> Verdict:
    x, ps = result.allocation, result.prices
    if isinstance(inst, HZInstance):
        return verify_hz(inst, x, ps.prices)
    if isinstance(inst, NBInstance):
        return verify_1dlad_kkt(inst, x, ps.prices, ps.offsets)
    eps = eps if eps is not None else result.epsilon
    if eps is None:
        raise UsageError("verify --kind adhz needs --epsilon or an epsilon in the result")
    parts = [
        verify_eps_adhz(inst, x, ps.prices, ps.budgets, eps),
        verify_envy_free_equal_type(inst, x),
        verify_individual_rationality_approx(inst, x, eps),
    ]
    if inst.n <= WEAK_CORE_MAX_N:
        parts.append(verify_weak_core_small(inst, x, eps))
    return Verdict.merge(*parts)


def cmd_verify(args) -> int:
    inst = _load_instance(args.instance, args.kind)
    result = parse_result(_read(args.result))
    digest = result.extra.get("instance_digest")
    if digest is not None and digest != instance_digest(inst):
        raise UsageError("result was produced for a different instance (digest mismatch)")
    verdict = verdict_for(inst, result, _epsilon(args.epsilon))
    for c in verdict.checks:
        line = f"{'PASS' if c.passed else 'FAIL'} {c.name}"
        if not c.passed:
            line += f" witness={json.dumps(_plain(c.witness))} {c.detail}"
        print(line)
    return EXIT_OK if verdict.ok else EXIT_FAIL


def _plain(w):
    return [_plain(v) for v in w] if isinstance(w, (tuple, list)) else w


def cmd_lottery(args) -> int:
    result = parse_result(_read(args.result))
    terms = bvn_decompose(result.allocation)
    doc = {
        "seed": str(args.seed),
        "decomposition": [{"weight": format_rational(t.weight), "permutation": list(t.permutation)} for t in terms],
        "sample": list(sample_matching(terms, args.seed)),
    }
    _write(args.output, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def cmd_gen(args) -> int:
    _write(args.output, write_instance(counterexample_instance()))
    return EXIT_OK


def cmd_scale(args) -> int:
    result = parse_result(_read(args.result))
    if result.kind == "1dlad":
        raise UsageError("scale-prices applies to hz and adhz results only")
    try:
        r = parse_rational(args.factor)
    except RationalFormatError as exc:
        raise UsageError(f"--factor: {exc}") from None
    ps = result.prices
    scaled = PriceSystem(scale_prices(ps.prices, r), ps.offsets, scale_prices(ps.budgets, r))
    # verdicts referred to the old prices; `verify` recomputes them on demand
    out = type(result)(
        kind=result.kind,
        allocation=result.allocation,
        prices=scaled,
        utilities=result.utilities,
        iterations=result.iterations,
        epsilon=result.epsilon,
        extra=result.extra,
    )
    _write(args.output, write_result(out))
    return EXIT_OK


def cmd_reduce(args) -> int:
    inst = _load_instance(args.input, "hz")
    _write(args.output, write_instance(hz_to_adhz(inst)))
    return EXIT_OK


def cmd_audit(args) -> int:
    inst = _load_instance(args.input, "1dlad")
    summary: AuditSummary = audit_instance(inst, exhaustive=args.exhaustive)
    doc = {
        "checked": summary.checked,
        "skipped_infeasible": summary.skipped,
        "violations": [
            {
                "agent": v["agent"],
                "report": v["report"],
                "honest": format_rational(v["honest"]),
                "misreport": format_rational(v["misreport"]),
            }
            for v in summary.violations
        ],
    }
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return EXIT_OK if summary.ok else EXIT_FAIL


# -------------------------------------------------------------------- parser


def _u64(text: str) -> int:
    value = int(text, 10)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="matchmarket", description="Exact equilibria for one-sided matching markets.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="compute an equilibrium")
    p.add_argument("--kind", required=True, choices=sorted(_KIND_TYPES))
    p.add_argument("--input", required=True)
    p.add_argument("--epsilon")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="certify a result against its instance")
    p.add_argument("--kind", required=True, choices=sorted(_KIND_TYPES))
    p.add_argument("--instance", required=True)
    p.add_argument("--result", required=True)
    p.add_argument("--epsilon")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lottery", help="decompose an allocation and draw one matching")
    p.add_argument("--result", required=True)
    p.add_argument("--seed", required=True, type=_u64)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_lottery)

    p = sub.add_parser("gen", help="generate built-in instances")
    gsub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    g = gsub.add_parser("counterexample", help="ten-agent exchange market without an exact equilibrium")
    g.add_argument("--output", default="-")
    g.set_defaults(func=cmd_gen)

    p = sub.add_parser("scale-prices", help="apply p -> 1 + r (p - 1) to prices and budgets")
    p.add_argument("--result", required=True)
    p.add_argument("--factor", required=True)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_scale)

    p = sub.add_parser("reduce", help="instance reductions")
    rsub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    r = rsub.add_parser("hz-to-adhz", help="unit-budget HZ instance to an exchange market")
    r.add_argument("--input", required=True)
    r.add_argument("--output", default="-")
    r.set_defaults(func=cmd_reduce)

    p = sub.add_parser("audit", help="strategyproofness audits")
    asub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    a = asub.add_parser("misreports", help="single-agent misreports of a 1dlad instance")
    a.add_argument("--input", required=True)
    a.add_argument("--exhaustive", action="store_true")
    a.set_defaults(func=cmd_audit)
    return parser


def run_command(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        print(f"witness goods: {list(exc.goods)} agents: {list(exc.agents)}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (OSError, MarketError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
