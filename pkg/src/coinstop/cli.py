"""Command-line front end.

Subcommands expose every computation in the package and emit figure-ready
data: ``expectation``, ``sweep``, ``pmf``, ``moments``, ``simulate``, and
``bench``.  Probabilities are given exactly, either as a fraction ``A/B`` or
as a decimal literal (converted to the exact rational it denotes).

Exit codes: 0 on success, 2 on usage errors (bad flags), 3 on domain errors
(bias outside (0,1), targets below 1, and similar).

Output formats: ``text`` for humans, ``csv`` (RFC 4180, header row) for
plotting, and ``json`` with the envelope
``{"schema_version", "command", "params", "results"}``.  Exact values are
emitted as ``numerator/denominator`` strings next to their decimal
rendering, so JSON output round-trips without loss.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import __version__
from .exact import DomainError, Rational, to_decimal
from .pgf import (
    DEFAULT_EPSILON,
    CoinSpec,
    GoalSpec,
    Pmf,
    StopRule,
    pmf_and,
    pmf_or,
)
from .duration import (
    Method,
    catalan_sum_or,
    closed_form_balanced,
    expectation_direct,
    expectation_recurrence,
)
from .moments import halfnormal_scaled_moment, moment_table
from .montecarlo import (
    SimConfig,
    experiment_t1_t2,
    experiment_wald,
    experiment_xy,
    simulate,
)

SCHEMA_VERSION = "1"
SEED_ENV_VAR = "COINSTOP_SEED"
DEFAULT_SEED = 0


def _rational_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(
            f"not a rational number: {text!r} (use A/B or a decimal)"
        ) from exc


def _int_arg(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc


def _rule_arg(text: str) -> StopRule:
    try:
        return StopRule(text.lower())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"rule must be 'or' or 'and', got {text!r}"
        ) from exc


def _resolve_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise DomainError(f"{SEED_ENV_VAR} must be an integer, got {env!r}")


def _num(value: Rational, digits: int) -> dict[str, Any]:
    """JSON view of an exact value: exact string, rendering, and precision."""
    return {
        "exact": str(Fraction(value)),
        "decimal": to_decimal(value, digits),
        "float": float(value),
        "digits": digits,
    }


def _emit_json(command: str, params: dict[str, Any], results: Any) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "results": results,
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _emit_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())


# ----------------------------------------------------------------- expectation


def _method_value(
    coin: CoinSpec, rule: StopRule, n: int, m: int, method: str
) -> tuple[Rational, str]:
    if method == "recurrence":
        return expectation_recurrence(coin, rule, n, m).value, method
    if method == "direct":
        return expectation_direct(coin, rule, n, m).value, method
    if method == "catalan":
        if rule is not StopRule.OR or n != m:
            raise DomainError(
                "the catalan method applies to the OR rule with equal targets"
            )
        return catalan_sum_or(coin, n), method
    if method == "closed":
        a = coin.p.numerator
        b = coin.p.denominator - a
        if n % a or m % b or n // a != m // b:
            raise DomainError(
                "the closed method needs targets (a*k, b*k) with p = a/(a+b); "
                f"got heads={n}, tails={m}, p={coin.p}"
            )
        return closed_form_balanced(a, b, n // a, rule), method
    raise DomainError(f"unknown method {method!r}")


def _cmd_expectation(args: argparse.Namespace) -> int:
    coin = CoinSpec(args.p)
    goal = GoalSpec(args.rule, args.heads, args.tails)
    value, method = _method_value(
        coin, goal.rule, goal.n_heads, goal.m_tails, args.method
    )
    params = {
        "rule": goal.rule.value,
        "heads": goal.n_heads,
        "tails": goal.m_tails,
        "p": str(coin.p),
        "method": method,
        "digits": args.digits,
    }
    if args.format == "json":
        _emit_json("expectation", params, {"value": _num(value, args.digits)})
    elif args.format == "csv":
        _emit_csv(
            ["rule", "heads", "tails", "p", "method", "expectation"],
            [
                [
                    goal.rule.value,
                    goal.n_heads,
                    goal.m_tails,
                    str(coin.p),
                    method,
                    to_decimal(value, args.digits),
                ]
            ],
        )
    else:
        print(to_decimal(value, args.digits))
    return 0


# ----------------------------------------------------------------------- sweep


def _sweep_point(packed: tuple[str, str, int, int, str]) -> tuple[str, str]:
    rule_value, p_text, heads, tails, method = packed
    coin = CoinSpec(Fraction(p_text))
    value, _ = _method_value(
        coin, StopRule(rule_value), heads, tails, method
    )
    return p_text, str(value)


def _cmd_sweep(args: argparse.Namespace) -> int:
    rule: StopRule = args.rule
    GoalSpec(rule, args.heads, args.tails)  # validates targets
    p_from, p_to = args.p_from, args.p_to
    if args.steps < 1:
        raise DomainError(f"steps must be >= 1, got {args.steps}")
    if not (0 < p_from < 1 and 0 < p_to < 1 and p_from < p_to):
        raise DomainError(
            f"need 0 < p-from < p-to < 1, got {p_from} and {p_to}"
        )
    step = (p_to - p_from) / args.steps
    grid = [p_from + i * step for i in range(args.steps + 1)]
    tasks = [
        (rule.value, str(p), args.heads, args.tails, args.method) for p in grid
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            points = list(pool.map(_sweep_point, tasks))
    else:
        points = [_sweep_point(t) for t in tasks]
    pairs = [(Fraction(p_text), Fraction(v_text)) for p_text, v_text in points]
    params = {
        "rule": rule.value,
        "heads": args.heads,
        "tails": args.tails,
        "p_from": str(p_from),
        "p_to": str(p_to),
        "steps": args.steps,
        "method": args.method,
        "digits": args.digits,
    }
    if args.format == "json":
        _emit_json(
            "sweep",
            params,
            {
                "rows": [
                    {"p": _num(p, args.digits), "expectation": _num(v, args.digits)}
                    for p, v in pairs
                ]
            },
        )
    else:
        _emit_csv(
            ["p", "expectation"],
            [
                [to_decimal(p, args.digits), to_decimal(v, args.digits)]
                for p, v in pairs
            ],
        )
    return 0


# ------------------------------------------------------------------------- pmf


def _build_pmf(args: argparse.Namespace) -> tuple[Pmf, CoinSpec, GoalSpec]:
    coin = CoinSpec(args.p)
    goal = GoalSpec(args.rule, args.heads, args.tails)
    if goal.rule is StopRule.OR:
        pmf = pmf_or(coin, goal.n_heads, goal.m_tails)
    else:
        pmf = pmf_and(coin, goal.n_heads, goal.m_tails, args.epsilon)
    return pmf, coin, goal


def _cmd_pmf(args: argparse.Namespace) -> int:
    pmf, coin, goal = _build_pmf(args)
    mean = pmf.mean()
    var = pmf.variance()
    standardized = None
    if args.standardized:
        if var <= 0:
            raise DomainError("standardized coordinates need positive variance")
        mu = float(mean)
        sigma = float(var) ** 0.5
        standardized = [(k - mu) / sigma for k, _ in pmf.items()]
    params = {
        "rule": goal.rule.value,
        "heads": goal.n_heads,
        "tails": goal.m_tails,
        "p": str(coin.p),
        "standardized": bool(args.standardized),
        "digits": args.digits,
    }
    if goal.rule is StopRule.AND:
        params["epsilon"] = str(Fraction(args.epsilon))
    if args.format == "json":
        rows = []
        for i, (k, v) in enumerate(pmf.items()):
            row: dict[str, Any] = {"k": k, "probability": _num(v, args.digits)}
            if standardized is not None:
                row["standardized"] = standardized[i]
            rows.append(row)
        results = {
            "support_min": pmf.support_min,
            "support_max": pmf.support_max,
            "truncated": pmf.truncated,
            "tail_mass_bound": str(pmf.tail_mass_bound),
            "mean": _num(mean, args.digits),
            "variance": _num(var, args.digits),
            "rows": rows,
        }
        _emit_json("pmf", params, results)
    else:
        header = ["k", "probability", "probability_float"]
        if standardized is not None:
            header.append("standardized")
        rows = []
        for i, (k, v) in enumerate(pmf.items()):
            row = [k, str(v), repr(float(v))]
            if standardized is not None:
                row.append(repr(standardized[i]))
            rows.append(row)
        _emit_csv(header, rows)
    return 0


# --------------------------------------------------------------------- moments


_MOMENT_KINDS = ("factorial", "raw", "central", "scaled")


def _cmd_moments(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise DomainError(f"n must be >= 1, got {args.n}")
    if args.max_order < 1:
        raise DomainError(f"max-order must be >= 1, got {args.max_order}")
    order = max(args.max_order, 2)
    table = moment_table(args.n, order)
    kind = args.kind
    if kind == "scaled" and table.scaled is None:
        raise DomainError(
            "scaled moments are undefined at n = 1 (zero variance)"
        )
    params = {
        "n": args.n,
        "max_order": args.max_order,
        "kind": kind,
        "compare_halfnormal": bool(args.compare_halfnormal),
        "digits": args.digits,
    }
    orders = list(range(1, args.max_order + 1))
    if kind == "scaled":
        values: list[Any] = [table.scaled[r] for r in orders]
    else:
        exact = {
            "factorial": table.factorial,
            "raw": table.raw,
            "central": table.central,
        }[kind]
        values = [exact[r] for r in orders]
    references: Optional[list[float]] = None
    if args.compare_halfnormal:
        references = [
            0.0 if r == 1 else 1.0 if r == 2 else halfnormal_scaled_moment(r)
            for r in orders
        ]
    if args.format == "json":
        rows = []
        for i, r in enumerate(orders):
            row: dict[str, Any] = {"order": r}
            if kind == "scaled":
                row["value"] = values[i]
            else:
                row["value"] = _num(values[i], args.digits)
            if references is not None:
                row["reference"] = references[i]
                row["deviation"] = (
                    float(values[i]) - references[i]
                )
            rows.append(row)
        results = {
            "mean": _num(table.mean, args.digits),
            "variance": _num(table.variance, args.digits),
            "rows": rows,
        }
        _emit_json("moments", params, results)
    elif args.format == "csv":
        header = ["order", "value"]
        if references is not None:
            header += ["reference", "deviation"]
        rows = []
        for i, r in enumerate(orders):
            val = (
                repr(values[i])
                if kind == "scaled"
                else to_decimal(values[i], args.digits)
            )
            row = [r, val]
            if references is not None:
                row += [repr(references[i]), repr(float(values[i]) - references[i])]
            rows.append(row)
        _emit_csv(header, rows)
    else:
        for i, r in enumerate(orders):
            if kind == "scaled":
                line = f"{r}: {values[i]!r}"
            else:
                line = f"{r}: {values[i]} ({to_decimal(values[i], args.digits)})"
            if references is not None:
                dev = float(values[i]) - references[i]
                line += f"  reference={references[i]!r} deviation={dev!r}"
            print(line)
    return 0


# -------------------------------------------------------------------- simulate


def _cmd_simulate(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    if args.experiment is None:
        _require(args, "rule", "heads", "tails", "p")
        config = SimConfig(
            coin=CoinSpec(args.p),
            goal=GoalSpec(args.rule, args.heads, args.tails),
            trials=args.trials,
            seed=seed,
            chunk_size=args.chunk_size,
        )
        summary = simulate(config)
        params = {
            "rule": config.goal.rule.value,
            "heads": config.goal.n_heads,
            "tails": config.goal.m_tails,
            "p": str(config.coin.p),
            "trials": config.trials,
            "seed": config.seed,
            "chunk_size": config.chunk_size,
        }
        if args.format == "json":
            doc = asdict(summary)
            doc["histogram"] = {str(k): v for k, v in sorted(summary.histogram.items())}
            _emit_json("simulate", params, doc)
        elif args.format == "csv":
            _emit_csv(
                ["stop", "count"],
                sorted(summary.histogram.items()),
            )
        else:
            print(f"trials: {summary.trials}")
            print(f"mean: {summary.mean!r}")
            print(f"variance: {summary.variance!r}")
            print(f"se_mean: {summary.se_mean!r}")
            print(f"margin_mean: {summary.margin_mean!r}")
            moms = " ".join(f"{v:.6g}" for v in summary.standardized_moments)
            print(f"standardized_moments_1_to_8: {moms}")
            print(f"distinct_stops: {len(summary.histogram)}")
        return 0

    if args.experiment in ("t1t2", "xy"):
        if args.n is None:
            raise DomainError(f"--n is required for the {args.experiment} experiment")
        if args.experiment == "t1t2":
            report: Any = experiment_t1_t2(args.n, args.trials, seed, args.chunk_size)
        else:
            report = experiment_xy(args.n, args.trials, seed, args.chunk_size)
        params = {
            "experiment": args.experiment,
            "n": args.n,
            "trials": args.trials,
            "seed": seed,
        }
    else:  # wald
        _require(args, "heads", "tails", "p")
        report = experiment_wald(
            CoinSpec(args.p), args.heads, args.tails, args.trials, seed,
            args.chunk_size,
        )
        params = {
            "experiment": "wald",
            "heads": args.heads,
            "tails": args.tails,
            "p": str(Fraction(args.p)),
            "trials": args.trials,
            "seed": seed,
        }
    if args.format == "json":
        _emit_json("simulate", params, asdict(report))
    else:
        for key, value in asdict(report).items():
            print(f"{key}: {value!r}")
    return 0


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise DomainError(f"missing required flags for this mode: {flags}")


# ----------------------------------------------------------------------- bench


def _cmd_bench(args: argparse.Namespace) -> int:
    if args.suite != "seven-values":
        raise DomainError(f"unknown suite {args.suite!r}")
    coin = CoinSpec(args.p)
    cases = [(100 * i, 200 * i) for i in range(1, 8)]
    timings: dict[str, float] = {}
    values: dict[str, dict[str, list[Rational]]] = {}
    for method_name, fn in (
        ("recurrence", expectation_recurrence),
        ("direct", expectation_direct),
    ):
        t0 = time.perf_counter()
        per_rule: dict[str, list[Rational]] = {}
        for rule in (StopRule.OR, StopRule.AND):
            per_rule[rule.value] = [fn(coin, rule, n, m).value for n, m in cases]
        timings[method_name] = time.perf_counter() - t0
        values[method_name] = per_rule
    agree = values["recurrence"] == values["direct"]
    speedup = timings["direct"] / timings["recurrence"]
    rendered = {
        rule: [to_decimal(v, args.digits) for v in vals]
        for rule, vals in values["recurrence"].items()
    }
    params = {"suite": args.suite, "p": str(coin.p), "digits": args.digits}
    if args.format == "json":
        results = {
            "cases": [{"heads": n, "tails": m} for n, m in cases],
            "values": {
                rule: [_num(v, args.digits) for v in vals]
                for rule, vals in values["recurrence"].items()
            },
            "seconds": timings,
            "speedup": speedup,
            "values_match": agree,
        }
        _emit_json("bench", params, results)
    else:
        print(f"suite: {args.suite} (p = {coin.p})")
        for rule in ("or", "and"):
            print(f"{rule}: [{', '.join(rendered[rule])}]")
        print(f"recurrence_seconds: {timings['recurrence']:.6f}")
        print(f"direct_seconds: {timings['direct']:.6f}")
        print(f"speedup: {speedup:.2f}x")
        print(f"values_match: {agree}")
    return 0 if agree else 1


# ---------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coinstop",
        description=(
            "Exact distributions, expectations, and moments of coin-toss "
            "stopping times (n heads OR/AND m tails)."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, formats: tuple[str, ...],
                   default_format: str) -> None:
        p.add_argument("--digits", type=_int_arg, default=10,
                       help="significant digits for rendered values")
        p.add_argument("--format", choices=formats, default=default_format)

    p_exp = sub.add_parser("expectation", help="expected number of tosses")
    p_exp.add_argument("--rule", type=_rule_arg, required=True)
    p_exp.add_argument("--heads", type=_int_arg, required=True)
    p_exp.add_argument("--tails", type=_int_arg, required=True)
    p_exp.add_argument("--p", type=_rational_arg, required=True)
    p_exp.add_argument(
        "--method",
        choices=("recurrence", "direct", "closed", "catalan"),
        default="recurrence",
    )
    add_common(p_exp, ("text", "json", "csv"), "text")
    p_exp.set_defaults(func=_cmd_expectation)

    p_sweep = sub.add_parser(
        "sweep", help="expectation as a function of the bias"
    )
    p_sweep.add_argument("--rule", type=_rule_arg, required=True)
    p_sweep.add_argument("--heads", type=_int_arg, required=True)
    p_sweep.add_argument("--tails", type=_int_arg, required=True)
    p_sweep.add_argument("--p-from", type=_rational_arg, default=Fraction(1, 10))
    p_sweep.add_argument("--p-to", type=_rational_arg, default=Fraction(9, 10))
    p_sweep.add_argument("--steps", type=_int_arg, required=True)
    p_sweep.add_argument(
        "--method", choices=("recurrence", "direct"), default="recurrence"
    )
    p_sweep.add_argument("--jobs", type=_int_arg, default=1)
    add_common(p_sweep, ("csv", "json"), "csv")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_pmf = sub.add_parser("pmf", help="exact probability mass function")
    p_pmf.add_argument("--rule", type=_rule_arg, required=True)
    p_pmf.add_argument("--heads", type=_int_arg, required=True)
    p_pmf.add_argument("--tails", type=_int_arg, required=True)
    p_pmf.add_argument("--p", type=_rational_arg, required=True)
    p_pmf.add_argument(
        "--epsilon",
        type=_rational_arg,
        default=DEFAULT_EPSILON,
        help="AND-rule tail mass threshold (default 2**-40)",
    )
    p_pmf.add_argument("--standardized", action="store_true",
                       help="add a (k - mean)/sd column")
    add_common(p_pmf, ("csv", "json"), "csv")
    p_pmf.set_defaults(func=_cmd_pmf)

    p_mom = sub.add_parser(
        "moments", help="moment table of the fair symmetric OR time"
    )
    p_mom.add_argument("--n", type=_int_arg, required=True)
    p_mom.add_argument("--max-order", type=_int_arg, default=50)
    p_mom.add_argument("--kind", choices=_MOMENT_KINDS, default="scaled")
    p_mom.add_argument("--compare-halfnormal", action="store_true")
    add_common(p_mom, ("text", "json", "csv"), "text")
    p_mom.set_defaults(func=_cmd_moments)

    p_sim = sub.add_parser("simulate", help="seeded Monte Carlo runs")
    p_sim.add_argument("--rule", type=_rule_arg)
    p_sim.add_argument("--heads", type=_int_arg)
    p_sim.add_argument("--tails", type=_int_arg)
    p_sim.add_argument("--p", type=_rational_arg)
    p_sim.add_argument("--trials", type=_int_arg, required=True)
    p_sim.add_argument(
        "--seed",
        type=_int_arg,
        default=None,
        help=f"defaults to ${SEED_ENV_VAR}, then {DEFAULT_SEED}",
    )
    p_sim.add_argument("--chunk-size", type=_int_arg, default=16384)
    p_sim.add_argument(
        "--experiment", choices=("t1t2", "xy", "wald"), default=None
    )
    p_sim.add_argument("--n", type=_int_arg, default=None,
                       help="target for the t1t2/xy experiments")
    add_common(p_sim, ("text", "json", "csv"), "text")
    p_sim.set_defaults(func=_cmd_simulate)

    p_bench = sub.add_parser(
        "bench", help="recurrence vs direct-summation benchmark"
    )
    p_bench.add_argument("--suite", choices=("seven-values",), required=True)
    p_bench.add_argument("--p", type=_rational_arg, default=Fraction(1, 3))
    add_common(p_bench, ("text", "json"), "text")
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
