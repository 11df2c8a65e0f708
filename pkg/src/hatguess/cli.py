"""Command-line surface: evaluate strategies, sweep and sample worst cases,
and run the exact identity and bound checks.

Exit codes: 0 when the command ran and every checked guarantee held,
1 when a mathematical guarantee check failed, 2 on usage errors
(malformed distributions, inapplicable options, capacity limits).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

from .analysis import (
    exhaustive_worst_case,
    identity_check,
    lower_bound_loss,
    monte_carlo,
    search_optimal,
)
from .core import (
    Color,
    ContractError,
    HatGameError,
    evaluate,
    make_distribution,
)
from .strategies import (
    PartialStrategyParams,
    canonical_pairing,
    composite_strategy,
    guarantee_bound,
    majority_strategy,
    make_partition,
    pairing_strategy,
    partial_profile,
)

STRATEGY_NAMES = ("pairing", "majority", "composite", "partial")


@dataclass(frozen=True)
class RunConfig:
    command: str
    strategy: str | None = None
    n: int | None = None
    omega: str | None = None
    tie_break: str | None = None
    blue_max: int | None = None  # --a
    red_min: int | None = None   # --b
    block: str | None = None
    trials: int = 10_000
    seed: int = 0
    red_count: str | None = None
    workers: int = 1
    fmt: str = "text"


def _fmt_float(x: float) -> str:
    return f"{x:.12g}"


def _parse_block(spec_text: str) -> frozenset[int]:
    try:
        if "-" in spec_text:
            lo_s, hi_s = spec_text.split("-", 1)
            lo, hi = int(lo_s), int(hi_s)
            if lo > hi:
                raise ValueError
            return frozenset(range(lo, hi + 1))
        return frozenset(int(tok) for tok in spec_text.split(","))
    except ValueError:
        raise ContractError(
            f"cannot parse block {spec_text!r}; use 'lo-hi' or 'i,j,...'"
        ) from None


def _build_strategy(config: RunConfig, n: int):
    name = config.strategy
    if name != "majority" and config.tie_break is not None:
        raise ContractError("--tie-break applies only to the majority strategy")
    if name != "partial" and (
        config.blue_max is not None or config.red_min is not None or config.block is not None
    ):
        raise ContractError("--a, --b and --block apply only to the partial strategy")
    if name == "pairing":
        return pairing_strategy(canonical_pairing(n))
    if name == "majority":
        tie = Color(config.tie_break) if config.tie_break else Color.RED
        return majority_strategy(n, tie)
    if name == "composite":
        return composite_strategy(n)
    if config.blue_max is None or config.red_min is None or config.block is None:
        raise ContractError("the partial strategy needs --a, --b and --block")
    members = _parse_block(config.block)
    if any(p < 1 or p > n for p in members):
        raise ContractError(f"block members out of range 1..{n}")
    pairing = canonical_pairing(n).restricted_to(members)
    params = PartialStrategyParams(members, config.blue_max, config.red_min, pairing)
    return partial_profile(params, n)


def _emit(config: RunConfig, out, payload: dict, text_lines: list[str], csv_rows: list[tuple]):
    if config.fmt == "json":
        print(json.dumps(payload, indent=2), file=out)
    elif config.fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerows(csv_rows)
    else:
        for line in text_lines:
            print(line, file=out)


def _cmd_eval(config: RunConfig, out) -> int:
    if not config.omega:
        raise ContractError("eval needs --omega")
    distribution = make_distribution(config.omega)
    strategy = _build_strategy(config, distribution.n)
    record = evaluate(strategy, distribution)
    rec = record.to_json_dict()
    payload = {
        "command": "eval",
        "strategy": strategy.name,
        "n": distribution.n,
        "omega": distribution.to_text(),
        **rec,
    }
    text = [
        f"strategy: {strategy.name}",
        f"omega: {distribution.to_text()}",
        f"guesses: {rec['guesses']}",
        f"correct_count: {rec['correct_count']}",
        f"correct_set: {rec['correct_set']}",
    ]
    rows: list[tuple] = [("player", "hat", "guess", "correct")]
    for i in range(1, distribution.n + 1):
        rows.append(
            (i, distribution.to_text()[i - 1], rec["guesses"][i - 1], i in record.correct_set)
        )
    _emit(config, out, payload, text, rows)
    return 0


def _checked_bound(strategy_name: str, n: int):
    """The loss bound a sweep or sample is judged against."""
    plan = None
    if strategy_name == "composite" and n % 2 == 0 and n >= 6:
        plan = make_partition(n)
    bound = guarantee_bound(n, plan)
    theorem = bound.theorem_loss_even if n % 2 == 0 else bound.theorem_loss_general
    checked = bound.structural_loss if bound.structural_loss is not None else theorem
    return bound, theorem, checked


def _cmd_sweep(config: RunConfig, out) -> int:
    if config.n is None:
        raise ContractError("sweep needs --n")
    strategy = _build_strategy(config, config.n)
    report = exhaustive_worst_case(strategy, config.n, workers=config.workers)
    bound, theorem, checked = _checked_bound(strategy.name, config.n)
    ok = report.worst_loss <= checked
    payload = {
        "command": "sweep",
        "strategy": strategy.name,
        "n": config.n,
        "report": report.to_json_dict(),
        "structural_loss": bound.structural_loss,
        "theorem_loss_even": bound.theorem_loss_even,
        "theorem_loss_general": bound.theorem_loss_general,
        "checked_loss": checked,
        "bound_satisfied": ok,
    }
    text = [
        f"strategy: {strategy.name}",
        f"n: {config.n}",
        f"evaluated: {report.evaluated}",
        f"min_correct: {report.min_correct}",
        f"worst_loss: {report.worst_loss}",
        f"witness: {report.witness.to_text()}",
        f"total_correct: {report.total_correct}",
        f"histogram: {dict(sorted(report.histogram.items()))}",
        f"structural_loss: {bound.structural_loss}",
        f"theorem_loss_even: {_fmt_float(bound.theorem_loss_even)}",
        f"theorem_loss_general: {_fmt_float(bound.theorem_loss_general)}",
        f"checked_loss: {_fmt_float(float(checked))}",
        f"bound_satisfied: {ok}",
    ]
    _emit(config, out, payload, text, report.to_csv_rows())
    return 0 if ok else 1


def _cmd_identity(config: RunConfig, out) -> int:
    if config.n is None:
        raise ContractError("identity needs --n")
    result = identity_check(config.n)
    payload = {
        "command": "identity",
        "n": config.n,
        "lhs": result.lhs,
        "rhs": result.rhs,
        "equal": result.equal,
    }
    text = [f"n: {config.n}", f"lhs: {result.lhs}", f"rhs: {result.rhs}", f"equal: {result.equal}"]
    rows = [("n", "lhs", "rhs", "equal"), (config.n, result.lhs, result.rhs, result.equal)]
    _emit(config, out, payload, text, rows)
    return 0 if result.equal else 1


def _cmd_bounds(config: RunConfig, out) -> int:
    if config.n is None:
        raise ContractError("bounds needs --n (upper end of the even range)")
    if config.n < 6 or config.n % 2:
        raise ContractError(f"bounds needs an even --n >= 6, got {config.n}")
    rows_json = []
    all_ok = True
    for n in range(6, config.n + 1, 2):
        plan = make_partition(n)
        bound = guarantee_bound(n, plan)
        ok = bound.structural_loss <= bound.theorem_loss_even
        all_ok = all_ok and ok
        rows_json.append(
            {
                "n": n,
                "k": plan.k,
                "max_block": max(plan.block_sizes),
                "structural_loss": bound.structural_loss,
                "theorem_loss_even": bound.theorem_loss_even,
                "theorem_loss_general": bound.theorem_loss_general,
                "lower_bound_loss": lower_bound_loss(n),
            }
        )
    payload = {"command": "bounds", "n_max": config.n, "rows": rows_json, "all_within_theorem": all_ok}
    text = []
    for row in rows_json:
        text.append(
            f"n={row['n']} k={row['k']} max_block={row['max_block']} "
            f"structural_loss={row['structural_loss']} "
            f"theorem_loss_even={_fmt_float(row['theorem_loss_even'])} "
            f"theorem_loss_general={_fmt_float(row['theorem_loss_general'])} "
            f"lower_bound_loss={_fmt_float(row['lower_bound_loss'])}"
        )
    text.append(f"all_within_theorem: {all_ok}")
    csv_rows: list[tuple] = [
        (
            "n",
            "k",
            "max_block",
            "structural_loss",
            "theorem_loss_even",
            "theorem_loss_general",
            "lower_bound_loss",
        )
    ]
    for row in rows_json:
        csv_rows.append(
            (
                row["n"],
                row["k"],
                row["max_block"],
                row["structural_loss"],
                _fmt_float(row["theorem_loss_even"]),
                _fmt_float(row["theorem_loss_general"]),
                _fmt_float(row["lower_bound_loss"]),
            )
        )
    _emit(config, out, payload, text, csv_rows)
    return 0 if all_ok else 1


def _cmd_search_optimal(config: RunConfig, out) -> int:
    if config.n is None:
        raise ContractError("search-optimal needs --n")
    report = search_optimal(config.n)
    payload = {
        "command": "search-optimal",
        "n": report.n,
        "best_min_correct": report.best_min_correct,
        "best_worst_loss": report.best_worst_loss,
        "strategies_enumerated": report.strategies_enumerated,
    }
    text = [
        f"n: {report.n}",
        f"best_min_correct: {report.best_min_correct}",
        f"best_worst_loss: {report.best_worst_loss}",
        f"strategies_enumerated: {report.strategies_enumerated}",
    ]
    rows = [
        ("n", "best_min_correct", "best_worst_loss", "strategies_enumerated"),
        (report.n, report.best_min_correct, report.best_worst_loss, report.strategies_enumerated),
    ]
    _emit(config, out, payload, text, rows)
    return 0


def _cmd_sample(config: RunConfig, out) -> int:
    if config.n is None:
        raise ContractError("sample needs --n")
    strategy = _build_strategy(config, config.n)
    report = monte_carlo(
        strategy,
        config.n,
        trials=config.trials,
        red_count=config.red_count,
        seed=config.seed,
        workers=config.workers,
    )
    bound, theorem, _ = _checked_bound(strategy.name, config.n)
    ok = report.worst_loss <= theorem
    payload = {
        "command": "sample",
        "strategy": strategy.name,
        "n": config.n,
        "trials": config.trials,
        "seed": config.seed,
        "red_count": "uniform" if config.red_count in (None, "uniform") else int(config.red_count),
        "report": report.to_json_dict(),
        "theorem_loss": theorem,
        "bound_satisfied": ok,
    }
    text = [
        f"strategy: {strategy.name}",
        f"n: {config.n}",
        f"trials: {config.trials}",
        f"seed: {config.seed}",
        f"red_count: {payload['red_count']}",
        f"min_correct: {report.min_correct}",
        f"worst_loss: {report.worst_loss}",
        f"witness: {report.witness.to_text()}",
        f"theorem_loss: {_fmt_float(theorem)}",
        f"bound_satisfied: {ok}",
    ]
    _emit(config, out, payload, text, report.to_csv_rows())
    return 0 if ok else 1


def _cmd_plan(config: RunConfig, out) -> int:
    if config.n is None:
        raise ContractError("plan needs --n")
    plan = make_partition(config.n)
    payload = plan.to_json_dict()
    text = [
        f"n: {payload['n']}",
        f"k: {payload['k']}",
        f"l: {payload['l']}",
        f"block_sizes: {payload['block_sizes']}",
        f"blocks: {payload['blocks']}",
    ]
    rows: list[tuple] = [("block", "size", "first", "last")]
    for idx, block in enumerate(plan.blocks, start=1):
        rows.append((idx, len(block), block[0], block[-1]))
    _emit(config, out, payload, text, rows)
    return 0


_HANDLERS = {
    "eval": _cmd_eval,
    "sweep": _cmd_sweep,
    "identity": _cmd_identity,
    "bounds": _cmd_bounds,
    "search-optimal": _cmd_search_optimal,
    "sample": _cmd_sample,
    "plan": _cmd_plan,
}


def _add_format(sp) -> None:
    sp.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="text")


def _add_strategy_options(sp) -> None:
    sp.add_argument("--strategy", choices=STRATEGY_NAMES, required=True)
    sp.add_argument("--tie-break", dest="tie_break", choices=("R", "B"), default=None)
    sp.add_argument("--a", dest="blue_max", type=int, default=None)
    sp.add_argument("--b", dest="red_min", type=int, default=None)
    sp.add_argument("--block", default=None, help="partial block as 'lo-hi' or 'i,j,...'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hatguess",
        description="Strategies and exhaustive verification for the simultaneous hat-guessing game.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="run one strategy on one distribution")
    _add_strategy_options(p)
    p.add_argument("--omega", required=True, help="hat distribution as an {R,B} string")
    _add_format(p)

    p = sub.add_parser("sweep", help="exhaustive worst-case report over all 2^n distributions")
    _add_strategy_options(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    _add_format(p)

    p = sub.add_parser("identity", help="exact binomial-sum identity check")
    p.add_argument("--n", type=int, required=True)
    _add_format(p)

    p = sub.add_parser("bounds", help="loss-bound table for even n from 6 up to --n")
    p.add_argument("--n", type=int, required=True)
    _add_format(p)

    p = sub.add_parser("search-optimal", help="enumerate every strategy profile (n <= 3)")
    p.add_argument("--n", type=int, required=True)
    _add_format(p)

    p = sub.add_parser("sample", help="seeded Monte Carlo worst-case report")
    _add_strategy_options(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--red-count", dest="red_count", default=None,
                   help="fix the number of red hats (default: uniform over all distributions)")
    p.add_argument("--workers", type=int, default=1)
    _add_format(p)

    p = sub.add_parser("plan", help="partition plan used by the composite strategy")
    p.add_argument("--n", type=int, required=True)
    _add_format(p)

    return parser


def config_from_namespace(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        strategy=getattr(ns, "strategy", None),
        n=getattr(ns, "n", None),
        omega=getattr(ns, "omega", None),
        tie_break=getattr(ns, "tie_break", None),
        blue_max=getattr(ns, "blue_max", None),
        red_min=getattr(ns, "red_min", None),
        block=getattr(ns, "block", None),
        trials=getattr(ns, "trials", 10_000),
        seed=getattr(ns, "seed", 0),
        red_count=getattr(ns, "red_count", None),
        workers=getattr(ns, "workers", 1),
        fmt=getattr(ns, "fmt", "text"),
    )


def run(config: RunConfig, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        return _HANDLERS[config.command](config, out)
    except HatGameError as exc:
        print(f"error: {exc}", file=err)
        return 2


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    return run(config_from_namespace(ns))


if __name__ == "__main__":
    sys.exit(main())
