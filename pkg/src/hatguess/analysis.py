"""Exhaustive and sampled verification of strategy guarantees.

Sweeps walk every distribution of n hats (or a seeded sample of them),
score a strategy on each, and reduce to a worst-case report: the minimum
correct count, the worst shortfall below max{r, b} with a witness, a
histogram, and the exact total over all distributions.  Chunks of the
sweep merge associatively, so splitting the index range across worker
processes cannot change the result.

Alongside the sweeps sit the exact combinatorial checks: the averaging
identity (every no-peek strategy totals n * 2^(n-1) correct guesses over
all distributions), its binomial-sum form, the central-binomial floor
behind the impossibility bound, and a complete strategy-space search for
game sizes small enough to enumerate.

Exact integer arithmetic everywhere a claim is an identity; floating
point only for the transcendental bound formulas.
"""

from __future__ import annotations

import math
import pickle
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from multiprocessing import get_context
from typing import NamedTuple

from .core import (
    CapacityError,
    ContractError,
    HatDistribution,
    StrategyProfile,
    evaluate,
    full_mask,
)

EXHAUSTIVE_MAX_N = 24
EXACT_TOTAL_MAX_N = 14
SEARCH_MAX_N = 3

_SAMPLE_CHUNK = 1024  # fixed so reports do not depend on the worker count


@dataclass(frozen=True)
class WorstCaseReport:
    """Outcome of evaluating one strategy over many distributions."""

    strategy_name: str
    n: int
    mode: str  # "exhaustive" | "sampled"
    min_correct: int
    worst_loss: int
    witness: HatDistribution
    histogram: dict[int, int]
    total_correct: int | None
    evaluated: int

    def to_json_dict(self) -> dict:
        d = {
            "strategy": self.strategy_name,
            "n": self.n,
            "mode": self.mode,
            "evaluated": self.evaluated,
            "min_correct": self.min_correct,
            "worst_loss": self.worst_loss,
            "witness": self.witness.to_text(),
            "histogram": {str(c): k for c, k in sorted(self.histogram.items())},
        }
        if self.total_correct is not None:
            d["total_correct"] = self.total_correct
        return d

    def to_csv_rows(self) -> list[tuple]:
        rows: list[tuple] = [("correct_count", "omega_count")]
        rows.extend((c, k) for c, k in sorted(self.histogram.items()))
        return rows


class _Partial(NamedTuple):
    """Mergeable piece of a sweep; merge in index order."""

    min_correct: int
    worst_loss: int
    witness_red_mask: int
    histogram: list[int]
    total: int
    evaluated: int


def _merge_partials(first: _Partial, second: _Partial) -> _Partial:
    hist = [a + b for a, b in zip(first.histogram, second.histogram)]
    worst, witness = first.worst_loss, first.witness_red_mask
    if second.worst_loss > worst:  # ties keep the earlier witness
        worst, witness = second.worst_loss, second.witness_red_mask
    return _Partial(
        min(first.min_correct, second.min_correct),
        worst,
        witness,
        hist,
        first.total + second.total,
        first.evaluated + second.evaluated,
    )


def _correct_count(strategy: StrategyProfile, red_mask: int, n: int, full: int) -> int:
    bulk = strategy.bulk
    if bulk is not None:
        return (~(bulk(red_mask) ^ red_mask) & full).bit_count()
    return evaluate(strategy, HatDistribution(n, red_mask)).correct_count


def _sweep_chunk(payload: tuple[StrategyProfile, int, int, int]) -> _Partial:
    """Score every distribution with index in [lo, hi).

    Index bit i-1 set means player i wears blue, so the sweep starts from
    the all-red distribution; ties in worst loss keep the earliest index.
    """
    strategy, n, lo, hi = payload
    full = full_mask(n)
    hist = [0] * (n + 1)
    min_correct = n + 1
    worst_loss = -1
    witness = 0
    total = 0
    for idx in range(lo, hi):
        red_mask = idx ^ full
        cor = _correct_count(strategy, red_mask, n, full)
        total += cor
        hist[cor] += 1
        if cor < min_correct:
            min_correct = cor
        r = red_mask.bit_count()
        loss = max(r, n - r) - cor
        if loss > worst_loss:
            worst_loss = loss
            witness = red_mask
    return _Partial(min_correct, worst_loss, witness, hist, total, hi - lo)


def _run_chunks(payloads: list[tuple], worker, workers: int) -> _Partial:
    if workers > 1 and len(payloads) > 1 and _picklable(payloads[0][0]):
        try:
            ctx = get_context("fork")
        except ValueError:
            ctx = None
        if ctx is not None:
            with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
                parts = list(pool.map(worker, payloads))
            result = parts[0]
            for part in parts[1:]:
                result = _merge_partials(result, part)
            return result
    result = worker(payloads[0])
    for payload in payloads[1:]:
        result = _merge_partials(result, worker(payload))
    return result


def _picklable(obj) -> bool:
    try:
        pickle.dumps(obj)
        return True
    except Exception:
        return False


def exhaustive_worst_case(
    strategy: StrategyProfile, n: int, workers: int = 1
) -> WorstCaseReport:
    """Evaluate ``strategy`` on every one of the 2^n distributions."""
    if strategy.n != n:
        raise ContractError(f"strategy is for n={strategy.n}, asked to sweep n={n}")
    if n > EXHAUSTIVE_MAX_N:
        raise CapacityError(
            f"2^{n} distributions exceed the exhaustive range "
            f"(n <= {EXHAUSTIVE_MAX_N}); use monte_carlo for sampled checks"
        )
    count = 1 << n
    if workers > 1:
        step = max(1024, -(-count // (workers * 4)))
    else:
        step = count
    payloads = [(strategy, n, lo, min(lo + step, count)) for lo in range(0, count, step)]
    part = _run_chunks(payloads, _sweep_chunk, workers)
    return WorstCaseReport(
        strategy_name=strategy.name,
        n=n,
        mode="exhaustive",
        min_correct=part.min_correct,
        worst_loss=part.worst_loss,
        witness=HatDistribution(n, part.witness_red_mask),
        histogram={c: k for c, k in enumerate(part.histogram) if k},
        total_correct=part.total,
        evaluated=part.evaluated,
    )


def total_correct_over_omega(strategy: StrategyProfile, n: int) -> int:
    """Sum of correct guesses over all 2^n distributions, exactly.

    Computed through the per-player view path (not the bulk fast path) so
    it stays an independent check on the sweeps.  Equals n * 2^(n-1) for
    every strategy that never peeks: flipping a player's own hat toggles
    that player's correctness, pairing up the distribution space.
    """
    if strategy.n != n:
        raise ContractError(f"strategy is for n={strategy.n}, asked about n={n}")
    if n > EXACT_TOTAL_MAX_N:
        raise CapacityError(
            f"exact total over 2^{n} distributions via the per-player path "
            f"is capped at n <= {EXACT_TOTAL_MAX_N}"
        )
    total = 0
    for red_mask in range(1 << n):
        total += evaluate(strategy, HatDistribution(n, red_mask)).correct_count
    return total


class IdentityResult(NamedTuple):
    lhs: int
    rhs: int
    equal: bool


def identity_check(n: int) -> IdentityResult:
    """Exact check of sum over i != n/2 of C(n,i) * max{i, n-i} = 2^n * n/2.

    The left side is what the majority strategy totals over all
    distributions (it scores max{i, n-i} off balance and 0 at i = n/2);
    the right side is the strategy-independent total.
    """
    if n < 2 or n % 2:
        raise ContractError(f"identity needs a positive even n, got {n}")
    lhs = sum(math.comb(n, i) * max(i, n - i) for i in range(n + 1) if i != n // 2)
    rhs = (1 << n) * n // 2
    return IdentityResult(lhs, rhs, lhs == rhs)


def lower_bound_loss(n: int) -> float:
    """sqrt(n/(2*pi)) * exp(-1/(3n)) - 1: the loss below max{r,b} that no
    strategy can avoid on every distribution.  Negative (vacuous) for
    small n; reported as-is."""
    if n < 1:
        raise ContractError(f"need n >= 1, got {n}")
    return math.sqrt(n / (2 * math.pi)) * math.exp(-1 / (3 * n)) - 1


def robbins_check(n: int) -> bool:
    """Exact C(n, n/2) against the floor 2^n * sqrt(2/(pi*n)) * exp(-1/(3n)).

    The exact central binomial is a big integer; only the floor formula is
    floating point.  Python compares int to float exactly.
    """
    if n < 2 or n % 2:
        raise ContractError(f"need a positive even n, got {n}")
    bound = (1 << n) * math.sqrt(2 / (math.pi * n)) * math.exp(-1 / (3 * n))
    return math.comb(n, n // 2) >= bound


@dataclass(frozen=True)
class OptimalReport:
    """Optima over the complete strategy space of a tiny game."""

    n: int
    best_min_correct: int
    best_worst_loss: int
    strategies_enumerated: int


def _view_key(red_mask: int, player_pos: int) -> int:
    """Pack the other players' bits into a dense key (lower players first)."""
    low = red_mask & ((1 << player_pos) - 1)
    high = (red_mask >> (player_pos + 1)) << player_pos
    return low | high


def search_optimal(n: int) -> OptimalReport:
    """Enumerate every strategy profile and return both worst-case optima.

    Each player's rule is a truth table over their 2^(n-1) possible views,
    so the space holds (2^(2^(n-1)))^n profiles and no-peek holds by
    construction.  Feasible only for n <= 3.
    """
    if n < 1:
        raise ContractError(f"need n >= 1, got {n}")
    if n > SEARCH_MAX_N:
        raise CapacityError(
            f"strategy space has (2^(2^{n - 1}))^{n} profiles; capped at n <= {SEARCH_MAX_N}"
        )
    views = 1 << (n - 1)
    keys = [
        [_view_key(red_mask, pos) for pos in range(n)] for red_mask in range(1 << n)
    ]
    losses = [
        max(r.bit_count(), n - r.bit_count()) for r in range(1 << n)
    ]
    best_min = -1
    best_loss = n + 1
    enumerated = 0
    for tables in product(range(1 << views), repeat=n):
        enumerated += 1
        low = n + 1
        high_loss = -1
        for red_mask in range(1 << n):
            key_row = keys[red_mask]
            cor = 0
            for pos in range(n):
                if (tables[pos] >> key_row[pos]) & 1 == (red_mask >> pos) & 1:
                    cor += 1
            if cor < low:
                low = cor
            loss = losses[red_mask] - cor
            if loss > high_loss:
                high_loss = loss
        if low > best_min:
            best_min = low
        if high_loss < best_loss:
            best_loss = high_loss
    return OptimalReport(n, best_min, best_loss, enumerated)


def _child_seed(seed: int, chunk_index: int) -> int:
    # arithmetic derivation keeps substreams independent of worker layout
    return (seed * 1_000_003 + 0x9E3779B9 * (chunk_index + 1)) & 0xFFFFFFFFFFFFFFFF


def _random_red_mask(rng: random.Random, n: int, red_count: int | None) -> int:
    if red_count is None:
        return rng.getrandbits(n)
    # seeded shuffle of a fixed-composition sequence, realized as a sampled
    # position set for the minority color
    if red_count <= n - red_count:
        mask = 0
        for pos in rng.sample(range(n), red_count):
            mask |= 1 << pos
        return mask
    mask = 0
    for pos in rng.sample(range(n), n - red_count):
        mask |= 1 << pos
    return full_mask(n) ^ mask


def _sample_chunk(
    payload: tuple[StrategyProfile, int, int | None, int, int, int]
) -> _Partial:
    strategy, n, red_count, seed, chunk_index, count = payload
    rng = random.Random(_child_seed(seed, chunk_index))
    full = full_mask(n)
    hist = [0] * (n + 1)
    min_correct = n + 1
    worst_loss = -1
    witness = 0
    total = 0
    for _ in range(count):
        red_mask = _random_red_mask(rng, n, red_count)
        cor = _correct_count(strategy, red_mask, n, full)
        total += cor
        hist[cor] += 1
        if cor < min_correct:
            min_correct = cor
        r = red_mask.bit_count()
        loss = max(r, n - r) - cor
        if loss > worst_loss:
            worst_loss = loss
            witness = red_mask
    return _Partial(min_correct, worst_loss, witness, hist, total, count)


def monte_carlo(
    strategy: StrategyProfile,
    n: int,
    trials: int,
    red_count: int | str | None = None,
    seed: int = 0,
    workers: int = 1,
) -> WorstCaseReport:
    """Seeded sampled sweep; deterministic given the seed, for any worker count.

    Distributions are drawn uniformly over all 2^n, or uniformly among
    those with exactly ``red_count`` red hats.  Samples come in fixed-size
    chunks whose generators derive from the master seed, so the report is
    byte-identical however the chunks are scheduled.
    """
    if strategy.n != n:
        raise ContractError(f"strategy is for n={strategy.n}, asked to sample n={n}")
    if trials < 1:
        raise ContractError(f"need at least one trial, got {trials}")
    if red_count == "uniform":
        red_count = None
    if red_count is not None:
        try:
            red_count = int(red_count)
        except (TypeError, ValueError):
            raise ContractError(
                f"red count must be an integer or 'uniform', got {red_count!r}"
            ) from None
        if not 0 <= red_count <= n:
            raise ContractError(f"red count {red_count} out of 0..{n}")
    payloads = []
    for chunk_index, lo in enumerate(range(0, trials, _SAMPLE_CHUNK)):
        count = min(_SAMPLE_CHUNK, trials - lo)
        payloads.append((strategy, n, red_count, seed, chunk_index, count))
    part = _run_chunks(payloads, _sample_chunk, workers)
    return WorstCaseReport(
        strategy_name=strategy.name,
        n=n,
        mode="sampled",
        min_correct=part.min_correct,
        worst_loss=part.worst_loss,
        witness=HatDistribution(n, part.witness_red_mask),
        histogram={c: k for c, k in enumerate(part.histogram) if k},
        total_correct=None,
        evaluated=part.evaluated,
    )
