"""Greedy add-exchange search for capacitated assortment optimization.

The inner routine grows an assortment by at most one product per
invocation while allowing any number of revenue-improving exchanges,
with a per-product cap ``b`` on exchange-outs so the loop provably
terminates. The outer solver seeds the routine with every subset of a
chosen size ``S`` (just the empty set for S = 0), applies it ``C - S``
times per seed, and keeps the best final assortment.

Every candidate move is scored through the revenue oracle alone, so the
search works with any plugged-in choice model, exact or noisy. A pure
addition-only baseline is included for comparison; it is exactly the
strategy that breaks when the optimum at one capacity is not nested in
the optimum at a larger capacity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, inf
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError
from .instance import Assortment
from .oracles import RevenueOracle, make_counting_oracle


@dataclass(frozen=True)
class GreedyConfig:
    """Solver parameters: seed size S, capacity C, exchange-out budget b."""

    seed_size: int
    capacity: int
    exchange_budget: int

    def validate(self, n: int) -> None:
        if not 0 <= self.seed_size <= self.capacity <= n:
            raise ConfigError(
                f"need 0 <= S <= C <= N, got S={self.seed_size} C={self.capacity} N={n}"
            )
        if self.exchange_budget < 1:
            raise ConfigError(f"exchange budget must be >= 1, got {self.exchange_budget}")


@dataclass(frozen=True)
class IterationRecord:
    """One accepted step (or the final termination) of the add-exchange loop.

    ``pool_before`` and ``assortment_before`` capture the state the step's
    argmax ranged over, which is exactly what the trace-invariant checker
    quantifies across. ``exchange_out_counts`` is the post-step snapshot of
    per-product exchange-out counters for the current invocation.
    """

    step_index: int
    action: str  # "add" | "exchange" | "terminate"
    added: int | None
    removed: int | None
    revenue_after: float
    assortment_before: Assortment
    assortment_after: Assortment
    pool_before: tuple[int, ...]
    universe_size_after: int
    exchange_out_counts: Mapping[int, int]


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a full greedy solve."""

    best_assortment: Assortment
    best_oracle_revenue: float
    oracle_calls: int
    seeds_explored: int
    traces: tuple[tuple[Assortment, tuple[IterationRecord, ...]], ...] | None = None


def _run_add_exchange(
    start: Assortment,
    universe: Sequence[int],
    budget: int,
    oracle: RevenueOracle,
    trace: bool,
    first_step: int = 0,
) -> tuple[Assortment, float, list[IterationRecord]]:
    """One invocation of the add-exchange loop; also returns the final revenue."""
    current = start
    pool = sorted(set(universe) - set(start.ids))
    outs: dict[int, int] = {}
    current_rev = oracle.evaluate(current)
    size_cap = len(start) + 1
    records: list[IterationRecord] = []
    step = first_step

    while pool:
        pool_before = tuple(pool)

        # best exchange: bring one pool product in, drop one member
        best_ex_key: tuple[float, int, int] | None = None
        best_ex: tuple[Assortment, int, int] | None = None  # (set, in, out)
        for entering in pool:
            for leaving in current.ids:
                candidate = current.swap(leaving, entering)
                rev = oracle.evaluate(candidate)
                key = (-rev, entering, leaving)
                if best_ex_key is None or key < best_ex_key:
                    best_ex_key = key
                    best_ex = (candidate, entering, leaving)
        ex_rev = -best_ex_key[0] if best_ex_key is not None else -inf

        # best addition
        best_add_key: tuple[float, int] | None = None
        best_add: tuple[Assortment, int] | None = None
        for entering in pool:
            candidate = current.with_product(entering)
            rev = oracle.evaluate(candidate)
            key = (-rev, entering)
            if best_add_key is None or key < best_add_key:
                best_add_key = key
                best_add = (candidate, entering)
        add_rev = -best_add_key[0] if best_add_key is not None else -inf

        if (
            len(current) < size_cap
            and best_add is not None
            and add_rev > current_rev
            and add_rev > ex_rev
        ):
            previous = current
            current, entering = best_add
            current_rev = add_rev
            pool.remove(entering)
            if trace:
                records.append(
                    IterationRecord(
                        step_index=step,
                        action="add",
                        added=entering,
                        removed=None,
                        revenue_after=current_rev,
                        assortment_before=previous,
                        assortment_after=current,
                        pool_before=pool_before,
                        universe_size_after=len(pool),
                        exchange_out_counts=dict(outs),
                    )
                )
        elif best_ex is not None and ex_rev > current_rev:
            previous = current
            current, entering, leaving = best_ex
            current_rev = ex_rev
            outs[leaving] = outs.get(leaving, 0) + 1
            pool.remove(entering)
            if outs[leaving] < budget:
                # the dropped product may be exchanged back in later
                pool.append(leaving)
                pool.sort()
            if trace:
                records.append(
                    IterationRecord(
                        step_index=step,
                        action="exchange",
                        added=entering,
                        removed=leaving,
                        revenue_after=current_rev,
                        assortment_before=previous,
                        assortment_after=current,
                        pool_before=pool_before,
                        universe_size_after=len(pool),
                        exchange_out_counts=dict(outs),
                    )
                )
        else:
            break
        step += 1

    if trace:
        records.append(
            IterationRecord(
                step_index=step,
                action="terminate",
                added=None,
                removed=None,
                revenue_after=current_rev,
                assortment_before=current,
                assortment_after=current,
                pool_before=tuple(pool),
                universe_size_after=len(pool),
                exchange_out_counts=dict(outs),
            )
        )
    return current, current_rev, records


def greedy_add_exchange(
    start: Assortment,
    universe: Iterable[int],
    budget: int,
    oracle: RevenueOracle,
    trace: bool = False,
) -> tuple[Assortment, list[IterationRecord]]:
    """Grow ``start`` by at most one product via greedy additions and exchanges.

    Each loop pass scores every exchange (pool product in, member out) and
    every addition through the oracle, then accepts the best strictly
    improving move; additions are taken only while the one-net-addition
    size budget is open and the best addition beats both the current value
    and the best exchange. A product exchanged out returns to the pool
    until it has been exchanged out ``budget`` times, after which it is
    retired; the loop stops when the pool empties or no move improves.
    """
    if budget < 1:
        raise ConfigError(f"exchange budget must be >= 1, got {budget}")
    final, _rev, records = _run_add_exchange(start, sorted(set(universe)), budget, oracle, trace)
    return final, records


def greedy_opt(
    config: GreedyConfig,
    universe: Iterable[int],
    oracle: RevenueOracle,
    trace: bool = False,
) -> SolveReport:
    """Run the seeded greedy search and return the best assortment found.

    Every size-S subset of the universe is used as a seed (one empty seed
    for S = 0); each seed receives C - S add-exchange invocations. The
    report carries the oracle-call count measured across the whole run and,
    with ``trace`` on, the per-seed step records. Ties across seeds break
    toward the lexicographically smallest id tuple.

    Steps never shrink an assortment, so every result has at least S
    members; an optimum smaller than S is unreachable. S = 0 is therefore
    the safe default and the setting under which exact recovery is
    guaranteed with an exact oracle and budget >= C + 1.
    """
    ids = sorted(set(universe))
    config.validate(len(ids))
    counting, stats = make_counting_oracle(oracle)

    best: tuple[float, tuple[int, ...]] | None = None
    best_assortment = Assortment()
    traces: list[tuple[Assortment, tuple[IterationRecord, ...]]] = []
    seeds_explored = 0

    for seed_ids in itertools.combinations(ids, config.seed_size):
        seeds_explored += 1
        seed = Assortment(seed_ids)
        current = seed
        records: list[IterationRecord] = []
        rev: float | None = None
        for _ in range(config.capacity - config.seed_size):
            current, rev, recs = _run_add_exchange(
                current, ids, config.exchange_budget, counting, trace, first_step=len(records)
            )
            records.extend(recs)
        if rev is None:  # S == C: no invocations, score the seed itself
            rev = counting.evaluate(current)
        if trace:
            traces.append((seed, tuple(records)))
        key = (-rev, current.ids)
        if best is None or key < best:
            best = key
            best_assortment = current

    assert best is not None
    return SolveReport(
        best_assortment=best_assortment,
        best_oracle_revenue=-best[0],
        oracle_calls=stats.call_count,
        seeds_explored=seeds_explored,
        traces=tuple(traces) if trace else None,
    )


def naive_greedy(capacity: int, universe: Iterable[int], oracle: RevenueOracle) -> Assortment:
    """Pure-addition greedy baseline.

    Adds the revenue-maximizing product (ties to the smallest id) while the
    improvement is strictly positive, stopping at ``capacity``. Succeeds
    only when optima nest across capacities, which MNL instances do not
    guarantee.
    """
    current = Assortment()
    current_rev = oracle.evaluate(current)
    pool = sorted(set(universe))
    while len(current) < capacity and pool:
        best_key = None
        best_choice = None
        for entering in pool:
            rev = oracle.evaluate(current.with_product(entering))
            key = (-rev, entering)
            if best_key is None or key < best_key:
                best_key = key
                best_choice = entering
        if best_key is None or -best_key[0] <= current_rev:
            break
        current = current.with_product(best_choice)
        current_rev = -best_key[0]
        pool.remove(best_choice)
    return current


def call_count_bound(n: int, config: GreedyConfig) -> int:
    """Analytic cap on oracle calls for a full greedy solve with S < C.

    Each of the binom(N, S) seeds runs C - S invocations, each invocation
    at most N*b + 1 loop passes, each pass at most C*N + N oracle calls.
    """
    s, c, b = config.seed_size, config.capacity, config.exchange_budget
    return (c - s) * comb(n, s) * (n * b + 1) * (c * n + n)
