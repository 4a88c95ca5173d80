"""Noise-robustness bounds and runtime invariant checkers.

This module turns the solver's guarantees into executable checks:

* the margin-transform identity and its equivalence to revenue
  comparisons (checked pairwise),
* per-step near-optimality of greedy decisions, replayed from traces,
* monotonicity and size bounds of top-margin sets,
* the quantities controlling the optimality gap under multiplicatively
  noisy oracles: the estimate-slack bound, the slack-set size, and the
  relative gap guarantee.

All functions are pure; reports are plain dataclasses ready for JSON
serialization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import EnumerationCapError, ValidationError
from .greedy import IterationRecord
from .instance import Assortment, Instance
from .oracles import NoiseSpec, mnl_revenue, total_weight
from .reference import ExactSolution, candidate_set_opt
from .transform import (
    assortment_margin,
    margin_breakpoints,
    min_margin_member,
    scaled_margin,
    top_margin_set,
    top_set_with_slack,
)

#: Absolute-per-unit slack granted to trace checks for float rounding in
#: revenue argmax versus margin comparisons.
FLOAT_SLACK = 1e-9


@dataclass(frozen=True)
class BoundInputs:
    """Ingredients of the noisy-oracle gap bound for one instance."""

    capacity: int
    eps_max: float
    max_offered_weight: float  # 1 + sum of the C largest weights
    opt_weight: float  # 1 + sum of weights in the optimal assortment
    delta_cap: float  # bound on the estimate slack over assortments of size <= C


@dataclass(frozen=True)
class GapBound:
    """Relative-gap guarantee for a noisy run: gap <= f_value (when < 1)."""

    eta: float
    f_value: float
    inputs: BoundInputs


def compute_bounds(
    instance: Instance, capacity: int, eps_max: float, opt: ExactSolution
) -> GapBound:
    """Gap guarantee for oracles that underestimate by at most ``eps_max``.

    eta = 4 * C * eps / (1 - eps); the guarantee scales eta by the ratio of
    the heaviest possible offered weight to the optimum's weight. The
    estimate-slack cap is max_offered_weight * eps / (1 - eps).
    """
    if not 0.0 <= eps_max < 1.0:
        raise ValidationError("eps_max must lie in [0, 1)", code="bad-noise")
    heaviest = 1.0 + instance.top_weight_sum(capacity)
    opt_weight = total_weight(instance, opt.assortment)
    delta_cap = heaviest * eps_max / (1.0 - eps_max)
    eta = 4.0 * capacity * eps_max / (1.0 - eps_max)
    f_value = (heaviest / opt_weight) * eta
    return GapBound(
        eta=eta,
        f_value=f_value,
        inputs=BoundInputs(
            capacity=capacity,
            eps_max=eps_max,
            max_offered_weight=heaviest,
            opt_weight=opt_weight,
            delta_cap=delta_cap,
        ),
    )


def exact_delta_cap(
    instance: Instance, capacity: int, noise: NoiseSpec, enumeration_cap: int = 2_000_000
) -> float:
    """Exact estimate-slack maximum over all assortments of size <= capacity.

    delta(M) = eps(M) * w(M) / (1 - eps(M)) depends on the noise draw for
    each assortment, so this enumerates them all; affordable only at desk
    scale (the closed-form cap in ``compute_bounds`` is what the guarantee
    uses).
    """
    ids = instance.ids()
    capacity = min(capacity, len(ids))
    total = sum(comb(len(ids), k) for k in range(capacity + 1))
    if total > enumeration_cap:
        raise EnumerationCapError(f"{total} assortments exceed cap {enumeration_cap}")
    worst = 0.0
    for k in range(capacity + 1):
        for members in itertools.combinations(ids, k):
            assortment = Assortment(members)
            eps = noise.epsilon(assortment)
            worst = max(worst, eps * total_weight(instance, assortment) / (1.0 - eps))
    return worst


def max_slack_set_size(instance: Instance, size: int, delta: float) -> int:
    """Largest slack-set cardinality over all positive offsets.

    The slack set at offset u is the top set plus every product whose
    margin trails the top set's weakest member by at most delta * u. Its
    size is piecewise constant between breakpoints (margin crossings,
    zero crossings, and delta-shifted crossings), so probing one offset
    inside every interval maximizes over the regions exactly. Isolated
    tie points at the breakpoints themselves are not counted: the size
    there exceeds the neighboring regions only by exact-tie coincidences,
    which is also what keeps this in agreement with a dense grid scan.
    Offsets with an empty top set contribute nothing.
    """
    if delta < 0:
        raise ValidationError("delta must be >= 0", code="bad-config")
    points = sorted(set(margin_breakpoints(instance)) | set(margin_breakpoints(instance, delta)))
    worst = 0
    for u in _interval_offsets(points):
        if len(top_margin_set(instance, size, u)) == 0:
            continue
        worst = max(worst, len(top_set_with_slack(instance, size, delta, u)))
    return worst


def _interval_offsets(breakpoints: list[float]) -> list[float]:
    """One probe offset strictly inside each interval of (0, inf)."""
    positive = [b for b in breakpoints if b > 0.0]
    samples: list[float] = []
    prev = 0.0
    for b in positive:
        if b > prev:
            samples.append(prev + (b - prev) / 2.0)
        prev = b
    samples.append(prev + 1.0)
    return samples


def max_slack_set_size_grid(
    instance: Instance, size: int, delta: float, points: int = 10_001
) -> int:
    """Grid-scan fallback for the slack-set maximum (cross-check path).

    Scans evenly spaced offsets on (0, max price]; exists to validate the
    breakpoint enumeration, which the tests require to agree with this on
    generic instances.
    """
    if instance.n == 0 or size <= 0:
        return 0
    prices = np.array([p.price for p in instance.products])
    weights = np.array([p.weight for p in instance.products])
    top = float(prices.max())
    if top <= 0.0:
        return 0
    us = np.linspace(0.0, top, points)[1:]  # the slack set needs u > 0
    margins = (prices[:, None] - us[None, :]) * weights[:, None]  # (N, P)
    order = np.sort(margins, axis=0)[::-1]  # descending per column
    positive_counts = (order > 0.0).sum(axis=0)
    top_sizes = np.minimum(size, positive_counts)
    nonempty = top_sizes >= 1
    if not nonempty.any():
        return 0
    cols = np.nonzero(nonempty)[0]
    anchor = order[top_sizes[cols] - 1, cols]
    thresholds = anchor - delta * us[cols]
    slack_sizes = (margins[:, cols] >= thresholds[None, :]).sum(axis=0)
    return int(slack_sizes.max())


@dataclass(frozen=True)
class EquivalenceReport:
    """Margin comparison versus revenue comparison for one assortment pair.

    The margin of each assortment is taken at the second one's revenue;
    the ordering there must match the revenue ordering exactly.
    """

    m1: Assortment
    m2: Assortment
    revenue_1: float
    revenue_2: float
    margin_1: float
    margin_2: float

    @property
    def margin_ge(self) -> bool:
        return self.margin_1 >= self.margin_2

    @property
    def revenue_ge(self) -> bool:
        return self.revenue_1 >= self.revenue_2

    @property
    def agree(self) -> bool:
        return self.margin_ge == self.revenue_ge


def check_margin_revenue_equivalence(
    instance: Instance, m1: Assortment, m2: Assortment
) -> EquivalenceReport:
    """Evaluate both sides of the comparison equivalence for one pair."""
    r1 = mnl_revenue(instance, m1)
    r2 = mnl_revenue(instance, m2)
    return EquivalenceReport(
        m1=m1,
        m2=m2,
        revenue_1=r1,
        revenue_2=r2,
        margin_1=assortment_margin(instance, m1, r2),
        margin_2=assortment_margin(instance, m2, r2),
    )


@dataclass(frozen=True)
class TraceViolation:
    """One failed per-step near-optimality inequality."""

    step_index: int
    action: str
    kind: str  # "removed-not-weakest" | "entered-not-strongest"
    product_id: int
    margin_chosen: float
    margin_other: float
    slack: float

    def describe(self) -> str:
        return (
            f"step {self.step_index} ({self.action}): {self.kind} vs product "
            f"{self.product_id}: chosen margin {self.margin_chosen!r}, "
            f"other {self.margin_other!r}, allowed slack {self.slack!r}"
        )


def check_trace_invariants(
    instance: Instance,
    trace: list[IterationRecord] | tuple[IterationRecord, ...],
    delta_cap: float,
    float_slack: float = FLOAT_SLACK,
) -> list[TraceViolation]:
    """Replay a greedy trace against the per-step near-optimality bounds.

    At each accepted step, with u the exact revenue of the new assortment:
    the product brought in must have margin within delta_cap * u of every
    pool product's, and (for exchanges) the product dropped must have
    margin within delta_cap * u above every pre-step member's. The exact
    revenue is recomputed from the instance, so the check is meaningful
    for noisy traces too; ``float_slack`` (scaled by max(1, u)) absorbs
    rounding differences between revenue argmax and margin comparison.
    """
    violations: list[TraceViolation] = []
    for record in trace:
        if record.action == "terminate":
            continue
        u = mnl_revenue(instance, record.assortment_after)
        slack = delta_cap * u + float_slack * max(1.0, u)
        entered = record.added
        h_entered = scaled_margin(instance, entered, u)
        for other in record.pool_before:
            h_other = scaled_margin(instance, other, u)
            if h_entered < h_other - slack:
                violations.append(
                    TraceViolation(
                        step_index=record.step_index,
                        action=record.action,
                        kind="entered-not-strongest",
                        product_id=other,
                        margin_chosen=h_entered,
                        margin_other=h_other,
                        slack=slack,
                    )
                )
        if record.action == "exchange":
            removed = record.removed
            h_removed = scaled_margin(instance, removed, u)
            for member in record.assortment_before.ids:
                h_member = scaled_margin(instance, member, u)
                if h_removed > h_member + slack:
                    violations.append(
                        TraceViolation(
                            step_index=record.step_index,
                            action=record.action,
                            kind="removed-not-weakest",
                            product_id=member,
                            margin_chosen=h_removed,
                            margin_other=h_member,
                            slack=slack,
                        )
                    )
    return violations


@dataclass(frozen=True)
class MonotonicityReport:
    """Top-set size comparison at two offsets, plus optimal-size bounds.

    ``bounded_u1``/``bounded_u2`` state whether the size bounds
    size <= cap and size >= |optimum| held at that offset; None when the
    offset exceeds the optimal revenue (the bound only applies below it).
    """

    u1: float
    u2: float
    size_u1: int
    size_u2: int
    opt_revenue: float
    opt_size: int
    bounded_u1: bool | None
    bounded_u2: bool | None

    @property
    def monotone_ok(self) -> bool:
        return self.size_u1 >= self.size_u2

    @property
    def bounds_ok(self) -> bool:
        return all(b is not False for b in (self.bounded_u1, self.bounded_u2))


def check_top_set_monotonicity(
    instance: Instance,
    size: int,
    u1: float,
    u2: float,
    opt: ExactSolution | None = None,
) -> MonotonicityReport:
    """Check |top(u1)| >= |top(u2)| for u1 <= u2 and the size-cap bounds.

    Below the optimal revenue for this size cap, the top set is at least
    as large as the optimum and never larger than the cap. The optimum is
    computed via the candidate-set solver unless provided.
    """
    if u1 > u2:
        raise ValidationError("need u1 <= u2", code="bad-config")
    if opt is None:
        opt = candidate_set_opt(instance, size)
    size1 = len(top_margin_set(instance, size, u1))
    size2 = len(top_margin_set(instance, size, u2))
    opt_size = len(opt.assortment)

    def bounded(u: float, top_size: int) -> bool | None:
        if u > opt.revenue:
            return None
        return opt_size <= top_size <= size

    return MonotonicityReport(
        u1=u1,
        u2=u2,
        size_u1=size1,
        size_u2=size2,
        opt_revenue=opt.revenue,
        opt_size=opt_size,
        bounded_u1=bounded(u1, size1),
        bounded_u2=bounded(u2, size2),
    )


__all__ = [
    "BoundInputs",
    "GapBound",
    "EquivalenceReport",
    "TraceViolation",
    "MonotonicityReport",
    "compute_bounds",
    "exact_delta_cap",
    "max_slack_set_size",
    "max_slack_set_size_grid",
    "check_margin_revenue_equivalence",
    "check_trace_invariants",
    "check_top_set_monotonicity",
    "min_margin_member",
    "FLOAT_SLACK",
]
