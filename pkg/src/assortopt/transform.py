"""Margin transform of MNL revenues.

For a revenue offset u, each product gets the weight-scaled margin
``(price - u) * weight``; an assortment's transform value is the sum of
its members' margins. The transform is linear and strictly decreasing in
u, which makes assortment comparisons tractable: it relates back to
revenue through

    margin(M, u) = u + w(M) * (revenue(M) - u),    w(M) = 1 + sum weights,

so at u = revenue(M) the transform has a fixed point. Because the
per-product margins are lines in u, the "top k by margin" set is
piecewise constant with breakpoints at pairwise crossings and zero
crossings; these enumerations drive both the exact candidate-set solver
and the slack-set sizes used in the noise analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .instance import Assortment, Instance
from .errors import UndefinedTopSetError


def scaled_margin(instance: Instance, product_id: int, u: float) -> float:
    """(price - u) * weight for one product."""
    prod = instance.product(product_id)
    return (prod.price - u) * prod.weight


def assortment_margin(instance: Instance, assortment: Assortment, u: float) -> float:
    """Sum of members' scaled margins at offset u (0 for the empty set)."""
    return math.fsum(scaled_margin(instance, i, u) for i in assortment.ids)


@dataclass(frozen=True)
class MarginTransform:
    """Convenience view of the transform at a fixed offset u."""

    instance: Instance
    u: float

    def of_product(self, product_id: int) -> float:
        return scaled_margin(self.instance, product_id, self.u)

    def of_assortment(self, assortment: Assortment) -> float:
        return assortment_margin(self.instance, assortment, self.u)


def top_margin_set(instance: Instance, size: int, u: float) -> Assortment:
    """The at most ``size`` products with the largest strictly positive margin.

    Ties break toward the smaller product id. Returns the empty assortment
    when no margin is positive or size <= 0.
    """
    if size <= 0:
        return Assortment()
    ranked = sorted(
        ((p.id, (p.price - u) * p.weight) for p in instance.products),
        key=lambda pair: (-pair[1], pair[0]),
    )
    chosen = [pid for pid, margin in ranked[:size] if margin > 0.0]
    return Assortment.of(chosen)


def min_margin_member(instance: Instance, top: Assortment, u: float) -> int:
    """Member of a top set with the smallest margin (ties to smaller id)."""
    if len(top) == 0:
        raise UndefinedTopSetError("top set is empty; minimum-margin member undefined")
    return min(top.ids, key=lambda i: (scaled_margin(instance, i, u), i))


def top_set_with_slack(instance: Instance, size: int, delta: float, u: float) -> frozenset[int]:
    """Top set plus every outside product within ``delta * u`` of its weakest member.

    Requires a nonempty top set (the threshold is anchored at the minimum
    margin inside it).
    """
    top = top_margin_set(instance, size, u)
    anchor = scaled_margin(instance, min_margin_member(instance, top, u), u)
    extra = [
        p.id
        for p in instance.products
        if p.id not in top and anchor - (p.price - u) * p.weight <= delta * u
    ]
    return frozenset(top.ids) | frozenset(extra)


def margin_breakpoints(instance: Instance, delta: float = 0.0) -> list[float]:
    """Nonnegative offsets where any margin ordering or threshold can change.

    Collects pairwise crossings of the margin lines, their zero crossings
    (u = price), and, for delta > 0, the offsets where one margin trails
    another by exactly delta * u. Between consecutive breakpoints every
    top set and slack set is constant.
    """
    points: set[float] = set()
    products = instance.products
    for prod in products:
        points.add(prod.price)
    for a_idx in range(len(products)):
        for b_idx in range(len(products)):
            if a_idx == b_idx:
                continue
            pa, pb = products[a_idx], products[b_idx]
            # crossing of margin lines a and b, offset by delta * u:
            # (pa.price - u) pa.weight - (pb.price - u) pb.weight = delta * u
            denom = pa.weight - pb.weight + delta
            if denom != 0.0:
                u = (pa.price * pa.weight - pb.price * pb.weight) / denom
                if math.isfinite(u) and u >= 0.0:
                    points.add(u)
    return sorted(points)


def sample_offsets(breakpoints: list[float], lo: float = 0.0) -> list[float]:
    """Probe offsets covering every breakpoint and every open interval.

    Includes ``lo``, each breakpoint, the midpoints between consecutive
    breakpoints, and one point beyond the last breakpoint (where all
    margins are nonpositive).
    """
    pts = [b for b in breakpoints if b >= lo]
    samples = [lo]
    prev = lo
    for b in pts:
        if b > prev:
            samples.append(prev + (b - prev) / 2.0)
        samples.append(b)
        prev = b
    samples.append(prev + 1.0)
    return samples
