"""Revenue oracles for the multinomial-logit choice model.

The solver only ever talks to an oracle through ``evaluate(assortment) ->
float``, so any choice model can be plugged in. This module provides the
built-in implementations:

* exact MNL expected revenue,
* a deterministic multiplicative-noise wrapper that underestimates the
  base value by a per-assortment factor in ``[0, eps_max]``,
* a call-counting wrapper used to verify oracle-call complexity bounds.

Oracles are immutable after construction and safe for concurrent reads;
the counting wrapper guards its statistics with a lock.
"""

from __future__ import annotations

import hashlib
import math
import threading
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

from .errors import InvalidChoiceError, ValidationError
from .instance import Assortment, Instance

#: Sentinel id for the no-purchase outcome (its weight is always 1).
NO_PURCHASE = 0

NOISE_MODES = ("none", "fixed", "seeded-uniform")


@runtime_checkable
class RevenueOracle(Protocol):
    """Anything with ``evaluate(assortment) -> float`` is an oracle."""

    def evaluate(self, assortment: Assortment) -> float: ...


def mnl_revenue(instance: Instance, assortment: Assortment) -> float:
    """Exact MNL expected revenue of an offer set.

    sum(p_i * w_i) / (1 + sum(w_i)) over the members; 0 for the empty set.
    Unknown product ids raise InvalidAssortmentError.
    """
    terms = []
    weights = [1.0]
    for product_id in assortment.ids:
        prod = instance.product(product_id)
        terms.append(prod.price * prod.weight)
        weights.append(prod.weight)
    if not terms:
        return 0.0
    return math.fsum(terms) / math.fsum(weights)


def mnl_choice_prob(instance: Instance, assortment: Assortment, choice: int) -> float:
    """Probability that an arriving customer picks ``choice`` from the offer set.

    ``choice`` is a member product id or ``NO_PURCHASE``. Probabilities over
    the members plus no-purchase sum to 1.
    """
    denom = math.fsum([1.0] + [instance.product(i).weight for i in assortment.ids])
    if choice == NO_PURCHASE:
        return 1.0 / denom
    if choice not in assortment:
        raise InvalidChoiceError(f"choice {choice} is not offered in {assortment.ids}")
    return instance.weight(choice) / denom


@dataclass(frozen=True)
class NoiseSpec:
    """How an oracle's values are degraded.

    mode "none": passthrough. mode "fixed": every assortment is scaled by
    (1 - eps_fixed). mode "seeded-uniform": each assortment gets its own
    factor (1 - eps(M)) with eps(M) in [0, eps_max], a pure function of
    (seed, canonical encoding) -- repeated queries of the same assortment
    always see the same value, within a run and across runs.
    """

    mode: str = "none"
    eps_fixed: float = 0.0
    eps_max: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in NOISE_MODES:
            raise ValidationError(f"unknown noise mode {self.mode!r}", code="bad-noise")
        if not 0.0 <= self.eps_fixed < 1.0:
            raise ValidationError("eps_fixed must lie in [0, 1)", code="bad-noise")
        if not 0.0 <= self.eps_max < 1.0:
            raise ValidationError("eps_max must lie in [0, 1)", code="bad-noise")

    def epsilon(self, assortment: Assortment) -> float:
        """Relative underestimation factor for one assortment."""
        if self.mode == "none":
            return 0.0
        if self.mode == "fixed":
            return self.eps_fixed
        return self.eps_max * _unit_hash(self.seed, assortment.encode())

    @property
    def eps_bound(self) -> float:
        """Upper bound on epsilon over all assortments."""
        if self.mode == "none":
            return 0.0
        if self.mode == "fixed":
            return self.eps_fixed
        return self.eps_max


def _unit_hash(seed: int, encoding: str) -> float:
    """Deterministic map of (seed, encoding) into [0, 1).

    Uses keyed BLAKE2 so the value is stable across platforms, processes
    and Python versions (never the builtin ``hash``).
    """
    key = (seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little")
    digest = hashlib.blake2b(encoding.encode("ascii"), digest_size=8, key=key).digest()
    return int.from_bytes(digest, "little") / 2.0**64


class ExactMnlOracle:
    """Pure, deterministic oracle returning exact MNL revenue."""

    def __init__(self, instance: Instance):
        self.instance = instance

    def evaluate(self, assortment: Assortment) -> float:
        return mnl_revenue(self.instance, assortment)


class NoisyOracle:
    """Wraps a base oracle, returning (1 - eps(M)) * base(M)."""

    def __init__(self, base: RevenueOracle, spec: NoiseSpec):
        self.base = base
        self.spec = spec

    def evaluate(self, assortment: Assortment) -> float:
        return (1.0 - self.spec.epsilon(assortment)) * self.base.evaluate(assortment)


class OracleStats:
    """Live call statistics handle for a counting oracle."""

    __slots__ = ("call_count", "_seen")

    def __init__(self):
        self.call_count = 0
        self._seen: set[tuple[int, ...]] = set()

    @property
    def distinct_count(self) -> int:
        return len(self._seen)


class CountingOracle:
    """Delegates to a base oracle while counting evaluate calls.

    Returned values are bit-identical to the base oracle's; statistics
    updates are lock-protected so concurrent solvers may share a counter.
    """

    def __init__(self, base: RevenueOracle):
        self.base = base
        self.stats = OracleStats()
        self._lock = threading.Lock()

    def evaluate(self, assortment: Assortment) -> float:
        with self._lock:
            self.stats.call_count += 1
            self.stats._seen.add(assortment.ids)
        return self.base.evaluate(assortment)


def make_exact_oracle(instance: Instance) -> ExactMnlOracle:
    return ExactMnlOracle(instance)


def make_noisy_oracle(base: RevenueOracle, spec: NoiseSpec) -> NoisyOracle:
    return NoisyOracle(base, spec)


def make_counting_oracle(base: RevenueOracle) -> tuple[CountingOracle, OracleStats]:
    oracle = CountingOracle(base)
    return oracle, oracle.stats


def total_weight(instance: Instance, assortment: Assortment) -> float:
    """w(M) = 1 + sum of member weights (the 1 is the no-purchase weight)."""
    return math.fsum([1.0] + [instance.weight(i) for i in assortment.ids])
