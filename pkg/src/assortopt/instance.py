"""Core domain types: products, instances, assortments.

An instance is a finite product universe where each product carries a
positive choice weight and a nonnegative price. The no-purchase option
always has weight 1 and is never stored as a product. An assortment is a
subset of product ids held in canonical ascending order; the canonical
comma-separated encoding is a stable contract (the noise hash and the
distinct-call counter both key on it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import InvalidAssortmentError, ValidationError


@dataclass(frozen=True)
class Product:
    """One product: identifier, MNL weight (> 0), price (>= 0)."""

    id: int
    weight: float
    price: float


@dataclass(frozen=True)
class Instance:
    """A product universe plus an optional default capacity."""

    products: tuple[Product, ...]
    capacity_default: int | None = None

    _by_id: dict[int, Product] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        by_id: dict[int, Product] = {}
        for prod in self.products:
            if not isinstance(prod.id, int) or isinstance(prod.id, bool) or prod.id < 1:
                raise ValidationError(
                    f"product id must be a positive integer, got {prod.id!r}", code="schema"
                )
            if prod.id in by_id:
                raise ValidationError(f"duplicate product id {prod.id}", code="duplicate-id")
            if not (isinstance(prod.weight, (int, float)) and math.isfinite(prod.weight) and prod.weight > 0):
                raise ValidationError(
                    f"product {prod.id}: weight must be finite and > 0, got {prod.weight!r}",
                    code="bad-weight",
                )
            if not (isinstance(prod.price, (int, float)) and math.isfinite(prod.price) and prod.price >= 0):
                raise ValidationError(
                    f"product {prod.id}: price must be finite and >= 0, got {prod.price!r}",
                    code="bad-price",
                )
            by_id[prod.id] = prod
        # keep products sorted by id so serialization and iteration are canonical
        object.__setattr__(self, "products", tuple(sorted(self.products, key=lambda p: p.id)))
        object.__setattr__(self, "_by_id", by_id)
        if self.capacity_default is not None:
            cap = self.capacity_default
            if not isinstance(cap, int) or isinstance(cap, bool) or not 1 <= cap <= len(by_id):
                raise ValidationError(
                    f"capacity must be an integer in 1..{len(by_id)}, got {cap!r}",
                    code="bad-capacity",
                )

    @classmethod
    def of(cls, triples: Iterable[tuple[int, float, float]], capacity: int | None = None) -> "Instance":
        """Build from (id, weight, price) triples."""
        return cls(tuple(Product(i, float(w), float(p)) for i, w, p in triples), capacity)

    @property
    def n(self) -> int:
        return len(self.products)

    def ids(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.products)

    def product(self, product_id: int) -> Product:
        try:
            return self._by_id[product_id]
        except KeyError:
            raise InvalidAssortmentError(f"unknown product id {product_id}") from None

    def weight(self, product_id: int) -> float:
        return self.product(product_id).weight

    def price(self, product_id: int) -> float:
        return self.product(product_id).price

    def top_weight_sum(self, k: int) -> float:
        """Sum of the k largest weights (all of them if k > n)."""
        if k <= 0:
            return 0.0
        weights = sorted((p.weight for p in self.products), reverse=True)
        return sum(weights[:k])


@dataclass(frozen=True, order=True)
class Assortment:
    """An offer set: unique product ids in ascending order.

    Ordering and hashing use the canonical id tuple, so assortments are
    usable as dict keys and sort lexicographically by member ids.
    """

    ids: tuple[int, ...] = ()

    def __post_init__(self):
        canonical = tuple(sorted(set(self.ids)))
        if canonical != tuple(self.ids):
            object.__setattr__(self, "ids", canonical)

    @classmethod
    def of(cls, members: Iterable[int]) -> "Assortment":
        return cls(tuple(members))

    def encode(self) -> str:
        """Canonical encoding: ascending ids, comma-separated ("" for empty)."""
        return ",".join(str(i) for i in self.ids)

    def with_product(self, product_id: int) -> "Assortment":
        return Assortment(self.ids + (product_id,))

    def without(self, product_id: int) -> "Assortment":
        return Assortment(tuple(i for i in self.ids if i != product_id))

    def swap(self, out_id: int, in_id: int) -> "Assortment":
        """Replace ``out_id`` with ``in_id``."""
        return Assortment(tuple(i for i in self.ids if i != out_id) + (in_id,))

    def __contains__(self, product_id: int) -> bool:
        return product_id in self.ids

    def __iter__(self) -> Iterator[int]:
        return iter(self.ids)

    def __len__(self) -> int:
        return len(self.ids)


EMPTY_ASSORTMENT = Assortment()
