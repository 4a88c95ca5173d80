"""Instance and run-report file formats.

Everything is a single JSON document. Weights, prices and revenues are
serialized as decimal strings produced by ``repr`` (shortest round-trip
form), so parsing returns bit-identical doubles on any platform and
reports are byte-reproducible. Instances embed into run reports, making
a report self-describing: verification needs no other inputs.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .analysis import GapBound
from .errors import ValidationError
from .greedy import GreedyConfig, IterationRecord, SolveReport
from .instance import Assortment, Instance, Product
from .oracles import NoiseSpec
from .reference import ExactSolution

SCHEMA_VERSION = "1"


def _format_float(value: float) -> str:
    return repr(float(value))


def _parse_float(value: Any, what: str, code: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ValidationError(f"{what} must be a number or decimal string", code=code)
    try:
        return float(value)
    except ValueError:
        raise ValidationError(f"{what} is not a valid decimal: {value!r}", code=code) from None


def instance_to_document(instance: Instance, metadata: dict | None = None) -> dict:
    """Canonical JSON-ready form of an instance."""
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "products": [
            {"id": p.id, "weight": _format_float(p.weight), "price": _format_float(p.price)}
            for p in instance.products
        ],
        "capacity": instance.capacity_default,
    }
    doc["metadata"] = metadata if metadata is not None else {}
    return doc


def parse_instance(document: dict | str | bytes) -> tuple[Instance, dict]:
    """Validate and load an instance document; returns (instance, metadata).

    Every rejection carries a distinct error code: "schema",
    "duplicate-id", "bad-weight", "bad-price", "bad-capacity".
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"not valid JSON: {exc}", code="schema") from None
    if not isinstance(document, dict):
        raise ValidationError("instance document must be a JSON object", code="schema")
    if document.get("schema_version") != SCHEMA_VERSION:
        raise ValidationError(
            f"unsupported schema_version {document.get('schema_version')!r}", code="schema"
        )
    raw_products = document.get("products")
    if not isinstance(raw_products, list):
        raise ValidationError("products must be a list", code="schema")

    products = []
    seen_ids: set[int] = set()
    for entry in raw_products:
        if not isinstance(entry, dict) or not {"id", "weight", "price"} <= set(entry):
            raise ValidationError(
                "each product needs id, weight and price fields", code="schema"
            )
        pid = entry["id"]
        if isinstance(pid, bool) or not isinstance(pid, int) or pid < 1:
            raise ValidationError(f"product id must be a positive integer: {pid!r}", code="schema")
        if pid in seen_ids:
            raise ValidationError(f"duplicate product id {pid}", code="duplicate-id")
        seen_ids.add(pid)
        weight = _parse_float(entry["weight"], f"product {pid} weight", "bad-weight")
        price = _parse_float(entry["price"], f"product {pid} price", "bad-price")
        products.append(Product(pid, weight, price))

    capacity = document.get("capacity")
    if capacity is not None and (isinstance(capacity, bool) or not isinstance(capacity, int)):
        raise ValidationError(f"capacity must be an integer or null: {capacity!r}", code="bad-capacity")

    metadata = document.get("metadata") or {}
    if not isinstance(metadata, dict):
        raise ValidationError("metadata must be an object", code="schema")
    # Instance.__post_init__ re-checks value ranges with the same codes
    return Instance(tuple(products), capacity), metadata


def serialize_instance(instance: Instance, metadata: dict | None = None) -> str:
    return json.dumps(instance_to_document(instance, metadata), indent=2) + "\n"


def load_instance(path: str) -> tuple[Instance, dict]:
    with open(path, "rb") as handle:
        return parse_instance(handle.read().decode("utf-8"))


def write_instance(path: str, instance: Instance, metadata: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(serialize_instance(instance, metadata))


def instance_digest(instance: Instance) -> str:
    """Content hash of the instance (metadata excluded)."""
    doc = instance_to_document(instance)
    doc.pop("metadata")
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


# --- run reports -----------------------------------------------------------


def noise_to_document(spec: NoiseSpec) -> dict:
    return {
        "mode": spec.mode,
        "eps_fixed": _format_float(spec.eps_fixed),
        "eps_max": _format_float(spec.eps_max),
        "seed": spec.seed,
    }


def noise_from_document(doc: dict) -> NoiseSpec:
    if not isinstance(doc, dict):
        raise ValidationError("noise spec must be an object", code="schema")
    return NoiseSpec(
        mode=doc.get("mode", "none"),
        eps_fixed=_parse_float(doc.get("eps_fixed", 0.0), "eps_fixed", "bad-noise"),
        eps_max=_parse_float(doc.get("eps_max", 0.0), "eps_max", "bad-noise"),
        seed=int(doc.get("seed", 0)),
    )


def record_to_document(record: IterationRecord) -> dict:
    return {
        "step": record.step_index,
        "action": record.action,
        "added": record.added,
        "removed": record.removed,
        "revenue_after": _format_float(record.revenue_after),
        "assortment_before": list(record.assortment_before.ids),
        "assortment_after": list(record.assortment_after.ids),
        "pool_before": list(record.pool_before),
        "universe_size_after": record.universe_size_after,
        "exchange_out_counts": {str(k): v for k, v in sorted(record.exchange_out_counts.items())},
    }


def record_from_document(doc: dict) -> IterationRecord:
    return IterationRecord(
        step_index=int(doc["step"]),
        action=str(doc["action"]),
        added=doc.get("added"),
        removed=doc.get("removed"),
        revenue_after=_parse_float(doc["revenue_after"], "revenue_after", "schema"),
        assortment_before=Assortment.of(doc["assortment_before"]),
        assortment_after=Assortment.of(doc["assortment_after"]),
        pool_before=tuple(doc["pool_before"]),
        universe_size_after=int(doc["universe_size_after"]),
        exchange_out_counts={int(k): int(v) for k, v in doc["exchange_out_counts"].items()},
    )


def solve_report_to_document(report: SolveReport) -> dict:
    doc: dict[str, Any] = {
        "best_assortment": list(report.best_assortment.ids),
        "best_oracle_revenue": _format_float(report.best_oracle_revenue),
        "oracle_calls": report.oracle_calls,
        "seeds_explored": report.seeds_explored,
    }
    if report.traces is None:
        doc["traces"] = None
    else:
        doc["traces"] = [
            {"seed": list(seed.ids), "records": [record_to_document(r) for r in records]}
            for seed, records in report.traces
        ]
    return doc


def solve_report_from_document(doc: dict) -> SolveReport:
    traces = None
    if doc.get("traces") is not None:
        traces = tuple(
            (
                Assortment.of(entry["seed"]),
                tuple(record_from_document(r) for r in entry["records"]),
            )
            for entry in doc["traces"]
        )
    return SolveReport(
        best_assortment=Assortment.of(doc["best_assortment"]),
        best_oracle_revenue=_parse_float(doc["best_oracle_revenue"], "revenue", "schema"),
        oracle_calls=int(doc["oracle_calls"]),
        seeds_explored=int(doc["seeds_explored"]),
        traces=traces,
    )


def exact_solution_to_document(solution: ExactSolution) -> dict:
    return {
        "assortment": list(solution.assortment.ids),
        "revenue": _format_float(solution.revenue),
        "per_size_optima": {
            str(k): {"assortment": list(a.ids), "revenue": _format_float(r)}
            for k, (a, r) in sorted(solution.per_size_optima.items())
        },
        "candidate_collection_size": solution.candidate_collection_size,
    }


def gap_bound_to_document(bound: GapBound) -> dict:
    return {
        "eta": _format_float(bound.eta),
        "f_value": _format_float(bound.f_value),
        "capacity": bound.inputs.capacity,
        "eps_max": _format_float(bound.inputs.eps_max),
        "max_offered_weight": _format_float(bound.inputs.max_offered_weight),
        "opt_weight": _format_float(bound.inputs.opt_weight),
        "delta_cap": _format_float(bound.inputs.delta_cap),
    }


def run_report_document(
    instance: Instance,
    config: GreedyConfig,
    noise: NoiseSpec,
    result: SolveReport,
    exact: ExactSolution | None = None,
    gap: float | None = None,
    bounds: GapBound | None = None,
    analysis: dict | None = None,
    timing_ms: float | None = None,
) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "instance_digest": instance_digest(instance),
        "instance": instance_to_document(instance),
        "config": {
            "S": config.seed_size,
            "C": config.capacity,
            "b": config.exchange_budget,
            "noise": noise_to_document(noise),
        },
        "result": solve_report_to_document(result),
        "exact": exact_solution_to_document(exact) if exact is not None else None,
        "gap": _format_float(gap) if gap is not None else None,
        "bounds": gap_bound_to_document(bounds) if bounds is not None else None,
        "analysis": analysis,
        "timing_ms": timing_ms,
    }


def serialize_report(document: dict) -> str:
    return json.dumps(document, indent=2) + "\n"


def load_report(path: str) -> dict:
    with open(path, "rb") as handle:
        try:
            doc = json.loads(handle.read().decode("utf-8"))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"not valid JSON: {exc}", code="schema") from None
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise ValidationError("not a recognizable run report", code="schema")
    return doc


def config_from_document(doc: dict) -> tuple[GreedyConfig, NoiseSpec]:
    cfg = doc.get("config")
    if not isinstance(cfg, dict):
        raise ValidationError("report has no config object", code="schema")
    config = GreedyConfig(
        seed_size=int(cfg["S"]), capacity=int(cfg["C"]), exchange_budget=int(cfg["b"])
    )
    return config, noise_from_document(cfg.get("noise", {}))
