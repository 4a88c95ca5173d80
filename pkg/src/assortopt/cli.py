"""Command-line interface.

Subcommands: gen (write a random instance), solve (greedy search, write a
run report), exact (cross-checked reference solvers), bench (grid sweep),
verify (replay a run report's trace and invariant checks with no other
inputs). Exit codes: 0 ok, 2 usage, 3 validation, 4 assertion failure,
5 I/O; errors are emitted as JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import bench as bench_mod
from . import io as io_mod
from .analysis import check_margin_revenue_equivalence, check_trace_invariants, compute_bounds
from .errors import ValidationError, VerificationFailure
from .generate import GeneratorSpec, derive_seed, generate_instance
from .greedy import GreedyConfig, greedy_opt
from .instance import Assortment, Instance
from .oracles import NoiseSpec, RevenueOracle, make_exact_oracle, make_noisy_oracle, mnl_revenue
from .reference import brute_force_opt, candidate_set_opt

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_ASSERTION = 4
EXIT_IO = 5

RELATIVE_TOLERANCE = 1e-9


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)


def _error_json(code: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": {"code": code, "message": message}}) + "\n")


def _build_oracle(instance: Instance, noise: NoiseSpec) -> RevenueOracle:
    base = make_exact_oracle(instance)
    if noise.mode == "none":
        return base
    return make_noisy_oracle(base, noise)


def _noise_from_args(args: argparse.Namespace) -> NoiseSpec:
    mode = args.noise_mode
    if mode == "fixed":
        return NoiseSpec(mode="fixed", eps_fixed=args.eps, seed=args.seed)
    if mode == "seeded-uniform":
        return NoiseSpec(mode="seeded-uniform", eps_max=args.eps, seed=args.seed)
    return NoiseSpec()


def cmd_gen(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(
        n=args.N,
        weight_lo=args.w_lo,
        weight_hi=args.w_hi,
        price_lo=args.p_lo,
        price_hi=args.p_hi,
        seed=args.seed,
    )
    instance = generate_instance(spec)
    if args.capacity is not None:
        instance = Instance(instance.products, args.capacity)
    metadata = {
        "generator": {
            "n": spec.n,
            "weight_lo": repr(spec.weight_lo),
            "weight_hi": repr(spec.weight_hi),
            "price_lo": repr(spec.price_lo),
            "price_hi": repr(spec.price_hi),
            "seed": spec.seed,
        }
    }
    _emit(io_mod.serialize_instance(instance, metadata), args.output)
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    instance, _meta = io_mod.load_instance(args.instance)
    capacity = args.C if args.C is not None else instance.capacity_default
    if capacity is None:
        raise ValidationError("no --C given and the instance has no capacity", code="bad-config")
    budget = args.b if args.b is not None else capacity + 1
    config = GreedyConfig(seed_size=args.S, capacity=capacity, exchange_budget=budget)
    noise = _noise_from_args(args)
    oracle = _build_oracle(instance, noise)

    start = time.perf_counter()
    result = greedy_opt(config, instance.ids(), oracle, trace=args.trace)
    elapsed_ms = 1000.0 * (time.perf_counter() - start)

    exact = gap = bounds = analysis = None
    if args.exact:
        exact = brute_force_opt(make_exact_oracle(instance), instance.ids(), capacity)
        true_rev = mnl_revenue(instance, result.best_assortment)
        gap = 0.0 if exact.revenue == 0.0 else (exact.revenue - true_rev) / exact.revenue
        bounds = compute_bounds(instance, capacity, noise.eps_bound, exact)
    if args.trace and result.traces is not None:
        delta_cap = 0.0
        if bounds is not None:
            delta_cap = bounds.inputs.delta_cap
        elif noise.eps_bound:
            heaviest = 1.0 + instance.top_weight_sum(capacity)
            delta_cap = heaviest * noise.eps_bound / (1.0 - noise.eps_bound)
        violations = sum(
            len(check_trace_invariants(instance, records, delta_cap))
            for _seed, records in result.traces
        )
        analysis = {"trace_violations": violations, "delta_cap": repr(delta_cap)}

    document = io_mod.run_report_document(
        instance, config, noise, result, exact=exact, gap=gap, bounds=bounds,
        analysis=analysis, timing_ms=round(elapsed_ms, 3),
    )
    _emit(io_mod.serialize_report(document), args.output)
    return EXIT_OK


def cmd_exact(args: argparse.Namespace) -> int:
    instance, _meta = io_mod.load_instance(args.instance)
    capacity = args.C if args.C is not None else instance.capacity_default
    if capacity is None:
        raise ValidationError("no --C given and the instance has no capacity", code="bad-config")
    brute = brute_force_opt(make_exact_oracle(instance), instance.ids(), capacity)
    candidate = candidate_set_opt(instance, capacity)
    scale = max(1e-300, abs(brute.revenue))
    agree = abs(brute.revenue - candidate.revenue) <= RELATIVE_TOLERANCE * scale
    document = {
        "schema_version": io_mod.SCHEMA_VERSION,
        "instance_digest": io_mod.instance_digest(instance),
        "capacity": capacity,
        "brute_force": io_mod.exact_solution_to_document(brute),
        "candidate_set": io_mod.exact_solution_to_document(candidate),
        "solvers_agree": agree,
    }
    _emit(io_mod.serialize_report(document), args.output)
    if not agree:
        raise VerificationFailure(
            f"reference solvers disagree: brute={brute.revenue!r} candidate={candidate.revenue!r}"
        )
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    outcomes, summary = bench_mod.run_bench(
        suite=args.suite,
        ns=tuple(args.N) if args.N else bench_mod.DEFAULT_NS,
        cs=tuple(args.C) if args.C else bench_mod.DEFAULT_CS,
        b_rules=tuple(args.b) if args.b else bench_mod.DEFAULT_B_RULES,
        epss=tuple(args.eps) if args.eps else bench_mod.DEFAULT_EPSS,
        seeds_per_cell=args.seeds,
        base_seed=args.base_seed,
        jobs=args.jobs,
    )
    sys.stdout.write(bench_mod.format_table(outcomes, summary))
    if args.output:
        document = {
            "schema_version": io_mod.SCHEMA_VERSION,
            "suite": summary["suite"],
            "base_seed": args.base_seed,
            "cells": [bench_mod.outcome_to_document(o) for o in outcomes],
            "summary": summary,
        }
        _emit(io_mod.serialize_report(document), args.output)
    failures = bench_mod.assertion_failures(outcomes, summary)
    if failures:
        raise VerificationFailure("; ".join(failures))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    document = io_mod.load_report(args.report)
    instance, _meta = io_mod.parse_instance(document["instance"])
    config, noise = io_mod.config_from_document(document)
    result = io_mod.solve_report_from_document(document["result"])
    oracle = _build_oracle(instance, noise)
    problems: list[str] = []

    digest = io_mod.instance_digest(instance)
    if digest != document.get("instance_digest"):
        problems.append("instance digest mismatch")

    if oracle.evaluate(result.best_assortment) != result.best_oracle_revenue:
        problems.append("recorded best revenue does not match a fresh oracle evaluation")

    heaviest = 1.0 + instance.top_weight_sum(config.capacity)
    eps = noise.eps_bound
    delta_cap = heaviest * eps / (1.0 - eps)
    trace_steps = 0
    if result.traces:
        for _seed, records in result.traces:
            for record in records:
                if record.action != "terminate":
                    trace_steps += 1
                    if oracle.evaluate(record.assortment_after) != record.revenue_after:
                        problems.append(
                            f"step {record.step_index}: recorded revenue is not reproducible"
                        )
            violations = check_trace_invariants(instance, records, delta_cap)
            problems.extend(v.describe() for v in violations)

    rng = random.Random(derive_seed("verify", document.get("instance_digest", ""), noise.seed))
    ids = list(instance.ids())
    pair_checks = 0
    if ids:
        for _ in range(100):
            size1 = rng.randint(0, min(config.capacity, len(ids)))
            size2 = rng.randint(0, min(config.capacity, len(ids)))
            m1 = Assortment.of(rng.sample(ids, size1))
            m2 = Assortment.of(rng.sample(ids, size2))
            report = check_margin_revenue_equivalence(instance, m1, m2)
            pair_checks += 1
            if not report.agree:
                problems.append(
                    f"margin/revenue comparison disagreed on {m1.ids} vs {m2.ids}"
                )

    status = "FAIL" if problems else "PASS"
    sys.stdout.write(
        f"verify {status}: digest ok={digest == document.get('instance_digest')}, "
        f"trace steps checked={trace_steps}, comparison pairs checked={pair_checks}\n"
    )
    for problem in problems:
        sys.stdout.write(f"  violation: {problem}\n")
    if problems:
        raise VerificationFailure(f"{len(problems)} verification problems")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assortopt",
        description="Capacitated assortment optimization via greedy add-exchange search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a seeded random instance")
    gen.add_argument("--N", type=int, required=True, help="number of products")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--w-lo", type=float, default=0.1, help="weight range low (log-uniform)")
    gen.add_argument("--w-hi", type=float, default=10.0, help="weight range high")
    gen.add_argument("--p-lo", type=float, default=1.0, help="price range low (uniform)")
    gen.add_argument("--p-hi", type=float, default=100.0, help="price range high")
    gen.add_argument("--capacity", type=int, default=None, help="default capacity stored in the file")
    gen.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    gen.set_defaults(func=cmd_gen)

    solve = sub.add_parser("solve", help="run the greedy solver on an instance file")
    solve.add_argument("instance", help="instance JSON path")
    solve.add_argument("--S", type=int, default=0, help="seed subset size")
    solve.add_argument("--C", type=int, default=None, help="capacity (default: instance file)")
    solve.add_argument("--b", type=int, default=None, help="exchange-out budget (default C+1)")
    solve.add_argument(
        "--noise-mode", choices=["none", "fixed", "seeded-uniform"], default="none"
    )
    solve.add_argument(
        "--eps", type=float, default=0.0,
        help="eps_fixed for fixed mode, eps_max for seeded-uniform",
    )
    solve.add_argument("--seed", type=int, default=0, help="noise seed")
    solve.add_argument("--trace", action="store_true", help="record per-step trace")
    solve.add_argument(
        "--exact", action="store_true",
        help="embed the brute-force solution, realized gap and gap bound",
    )
    solve.add_argument("-o", "--output", default=None)
    solve.set_defaults(func=cmd_solve)

    exact = sub.add_parser("exact", help="run and cross-check both reference solvers")
    exact.add_argument("instance")
    exact.add_argument("--C", type=int, default=None)
    exact.add_argument("-o", "--output", default=None)
    exact.set_defaults(func=cmd_exact)

    bench = sub.add_parser("bench", help="sweep a grid of (N, C, b, eps) cells")
    bench.add_argument("--suite", choices=["full", "theorem1", "theorem2"], default="full")
    bench.add_argument("--N", type=int, nargs="*", default=None)
    bench.add_argument("--C", type=int, nargs="*", default=None)
    bench.add_argument("--b", nargs="*", default=None, help="b rules: C, C+1, 2C, auto")
    bench.add_argument("--eps", type=float, nargs="*", default=None)
    bench.add_argument("--seeds", type=int, default=bench_mod.DEFAULT_SEEDS_PER_CELL)
    bench.add_argument("--base-seed", type=int, default=0)
    bench.add_argument(
        "--jobs", type=int, default=None,
        help=f"worker threads (default: ${bench_mod.JOBS_ENV_VAR} or 1)",
    )
    bench.add_argument("-o", "--output", default=None)
    bench.set_defaults(func=cmd_bench)

    verify = sub.add_parser("verify", help="replay a run report's checks from the report alone")
    verify.add_argument("report")
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        _error_json(exc.code, str(exc))
        return EXIT_VALIDATION
    except VerificationFailure as exc:
        _error_json("assertion-failure", str(exc))
        return EXIT_ASSERTION
    except OSError as exc:
        _error_json("io", str(exc))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
