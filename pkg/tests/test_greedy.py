"""Greedy add-exchange solver: frozen examples, a literal reference
simulation, and the loop invariants (monotonicity, size, budget,
iteration and call-count bounds)."""

import itertools
import random

import pytest

from assortopt import (
    Assortment,
    ConfigError,
    GreedyConfig,
    Instance,
    NoiseSpec,
    brute_force_opt,
    call_count_bound,
    greedy_add_exchange,
    greedy_opt,
    make_counting_oracle,
    make_exact_oracle,
    make_noisy_oracle,
    mnl_revenue,
    naive_greedy,
)
from assortopt.generate import GeneratorSpec, generate_instance

THREE = Instance.of([(1, 1.0, 10.0), (2, 2.0, 6.0), (3, 0.5, 12.0)])


# --- reference simulation: a plain transcription of the procedure ---------


def simulate_add_exchange(evaluate, start, universe, budget):
    """Independent re-derivation of one add-exchange invocation.

    Scans every swap and every addition by full enumeration each pass,
    keeping the first maximum in (entering, leaving) scan order, which
    realizes the smallest-id tie-breaks.
    """
    current = frozenset(start)
    pool = set(universe) - current
    outs = dict.fromkeys(universe, 0)
    rev = evaluate(current)
    size_limit = len(start) + 1

    while pool:
        best_swap = None  # (rev, entering, leaving)
        for entering in sorted(pool):
            for leaving in sorted(current):
                r = evaluate(current - {leaving} | {entering})
                if best_swap is None or r > best_swap[0]:
                    best_swap = (r, entering, leaving)
        best_add = None  # (rev, entering)
        for entering in sorted(pool):
            r = evaluate(current | {entering})
            if best_add is None or r > best_add[0]:
                best_add = (r, entering)

        swap_rev = best_swap[0] if best_swap else float("-inf")
        if (
            len(current) < size_limit
            and best_add is not None
            and best_add[0] > rev
            and best_add[0] > swap_rev
        ):
            rev, entering = best_add
            current = current | {entering}
            pool.discard(entering)
        elif best_swap is not None and swap_rev > rev:
            rev, entering, leaving = best_swap
            current = current - {leaving} | {entering}
            outs[leaving] += 1
            pool.discard(entering)
            if outs[leaving] < budget:
                pool.add(leaving)
        else:
            break
    return current, rev


def simulate_solver(evaluate, universe, seed_size, capacity, budget):
    """Independent re-derivation of the seeded outer loop."""
    ids = sorted(universe)
    finals = []
    for seed in itertools.combinations(ids, seed_size):
        current = frozenset(seed)
        rev = None
        for _ in range(capacity - seed_size):
            current, rev = simulate_add_exchange(evaluate, current, ids, budget)
        if rev is None:
            rev = evaluate(current)
        finals.append((rev, tuple(sorted(current))))
    return min(finals, key=lambda t: (-t[0], t[1]))


def set_oracle(oracle):
    """Adapt an assortment oracle to plain-set calls for the simulators."""
    return lambda members: oracle.evaluate(Assortment.of(members))


# --- frozen examples -------------------------------------------------------


class TestAddExchangeExamples:
    def test_single_product_added_once(self):
        inst = Instance.of([(1, 1.0, 10.0)])
        final, _ = greedy_add_exchange(Assortment(), [1], 2, make_exact_oracle(inst))
        assert final.ids == (1,)

    def test_empty_pool_returns_start_unchanged(self):
        inst = Instance.of([(1, 1.0, 10.0)])
        final, records = greedy_add_exchange(
            Assortment.of([1]), [1], 2, make_exact_oracle(inst), trace=True
        )
        assert final.ids == (1,)
        assert [r.action for r in records] == ["terminate"]

    def test_exchange_recovers_better_pair(self):
        # derived by simulating the loop on the three-product instance:
        # add 1 (-> 5.5), exchange 2 out for 3 (-> 6.4), stop
        final, records = greedy_add_exchange(
            Assortment.of([2]), [1, 2, 3], 3, make_exact_oracle(THREE), trace=True
        )
        assert final.ids == (1, 3)
        assert mnl_revenue(THREE, final) == pytest.approx(6.4, rel=1e-15)
        assert [r.action for r in records] == ["add", "exchange", "terminate"]
        assert records[1].added == 3 and records[1].removed == 2

    def test_empty_universe_returns_start(self):
        final, _ = greedy_add_exchange(Assortment(), [], 1, make_exact_oracle(THREE))
        assert final.ids == ()


class TestSolverExamples:
    def test_single_product_capacity_one(self):
        inst = Instance.of([(1, 1.0, 10.0)])
        report = greedy_opt(GreedyConfig(0, 1, 2), inst.ids(), make_exact_oracle(inst))
        assert report.best_assortment.ids == (1,)
        assert report.best_oracle_revenue == 5.0

    def test_matches_brute_force_on_three_products(self):
        report = greedy_opt(GreedyConfig(0, 2, 3), THREE.ids(), make_exact_oracle(THREE))
        brute = brute_force_opt(make_exact_oracle(THREE), THREE.ids(), 2)
        assert report.best_assortment == brute.assortment == Assortment.of([1, 3])
        assert report.best_oracle_revenue == pytest.approx(6.4, rel=1e-15)

    def test_equal_prices_full_capacity_takes_everything(self):
        # identical prices make revenue increase with total offered weight
        inst = Instance.of([(1, 0.5, 7.0), (2, 2.0, 7.0), (3, 1.0, 7.0), (4, 3.0, 7.0)])
        n = inst.n
        for seed_size in (0, 2):
            report = greedy_opt(GreedyConfig(seed_size, n, n + 1), inst.ids(), make_exact_oracle(inst))
            best = max(
                (mnl_revenue(inst, Assortment.of(c)) for k in range(n + 1)
                 for c in itertools.combinations(inst.ids(), k)),
            )
            assert report.best_oracle_revenue == pytest.approx(best, rel=1e-12)
            assert report.best_assortment.ids == inst.ids()

    def test_identical_products_tie_break_to_lowest_ids(self):
        inst = Instance.of([(i, 2.0, 5.0) for i in range(1, 6)])
        report = greedy_opt(GreedyConfig(0, 3, 4), inst.ids(), make_exact_oracle(inst))
        assert report.best_assortment.ids == (1, 2, 3)

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            greedy_opt(GreedyConfig(3, 2, 3), THREE.ids(), make_exact_oracle(THREE))
        with pytest.raises(ConfigError):
            greedy_opt(GreedyConfig(0, 4, 3), THREE.ids(), make_exact_oracle(THREE))
        with pytest.raises(ConfigError):
            greedy_opt(GreedyConfig(0, 2, 0), THREE.ids(), make_exact_oracle(THREE))

    def test_seed_size_equals_capacity_scores_seeds_only(self):
        report = greedy_opt(GreedyConfig(2, 2, 1), THREE.ids(), make_exact_oracle(THREE))
        best = max(
            (mnl_revenue(THREE, Assortment.of(c)), c)
            for c in itertools.combinations(THREE.ids(), 2)
        )
        assert report.best_oracle_revenue == best[0]
        assert report.seeds_explored == 3


# --- agreement with the reference simulation -------------------------------


class TestAgainstSimulation:
    @pytest.mark.parametrize("noise_mode", ["none", "seeded-uniform"])
    def test_add_exchange_matches_simulation(self, noise_mode):
        rng = random.Random(2024)
        for trial in range(60):
            n = rng.randint(1, 8)
            inst = generate_instance(GeneratorSpec(n, seed=rng.getrandbits(60)))
            oracle = make_exact_oracle(inst)
            if noise_mode == "seeded-uniform":
                oracle = make_noisy_oracle(
                    oracle, NoiseSpec(mode="seeded-uniform", eps_max=0.05, seed=trial)
                )
            start_size = rng.randint(0, max(0, n - 1))
            start = Assortment.of(rng.sample(list(inst.ids()), start_size))
            budget = rng.randint(1, n + 2)
            final, _ = greedy_add_exchange(start, inst.ids(), budget, oracle)
            expected, _ = simulate_add_exchange(set_oracle(oracle), start.ids, inst.ids(), budget)
            assert set(final.ids) == expected

    @pytest.mark.parametrize("noise_mode", ["none", "seeded-uniform"])
    def test_solver_matches_simulation(self, noise_mode):
        rng = random.Random(77)
        for trial in range(40):
            n = rng.randint(1, 7)
            inst = generate_instance(GeneratorSpec(n, seed=rng.getrandbits(60)))
            oracle = make_exact_oracle(inst)
            if noise_mode == "seeded-uniform":
                oracle = make_noisy_oracle(
                    oracle, NoiseSpec(mode="seeded-uniform", eps_max=0.02, seed=trial)
                )
            capacity = rng.randint(1, n)
            seed_size = rng.randint(0, capacity)
            budget = rng.randint(1, capacity + 2)
            report = greedy_opt(GreedyConfig(seed_size, capacity, budget), inst.ids(), oracle)
            sim_rev, sim_ids = simulate_solver(
                set_oracle(oracle), inst.ids(), seed_size, capacity, budget
            )
            assert report.best_assortment.ids == sim_ids
            assert report.best_oracle_revenue == sim_rev


# --- loop invariants --------------------------------------------------------


def traced_runs(count=40, rng_seed=5150, eps=0.0):
    rng = random.Random(rng_seed)
    for trial in range(count):
        n = rng.randint(2, 9)
        inst = generate_instance(GeneratorSpec(n, seed=rng.getrandbits(60)))
        oracle = make_exact_oracle(inst)
        if eps:
            oracle = make_noisy_oracle(
                oracle, NoiseSpec(mode="seeded-uniform", eps_max=eps, seed=trial)
            )
        capacity = rng.randint(1, n)
        budget = rng.randint(1, capacity + 2)
        config = GreedyConfig(0, capacity, budget)
        report = greedy_opt(config, inst.ids(), oracle, trace=True)
        yield inst, config, report


class TestLoopInvariants:
    def test_accepted_revenue_strictly_increases(self):
        for _inst, _config, report in traced_runs(eps=0.01):
            for _seed, records in report.traces:
                last = None
                for record in records:
                    if record.action == "terminate":
                        last = None  # next invocation re-evaluates its own start
                        continue
                    if last is not None:
                        assert record.revenue_after > last
                    last = record.revenue_after

    def test_size_grows_at_most_one_per_invocation(self):
        for _inst, config, report in traced_runs():
            for seed, records in report.traces:
                size_cap = len(seed)
                for record in records:
                    if record.action == "terminate":
                        size_cap += 1  # next invocation may add one more
                        continue
                    assert len(record.assortment_after) <= size_cap + 1
                assert size_cap <= config.capacity + 1

    def test_exchange_out_budget_respected(self):
        for _inst, config, report in traced_runs(eps=0.005):
            for _seed, records in report.traces:
                for record in records:
                    if record.exchange_out_counts:
                        assert max(record.exchange_out_counts.values()) <= config.exchange_budget

    def test_iteration_bound_per_invocation(self):
        for inst, config, report in traced_runs(eps=0.01):
            n = inst.n
            limit = n * config.exchange_budget + 1
            for _seed, records in report.traces:
                accepted = 0
                for record in records:
                    if record.action == "terminate":
                        # the final pass only executed if moves were still available
                        executed = accepted + (1 if record.pool_before else 0)
                        assert executed <= limit
                        accepted = 0
                    else:
                        accepted += 1

    def test_call_count_bound_single_invocation(self):
        rng = random.Random(31)
        for _ in range(30):
            n = rng.randint(2, 9)
            inst = generate_instance(GeneratorSpec(n, seed=rng.getrandbits(60)))
            start_size = rng.randint(0, n - 1)
            start = Assortment.of(rng.sample(list(inst.ids()), start_size))
            budget = rng.randint(1, start_size + 3)
            counting, stats = make_counting_oracle(make_exact_oracle(inst))
            greedy_add_exchange(start, inst.ids(), budget, counting)
            capacity = start_size + 1  # the invocation-level size context
            assert stats.call_count <= (n * budget + 1) * (capacity * n + n)

    def test_call_count_bound_full_solve(self):
        rng = random.Random(32)
        for _ in range(25):
            n = rng.randint(2, 8)
            inst = generate_instance(GeneratorSpec(n, seed=rng.getrandbits(60)))
            capacity = rng.randint(1, n)
            # the bound counts invocation work, so it needs S < C
            seed_size = rng.randint(0, capacity - 1)
            budget = rng.randint(1, capacity + 2)
            config = GreedyConfig(seed_size, capacity, budget)
            report = greedy_opt(config, inst.ids(), make_exact_oracle(inst))
            assert report.oracle_calls <= call_count_bound(n, config)

    def test_exact_oracle_recovers_optimum_spot_check(self):
        rng = random.Random(4096)
        for _ in range(30):
            n = rng.randint(3, 9)
            inst = generate_instance(GeneratorSpec(n, seed=rng.getrandbits(60)))
            capacity = rng.randint(1, min(4, n))
            config = GreedyConfig(0, capacity, capacity + 1)
            report = greedy_opt(config, inst.ids(), make_exact_oracle(inst))
            brute = brute_force_opt(make_exact_oracle(inst), inst.ids(), capacity)
            assert report.best_oracle_revenue == pytest.approx(brute.revenue, rel=1e-9)


class TestNaiveGreedy:
    def test_capacity_one_picks_best_singleton(self):
        best = naive_greedy(1, THREE.ids(), make_exact_oracle(THREE))
        assert best.ids == (1,)  # R({1}) = 5 beats 4 and 4

    def test_capacity_zero_returns_empty(self):
        assert naive_greedy(0, THREE.ids(), make_exact_oracle(THREE)).ids == ()

    def test_tie_breaks_to_smallest_id(self):
        inst = Instance.of([(1, 1.0, 8.0), (2, 1.0, 8.0)])
        assert naive_greedy(1, inst.ids(), make_exact_oracle(inst)).ids == (1,)

    def test_never_beats_brute_force(self):
        rng = random.Random(808)
        for _ in range(30):
            n = rng.randint(2, 8)
            inst = generate_instance(GeneratorSpec(n, seed=rng.getrandbits(60)))
            capacity = rng.randint(1, n)
            naive = naive_greedy(capacity, inst.ids(), make_exact_oracle(inst))
            brute = brute_force_opt(make_exact_oracle(inst), inst.ids(), capacity)
            assert mnl_revenue(inst, naive) <= brute.revenue + 1e-12
