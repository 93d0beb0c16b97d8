"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line on the real terminal (bypassing pytest's
capture) so the eight headline guarantees are visible in any test log.
"""

import contextlib
import json
import math
import time
from collections import defaultdict

import numpy as np
import pytest

from circleot import (
    PowerCost,
    avg_cost,
    avg_cost_derivatives,
    bracket_for,
    build_profile,
    extract_plan,
    histogram_new,
    minimize,
    mk_distance,
    oracle_breakpoints,
    oracle_rotations,
    periodic_cdf,
)
from circleot.cli import main as cli_main
from circleot.oracle import candidate_shifts
from conftest import (
    integral_average_cost,
    random_float_histogram,
    random_rational_histogram,
)


@contextlib.contextmanager
def announce(capsys, num, label):
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"ACCEPTANCE {num} ({label}): FAIL")
        raise
    with capsys.disabled():
        print(f"ACCEPTANCE {num} ({label}): PASS")


def _r_squared(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return 1.0 - ss_res / ss_tot


def _random_rational_pair(rng):
    n0 = int(rng.integers(1, 9))
    n1 = int(rng.integers(1, 9))
    M = int(rng.integers(max(n0, n1) + 1, 65))
    h0 = random_rational_histogram(rng, n0, M)
    h1 = random_rational_histogram(rng, n1, M)
    return h0, h1, M


def test_acceptance_1_exact_agreement_with_both_oracles(capsys):
    with announce(capsys, 1, "exact rational agreement with both oracles"):
        rng = np.random.default_rng(1001)
        lams = [1.0, 1.5, 2.0]
        start = time.perf_counter()
        for trial in range(500):
            h0, h1, M = _random_rational_pair(rng)
            c = PowerCost(lams[trial % 3])
            res = minimize(h0, h1, c)
            assert res.epsilon_used == 1.0 / (2.0 * M)
            bp = oracle_breakpoints(h0, h1, c, bracket_for(c))
            rot = oracle_rotations(h0, h1, c)
            assert abs(res.cost - bp.cost) <= 1e-12
            assert abs(res.cost - rot.cost) <= 1e-12
        assert time.perf_counter() - start < 30.0


def test_acceptance_2_epsilon_gap_guarantee(capsys):
    with announce(capsys, 2, "cost within epsilon of the enumerated minimum"):
        rng = np.random.default_rng(1002)
        c = PowerCost(2.0)
        tight = bracket_for(c, tight=True)
        start = time.perf_counter()
        for _ in range(200):
            n0 = int(rng.integers(1, 26))
            n1 = int(rng.integers(1, 26))
            h0 = random_float_histogram(rng, n0)
            h1 = random_float_histogram(rng, n1)
            best = oracle_breakpoints(h0, h1, c, tight)
            for eps in (1e-4, 1e-8):
                res = minimize(h0, h1, c, eps)
                assert res.cost <= best.cost + eps
                assert res.cost >= best.cost - 1e-12
        assert time.perf_counter() - start < 30.0


def test_acceptance_3_convexity_and_derivative_consistency(capsys):
    with announce(capsys, 3, "convexity and one-sided finite differences"):
        rng = np.random.default_rng(1003)
        c = PowerCost(2.0)
        L = bracket_for(c).lipschitz
        h = 1e-6
        for _ in range(100):
            h0 = random_float_histogram(rng, int(rng.integers(1, 7)))
            h1 = random_float_histogram(rng, int(rng.integers(1, 7)))
            F0, F1 = periodic_cdf(h0), periodic_cdf(h1)
            for _ in range(50):
                a, b = sorted(rng.uniform(-2.0, 2.0, 2))
                ca = avg_cost(build_profile(F0, F1, a), c)
                cb = avg_cost(build_profile(F0, F1, b), c)
                cm = avg_cost(build_profile(F0, F1, 0.5 * (a + b)), c)
                assert cm <= 0.5 * (ca + cb) + 1e-12
            breaks = np.array(candidate_shifts(h0, h1, -2.1, 2.1))
            done = 0
            while done < 50:
                theta = float(rng.uniform(-2.0, 2.0))
                if np.abs(breaks - theta).min() <= 2.0 * h:
                    continue
                ev = avg_cost_derivatives(F0, F1, c, theta)
                fwd = (avg_cost(build_profile(F0, F1, theta + h), c) - ev.value) / h
                bwd = (ev.value - avg_cost(build_profile(F0, F1, theta - h), c)) / h
                assert abs(fwd - ev.right_derivative) <= 10.0 * h * L
                assert abs(bwd - ev.left_derivative) <= 10.0 * h * L
                done += 1


def test_acceptance_4_closed_form_single_atom_instance(capsys):
    with announce(capsys, 4, "closed-form shifted-atom curve and optimum"):
        h0 = histogram_new([0.5], [1.0])
        h1 = histogram_new([1.0], [1.0])
        c = PowerCost(2.0)
        F0, F1 = periodic_cdf(h0), periodic_cdf(h1)
        for theta in np.linspace(-1.0, 0.0, 201):
            got = avg_cost(build_profile(F0, F1, float(theta)), c)
            assert abs(got - 0.25) <= 1e-12
        for theta in np.linspace(0.0, 1.0, 201):
            got = avg_cost(build_profile(F0, F1, float(theta)), c)
            assert abs(got - (0.25 + 2.0 * float(theta))) <= 1e-12
        # brute-force integral cross-check at a few shifts
        for theta in (-0.7, -0.2, 0.3, 0.8):
            want = 0.25 if theta <= 0 else 0.25 + 2.0 * theta
            est = integral_average_cost(F0, F1, c, theta, samples=1_000_000)
            assert abs(est - want) <= 1e-4
        assert minimize(h0, h1, c).cost == pytest.approx(0.25, abs=1e-12)


def test_acceptance_5_distance_is_a_metric(capsys):
    with announce(capsys, 5, "metric identity, symmetry, triangle inequality"):
        rng = np.random.default_rng(1005)
        eps = 1e-13
        for _ in range(100):
            hs = [
                random_float_histogram(rng, int(rng.integers(1, 8)))
                for _ in range(3)
            ]
            assert mk_distance(hs[0], hs[0], 2.0, eps) == 0.0
            d01 = mk_distance(hs[0], hs[1], 2.0, eps)
            d10 = mk_distance(hs[1], hs[0], 2.0, eps)
            d12 = mk_distance(hs[1], hs[2], 2.0, eps)
            d02 = mk_distance(hs[0], hs[2], 2.0, eps)
            assert abs(d01 - d10) <= 1e-10
            assert d02 <= d01 + d12 + 1e-10


def _bench_rows(capsys, argv):
    code = cli_main(argv)
    out = capsys.readouterr().out
    assert code == 0
    return json.loads(out)["rows"]


def test_acceptance_6_complexity_trends(capsys):
    with announce(capsys, 6, "linear scaling in size and in log(1/eps)"):
        # merge cost is exactly one comparison short of the total atom count
        rng = np.random.default_rng(1006)
        for _ in range(50):
            n0 = int(rng.integers(1, 30))
            n1 = int(rng.integers(1, 30))
            prof = build_profile(
                periodic_cdf(random_float_histogram(rng, n0)),
                periodic_cdf(random_float_histogram(rng, n1)),
                float(rng.uniform(-2, 2)),
            )
            assert prof.comparisons == n0 + n1 - 1

        # wall-clock fits get up to three attempts to ride out scheduler jitter
        def best_fit(argv, xs, key, xmap):
            best = -math.inf
            for _ in range(3):
                rows = _bench_rows(capsys, argv)
                times = {row[key]: row["mean_ms"] for row in rows}
                best = max(best, _r_squared([xmap(x) for x in xs], [times[x] for x in xs]))
                if best >= 0.9:
                    break
            return best

        sizes = [100, 500, 1000, 5000, 10000, 50000, 100000]
        r2_n = best_fit(
            ["bench", "--seed", "0", "--repeats", "3", "--epsilons", "1e-10",
             "--sizes"] + [str(s) for s in sizes],
            sizes,
            "n",
            float,
        )
        assert r2_n >= 0.9, f"size-trend fit too weak: R^2 = {r2_n}"

        epsilons = [1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12]
        r2_e = best_fit(
            ["bench", "--seed", "0", "--repeats", "300", "--sizes", "20",
             "--kernel", "python",
             "--epsilons"] + [f"{e:g}" for e in epsilons],
            epsilons,
            "epsilon",
            lambda e: math.log10(1.0 / e),
        )
        assert r2_e >= 0.9, f"tolerance-trend fit too weak: R^2 = {r2_e}"


def test_acceptance_7_iteration_budget_and_bracket_invariant(capsys):
    with announce(capsys, 7, "iteration budget and bracket slope invariant"):
        rng = np.random.default_rng(1001)  # same stream as acceptance 1
        lams = [1.0, 1.5, 2.0]
        for trial in range(500):
            h0, h1, M = _random_rational_pair(rng)
            c = PowerCost(lams[trial % 3])
            b = bracket_for(c)
            F0, F1 = periodic_cdf(h0), periodic_cdf(h1)
            check_every = 1 if trial % 25 == 0 else 10**9

            def hook(it, lo, hi, dl, dr):
                if it % check_every:
                    return
                assert avg_cost_derivatives(F0, F1, c, lo).right_derivative <= 1e-9
                assert avg_cost_derivatives(F0, F1, c, hi).left_derivative >= -1e-9

            res = minimize(h0, h1, c, hook=hook)
            eps = 1.0 / (2.0 * M)
            budget = math.ceil(math.log2(b.width * b.lipschitz / eps)) + 1
            assert res.iterations <= budget


def test_acceptance_8_plan_validity(capsys):
    with announce(capsys, 8, "plan marginals, monotonicity, cost, short arcs"):
        rng = np.random.default_rng(1008)
        c = PowerCost(2.0)
        for _ in range(200):
            h0, h1, _ = _random_rational_pair(rng)
            res = minimize(h0, h1, c)
            plan = extract_plan(h0, h1, c, res.theta_star)

            by_source = defaultdict(float)
            by_target = defaultdict(float)
            for a in plan.assignments:
                by_source[a.source_position] += a.mass
                by_target[a.target_position_circle] += a.mass
            for p, m in zip(h0.positions, h0.masses):
                assert abs(by_source[p] - m) <= 1e-12
            for p, m in zip(h1.positions, h1.masses):
                assert abs(by_target[p] - m) <= 1e-12

            lifted = [a.target_position_lifted for a in plan.assignments]
            assert lifted == sorted(lifted)

            prof = build_profile(periodic_cdf(h0), periodic_cdf(h1), res.theta_star)
            assert abs(plan.total_cost - avg_cost(prof, c)) <= 1e-12
            assert abs(plan.total_cost - res.cost) <= 1e-12

            for a in plan.assignments:
                best = min(
                    c(a.source_position, a.target_position_circle + k)
                    for k in range(-3, 4)
                )
                assert c(a.source_position, a.target_position_lifted) <= best + 1e-12
