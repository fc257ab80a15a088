"""Acceptance criteria 1-12; each test records one PASS/FAIL line."""

import itertools
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE
from qsat12 import oracles
from qsat12.certificates import extract_unsat_core_cycle, verify_witness
from qsat12.counting import (
    FALLING_FACTORIAL_CONVENTION,
    bicycle_union_bound,
    count_bicycles,
    count_snakes,
    d_pure_sequences,
    expected_bicycles_exact,
    expected_snakes,
    expected_snakes_exact,
    monte_carlo_snake_count,
    stirling2,
)
from qsat12.evaluator import evaluate, find_falsifying, naive_evaluate, sat_2cnf
from qsat12.experiment import AlphaLog, Fixed, SweepConfig, bisect_threshold, sweep
from qsat12.formula import Cnf2, is_pure
from qsat12.generator import derive_seed, sample_binomial
from qsat12.reduction import Cnf3, brute_sat, psi, reduce_3sat
from qsat12.threshold import (
    H,
    LN2,
    critical_ratio,
    d2g_dgamma2,
    g,
    g_expanded,
    solve_x0,
    stationary_point,
    x0_residual,
)


def record(k, ok, detail):
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[k] = line
    print(line)
    assert ok, line


def test_criterion_01_figure1_values():
    pts = [(1.444, 1.999874517), (2.3718, 1.812582003), (5.1552, 1.531000997), (10.722, 1.351216012), (20.0, 1.248545784)]
    t0 = time.perf_counter()
    errs = [abs(critical_ratio(a).c_star - c) for a, c in pts]
    dt = time.perf_counter() - t0
    record(1, max(errs) <= 1e-6 and dt < 1.0, f"max |dc*| = {max(errs):.2e} (tol 1e-6), {dt * 1000:.1f} ms")


def test_criterion_02_saturated_branch():
    vals = [critical_ratio(a).c_star for a in (0.5, 1.0, 1 / LN2)]
    record(2, all(v == 2.0 for v in vals), f"c*(0.5), c*(1), c*(1/ln 2) = {vals}")


def test_criterion_03_rate_function():
    t0 = time.perf_counter()
    worst_id = worst_grad = 0.0
    for alpha in np.linspace(1.5, 20, 10):
        for c in np.linspace(1.05, 1.95, 10):
            bh, gh = stationary_point(alpha, c)
            worst_id = max(worst_id, abs(g(alpha, c, bh, gh).value - (alpha * H(c) - 1)))
            h = 1e-6
            db = (g_expanded(alpha, c, bh + h, gh) - g_expanded(alpha, c, bh - h, gh)) / (2 * h)
            dg = (g_expanded(alpha, c, bh, gh + h) - g_expanded(alpha, c, bh, gh - h)) / (2 * h)
            worst_grad = max(worst_grad, abs(db), abs(dg))
    # 10^4 points: 10 x 10 (alpha, c) times 10 x 10 (beta, gamma) inside the domain
    concave = 0
    for alpha in np.linspace(1.5, 20, 10):
        for c in np.linspace(1.05, 1.95, 10):
            for beta in np.linspace(alpha / 10, alpha, 10):
                for ratio in np.linspace(1.05, 6.0, 10):
                    concave += d2g_dgamma2(alpha, c, beta, beta * ratio) < 0
    dt = time.perf_counter() - t0
    ok = worst_id <= 1e-9 and worst_grad <= 1e-5 and concave == 10_000 and dt < 10
    record(
        3,
        ok,
        f"identity {worst_id:.1e} (tol 1e-9), grad {worst_grad:.1e} (tol 1e-5), concave {concave}/10000, {dt:.1f} s",
    )


def test_criterion_04_x0_solver():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(1000):
        beta = float(rng.uniform(1e-3, 10))
        gamma = beta * float(rng.uniform(1.0, 50.0))
        worst = max(worst, x0_residual(beta, gamma, solve_x0(beta, gamma)))
    diag = [solve_x0(b, b) for b in (0.1, 1.0, 7.5)]
    record(4, worst <= 1e-12 and all(v == 0.0 for v in diag), f"max residual {worst:.1e} (tol 1e-12), x0(b,b) = {diag}")


def test_criterion_05_exact_counts():
    t0 = time.perf_counter()
    bad = []
    for a in range(0, 11):
        for b in range(0, a + 1):
            if stirling2(a, b) != oracles.stirling2_bruteforce(a, b):
                bad.append(("S", a, b))
    for m in range(1, 4):
        for s1 in range(1, 7):
            if d_pure_sequences(m, s1) != oracles.count_pure_sequences_bruteforce(m, s1):
                bad.append(("d", m, s1))
    for n in range(1, 6):
        for m in range(1, 4):
            if count_snakes(n, m, 3) != oracles.snake_structures(n, m, 3)[0]:
                bad.append(("snake", n, m))
            for s in (2, 3):
                if count_bicycles(n, m, s) != oracles.bicycle_structure_count(n, m, s):
                    bad.append(("bicycle", n, m, s))
    pinned = FALLING_FACTORIAL_CONVENTION == "standard" and oracles.snake_structures(3, 1, 3)[0] == 96
    dt = time.perf_counter() - t0
    record(5, not bad and pinned and dt < 60, f"mismatches {bad}, (n)_s = {FALLING_FACTORIAL_CONVENTION}, {dt:.1f} s")


def test_criterion_06_expectation():
    t0 = time.perf_counter()
    rep = monte_carlo_snake_count(8, 2, 1.5, 3, 10_000, seed=20240601)
    ratio_ok = all(
        expected_bicycles_exact(n, m, Fraction(3, 2), s) == ((2 * s) ** 2 - 1) * expected_snakes_exact(n, m, Fraction(3, 2), s)
        for n, m, s in [(8, 2, 3), (20, 3, 5), (50, 4, 9), (1000, 9, 21)]
    )
    dt = time.perf_counter() - t0
    diff = abs(rep.empirical_mean - rep.expected)
    ok = diff <= 3 * rep.empirical_stderr and ratio_ok and dt < 120
    record(
        6,
        ok,
        f"mean {rep.empirical_mean:.5f} vs {rep.expected:.5f}, |diff| {diff:.5f} <= 3*se {3 * rep.empirical_stderr:.5f}; "
        f"ratio exact {ratio_ok}; {dt:.1f} s",
    )


def test_criterion_07_solver_oracle():
    t0 = time.perf_counter()
    rng = random.Random(7)
    bad = true = 0
    for k in range(500):
        m, n = rng.randint(1, 4), rng.randint(2, 6)
        c = (0.5, 1.5, 3.0)[k % 3]
        f = sample_binomial(m, n, c, derive_seed(7, k))
        want = naive_evaluate(f)
        true += want
        bad += evaluate(f) != want
    dt = time.perf_counter() - t0
    record(7, bad == 0 and dt < 60, f"{bad} disagreements on 500 formulas ({true} true, {500 - true} false), {dt:.1f} s")


def test_criterion_08_reduction():
    t0 = time.perf_counter()
    rng = random.Random(8)
    bad = 0
    for _ in range(200):
        v = rng.randint(3, 6)
        k = rng.randint(3, 10)
        cl = tuple(tuple(a * rng.choice((1, -1)) for a in rng.sample(range(1, v + 1), 3)) for _ in range(k))
        phi = Cnf3(v, cl)
        bad += brute_sat(phi) != (not evaluate(reduce_3sat(phi)))
    triv = Cnf3(3, ((1, 2, 3),) * 3)
    all8 = Cnf3(3, tuple(tuple(s * a for s, a in zip(sg, (1, 2, 3))) for sg in itertools.product((1, -1), repeat=3)))
    fixed_ok = brute_sat(triv) and not evaluate(reduce_3sat(triv)) and not brute_sat(all8) and evaluate(reduce_3sat(all8))
    psi_ok = True
    for nc in range(3, 11):
        q = psi(nc)
        psi_ok &= not sat_2cnf(q).satisfiable
        for i in range(len(q.clauses)):
            psi_ok &= sat_2cnf(Cnf2(nc, q.clauses[:i] + q.clauses[i + 1 :])).satisfiable
    dt = time.perf_counter() - t0
    record(8, bad == 0 and fixed_ok and psi_ok and dt < 60, f"{bad} mismatches, fixed {fixed_ok}, psi minimal {psi_ok}, {dt:.1f} s")


def test_criterion_09_endpoints():
    t0 = time.perf_counter()
    lo, hi = sweep(SweepConfig(2000, Fixed(2), (0.8, 2.3), 200, seed=9))
    dt = time.perf_counter() - t0
    ok = lo.p_hat >= 0.95 and hi.p_hat <= 0.05 and dt < 600
    record(9, ok, f"p_hat(0.8) = {lo.p_hat:.3f} (>= 0.95), p_hat(2.3) = {hi.p_hat:.3f} (<= 0.05), {dt:.0f} s")


@pytest.mark.slow
def test_criterion_10_intermediate_regime():
    n = 2**14
    t0 = time.perf_counter()
    est = bisect_threshold(n, AlphaLog(15 / 8), samples=24, seed=10, tol=1 / 32)
    dt = time.perf_counter() - t0
    target = critical_ratio(15 / 8).c_star
    probes = ", ".join(f"{r.c:.4f}:{r.p_hat:.2f}" for r in est.rows)
    ok = abs(est.c_hat - target) <= 0.15 and dt < 7200
    record(
        10,
        ok,
        f"c_hat = {est.c_hat:.4f} vs c*(15/8) = {target:.4f} (tol 0.15), m = {math.floor(15 / 8 * math.log(n))}, "
        f"probes [{probes}], {dt:.0f} s",
    )


def test_criterion_11_certificates():
    t0 = time.perf_counter()
    done = bad_w = bad_c = 0
    k = 0
    while done < 1000:
        f = sample_binomial(4, 30, 2.5, derive_seed(11, k))
        k += 1
        w = find_falsifying(f)
        if w is None:
            continue
        done += 1
        bad_w += not verify_witness(w, f)
        cyc = extract_unsat_core_cycle(w)
        bad_c += not (is_pure(c.u for c in cyc) and not sat_2cnf(Cnf2(f.n, tuple(c.existential for c in cyc))).satisfiable)
    dt = time.perf_counter() - t0
    record(11, bad_w == 0 and bad_c == 0 and dt < 300, f"{done} false formulas: bad witnesses {bad_w}, bad cycles {bad_c}, {dt:.1f} s")


def test_criterion_12_union_bound_trend():
    vals = []
    for n in (10**3, 10**4, 10**5):
        m = math.floor(math.log(n) / math.log(2))
        vals.append(bicycle_union_bound(n, m, 1.5, 200))
    ok = vals[0] > vals[1] > vals[2]
    record(12, ok, "bounds " + ", ".join(f"{v:.4g}" for v in vals) + " (strictly decreasing)")
