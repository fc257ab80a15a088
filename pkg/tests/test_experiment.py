import math
import warnings

import pytest

from qsat12.errors import InputError, UniversalBlockTooLarge
from qsat12.experiment import (
    CSV_HEADER,
    AlphaLog,
    Fixed,
    LowPrecisionWarning,
    NonMonotoneWarning,
    SweepConfig,
    SweepRow,
    bisect_threshold,
    check_monotone,
    estimate_threshold,
    figure1_table,
    pick_method,
    rows_to_csv,
    sweep,
)
from qsat12.evaluator import evaluate
from qsat12.generator import derive_seed, sample_binomial


def test_config_validation():
    with pytest.raises(InputError):
        SweepConfig(100, Fixed(2), (1.0, 1.0))
    with pytest.raises(InputError):
        SweepConfig(100, Fixed(2), (1.5, 1.0))
    with pytest.raises(InputError):
        SweepConfig(100, Fixed(2), (1.0,), samples_per_point=0)
    with pytest.raises(InputError):
        SweepConfig(100, AlphaLog(0.1), (1.0,))
    with pytest.raises(InputError):
        SweepConfig(100, Fixed(2), (1.0,), model="other")
    assert SweepConfig(2**14, AlphaLog(15 / 8), (1.0,)).m == math.floor(15 / 8 * math.log(2**14)) == 18


def test_pick_method():
    assert pick_method(6) == "gray" and pick_method(7) == "branch" and pick_method(9, "gray") == "gray"


def test_row_invariants_and_determinism():
    cfg = SweepConfig(60, Fixed(2), (0.5, 1.5, 3.0), 30, seed=5)
    a, b = sweep(cfg), sweep(cfg)
    strip = lambda rows: [(r.c, r.sat_count, r.seed, r.p_hat, r.stderr) for r in rows]
    assert strip(a) == strip(b)
    for r in a:
        assert r.p_hat == r.sat_count / r.samples
        assert r.stderr == pytest.approx(math.sqrt(r.p_hat * (1 - r.p_hat) / r.samples))
    assert [r.c for r in a] == [0.5, 1.5, 3.0]


def test_row_seed_replays_samples():
    cfg = SweepConfig(60, Fixed(2), (1.5, 2.5), 25, seed=9)
    for row in sweep(cfg):
        sat = sum(evaluate(sample_binomial(2, 60, row.c, derive_seed(row.seed, k))) for k in range(row.samples))
        assert sat == row.sat_count


def test_threads_match_serial():
    cfg = SweepConfig(60, Fixed(2), (1.0, 2.0), 20, seed=1)
    par = SweepConfig(60, Fixed(2), (1.0, 2.0), 20, seed=1, threads=2)
    assert [r.sat_count for r in sweep(cfg)] == [r.sat_count for r in sweep(par)]


def test_uniform_model():
    rows = sweep(SweepConfig(60, Fixed(2), (0.5, 4.0), 20, seed=2, model="uniform"))
    assert rows[0].p_hat > rows[1].p_hat


def test_fail_fast():
    cfg = SweepConfig(10, Fixed(31), (1.0,), 3, method="gray")
    with pytest.raises(UniversalBlockTooLarge):
        sweep(cfg)
    lax = SweepConfig(10, Fixed(31), (1.0,), 3, method="gray", fail_fast=False)
    with pytest.warns(UserWarning):
        rows = sweep(lax)
    assert rows[0].samples == 0


def _row(c, p, se):
    return SweepRow(c, 10, 1, 100, int(p * 100), p, se, 0, 0.0)


def test_monotone_check():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert check_monotone([_row(1.0, 0.9, 0.03), _row(1.5, 0.92, 0.03), _row(2.0, 0.1, 0.03)])
    with pytest.warns(NonMonotoneWarning):
        assert not check_monotone([_row(1.0, 0.2, 0.02), _row(1.5, 0.9, 0.02)])


def test_bisection_fixed_m_small_n():
    est = bisect_threshold(400, Fixed(2), 40, seed=3, tol=1 / 8)
    assert est.hi - est.lo <= 1 / 8
    assert est.lo <= est.c_hat <= est.hi
    assert len(est.rows) == 3
    assert estimate_threshold(400, Fixed(2), 40, seed=3, tol=1 / 8) == est.c_hat


def test_bisection_degenerate_samples():
    with pytest.warns(LowPrecisionWarning):
        c = estimate_threshold(100, Fixed(2), 1, seed=0, tol=0.25)
    assert 1.0 <= c <= 2.0
    with pytest.raises(InputError):
        estimate_threshold(100, Fixed(2), 10, seed=0, tol=0)


def test_csv_header_and_figure1():
    rows = sweep(SweepConfig(30, Fixed(1), (1.0,), 5))
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == CSV_HEADER == "c,n,m,samples,sat_count,p_hat,stderr,seed,wall_ms"
    table = figure1_table([1.0, 2.3718, 10.722])
    lines = table.splitlines()
    assert lines[0] == "alpha,c_star,branch"
    vals = [float(l.split(",")[1]) for l in lines[1:]]
    assert vals[0] == 2.0
    assert abs(vals[1] - 1.812582003) <= 1e-6
    assert abs(vals[2] - 1.351216012) <= 1e-6


def test_wall_clock_accounting():
    import time

    t0 = time.perf_counter()
    rows = sweep(SweepConfig(300, Fixed(3), (1.0, 1.5, 2.0), 40, seed=4))
    total = (time.perf_counter() - t0) * 1000
    assert sum(r.wall_ms for r in rows) == pytest.approx(total, rel=0.1)
