"""Phase-transition sweeps and empirical threshold estimation.

Seeding: grid point ``i`` of a sweep gets ``row_seed = derive_seed(seed, i)``
and its sample ``k`` is generated from ``derive_seed(row_seed, k)``, so any
single formula can be regenerated from the row it was counted in.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import InputError, QSATError
from .evaluator import evaluate
from .generator import derive_seed, sample_binomial, sample_uniform
from .threshold import critical_ratio

CSV_HEADER = "c,n,m,samples,sat_count,p_hat,stderr,seed,wall_ms"
MODELS = ("binomial", "uniform")


class NonMonotoneWarning(UserWarning):
    """Observed p_hat increased with c by more than sampling noise."""


class LowPrecisionWarning(UserWarning):
    """Too few samples per point for a meaningful bisection."""


@dataclass(frozen=True)
class Fixed:
    m: int

    def m_for(self, n: int) -> int:
        return self.m


@dataclass(frozen=True)
class AlphaLog:
    alpha: float

    def m_for(self, n: int) -> int:
        return int(math.floor(self.alpha * math.log(n)))


MRule = Union[Fixed, AlphaLog]


@dataclass(frozen=True)
class SweepConfig:
    n: int
    m_rule: MRule
    c_grid: tuple[float, ...]
    samples_per_point: int = 100
    seed: int = 0
    model: str = "binomial"
    method: str = "auto"
    threads: int = 1
    fail_fast: bool = True

    def __post_init__(self):
        object.__setattr__(self, "c_grid", tuple(float(c) for c in self.c_grid))
        if self.n < 2:
            raise InputError(f"n must be >= 2, got {self.n}")
        if self.samples_per_point < 1:
            raise InputError("samples_per_point must be >= 1")
        if any(c <= 0 for c in self.c_grid):
            raise InputError("c values must be positive")
        if any(b <= a for a, b in zip(self.c_grid, self.c_grid[1:])):
            raise InputError("c_grid must be strictly increasing")
        if self.model not in MODELS:
            raise InputError(f"model must be one of {MODELS}")
        if self.m < 1:
            raise InputError(f"m rule {self.m_rule} gives m={self.m} < 1 at n={self.n}")

    @property
    def m(self) -> int:
        return self.m_rule.m_for(self.n)


@dataclass(frozen=True)
class SweepRow:
    c: float
    n: int
    m: int
    samples: int
    sat_count: int
    p_hat: float
    stderr: float
    seed: int
    wall_ms: float

    def csv(self) -> str:
        return (
            f"{self.c!r},{self.n},{self.m},{self.samples},{self.sat_count},"
            f"{self.p_hat!r},{self.stderr!r},{self.seed},{self.wall_ms:.3f}"
        )

    def to_json(self) -> dict:
        return dict(self.__dict__)


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    return "\n".join([CSV_HEADER] + [r.csv() for r in rows]) + "\n"


def pick_method(m: int, method: str = "auto") -> str:
    if method == "auto":
        return "gray" if m <= 6 else "branch"
    return method


def _one_sample(n: int, m: int, c: float, model: str, method: str, seed: int):
    try:
        if model == "uniform":
            f = sample_uniform(m, n, int(math.floor(c * n)), seed)
        else:
            f = sample_binomial(m, n, c, seed)
        return evaluate(f, method=method)
    except QSATError as exc:
        return exc


def _run_point(cfg: SweepConfig, c: float, row_seed: int, pool=None) -> SweepRow:
    m = cfg.m
    method = pick_method(m, cfg.method)
    seeds = [derive_seed(row_seed, k) for k in range(cfg.samples_per_point)]
    t0 = time.perf_counter()
    if pool is not None:
        from joblib import delayed

        results = pool(delayed(_one_sample)(cfg.n, m, c, cfg.model, method, s) for s in seeds)
    else:
        results = []
        for s in seeds:
            r = _one_sample(cfg.n, m, c, cfg.model, method, s)
            results.append(r)
            if cfg.fail_fast and isinstance(r, Exception):
                break
    errors = [r for r in results if isinstance(r, Exception)]
    if errors:
        if cfg.fail_fast:
            raise errors[0]
        warnings.warn(f"{len(errors)} samples at c={c} failed and were dropped: {errors[0]}")
    ok = [r for r in results if not isinstance(r, Exception)]
    wall_ms = (time.perf_counter() - t0) * 1000.0
    k = len(ok)
    sat = sum(1 for r in ok if r)
    p = sat / k if k else float("nan")
    se = math.sqrt(p * (1 - p) / k) if k else float("nan")
    return SweepRow(c, cfg.n, m, k, sat, p, se, row_seed, wall_ms)


def _pool(threads: int):
    if threads > 1:
        from joblib import Parallel

        return Parallel(n_jobs=threads)
    return None


def sweep(cfg: SweepConfig) -> list[SweepRow]:
    pool = _pool(cfg.threads)
    rows = [_run_point(cfg, c, derive_seed(cfg.seed, i), pool) for i, c in enumerate(cfg.c_grid)]
    check_monotone(rows)
    return rows


def check_monotone(rows: Sequence[SweepRow], k: float = 3.0) -> bool:
    """Warn if p_hat rises with c by more than ``k`` combined stderrs."""
    rows = sorted(rows, key=lambda r: r.c)
    for a, b in zip(rows, rows[1:]):
        noise = k * math.hypot(a.stderr, b.stderr)
        if b.p_hat - a.p_hat > noise:
            warnings.warn(
                f"p_hat rises from {a.p_hat:.3f} at c={a.c} to {b.p_hat:.3f} at c={b.c}", NonMonotoneWarning
            )
            return False
    return True


MIN_BISECT_SAMPLES = 16


@dataclass
class ThresholdEstimate:
    c_hat: float
    lo: float
    hi: float
    rows: list[SweepRow] = field(default_factory=list)


def bisect_threshold(
    n: int,
    m_rule: MRule,
    samples: int,
    seed: int,
    tol: float = 1 / 32,
    lo: float = 1.0,
    hi: float = 2.0,
    model: str = "binomial",
    method: str = "auto",
    threads: int = 1,
) -> ThresholdEstimate:
    """Bisect ``[lo, hi]`` on ``p_hat(c) >= 1/2`` until the bracket is at
    most ``tol`` wide; the estimate is the bracket midpoint.

    Assumes ``p_hat`` is nonincreasing in ``c`` in expectation; probe ``k``
    uses row seed ``derive_seed(seed, k)``.
    """
    if not tol > 0:
        raise InputError("tol must be positive")
    if samples < MIN_BISECT_SAMPLES:
        warnings.warn(
            f"{samples} samples per probe: bisection steps are dominated by sampling noise",
            LowPrecisionWarning,
        )
    pool = _pool(threads)
    rows = []
    k = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        cfg = SweepConfig(n, m_rule, (mid,), samples, seed, model, method, threads)
        row = _run_point(cfg, mid, derive_seed(seed, k), pool)
        rows.append(row)
        k += 1
        if row.p_hat >= 0.5:
            lo = mid
        else:
            hi = mid
    check_monotone(rows)
    return ThresholdEstimate(0.5 * (lo + hi), lo, hi, sorted(rows, key=lambda r: r.c))


def estimate_threshold(n: int, m_rule: MRule, samples: int, seed: int, tol: float = 1 / 32, **kw) -> float:
    return bisect_threshold(n, m_rule, samples, seed, tol, **kw).c_hat


FIGURE1_ALPHAS = (1.0, 1.444, 2.3718, 5.1552, 10.722, 20.0)


def figure1_table(alpha_grid: Optional[Sequence[float]] = None) -> str:
    alphas = FIGURE1_ALPHAS if alpha_grid is None else alpha_grid
    lines = ["alpha,c_star,branch"]
    for a in alphas:
        r = critical_ratio(a)
        lines.append(f"{r.alpha!r},{r.c_star!r},{r.branch.value}")
    return "\n".join(lines) + "\n"
