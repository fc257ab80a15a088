"""Exact combinatorics of pure snakes and bicycles.

Everything is computed with Python integers and ``fractions.Fraction``;
floats only appear at the reporting boundary, because ``p**(s+1)``
underflows long before the counts overflow.

Falling factorial convention
----------------------------
The counts use ``(n)_s = n (n-1) ... (n-s+1)`` (``s`` factors), i.e. the
number of ordered choices of ``s`` distinct existential atoms.  This is
what a direct enumeration of snake structures produces; the shorter
``(n-1) ... (n-s+1)`` product is available as ``convention="paper"`` for
comparison only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, sqrt
from numbers import Rational
from typing import Optional

import numpy as np

from .errors import BadLength, IndexTooLarge, KOutOfRange, ProbabilityOutOfRange

FALLING_FACTORIAL_CONVENTION = "standard"
CONVENTIONS = ("standard", "paper")


@lru_cache(maxsize=None)
def _stirling_row(a: int) -> tuple[int, ...]:
    if a == 0:
        return (1,)
    prev = _stirling_row(a - 1) + (0,)
    return tuple((b * prev[b] if b else 0) + (prev[b - 1] if b else 0) for b in range(a + 1))


def stirling2(a: int, b: int) -> int:
    """Stirling number of the second kind S(a, b)."""
    if a < 0 or b < 0:
        raise ValueError("stirling2 needs a, b >= 0")
    if b > a:
        return 0
    if a > 900:
        # keep the memo recursion shallow
        for k in range(0, a, 500):
            _stirling_row(k)
    return _stirling_row(a)[b]


def falling_factorial(n: int, s: int, convention: str = FALLING_FACTORIAL_CONVENTION) -> int:
    if n < 0 or s < 0:
        raise ValueError("falling_factorial needs n, s >= 0")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    # "paper" drops the leading factor n
    top = n if convention == "standard" else n - 1
    out = 1
    for k in range(n - s + 1, top + 1):
        if k <= 0:
            return 0
        out *= k
    return out


def d_pure_sequences(m: int, s1: int) -> int:
    """Number of pure sequences of ``s1`` literals over ``m`` variables."""
    if m < 1 or s1 < 1:
        raise ValueError("d_pure_sequences needs m, s1 >= 1")
    return sum(comb(m, k) * 2**k * stirling2(s1, k) * factorial(k) for k in range(1, min(m, s1) + 1))


def _structures(n, m, s, convention):
    return falling_factorial(n, s, convention) * 2**s * d_pure_sequences(m, s + 1)


def count_snakes(n: int, m: int, s: int, convention: str = FALLING_FACTORIAL_CONVENTION) -> int:
    """Number of snake structures of length ``s + 1``."""
    if (s + 1) % 2 or s + 1 < 4:
        raise BadLength(f"snake length s+1={s + 1} must be even and >= 4")
    return _structures(n, m, s, convention)


def count_bicycles(n: int, m: int, s: int, convention: str = FALLING_FACTORIAL_CONVENTION) -> int:
    if s + 1 < 3:
        raise BadLength(f"bicycle length s+1={s + 1} must be >= 3")
    return ((2 * s) ** 2 - 1) * _structures(n, m, s, convention)


def as_fraction(c) -> Fraction:
    """Exact value of ``c``; floats are read through their shortest repr."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, Rational):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(repr(c))
    return Fraction(str(c))


def clause_probability(n: int, m: int, c) -> Fraction:
    p = as_fraction(c) / (4 * m * n)
    if not 0 <= p <= 1:
        raise ProbabilityOutOfRange(f"p = c/(4mn) = {float(p)} outside [0, 1]")
    return p


def expected_snakes_exact(n: int, m: int, c, s: int) -> Fraction:
    p = clause_probability(n, m, c)
    return p ** (s + 1) * count_snakes(n, m, s)


def expected_bicycles_exact(n: int, m: int, c, s: int) -> Fraction:
    p = clause_probability(n, m, c)
    if s + 1 < 3:
        raise BadLength(f"bicycle length s+1={s + 1} must be >= 3")
    return p ** (s + 1) * ((2 * s) ** 2 - 1) * _structures(n, m, s, FALLING_FACTORIAL_CONVENTION)


def expected_snakes(n: int, m: int, c, s: int) -> float:
    return float(expected_snakes_exact(n, m, c, s))


def expected_bicycles(n: int, m: int, c, s: int) -> float:
    return float(expected_bicycles_exact(n, m, c, s))


def g_coefficient(m: int, n: int, c, k: int, s1: int, exact: bool = False):
    """Contribution of sequences with exactly ``k`` distinct universal
    variables to the expected snake count of length ``s1``."""
    if not 1 <= k <= min(m, s1):
        raise KOutOfRange(f"k={k} not in 1..min(m, s+1)={min(m, s1)}")
    s = s1 - 1
    p = clause_probability(n, m, c)
    val = 2**s * falling_factorial(n, s) * comb(m, k) * 2**k * stirling2(s1, k) * factorial(k) * p**s1
    return val if exact else float(val)


def bicycle_union_bound(n: int, m: int, c, s_max: int) -> float:
    """Sum of expected bicycle counts for lengths 3..s_max+1."""
    if s_max < 2:
        raise BadLength("s_max must be >= 2")
    p = clause_probability(n, m, c)
    total = Fraction(0)
    if p == 0:
        return 0.0
    ff = falling_factorial(n, 1)
    pw = p * p
    for s in range(2, s_max + 1):
        ff *= max(n - s + 1, 0)
        pw *= p
        if ff == 0:
            break
        total += ((2 * s) ** 2 - 1) * ff * 2**s * d_pure_sequences(m, s + 1) * pw
    return float(total)


def binomial_bounds_check(a: int, b: int, lower_sq: Optional[Fraction] = None) -> bool:
    """Check ``sqrt(lower_sq) E <= C(a, b) <= E`` with
    ``E = (a/b)^b (a/(a-b))^(a-b)`` and ``lower_sq = 1/a`` by default.

    Compared exactly in integers (0**0 == 1).  Note the default lower
    bound is false for many small ``(a, b)``, e.g. ``(10, 3)``; a
    ``lower_sq`` of ``1/(2a)`` holds throughout.
    """
    if not 1 <= b <= a:
        raise ValueError("need 1 <= b <= a")
    q = Fraction(1, a) if lower_sq is None else Fraction(lower_sq)
    C = comb(a, b)
    den = b**b * (a - b) ** (a - b)
    upper = C * den <= a**a
    # q * (a^a / den)^2 <= C^2
    lower = q.numerator * a ** (2 * a) <= q.denominator * C * C * den * den
    return upper and lower


# -- Monte Carlo check of the expected snake count ---------------------------


@dataclass(frozen=True)
class ExpectationReport:
    n: int
    m: int
    c: float
    s: int
    expected: float
    empirical_mean: float
    empirical_stderr: float
    samples: int

    def within(self, k: float = 3.0) -> bool:
        return abs(self.empirical_mean - self.expected) <= k * self.empirical_stderr

    def to_json(self) -> dict:
        return dict(self.__dict__)


MAX_SNAKE_INDEX = 5_000_000


def _mc_chunk(n, m, c, seeds, rest, offsets):
    from .generator import binomial_ranks

    total = total_sq = 0
    N = 4 * m * n * (n - 1)
    present = np.zeros(N, dtype=bool)
    for sd in seeds:
        ranks = binomial_ranks(m, n, c, sd)
        present[ranks] = True
        cnt = 0
        for r in ranks:
            lo, hi = offsets[r], offsets[r + 1]
            if hi > lo:
                cnt += int(present[rest[lo:hi]].all(axis=1).sum())
        present[ranks] = False
        total += cnt
        total_sq += cnt * cnt
    return total, total_sq


def monte_carlo_snake_count(
    n: int, m: int, c: float, s: int, samples: int, seed: int, threads: int = 1
) -> ExpectationReport:
    """Average number of embedded snake structures over binomial-model samples.

    All structures of length ``s + 1`` are listed up front by direct
    enumeration; each sample then counts the structures whose clauses are
    all present.  Sample ``k`` uses ``derive_seed(seed, k)``.
    """
    from .generator import derive_seed
    from .oracles import snake_rank_table

    if samples < 1:
        raise ValueError("samples must be >= 1")
    size = count_snakes(n, m, s)
    if size > MAX_SNAKE_INDEX:
        raise IndexTooLarge(f"{size} snake structures exceed the index cap {MAX_SNAKE_INDEX}")
    clause_probability(n, m, c)
    table = snake_rank_table(n, m, s)
    N = 4 * m * n * (n - 1)
    order = np.argsort(table[:, 0], kind="stable")
    table = table[order]
    offsets = np.searchsorted(table[:, 0], np.arange(N + 1))
    rest = table[:, 1:]

    seeds = [derive_seed(seed, k) for k in range(samples)]
    if threads > 1:
        from joblib import Parallel, delayed

        chunks = [seeds[i::threads] for i in range(threads)]
        parts = Parallel(n_jobs=threads)(delayed(_mc_chunk)(n, m, c, ch, rest, offsets) for ch in chunks)
    else:
        parts = [_mc_chunk(n, m, c, seeds, rest, offsets)]
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    mean = total / samples
    if samples > 1:
        var = (total_sq - samples * mean * mean) / (samples - 1)
        stderr = sqrt(max(var, 0.0) / samples)
    else:
        stderr = 0.0
    return ExpectationReport(n, m, float(c), s, expected_snakes(n, m, c, s), mean, stderr, samples)
