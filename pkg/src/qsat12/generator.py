"""Seeded random (1,2)-QCNF formulas under the two standard models.

* ``UniformL(L)``: ``L`` distinct clauses drawn uniformly from the clause
  universe of size ``N = 4 m n (n - 1)``.
* ``Binomial(c)``: every universe clause kept independently with
  probability ``p = c / (4 m n)``.

Randomness comes from numpy's PCG64 bit generator.  Stream splitting: the
sub-stream for item ``k`` of a run seeded with ``master`` is seeded with
``derive_seed(master, k)``, a 64-bit value taken from
``SeedSequence(master, spawn_key=(k,))``.  Both are platform independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Union

import numpy as np

from .errors import InputError, LTooLarge, ProbabilityOutOfRange, RankOutOfRange
from .formula import Clause12, Formula12, x, y


@dataclass(frozen=True)
class UniformL:
    L: int


@dataclass(frozen=True)
class Binomial:
    c: float


@dataclass(frozen=True)
class GenConfig:
    m: int
    n: int
    model: Union[UniformL, Binomial]
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.n < 2:
            raise InputError(f"need m >= 1 and n >= 2, got m={self.m}, n={self.n}")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def derive_seed(master: int, k: int) -> int:
    """64-bit seed of sub-stream ``k`` under ``master``."""
    ss = np.random.SeedSequence(int(master), spawn_key=(int(k),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def clause_universe_size(m: int, n: int) -> int:
    return 4 * m * n * (n - 1)


def clause_from_rank(m: int, n: int, r: int) -> Clause12:
    """Decode rank ``r`` in ``[0, N)``.

    Layout (most significant first): universal literal (2m choices),
    existential atom pair ``j1 < j2`` (n(n-1)/2 choices), polarity of the
    two existential literals (4 choices).
    """
    N = clause_universe_size(m, n)
    if not 0 <= r < N:
        raise RankOutOfRange(f"rank {r} not in [0, {N})")
    r, pol = divmod(int(r), 4)
    ulit, pair = divmod(r, n * (n - 1) // 2)
    j2 = (1 + isqrt(1 + 8 * pair)) // 2
    if j2 * (j2 - 1) // 2 > pair:
        j2 -= 1
    j1 = pair - j2 * (j2 - 1) // 2
    return Clause12(
        x(ulit // 2 + 1, bool(ulit & 1)),
        y(j1 + 1, bool(pol & 2)),
        y(j2 + 1, bool(pol & 1)),
    )


def rank_of_clause(m: int, n: int, c: Clause12) -> int:
    j1, j2 = c.e1.var - 1, c.e2.var - 1
    if not (1 <= c.u.var <= m and 0 <= j1 < j2 < n):
        raise RankOutOfRange(f"clause {c} is not in the universe for m={m}, n={n}")
    ulit = 2 * (c.u.var - 1) + int(c.u.negated)
    pair = j2 * (j2 - 1) // 2 + j1
    pol = 2 * int(c.e1.negated) + int(c.e2.negated)
    return (ulit * (n * (n - 1) // 2) + pair) * 4 + pol


def sample_distinct_ranks(rng: np.random.Generator, N: int, L: int) -> list[int]:
    """``L`` distinct integers from ``[0, N)``, uniform over L-subsets, sorted."""
    if L > N:
        raise LTooLarge(f"L={L} exceeds universe size N={N}")
    if L == 0:
        return []
    if 2 * L > N:
        # partial Fisher-Yates on a sparse view of range(N)
        swapped: dict[int, int] = {}
        out = []
        for i in range(L):
            j = int(rng.integers(i, N))
            vi, vj = swapped.get(i, i), swapped.get(j, j)
            swapped[j] = vi
            out.append(vj)
        return sorted(out)
    chosen: set[int] = set()
    while len(chosen) < L:
        need = L - len(chosen)
        for r in rng.integers(0, N, size=need + need // 8 + 4).tolist():
            if r not in chosen:
                chosen.add(r)
                if len(chosen) == L:
                    break
    return sorted(chosen)


def _formula(m: int, n: int, ranks) -> Formula12:
    return Formula12(m, n, tuple(clause_from_rank(m, n, r) for r in ranks))


def sample_uniform(m: int, n: int, L: int, seed: int) -> Formula12:
    if L < 0:
        raise InputError(f"L must be nonnegative, got {L}")
    N = clause_universe_size(m, n)
    if L > N:
        raise LTooLarge(f"L={L} exceeds universe size N={N}")
    return _formula(m, n, sample_distinct_ranks(make_rng(seed), N, L))


def binomial_ranks(m: int, n: int, c: float, seed: int) -> list[int]:
    """Sorted ranks of a binomial-model sample."""
    p = c / (4 * m * n)
    if not 0.0 <= p <= 1.0:
        raise ProbabilityOutOfRange(f"p = c/(4mn) = {p} outside [0, 1]")
    N = clause_universe_size(m, n)
    rng = make_rng(seed)
    # count ~ Binomial(N, p) followed by a uniform subset of that size has
    # the same law as N independent coin flips
    count = int(rng.binomial(N, p))
    return sample_distinct_ranks(rng, N, count)


def sample_binomial(m: int, n: int, c: float, seed: int) -> Formula12:
    return _formula(m, n, binomial_ranks(m, n, c, seed))


def generate(cfg: GenConfig) -> Formula12:
    if isinstance(cfg.model, UniformL):
        return sample_uniform(cfg.m, cfg.n, cfg.model.L, cfg.seed)
    if isinstance(cfg.model, Binomial):
        return sample_binomial(cfg.m, cfg.n, cfg.model.c, cfg.seed)
    raise InputError(f"unknown model {cfg.model!r}")
