"""Brute-force enumerations used to cross-check the closed-form counts.

Nothing here calls into ``counting``; every number is produced by listing
the objects directly.
"""

from __future__ import annotations

from itertools import permutations, product

import numpy as np


def set_partitions(a: int):
    """Yield restricted growth strings of length ``a`` (one per set partition)."""
    if a == 0:
        yield ()
        return
    rgs = [0] * a

    def rec(i, top):
        if i == a:
            yield tuple(rgs)
            return
        for b in range(top + 2):
            rgs[i] = b
            yield from rec(i + 1, max(top, b))

    rgs[0] = 0
    yield from rec(1, 0)


def stirling2_bruteforce(a: int, b: int) -> int:
    return sum(1 for p in set_partitions(a) if (max(p) + 1 if p else 0) == b)


def bell_bruteforce(a: int) -> int:
    return sum(1 for _ in set_partitions(a))


def bell_triangle(a: int) -> int:
    """Bell number via the Aitken triangle, an unrelated recurrence."""
    row = [1]
    for _ in range(a):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def pure_universal_sequences(m: int, s1: int) -> np.ndarray:
    """All pure sequences of ``s1`` universal literals, encoded
    ``2 (var - 1) + neg``, one per row."""
    seqs = np.array(list(product(range(2 * m), repeat=s1)), dtype=np.int64).reshape(-1, s1)
    var, neg = seqs >> 1, seqs & 1
    ok = np.ones(len(seqs), dtype=bool)
    for v in range(m):
        hit = var == v
        pos = (hit & (neg == 0)).any(axis=1)
        negs = (hit & (neg == 1)).any(axis=1)
        ok &= ~(pos & negs)
    return seqs[ok]


def count_pure_sequences_bruteforce(m: int, s1: int) -> int:
    return len(pure_universal_sequences(m, s1))


def existential_sequences(n: int, s: int) -> np.ndarray:
    """All ``w_1..w_s`` with distinct atoms, as literal nodes ``2 (j-1) + neg``."""
    atoms = np.array(list(permutations(range(n), s)), dtype=np.int64).reshape(-1, s)
    pols = np.array(list(product((0, 1), repeat=s)), dtype=np.int64).reshape(-1, s)
    return (2 * atoms[:, None, :] + pols[None, :, :]).reshape(-1, s)


def _pair_code(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``pair * 4 + pol`` of the existential pair (a | b); -1 if the atoms repeat."""
    ja, jb = a >> 1, b >> 1
    lo_first = ja < jb
    j1 = np.where(lo_first, ja, jb)
    j2 = np.where(lo_first, jb, ja)
    n1 = np.where(lo_first, a & 1, b & 1)
    n2 = np.where(lo_first, b & 1, a & 1)
    code = (j2 * (j2 - 1) // 2 + j1) * 4 + 2 * n1 + n2
    return np.where(ja == jb, -1, code)


def _combine(E: np.ndarray, U: np.ndarray, n: int) -> np.ndarray:
    span = 4 * (n * (n - 1) // 2)
    out = U[None, :, :] * span + E[:, None, :]
    out = np.where((E < 0)[:, None, :], -1, out)
    return out.reshape(-1, E.shape[1])


def snake_existential_codes(n: int, s: int) -> np.ndarray:
    t = (s + 1) // 2
    W = existential_sequences(n, s)
    w0 = W[:, t - 1 : t] ^ 1
    ext = np.concatenate((w0, W, w0), axis=1)
    return _pair_code(ext[:, :-1] ^ 1, ext[:, 1:])


def snake_rank_table(n: int, m: int, s: int) -> np.ndarray:
    """Clause ranks of every snake structure, shape ``(count, s + 1)``."""
    return _combine(snake_existential_codes(n, s), pure_universal_sequences(m, s + 1), n)


def bicycle_existential_codes(n: int, s: int) -> np.ndarray:
    """One row per ``(w, u, v)``; degenerate end clauses are coded -1."""
    W = existential_sequences(n, s)
    rows = []
    for pu, pv in product(range(2 * s), repeat=2):
        u = W[:, pu // 2] ^ (pu & 1)
        v = W[:, pv // 2] ^ (pv & 1)
        # (u, v) = (~w_s, w_1) is excluded
        keep = ~((u == (W[:, -1] ^ 1)) & (v == W[:, 0]))
        Wk, uk, vk = W[keep], u[keep], v[keep]
        first = _pair_code(uk, Wk[:, 0])[:, None]
        inner = _pair_code(Wk[:, :-1] ^ 1, Wk[:, 1:])
        last = _pair_code(Wk[:, -1] ^ 1, vk)[:, None]
        rows.append(np.concatenate((first, inner, last), axis=1))
    return np.concatenate(rows, axis=0) if rows else np.zeros((0, s + 1), dtype=np.int64)


def snake_structures(n: int, m: int, s: int) -> tuple[int, int]:
    """(number of structures, number of distinct clause sets)."""
    if s > n:
        return 0, 0
    table = snake_rank_table(n, m, s)
    if len(table) == 0:
        return 0, 0
    sets = np.unique(np.sort(table, axis=1), axis=0)
    return len(table), len(sets)


def bicycle_structure_count(n: int, m: int, s: int) -> int:
    """Structures counted as (existential part) x (universal part); the two
    choices are independent, so each factor is enumerated on its own."""
    if s > n:
        return 0
    return len(bicycle_existential_codes(n, s)) * count_pure_sequences_bruteforce(m, s + 1)


def bicycle_structures(n: int, m: int, s: int, max_rows: int = 3_000_000) -> tuple[int, int]:
    """Full joint enumeration: (structures, distinct non-degenerate clause sets)."""
    if s > n:
        return 0, 0
    E = bicycle_existential_codes(n, s)
    U = pure_universal_sequences(m, s + 1)
    if len(E) * len(U) > max_rows:
        raise ValueError(f"{len(E) * len(U)} rows exceed max_rows={max_rows}")
    table = _combine(E, U, n)
    valid = table[(table >= 0).all(axis=1)]
    sets = np.unique(np.sort(valid, axis=1), axis=0) if len(valid) else valid
    return len(table), len(sets)
