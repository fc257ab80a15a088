"""Exact truth evaluation of (1,2)-QCNF formulas.

Fixing the universal block leaves a plain 2-CNF, decided through the
strongly connected components of its implication digraph.  Two exact
strategies sit on top of that:

``gray``
    all ``2**m`` universal assignments in Gray-code order, early exit on
    the first falsifying one.
``branch``
    branch on universal variables, but only inside self-complementary
    SCCs of the over-approximated graph (all clauses whose universal
    literal is not yet satisfied).  Any contradiction of a completion
    lives in such an SCC, so everything else is discarded and each SCC
    is searched independently.  Much faster when ``m`` is large.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import AssignmentLengthMismatch, InstanceTooLarge, UniversalBlockTooLarge
from .formula import Clause12, Cnf2, Formula12, UniversalAssignment, node

DEFAULT_MAX_UNIVERSAL = 30
NAIVE_MAX_VARS = 24


class ImplicationDigraph:
    """``2n`` nodes, one per existential literal; clause ``(a | b)`` gives
    arcs ``~a -> b`` and ``~b -> a``."""

    def __init__(self, n: int, pairs: Sequence[tuple[int, int]]):
        self.n = n
        self.succ: list[list[int]] = [[] for _ in range(2 * n)]
        for a, b in pairs:
            self.succ[a ^ 1].append(b)
            self.succ[b ^ 1].append(a)

    @classmethod
    def from_cnf(cls, g: Cnf2) -> "ImplicationDigraph":
        return cls(g.n, [(node(p), node(q)) for p, q in g.clauses])

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u, vs in enumerate(self.succ) for v in vs]

    def arc_count(self) -> int:
        return sum(len(vs) for vs in self.succ)

    def is_skew_symmetric(self) -> bool:
        from collections import Counter

        arcs = Counter(self.arcs())
        return all(arcs[(v ^ 1, u ^ 1)] == k for (u, v), k in arcs.items())

    def scc(self) -> list[int]:
        return tarjan_scc(self.succ)


def tarjan_scc(succ: Sequence[Sequence[int]]) -> list[int]:
    """Iterative Tarjan; returns an SCC id per node."""
    size = len(succ)
    index = [-1] * size
    low = [0] * size
    comp = [-1] * size
    on_stack = [False] * size
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(size):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            nbrs = succ[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                w = nbrs[i]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


class TwoSatResult(NamedTuple):
    satisfiable: bool
    contradiction_var: Optional[int] = None


def _sat_pairs(n: int, pairs: Sequence[tuple[int, int]]) -> TwoSatResult:
    comp = tarjan_scc(ImplicationDigraph(n, pairs).succ)
    for j in range(n):
        if comp[2 * j] == comp[2 * j + 1]:
            return TwoSatResult(False, j + 1)
    return TwoSatResult(True, None)


def sat_2cnf(g: Cnf2) -> TwoSatResult:
    """Decide a 2-CNF; on failure report the smallest ``y`` with ``y`` and
    ``~y`` in one SCC."""
    return _sat_pairs(g.n, [(node(p), node(q)) for p, q in g.clauses])


def _check_assignment(f: Formula12, a: UniversalAssignment) -> None:
    if len(a) != f.m:
        raise AssignmentLengthMismatch(f"assignment has {len(a)} bits, formula has m={f.m}")


def falsified_indices(f: Formula12, a: UniversalAssignment) -> list[int]:
    """Indices of clauses whose universal literal is false under ``a``."""
    _check_assignment(f, a)
    return [i for i, c in enumerate(f.clauses) if not c.u.value(a[c.u.var - 1])]


def instantiate(f: Formula12, a: UniversalAssignment) -> Cnf2:
    """Substitute ``a``: drop satisfied clauses, strip false universal literals."""
    return Cnf2(f.n, tuple((f.clauses[i].e1, f.clauses[i].e2) for i in falsified_indices(f, a)))


@dataclass(frozen=True)
class FalsityWitness:
    assignment: UniversalAssignment
    core_indices: tuple[int, ...]
    core: tuple[Clause12, ...]
    contradiction_var: int

    def to_json(self) -> dict:
        return {
            "assignment": [int(b) for b in self.assignment],
            "core": list(self.core_indices),
            "contradiction_var": self.contradiction_var,
        }


def _gray_assignments(m: int):
    for k in range(1 << m):
        g = k ^ (k >> 1)
        yield tuple(bool((g >> i) & 1) for i in range(m))


def _witness(f: Formula12, a: UniversalAssignment) -> Optional[FalsityWitness]:
    idx = falsified_indices(f, a)
    arr = f.arrays
    res = _sat_pairs(f.n, list(zip(arr.a[idx].tolist(), arr.b[idx].tolist())))
    if res.satisfiable:
        return None
    return FalsityWitness(tuple(a), tuple(idx), tuple(f.clauses[i] for i in idx), res.contradiction_var)


def _find_gray(f: Formula12) -> Optional[FalsityWitness]:
    arr = f.arrays
    for a in _gray_assignments(f.m):
        bits = np.fromiter(a, dtype=np.int64, count=f.m)
        active = bits[arr.uvar] == arr.uneg if len(arr.uvar) else np.zeros(0, bool)
        pairs = list(zip(arr.a[active].tolist(), arr.b[active].tolist()))
        if not _sat_pairs(f.n, pairs).satisfiable:
            return _witness(f, a)
    return None


# -- branch and bound over self-complementary SCC cores --------------------


def _core_components(arr, idx: np.ndarray) -> list[np.ndarray]:
    """Split ``idx`` into the clause sets of the self-complementary SCCs of
    its implication graph (clauses with both arcs inside such an SCC)."""
    if len(idx) == 0:
        return []
    a, b = arr.a[idx], arr.b[idx]
    nodes = np.unique(np.concatenate((a, b, a ^ 1, b ^ 1)))
    pa, pb = np.searchsorted(nodes, a), np.searchsorted(nodes, b)
    pna, pnb = np.searchsorted(nodes, a ^ 1), np.searchsorted(nodes, b ^ 1)
    size = len(nodes)
    graph = csr_matrix(
        (np.ones(2 * len(idx), dtype=np.int8), (np.concatenate((pna, pnb)), np.concatenate((pb, pa)))),
        shape=(size, size),
    )
    _, lab = connected_components(graph, directed=True, connection="strong")
    in_core = (lab[pna] == lab[pb]) & (lab[pb] == lab[pnb])
    if not in_core.any():
        return []
    core = idx[in_core]
    keys = lab[pb[in_core]]
    order = np.argsort(keys, kind="stable")
    core, keys = core[order], keys[order]
    cuts = np.flatnonzero(np.diff(keys)) + 1
    return np.split(core, cuts)


def _find_branch(f: Formula12) -> Optional[FalsityWitness]:
    arr = f.arrays
    m = f.m

    def search(idx: np.ndarray, fixed: np.ndarray) -> Optional[np.ndarray]:
        fb = fixed[arr.uvar[idx]]
        idx = idx[(fb < 0) | (fb == arr.uneg[idx])]
        for comp in _core_components(arr, idx):
            uv = arr.uvar[comp]
            free = uv[fixed[uv] < 0]
            if len(free) == 0:
                return fixed
            var = int(np.argmax(np.bincount(free, minlength=m)))
            sel = arr.uneg[comp][uv == var]
            ones = int(sel.sum())
            # try first the value that keeps more clauses of this SCC active
            for bit in ((1, 0) if ones >= len(sel) - ones else (0, 1)):
                child = fixed.copy()
                child[var] = bit
                hit = search(comp, child)
                if hit is not None:
                    return hit
        return None

    hit = search(np.arange(len(f.clauses)), np.full(m, -1, dtype=np.int64))
    if hit is None:
        return None
    a = tuple(bool(b > 0) for b in hit)
    w = _witness(f, a)
    assert w is not None, "branch search returned a satisfiable assignment"
    return w


METHODS = ("gray", "branch")


def find_falsifying(
    f: Formula12, *, method: str = "gray", max_universal: int = DEFAULT_MAX_UNIVERSAL
) -> Optional[FalsityWitness]:
    """None if ``f`` is true, else an assignment with its falsified core."""
    if f.m > max_universal:
        raise UniversalBlockTooLarge(f"m={f.m} exceeds cap {max_universal}")
    if method == "gray":
        return _find_gray(f)
    if method == "branch":
        return _find_branch(f)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def evaluate(f: Formula12, *, method: str = "gray", max_universal: int = DEFAULT_MAX_UNIVERSAL) -> bool:
    return find_falsifying(f, method=method, max_universal=max_universal) is None


def naive_evaluate(f: Formula12) -> bool:
    """Truth table over all of X and Y; independent of the 2-SAT machinery."""
    if f.m + f.n > NAIVE_MAX_VARS:
        raise InstanceTooLarge(f"m+n={f.m + f.n} exceeds {NAIVE_MAX_VARS}")
    ys = np.arange(1 << f.n, dtype=np.int64)

    def lit_true(lit):
        v = ((ys >> (lit.var - 1)) & 1).astype(bool)
        return ~v if lit.negated else v

    ex = [(c, lit_true(c.e1) | lit_true(c.e2)) for c in f.clauses]
    for xs in range(1 << f.m):
        ok = np.ones(1 << f.n, dtype=bool)
        for c, both in ex:
            if not c.u.value((xs >> (c.u.var - 1)) & 1):
                ok &= both
        if not ok.any():
            return False
    return True
