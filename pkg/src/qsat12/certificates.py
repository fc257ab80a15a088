"""Falsity certificates: pure snakes, pure bicycles and contradiction cycles.

A snake of length ``s + 1 = 2t`` over distinct-atom existential literals
``w_1..w_s`` and a pure universal sequence ``v_0..v_s`` is the clause set
``C_r = (v_r | ~w_r | w_{r+1})`` with ``w_0 = w_{s+1} = ~w_t``.  Its
implication arcs form the closed walk ``~w_t -> w_1 -> ... -> w_t -> ...
-> w_s -> ~w_t``, so any formula containing one is false.

A bicycle of length ``s + 1`` keeps the inner clauses and replaces the
two end clauses by ``(v_0 | u | w_1)`` and ``(v_s | ~w_s | v)`` with
``u, v`` among ``+-w_1..+-w_s`` and ``(u, v) != (~w_s, w_1)``.  Every
false formula contains one.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InvalidCertificate, InvalidWitness, SearchBudgetExceeded
from .evaluator import FalsityWitness, _sat_pairs
from .formula import Block, Clause12, Formula12, Literal, is_pure, node, node_literal

DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class SnakeCert:
    t: int
    w: tuple[Literal, ...]
    v: tuple[Literal, ...]

    @property
    def s(self) -> int:
        return 2 * self.t - 1

    def check(self) -> None:
        if self.t < 2:
            raise InvalidCertificate(f"snake needs t >= 2 (length >= 4), got t={self.t}")
        _check_chain(self.w, self.v, self.s)

    def to_json(self) -> dict:
        return {"type": "snake", "t": self.t, "w": [str(l) for l in self.w], "v": [str(l) for l in self.v]}


@dataclass(frozen=True)
class BicycleCert:
    s: int
    w: tuple[Literal, ...]
    v: tuple[Literal, ...]
    u: Literal
    vlit: Literal

    def check(self) -> None:
        if self.s < 2:
            raise InvalidCertificate(f"bicycle needs s >= 2 (length >= 3), got s={self.s}")
        _check_chain(self.w, self.v, self.s)
        atoms = {l.var for l in self.w}
        for end in (self.u, self.vlit):
            if end.block is not Block.EXISTENTIAL or end.var not in atoms:
                raise InvalidCertificate(f"end literal {end} not among +-w_1..+-w_s")
        if self.u == ~self.w[-1] and self.vlit == self.w[0]:
            raise InvalidCertificate("(u, v) = (~w_s, w_1) is excluded")

    def to_json(self) -> dict:
        return {
            "type": "bicycle",
            "s": self.s,
            "w": [str(l) for l in self.w],
            "v": [str(l) for l in self.v],
            "u": str(self.u),
            "vlit": str(self.vlit),
        }


def _check_chain(w, v, s):
    if len(w) != s or len(v) != s + 1:
        raise InvalidCertificate(f"expected {s} existential and {s + 1} universal literals")
    if any(l.block is not Block.EXISTENTIAL for l in w):
        raise InvalidCertificate("w must be existential literals")
    if any(l.block is not Block.UNIVERSAL for l in v):
        raise InvalidCertificate("v must be universal literals")
    if len({l.var for l in w}) != s:
        raise InvalidCertificate("w literals must be strictly distinct")
    if not is_pure(v):
        raise InvalidCertificate("universal sequence is not pure")


def snake_clauses(sc: SnakeCert) -> tuple[Clause12, ...]:
    sc.check()
    s, t = sc.s, sc.t
    ends = ~sc.w[t - 1]
    w = (ends,) + tuple(sc.w) + (ends,)
    return tuple(Clause12(sc.v[r], ~w[r], w[r + 1]) for r in range(s + 1))


def bicycle_clauses(bc: BicycleCert) -> tuple[Clause12, ...]:
    bc.check()
    s, w, v = bc.s, bc.w, bc.v
    out = [Clause12(v[0], bc.u, w[0])]
    out += [Clause12(v[r], ~w[r - 1], w[r]) for r in range(1, s)]
    out.append(Clause12(v[s], ~w[s - 1], bc.vlit))
    return tuple(out)


def _is_submultiset(clauses: Sequence[Clause12], f: Formula12) -> bool:
    need, have = Counter(clauses), Counter(f.clauses)
    return all(have[c] >= k for c, k in need.items())


class _Purity:
    """Multiset of universal literals with O(1) push/pop purity checks."""

    def __init__(self):
        self.count: dict[int, list[int]] = {}

    def can_add(self, lit: Literal) -> bool:
        cnt = self.count.get(lit.var)
        return cnt is None or cnt[not lit.negated] == 0

    def add(self, lit: Literal) -> None:
        self.count.setdefault(lit.var, [0, 0])[lit.negated] += 1

    def remove(self, lit: Literal) -> None:
        self.count[lit.var][lit.negated] -= 1


def _pair_nodes(c: Clause12):
    return node(c.e1), node(c.e2)


def decompose_snake(clauses: Sequence[Clause12]) -> Optional[SnakeCert]:
    """Find a snake structure using every clause exactly once, if any."""
    k = len(clauses)
    if k < 4 or k % 2:
        return None
    t, s = k // 2, k - 1
    pairs = [_pair_nodes(c) for c in clauses]
    used = [False] * k
    seq: list[int] = []  # w_1..w_r as graph nodes
    order: list[int] = []
    purity = _Purity()

    def extend(r, w0):
        # seq holds w_1..w_r; pick C_r containing ~w_r
        cur = seq[-1]
        for i in range(k):
            if used[i] or not purity.can_add(clauses[i].u):
                continue
            p, q = pairs[i]
            if p == cur ^ 1:
                nxt = q
            elif q == cur ^ 1:
                nxt = p
            else:
                continue
            if r == s:
                if nxt != w0:
                    continue
            elif r + 1 == t:
                if nxt != w0 ^ 1:
                    continue
            elif (nxt >> 1) == (w0 >> 1) or any((nxt >> 1) == (z >> 1) for z in seq):
                continue
            used[i] = True
            purity.add(clauses[i].u)
            order.append(i)
            if r == s:
                return True
            seq.append(nxt)
            if extend(r + 1, w0):
                return True
            seq.pop()
            order.pop()
            purity.remove(clauses[i].u)
            used[i] = False
        return False

    for i0 in range(k):
        for neg_w0, w1 in (pairs[i0], pairs[i0][::-1]):
            w0 = neg_w0 ^ 1
            if (w1 >> 1) == (w0 >> 1):
                continue
            used[i0] = True
            purity.add(clauses[i0].u)
            order[:] = [i0]
            seq[:] = [w1]
            if extend(1, w0):
                w = tuple(node_literal(z) for z in seq)
                v = tuple(clauses[i].u for i in order)
                return SnakeCert(t, w, v)
            purity.remove(clauses[i0].u)
            used[i0] = False
    return None


def decompose_bicycle(clauses: Sequence[Clause12]) -> Optional[BicycleCert]:
    k = len(clauses)
    if k < 3:
        return None
    s = k - 1
    pairs = [_pair_nodes(c) for c in clauses]
    used = [False] * k
    seq: list[int] = []
    order: list[int] = []
    purity = _Purity()

    def extend(u):
        cur = seq[-1]
        last = len(seq) == s
        for i in range(k):
            if used[i] or not purity.can_add(clauses[i].u):
                continue
            p, q = pairs[i]
            if p == cur ^ 1:
                nxt = q
            elif q == cur ^ 1:
                nxt = p
            else:
                continue
            if last:
                atoms = {z >> 1 for z in seq}
                if (nxt >> 1) not in atoms or (u >> 1) not in atoms:
                    continue
                if u == seq[-1] ^ 1 and nxt == seq[0]:
                    continue
            elif any((nxt >> 1) == (z >> 1) for z in seq):
                continue
            used[i] = True
            purity.add(clauses[i].u)
            order.append(i)
            if last:
                return nxt
            seq.append(nxt)
            got = extend(u)
            if got is not None:
                return got
            seq.pop()
            order.pop()
            purity.remove(clauses[i].u)
            used[i] = False
        return None

    for i0 in range(k):
        for u, w1 in (pairs[i0], pairs[i0][::-1]):
            used[i0] = True
            purity.add(clauses[i0].u)
            order[:] = [i0]
            seq[:] = [w1]
            vend = extend(u)
            if vend is not None:
                return BicycleCert(
                    s,
                    tuple(node_literal(z) for z in seq),
                    tuple(clauses[i].u for i in order),
                    node_literal(u),
                    node_literal(vend),
                )
            purity.remove(clauses[i0].u)
            used[i0] = False
    return None


def verify_snake(clauses: Sequence[Clause12], f: Formula12) -> bool:
    return _is_submultiset(clauses, f) and decompose_snake(clauses) is not None


def verify_bicycle(clauses: Sequence[Clause12], f: Formula12) -> bool:
    return _is_submultiset(clauses, f) and decompose_bicycle(clauses) is not None


# -- brute-force search inside a formula ------------------------------------


class _Search:
    def __init__(self, f: Formula12, budget: int):
        self.f = f
        self.budget = budget
        self.nodes = 0
        # clauses containing existential literal node k: (clause index, other node)
        self.by_lit: list[list[tuple[int, int]]] = [[] for _ in range(2 * f.n)]
        for i, c in enumerate(f.clauses):
            p, q = _pair_nodes(c)
            self.by_lit[p].append((i, q))
            self.by_lit[q].append((i, p))
        self.used = [False] * len(f.clauses)
        self.purity = _Purity()

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceeded(f"brute-force search exceeded {self.budget} nodes")

    def push(self, i):
        self.used[i] = True
        self.purity.add(self.f.clauses[i].u)

    def pop(self, i):
        self.used[i] = False
        self.purity.remove(self.f.clauses[i].u)

    def ok(self, i):
        return not self.used[i] and self.purity.can_add(self.f.clauses[i].u)


def find_snake_bruteforce(f: Formula12, max_len: int, budget: int = DEFAULT_BUDGET) -> Optional[SnakeCert]:
    """Shortest pure snake of length <= ``max_len`` embedded in ``f``."""
    for length in range(4, max_len + 1, 2):
        cert = _snake_of_length(f, length, budget)
        if cert is not None:
            return cert
    return None


def _snake_of_length(f, length, budget):
    t, s = length // 2, length - 1
    S = _Search(f, budget)
    clauses = f.clauses
    seq: list[int] = []
    order: list[int] = []
    atoms: set[int] = set()

    def extend(r, w0):
        S.tick()
        cur = seq[-1]
        for i, nxt in S.by_lit[cur ^ 1]:
            if not S.ok(i):
                continue
            if r == s:
                if nxt != w0:
                    continue
            elif r + 1 == t:
                if nxt != w0 ^ 1:
                    continue
            elif (nxt >> 1) in atoms:
                continue
            S.push(i)
            order.append(i)
            if r == s:
                return True
            seq.append(nxt)
            fresh = (nxt >> 1) not in atoms
            atoms.add(nxt >> 1)
            if extend(r + 1, w0):
                return True
            if fresh:
                atoms.discard(nxt >> 1)
            seq.pop()
            order.pop()
            S.pop(i)
        return False

    for i0, c in enumerate(clauses):
        p, q = _pair_nodes(c)
        for neg_w0, w1 in ((p, q), (q, p)):
            w0 = neg_w0 ^ 1
            S.push(i0)
            order[:] = [i0]
            seq[:] = [w1]
            atoms.clear()
            atoms.update((w0 >> 1, w1 >> 1))
            if extend(1, w0):
                return SnakeCert(t, tuple(node_literal(z) for z in seq), tuple(clauses[i].u for i in order))
            S.pop(i0)
    return None


def find_bicycle_bruteforce(f: Formula12, max_len: int, budget: int = DEFAULT_BUDGET) -> Optional[BicycleCert]:
    """Shortest pure bicycle of length <= ``max_len`` embedded in ``f``."""
    for length in range(3, max_len + 1):
        cert = _bicycle_of_length(f, length, budget)
        if cert is not None:
            return cert
    return None


def _bicycle_of_length(f, length, budget):
    s = length - 1
    S = _Search(f, budget)
    clauses = f.clauses
    seq: list[int] = []
    order: list[int] = []
    atoms: set[int] = set()

    def extend(u):
        S.tick()
        cur = seq[-1]
        last = len(seq) == s
        for i, nxt in S.by_lit[cur ^ 1]:
            if not S.ok(i):
                continue
            if last:
                if (nxt >> 1) not in atoms or (u >> 1) not in atoms:
                    continue
                if u == seq[-1] ^ 1 and nxt == seq[0]:
                    continue
                order.append(i)
                return nxt
            if (nxt >> 1) in atoms:
                continue
            S.push(i)
            order.append(i)
            seq.append(nxt)
            atoms.add(nxt >> 1)
            got = extend(u)
            if got is not None:
                return got
            atoms.discard(nxt >> 1)
            seq.pop()
            order.pop()
            S.pop(i)
        return None

    for i0, c in enumerate(clauses):
        p, q = _pair_nodes(c)
        for u, w1 in ((p, q), (q, p)):
            S.push(i0)
            order[:] = [i0]
            seq[:] = [w1]
            atoms.clear()
            atoms.add(w1 >> 1)
            vend = extend(u)
            if vend is not None:
                return BicycleCert(
                    s,
                    tuple(node_literal(z) for z in seq),
                    tuple(clauses[i].u for i in order),
                    node_literal(u),
                    node_literal(vend),
                )
            S.pop(i0)
    return None


def certificate_clauses(cert) -> tuple[Clause12, ...]:
    if isinstance(cert, SnakeCert):
        return snake_clauses(cert)
    return bicycle_clauses(cert)


# -- contradiction cycle from an evaluator witness ---------------------------


def _shortest_path(succ, src, dst):
    """Arc labels (clause positions) along a shortest ``src -> dst`` path."""
    prev = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for w, lab in succ[v]:
            if w not in prev:
                prev[w] = (v, lab)
                queue.append(w)
    if dst not in prev:
        return None
    labels = []
    v = dst
    while prev[v] is not None:
        v, lab = prev[v]
        labels.append(lab)
    return labels[::-1]


def extract_unsat_core_cycle(w: FalsityWitness) -> tuple[Clause12, ...]:
    """Clauses of a closed implication walk ``y => ~y => y`` inside the core.

    The result is pure and unsatisfiable on its own.
    """
    a = w.assignment
    for c in w.core:
        if not 1 <= c.u.var <= len(a) or c.u.value(a[c.u.var - 1]):
            raise InvalidWitness(f"core clause {c} is not falsified by the assignment")
    pairs = [_pair_nodes(c) for c in w.core]
    n = max([w.contradiction_var] + [max(p, q) // 2 + 1 for p, q in pairs])
    if _sat_pairs(n, pairs).satisfiable:
        raise InvalidWitness("core projection is satisfiable")
    succ: list[list[tuple[int, int]]] = [[] for _ in range(2 * n)]
    for pos, (p, q) in enumerate(pairs):
        succ[p ^ 1].append((q, pos))
        succ[q ^ 1].append((p, pos))
    yn = 2 * (w.contradiction_var - 1)
    there = _shortest_path(succ, yn, yn ^ 1)
    back = _shortest_path(succ, yn ^ 1, yn)
    if there is None or back is None:
        raise InvalidWitness(f"y{w.contradiction_var} and its negation are not strongly connected in the core")
    seen: set[int] = set()
    walk = []
    for pos in there + back:
        if pos not in seen:
            seen.add(pos)
            walk.append(w.core[pos])
    return tuple(walk)


def verify_witness(w: FalsityWitness, f: Optional[Formula12] = None) -> bool:
    """Core falsified by the assignment (so pure), projection unsat, and, if
    ``f`` is given, the core indices point at the core clauses of ``f``."""
    a = w.assignment
    if f is not None:
        if len(a) != f.m or any(not 0 <= i < len(f.clauses) for i in w.core_indices):
            return False
        if tuple(f.clauses[i] for i in w.core_indices) != tuple(w.core):
            return False
    if any(not 1 <= c.u.var <= len(a) or c.u.value(a[c.u.var - 1]) for c in w.core):
        return False
    if not is_pure(c.u for c in w.core):
        return False
    pairs = [_pair_nodes(c) for c in w.core]
    n = max([w.contradiction_var] + [max(p, q) // 2 + 1 for p, q in pairs])
    return not _sat_pairs(n, pairs).satisfiable
