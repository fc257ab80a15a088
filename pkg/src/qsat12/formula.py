"""Domain types for (1,2)-QCNF formulas: forall X exists Y phi(X, Y).

Universal variables ``x_1..x_m`` and existential variables ``y_1..y_n``
live in separate 1-based index spaces.  Every clause carries exactly one
universal literal and two existential literals over distinct atoms.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DuplicateExistentialAtomInClause, OutOfRangeVar, WrongBlockShape


class Block(enum.Enum):
    UNIVERSAL = "a"
    EXISTENTIAL = "e"


@dataclass(frozen=True, slots=True)
class Literal:
    var: int
    negated: bool = False
    block: Block = Block.EXISTENTIAL

    def __invert__(self) -> "Literal":
        return Literal(self.var, not self.negated, self.block)

    def value(self, bit: bool) -> bool:
        """Truth value of the literal when its variable is set to ``bit``."""
        return bool(bit) != self.negated

    def __str__(self) -> str:
        name = "x" if self.block is Block.UNIVERSAL else "y"
        return ("~" if self.negated else "") + f"{name}{self.var}"


def x(i: int, negated: bool = False) -> Literal:
    """Universal literal ``x_i`` (or its negation)."""
    return Literal(i, negated, Block.UNIVERSAL)


def y(j: int, negated: bool = False) -> Literal:
    """Existential literal ``y_j`` (or its negation)."""
    return Literal(j, negated, Block.EXISTENTIAL)


def _sort_key(lit: Literal):
    return (lit.var, lit.negated)


@dataclass(frozen=True, slots=True)
class Clause12:
    """One quantified clause ``u | e1 | e2``.

    The existential pair is stored in canonical order (``e1.var <= e2.var``),
    so two clauses are equal iff they denote the same disjunction.
    """

    u: Literal
    e1: Literal
    e2: Literal

    def __post_init__(self):
        if _sort_key(self.e2) < _sort_key(self.e1):
            e1, e2 = self.e2, self.e1
            object.__setattr__(self, "e1", e1)
            object.__setattr__(self, "e2", e2)

    @property
    def existential(self) -> tuple[Literal, Literal]:
        return (self.e1, self.e2)

    def __str__(self) -> str:
        return f"({self.u} | {self.e1} | {self.e2})"


def canonicalize(c: Clause12) -> Clause12:
    """Return ``c`` with its existential pair in canonical order."""
    return Clause12(c.u, c.e1, c.e2)


@dataclass(frozen=True)
class Cnf2:
    """Plain existential 2-CNF over ``y_1..y_n``."""

    n: int
    clauses: tuple[tuple[Literal, Literal], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))

    def __len__(self) -> int:
        return len(self.clauses)


# bit i is the truth value of x_{i+1}
UniversalAssignment = tuple[bool, ...]


@dataclass(frozen=True)
class Formula12:
    m: int
    n: int
    clauses: tuple[Clause12, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))

    def __len__(self) -> int:
        return len(self.clauses)

    @cached_property
    def arrays(self) -> "ClauseArrays":
        return ClauseArrays.from_clauses(self.clauses)

    def universal_literals(self) -> list[Literal]:
        return [c.u for c in self.clauses]

    def __str__(self) -> str:
        body = " & ".join(str(c) for c in self.clauses) or "T"
        return f"A x1..x{self.m} E y1..y{self.n}: {body}"


def node(lit: Literal) -> int:
    """Implication-graph node of an existential literal; ``node(~l) == node(l) ^ 1``."""
    return 2 * (lit.var - 1) + int(lit.negated)


def node_literal(k: int) -> Literal:
    return y(k // 2 + 1, bool(k & 1))


@dataclass(frozen=True)
class ClauseArrays:
    """Column view of a clause list used by the vectorised solvers.

    ``uvar`` is 0-based; a clause is active (its universal literal false)
    under assignment ``bits`` iff ``bits[uvar] == uneg``.
    """

    uvar: np.ndarray
    uneg: np.ndarray
    a: np.ndarray
    b: np.ndarray

    @classmethod
    def from_clauses(cls, clauses: Sequence[Clause12]) -> "ClauseArrays":
        k = len(clauses)
        uvar = np.fromiter((c.u.var - 1 for c in clauses), dtype=np.int64, count=k)
        uneg = np.fromiter((c.u.negated for c in clauses), dtype=np.int64, count=k)
        a = np.fromiter((node(c.e1) for c in clauses), dtype=np.int64, count=k)
        b = np.fromiter((node(c.e2) for c in clauses), dtype=np.int64, count=k)
        return cls(uvar, uneg, a, b)


def validate(f: Formula12) -> None:
    """Raise if ``f`` violates a Clause12 or Formula12 invariant."""
    if f.m < 0 or f.n < 0:
        raise OutOfRangeVar(f"negative block size m={f.m}, n={f.n}")
    for idx, c in enumerate(f.clauses):
        if (
            c.u.block is not Block.UNIVERSAL
            or c.e1.block is not Block.EXISTENTIAL
            or c.e2.block is not Block.EXISTENTIAL
        ):
            raise WrongBlockShape(f"clause {idx} {c} needs 1 universal and 2 existential literals")
        if not 1 <= c.u.var <= f.m:
            raise OutOfRangeVar(f"clause {idx}: universal var {c.u.var} not in 1..{f.m}")
        for e in (c.e1, c.e2):
            if not 1 <= e.var <= f.n:
                raise OutOfRangeVar(f"clause {idx}: existential var {e.var} not in 1..{f.n}")
        if c.e1.var == c.e2.var:
            raise DuplicateExistentialAtomInClause(f"clause {idx} {c} repeats atom y{c.e1.var}")


def is_pure(lits: Iterable[Literal]) -> bool:
    """True iff no variable occurs both negated and unnegated."""
    seen: dict[tuple[Block, int], bool] = {}
    for lit in lits:
        key = (lit.block, lit.var)
        prev = seen.setdefault(key, lit.negated)
        if prev != lit.negated:
            return False
    return True


def is_pure_formula(f: Formula12) -> bool:
    return is_pure(c.u for c in f.clauses)


def existential_projection(f: Formula12) -> Cnf2:
    """Drop the universal literal of every clause (duplicates kept)."""
    return Cnf2(f.n, tuple((c.e1, c.e2) for c in f.clauses))
