"""3-SAT to (1,2)-QSAT falsity.

For a 3-CNF ``phi`` with clauses ``alpha_1..alpha_nc`` over ``x_2..x_m``
the formula

    Psi = forall x  exists y_1..y_nc :  (x_1 | psi_0) & AND_{i,j} (~l_ij | psi_i)

is false exactly when ``phi`` is satisfiable.  ``psi_0..psi_nc`` is a
minimally unsatisfiable 2-CNF over ``y_1..y_nc``: dropping ``psi_i`` (the
clause whose guard ``alpha_i`` is false) leaves a satisfiable formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import EmptyInput, InputError, InstanceTooLarge, ParseError, TooFewClauses
from .formula import Clause12, Cnf2, Formula12, x, y

BRUTE_MAX_VARS = 24


@dataclass(frozen=True)
class Cnf3:
    """Clauses are triples of nonzero signed ints over ``1..vars``."""

    vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for cl in self.clauses:
            if len(cl) != 3:
                raise InputError(f"clause {cl} does not have exactly 3 literals")
            for lit in cl:
                if lit == 0 or abs(lit) > self.vars:
                    raise InputError(f"literal {lit} out of range 1..{self.vars}")


def psi(nc: int) -> Cnf2:
    """``psi_0 .. psi_nc`` over ``y_1..y_nc``."""
    if nc < 3:
        raise TooFewClauses(f"psi needs nc >= 3, got {nc}")
    cl = [(y(1, True), y(2, True))]
    cl += [(y(i), y(i + 1, True)) for i in range(1, nc)]
    cl.append((y(nc - 1), y(nc)))
    return Cnf2(nc, tuple(cl))


def pad(phi: Cnf3) -> Cnf3:
    """Duplicate the last clause until there are at least 3."""
    if not phi.clauses:
        raise EmptyInput("3-CNF has no clauses")
    cl = list(phi.clauses)
    while len(cl) < 3:
        cl.append(cl[-1])
    return Cnf3(phi.vars, tuple(cl))


def reduce_3sat(phi: Cnf3) -> Formula12:
    phi = pad(phi)
    nc = len(phi.clauses)
    ps = psi(nc).clauses
    clauses = [Clause12(x(1), *ps[0])]
    for i, alpha in enumerate(phi.clauses, start=1):
        for lit in alpha:
            # ~l as universal literal; phi's variables shift up by one
            clauses.append(Clause12(x(abs(lit) + 1, lit > 0), *ps[i]))
    return Formula12(phi.vars + 1, nc, tuple(clauses))


def brute_sat(phi: Cnf3) -> bool:
    if phi.vars > BRUTE_MAX_VARS:
        raise InstanceTooLarge(f"{phi.vars} variables exceed {BRUTE_MAX_VARS}")
    for bits in product((False, True), repeat=phi.vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in cl) for cl in phi.clauses):
            return True
    return False


def read_dimacs(text: str) -> Cnf3:
    """Standard DIMACS CNF; every clause must have exactly 3 literals."""
    header = None
    lits: list[int] = []
    clauses = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf" or header is not None:
                raise ParseError(f"bad header {line!r}", ln)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(f"non-integer header field in {line!r}", ln) from None
            continue
        if header is None:
            raise ParseError("clause before header", ln)
        try:
            toks = [int(t) for t in line.split()]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", ln) from None
        for t in toks:
            if t == 0:
                if len(lits) != 3:
                    raise ParseError(f"clause has {len(lits)} literals, expected 3", ln)
                if any(abs(l) > header[0] for l in lits):
                    raise ParseError(f"literal out of range 1..{header[0]}", ln)
                clauses.append(tuple(lits))
                lits = []
            else:
                lits.append(t)
    if header is None:
        raise ParseError("missing header", 0)
    if lits:
        raise ParseError("unterminated final clause", 0)
    if len(clauses) != header[1]:
        raise ParseError(f"header declares {header[1]} clauses, found {len(clauses)}", 0)
    return Cnf3(header[0], tuple(clauses))


def write_dimacs(phi: Cnf3) -> str:
    out = [f"p cnf {phi.vars} {len(phi.clauses)}"]
    out += [" ".join(map(str, cl)) + " 0" for cl in phi.clauses]
    return "\n".join(out) + "\n"
