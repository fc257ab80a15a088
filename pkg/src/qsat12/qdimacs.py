"""QDIMACS dialect for (1,2)-QCNF formulas.

Wire layout::

    p cnf <m+n> <L>
    a 1 .. m 0
    e m+1 .. m+n 0
    <u> <e1> <e2> 0        (L lines)

Universal ``x_i`` is written as ``i``; existential ``y_j`` as ``m + j``.
Lines starting with ``c`` are comments.
"""

from __future__ import annotations

from .errors import ParseError, ShapeError
from .formula import Clause12, Formula12, Literal, x, y


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise ParseError(f"non-integer token ({exc})", lineno) from None


def read_qdimacs(text: str) -> Formula12:
    header = None
    a_block = e_block = None
    raw_clauses: list[tuple[int, list[int]]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        tokens = stripped.split()
        if tokens[0] == "p":
            if header is not None:
                raise ParseError("duplicate header", lineno)
            if len(tokens) != 4 or tokens[1] != "cnf":
                raise ParseError("header must be 'p cnf <vars> <clauses>'", lineno)
            header = _ints(tokens[2:], lineno)
            continue
        if header is None:
            raise ParseError("content before 'p cnf' header", lineno)
        if tokens[0] in ("a", "e"):
            if raw_clauses:
                raise ParseError("quantifier block after clauses", lineno)
            vals = _ints(tokens[1:], lineno)
            if not vals or vals[-1] != 0 or 0 in vals[:-1]:
                raise ParseError("quantifier line must be terminated by a single 0", lineno)
            if tokens[0] == "a":
                if a_block is not None or e_block is not None:
                    raise ParseError("expected exactly one 'a' line before the 'e' line", lineno)
                a_block = vals[:-1]
            else:
                if a_block is None or e_block is not None:
                    raise ParseError("expected exactly one 'e' line after the 'a' line", lineno)
                e_block = vals[:-1]
            continue
        vals = _ints(tokens, lineno)
        if not vals or vals[-1] != 0 or 0 in vals[:-1]:
            raise ParseError("clause must be terminated by a single 0", lineno)
        raw_clauses.append((lineno, vals[:-1]))

    if header is None:
        raise ParseError("missing 'p cnf' header")
    if a_block is None or e_block is None:
        raise ParseError("missing 'a' or 'e' quantifier line")
    m, n = len(a_block), len(e_block)
    if sorted(a_block) != list(range(1, m + 1)):
        raise ParseError("'a' line must list exactly 1..m")
    if sorted(e_block) != list(range(m + 1, m + n + 1)):
        raise ParseError("'e' line must list exactly m+1..m+n")
    nvars, nclauses = header
    if nvars != m + n:
        raise ParseError(f"header declares {nvars} variables, blocks hold {m + n}")
    if nclauses != len(raw_clauses):
        raise ParseError(f"header declares {nclauses} clauses, found {len(raw_clauses)}")

    clauses = []
    for lineno, vals in raw_clauses:
        if any(abs(v) > m + n for v in vals):
            raise ParseError("literal references an undeclared variable", lineno)
        uni = [v for v in vals if abs(v) <= m]
        ex = [v for v in vals if abs(v) > m]
        if len(vals) != 3 or len(uni) != 1 or len(ex) != 2:
            raise ShapeError("clause must have one universal and two existential literals", lineno)
        if abs(ex[0]) == abs(ex[1]):
            raise ShapeError("existential literals must have distinct atoms", lineno)
        u = x(abs(uni[0]), uni[0] < 0)
        e1, e2 = (y(abs(v) - m, v < 0) for v in ex)
        clauses.append(Clause12(u, e1, e2))
    return Formula12(m, n, tuple(clauses))


def _wire(lit: Literal, m: int) -> int:
    v = lit.var if lit.block.value == "a" else lit.var + m
    return -v if lit.negated else v


def write_qdimacs(f: Formula12, comments: tuple[str, ...] = ()) -> str:
    m, n = f.m, f.n
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {m + n} {len(f.clauses)}")
    lines.append("a " + " ".join(str(i) for i in range(1, m + 1)) + (" 0" if m else "0"))
    lines.append("e " + " ".join(str(m + j) for j in range(1, n + 1)) + (" 0" if n else "0"))
    for c in f.clauses:
        lines.append(f"{_wire(c.u, m)} {_wire(c.e1, m)} {_wire(c.e2, m)} 0")
    return "\n".join(lines) + "\n"
