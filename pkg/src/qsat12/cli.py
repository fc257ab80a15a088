"""``qsat12`` command line.

Exit codes: 0 ok, 1 usage, 2 input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import certificates as cert
from . import counting
from .errors import BudgetExceeded, InputError, QSATError
from .evaluator import find_falsifying
from .experiment import (
    AlphaLog,
    Fixed,
    SweepConfig,
    bisect_threshold,
    figure1_table,
    pick_method,
    rows_to_csv,
    sweep,
)
from .formula import Cnf2, is_pure
from .generator import sample_binomial, sample_uniform
from .qdimacs import read_qdimacs, write_qdimacs
from .reduction import read_dimacs, reduce_3sat
from . import threshold as th

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    p.add_argument("--out", help="write the result here instead of stdout")
    return p


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _clause_json(clauses) -> list[str]:
    return [str(c) for c in clauses]


# -- subcommands ---------------------------------------------------------------


def cmd_generate(args) -> int:
    if args.L is not None:
        f = sample_uniform(args.m, args.n, args.L, args.seed)
        model = f"uniform L={args.L}"
    else:
        f = sample_binomial(args.m, args.n, args.c, args.seed)
        model = f"binomial c={args.c!r}"
    _emit(args, write_qdimacs(f, comments=[f"m={args.m} n={args.n} {model} seed={args.seed}"]))
    return EXIT_OK


def cmd_solve(args) -> int:
    f = read_qdimacs(_read(args.file))
    w = find_falsifying(f, method=pick_method(f.m, args.method))
    if args.fmt == "json":
        out = {"value": w is None}
        if w is not None and args.witness:
            out["witness"] = w.to_json()
        _emit(args, _dump(out))
        return EXIT_OK
    lines = ["TRUE" if w is None else "FALSE"]
    if w is not None and args.witness:
        lines.append(json.dumps(w.to_json()))
    _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_certify(args) -> int:
    f = read_qdimacs(_read(args.file))
    if args.kind == "snake":
        c = cert.find_snake_bruteforce(f, args.max_len, args.budget)
        out = None if c is None else dict(c.to_json(), clauses=_clause_json(cert.snake_clauses(c)))
    elif args.kind == "bicycle":
        c = cert.find_bicycle_bruteforce(f, args.max_len, args.budget)
        out = None if c is None else dict(c.to_json(), clauses=_clause_json(cert.bicycle_clauses(c)))
    else:
        w = find_falsifying(f, method=pick_method(f.m, "auto"))
        if w is None:
            out = None
        else:
            cyc = cert.extract_unsat_core_cycle(w)
            out = {
                "type": "cycle",
                "assignment": [int(b) for b in w.assignment],
                "contradiction_var": w.contradiction_var,
                "clauses": _clause_json(cyc),
            }
    _emit(args, "none" if out is None else _dump(out))
    return EXIT_OK


def cmd_count(args) -> int:
    what, n, m, s = args.what, args.n, args.m, args.s
    if what == "d":
        val = counting.d_pure_sequences(m, s + 1)
    elif what == "snakes":
        val = counting.count_snakes(n, m, s)
    elif what == "bicycles":
        val = counting.count_bicycles(n, m, s)
    else:
        if args.c is None:
            raise InputError("--what expectation needs --c")
        c = counting.as_fraction(args.c)
        res = {"bicycles": counting.expected_bicycles_exact(n, m, c, s)}
        if (s + 1) % 2 == 0 and s + 1 >= 4:
            res["snakes"] = counting.expected_snakes_exact(n, m, c, s)
        if args.fmt == "json":
            _emit(args, _dump({k: {"exact": str(v), "float": float(v)} for k, v in res.items()}))
        else:
            _emit(args, "\n".join(f"{k} {float(v)!r}" for k, v in sorted(res.items())))
        return EXIT_OK
    if args.fmt == "json":
        _emit(args, _dump({"what": what, "n": n, "m": m, "s": s, "value": str(val)}))
    else:
        _emit(args, str(val))
    return EXIT_OK


def cmd_threshold(args) -> int:
    r = th.critical_ratio(args.alpha)
    if args.fmt == "json":
        _emit(args, _dump(r.to_json()))
    else:
        _emit(args, f"c_star={r.c_star!r} branch={r.branch.value} residual={r.residual:.3g}")
    return EXIT_OK


def cmd_gfun(args) -> int:
    alpha, c, k = args.alpha, args.c, args.grid
    if k < 1:
        raise InputError("--grid must be >= 1")
    bh, gh = th.stationary_point(alpha, c)
    lines = ["kind,beta,gamma,g"]
    for i in range(1, k + 1):
        beta = alpha * i / k
        for j in range(k + 1):
            gamma = beta + 2.0 * alpha * j / k
            lines.append(f"grid,{beta!r},{gamma!r},{th.g(alpha, c, beta, gamma, check=False).value!r}")
    lines.append(f"stationary,{bh!r},{gh!r},{th.g(alpha, c, bh, gh).value!r}")
    _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_reduce(args) -> int:
    phi = read_dimacs(_read(args.file))
    f = reduce_3sat(phi)
    _emit(args, write_qdimacs(f, comments=[f"reduced from {phi.vars} vars, {len(phi.clauses)} clauses"]))
    return EXIT_OK


def _m_rule(args):
    if (args.m is None) == (args.alpha is None):
        raise InputError("give exactly one of --m and --alpha")
    return Fixed(args.m) if args.m is not None else AlphaLog(args.alpha)


def cmd_sweep(args) -> int:
    cfg = SweepConfig(
        n=args.n,
        m_rule=_m_rule(args),
        c_grid=tuple(args.c_grid),
        samples_per_point=args.samples,
        seed=args.seed,
        model=args.model,
        method=args.method,
        threads=args.threads,
        fail_fast=not args.keep_going,
    )
    rows = sweep(cfg)
    if args.fmt == "json":
        _emit(args, _dump([r.to_json() for r in rows]))
    else:
        _emit(args, rows_to_csv(rows))
    return EXIT_OK


def cmd_estimate(args) -> int:
    est = bisect_threshold(
        args.n,
        _m_rule(args),
        args.samples,
        args.seed,
        args.tol,
        model=args.model,
        method=args.method,
        threads=args.threads,
    )
    if args.fmt == "json":
        _emit(args, _dump({"c_hat": est.c_hat, "lo": est.lo, "hi": est.hi, "rows": [r.to_json() for r in est.rows]}))
    elif args.fmt == "csv":
        _emit(args, rows_to_csv(est.rows))
    else:
        _emit(args, f"c_hat={est.c_hat!r} bracket=[{est.lo!r}, {est.hi!r}]")
    return EXIT_OK


def cmd_figure1(args) -> int:
    _emit(args, figure1_table(args.alphas))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = _Parser(prog="qsat12", description="Random (1,2)-QSAT toolkit.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", parents=[common], help="sample a random formula")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--L", type=int, help="uniform model with L clauses")
    g.add_argument("--c", type=float, help="binomial model with p = c/(4mn)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", parents=[common], help="decide a QDIMACS formula")
    p.add_argument("file")
    p.add_argument("--witness", action="store_true", help="print the falsifying assignment and core")
    p.add_argument("--method", choices=("auto", "gray", "branch"), default="auto")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("certify", parents=[common], help="falsity certificate")
    p.add_argument("file")
    k = p.add_mutually_exclusive_group()
    k.add_argument("--snake", dest="kind", action="store_const", const="snake")
    k.add_argument("--bicycle", dest="kind", action="store_const", const="bicycle")
    k.add_argument("--cycle", dest="kind", action="store_const", const="cycle")
    p.add_argument("--max-len", type=int, default=12)
    p.add_argument("--budget", type=int, default=cert.DEFAULT_BUDGET, help="search node budget")
    p.set_defaults(func=cmd_certify, kind="cycle")

    p = sub.add_parser("count", parents=[common], help="exact structure counts")
    p.add_argument("--what", choices=("snakes", "bicycles", "d", "expectation"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--s", type=int, required=True, help="structures have s+1 clauses")
    p.add_argument("--c", type=Fraction)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("threshold", parents=[common], help="critical ratio c*(alpha)")
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("gfun", parents=[common], help="rate function on a grid")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--grid", type=int, default=10)
    p.set_defaults(func=cmd_gfun)

    p = sub.add_parser("reduce", parents=[common], help="3-CNF (DIMACS) to (1,2)-QCNF")
    p.add_argument("file")
    p.set_defaults(func=cmd_reduce)

    for name, func, helptext in (
        ("sweep", cmd_sweep, "p_hat over a grid of c"),
        ("estimate-threshold", cmd_estimate, "bisect for p_hat = 1/2"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--m", type=int)
        p.add_argument("--alpha", type=float, help="m = floor(alpha ln n)")
        p.add_argument("--samples", type=int, default=100)
        p.add_argument("--model", choices=("binomial", "uniform"), default="binomial")
        p.add_argument("--method", choices=("auto", "gray", "branch"), default="auto")
        if name == "sweep":
            p.add_argument("--c-grid", type=_floats, required=True, help="comma-separated, increasing")
            p.add_argument("--keep-going", action="store_true", help="drop failing samples instead of stopping")
        else:
            p.add_argument("--tol", type=float, default=1 / 32)
        p.set_defaults(func=func)

    p = sub.add_parser("figure1", parents=[common], help="c*(alpha) table")
    p.add_argument("--alphas", type=_floats, help="comma-separated alphas")
    p.set_defaults(func=cmd_figure1)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"qsat12: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, ValueError) as exc:
        print(f"qsat12: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QSATError as exc:
        print(f"qsat12: internal error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
