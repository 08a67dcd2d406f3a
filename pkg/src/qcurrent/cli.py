"""Command-line entry point.

Exit status: 0 when every check in the run passes, 1 on a check failure
(the first counterexample goes to stderr), 2 on invalid arguments.
"""

from __future__ import annotations

import argparse
import cmath
import json
import random
import sys

from . import funcmodel, heisenberg, ideal_lab, semimodule
from .qfield import ONE, ZERO, QRat, parse
from .series import TruncatedSeries

DEFAULT_Q = "exp(i*pi/6)"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(2)


def _window(text):
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be D or D,P, got {text!r}")
    if len(parts) == 1:
        parts.append(semimodule.TruncationWindow().P)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"window must be D or D,P, got {text!r}")
    try:
        return semimodule.TruncationWindow(*parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _complex(text):
    if text == DEFAULT_Q:
        return cmath.exp(1j * cmath.pi / 6)
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


class Output:
    """Collects rows and writes them as TSV or JSON in a fixed order."""

    def __init__(self, fmt, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout
        self.tables = []

    def table(self, name, columns, rows):
        self.tables.append((name, columns, [[_cell(x) for x in r] for r in rows]))

    def flush(self):
        if self.fmt == "json":
            out = {name: [dict(zip(cols, r)) for r in rows] for name, cols, rows in self.tables}
            self.stream.write(json.dumps(out, indent=1, sort_keys=True) + "\n")
            return
        for idx, (name, cols, rows) in enumerate(self.tables):
            if len(self.tables) > 1:
                self.stream.write(("\n" if idx else "") + f"# {name}\n")
            self.stream.write("\t".join(cols) + "\n")
            for r in rows:
                self.stream.write("\t".join(str(x) for x in r) + "\n")


def _cell(x):
    if isinstance(x, QRat):
        return str(x)
    if isinstance(x, complex):
        return f"{x.real:.12g}{x.imag:+.12g}j"
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def _fail(msg):
    print(f"FAIL: {msg}", file=sys.stderr)


# -- commands ------------------------------------------------------------------------

def cmd_verify_dressing(args, out):
    ctx = heisenberg.LevelContext(c=args.level, convention=args.convention)
    signs = [heisenberg.MINUS, heisenberg.PLUS] if args.sign == "both" else [args.sign]
    rows, ok = [], True
    for sign in signs:
        rep = heisenberg.verify_condition(sign, args.order, ctx)
        ratios = rep.log_ratios()
        for r in rep.rows:
            rows.append([sign, r.order, r.multiplier, r.kernel, ratios.get(r.order, ""),
                         "ok" if r.ok else "MISMATCH"])
        if not rep.passed:
            ok = False
            m = rep.first_mismatch
            _fail(f"{sign} dressing ({args.convention}) mismatch at order {m}; "
                  f"log ratio {ratios.get(m)}")
    out.table("verify-dressing", ["sign", "order", "multiplier", "kernel", "log_ratio", "status"], rows)
    return ok


def _heisenberg_roundtrip(seed, trials=100, order=12):
    rng = random.Random(seed)
    bad = 0
    for _ in range(trials):
        modes = [QRat.from_laurent({rng.randint(-6, 6): rng.randint(-4, 4) for _ in range(3)})
                 for _ in range(order)]
        phi0 = QRat.from_laurent({rng.randint(-4, 4): rng.choice([1, -1, 2])})
        got0, got = heisenberg.a_from_phi(heisenberg.phi_from_a(modes, phi0))
        if got0 != phi0 or got != modes:
            bad += 1
    return trials, bad


def cmd_verify(args, out):
    suites = ["heisenberg", "semimodule", "ideal", "funcmodel"] if args.suite == "all" else [args.suite]
    rows, ok = [], True
    for suite in suites:
        if suite == "heisenberg":
            n, bad = _heisenberg_roundtrip(args.seed)
            rows.append(["heisenberg", "phi_a_roundtrip(order=12)", n, bad])
            for c in (1, 2, 3):
                for sign in (heisenberg.MINUS, heisenberg.PLUS):
                    rep = heisenberg.verify_condition(sign, 20, heisenberg.LevelContext(c))
                    rows.append(["heisenberg", f"dressing({sign},c={c})", 21, 0 if rep.passed else 1])
        elif suite == "semimodule":
            for rep in semimodule.verify_suite(args.level, args.l, args.window, args.modes):
                rows.append(["semimodule", rep.name, rep.checked, len(rep.failures)])
                if rep.failures:
                    _fail(f"{rep.name}: first counterexample {rep.failures[0]}")
        elif suite == "ideal":
            bad = [(n, d) for d in range(args.window.D + 1) for n in range(d + 1)
                   if ideal_lab.graded_quotient_dims(args.level, args.l, n, d)
                   != ideal_lab.difference_basis_count(args.level, args.l, n, d)]
            rows.append(["ideal", "quotient_vs_difference_count", (args.window.D + 1) * (args.window.D + 2) // 2, len(bad)])
            cmp = ideal_lab.compare_ideals(args.level, args.l, args.window.D)
            rows.append(["ideal", "compare_ideals", len(cmp.rows), sum(not r["equal"] for r in cmp.rows)])
            if bad:
                _fail(f"quotient dimension differs from count at {bad[0]}")
        elif suite == "funcmodel":
            for n in range(0, 4):
                rep = funcmodel.duality_check(n, range(args.window.D + 1), args.level, args.l)
                rows.append(["funcmodel", f"duality(n={n})", len(rep.rows), sum(not r.ok for r in rep.rows)])
    for r in rows:
        if r[3]:
            ok = False
    out.table("verify", ["suite", "check", "checked", "failures"],
              [r + ["PASS" if not r[3] else "FAIL"] for r in rows])
    out.tables[-1][1].append("status")
    return ok


def cmd_character(args, out):
    M = semimodule.SemiModule(args.level, args.l)
    table = M.character(args.max_energy, sector=args.sector)
    out.table("character", ["charge", "energy", "dim"], [[c, e, d] for (c, e), d in sorted(table.items())])
    return True


def cmd_dual_dims(args, out):
    sources = ideal_lab.SOURCES if args.source == "both" else (args.source,)
    rows, ok = [], True
    for d in range(args.max_energy + 1):
        for n in range(d + 1):
            dims = [ideal_lab.graded_quotient_dims(args.level, args.l, n, d, source=s) for s in sources]
            row = [n, d] + dims
            if len(dims) == 2:
                row.append(dims[0] == dims[1])
                if dims[0] != dims[1]:
                    ok = False
                    _fail(f"sources disagree at charge {n}, energy {d}: {dims}")
            rows.append(row)
    cols = ["charge", "energy"] + [f"dim_{s}" for s in sources] + (["equal"] if len(sources) == 2 else [])
    out.table("dual-dims", cols, rows)
    return ok


def cmd_pair(args, out):
    rep = funcmodel.duality_check(args.particles, range(args.max_energy + 1), args.level, args.l)
    rows = [[r.n, r.energy, r.quotient_dim, r.vanishing_dim, r.pairing_rank, r.ideal_orthogonal,
             r.origin_flag, "ok" if r.ok else "FAIL"] for r in rep.rows]
    out.table("pair", ["charge", "energy", "quotient_dim", "vanishing_dim", "pairing_rank",
                       "ideal_orthogonal", "origin_flagged", "status"], rows)
    for r in rep.rows:
        if not r.ok:
            _fail(f"duality fails at charge {r.n}, energy {r.energy}")
            return False
    return True


def cmd_resummation_demo(args, out):
    cols = ["mode", "monomial", "coefficient", "factor", "abs_error"]
    M = semimodule.SemiModule(args.level, args.l)
    vac = M.vacuum()
    sym = M.act_a_neg(args.n, vac, args.window)
    g = heisenberg.gamma_bar(-args.n, M.ctx)
    items = sorted(sym.items(), key=lambda t: str(t[0]))
    rows = [["symbolic", str(m), c, c / g, ""] for m, c in items]
    ok = True
    if args.level == 1 and args.l == 0 and args.n == 1:
        closed = ONE / (ONE + parse("(q^6+1)/(q^4+q^2)"))
        hit = sym.get(M.normalize([0], 1), ZERO) / g
        rows.append(["closed_form", "x0|T1", closed * g, closed, ""])
        if hit != closed or len(sym) != 1:
            ok = False
            _fail(f"symbolic result {hit} differs from closed form {closed}")
    u = cmath.sqrt(args.q)
    try:
        num = M.act_a_neg(args.n, vac, args.window, mode="numeric", q_value=args.q, tol=args.tol,
                          max_terms=args.max_terms)
    except semimodule.ResummationError as exc:
        _fail(str(exc))
        out.table("resummation-demo", cols, rows)
        return False
    err = 0.0
    for m, c in items:
        got = complex(num.get(m, 0))
        gap = abs(got - complex(c.eval_precise(u)))
        err = max(err, gap)
        rows.append(["numeric", str(m), got, "", gap])
    if err > args.check_tol:
        ok = False
        _fail(f"numeric sum differs from closed form by {err:.3g}")
    out.table("resummation-demo", cols, rows)
    return ok


def build_parser():
    p = _Parser(prog="qcurrent", description="Exact checks for quantum current operators.")
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify-dressing", help="dressing-operator exchange conditions")
    s.add_argument("--sign", choices=["minus", "plus", "both"], default="both")
    s.add_argument("--order", type=_nonneg, default=20)
    s.add_argument("--level", type=_positive, default=1)
    s.add_argument("--convention", choices=list(heisenberg.CONVENTIONS), default=heisenberg.STANDARD)
    s.set_defaults(func=cmd_verify_dressing)

    s = sub.add_parser("verify", help="module, Heisenberg, ideal and duality self-checks")
    s.add_argument("--suite", choices=["semimodule", "heisenberg", "ideal", "funcmodel", "all"],
                   default="semimodule")
    s.add_argument("--level", type=_positive, default=1)
    s.add_argument("--l", type=_nonneg, default=0)
    s.add_argument("--window", type=_window, default=semimodule.TruncationWindow(6, 12),
                   help="D or D,P: max energy and tail probe depth")
    s.add_argument("--modes", type=_nonneg, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("character", help="basis counts per (charge, energy)")
    s.add_argument("--level", type=_positive, default=1)
    s.add_argument("--l", type=_nonneg, default=0)
    s.add_argument("--max-energy", type=_nonneg, default=6)
    s.add_argument("--sector", choices=["full", "W"], default="full")
    s.set_defaults(func=cmd_character)

    s = sub.add_parser("dual-dims", help="graded quotient dimensions")
    s.add_argument("--level", type=_positive, default=1)
    s.add_argument("--l", type=_nonneg, default=0)
    s.add_argument("--max-energy", type=_nonneg, default=8)
    s.add_argument("--source", choices=["product", "printed", "both"], default="product")
    s.set_defaults(func=cmd_dual_dims)

    s = sub.add_parser("pair", help="functional-model duality per bigrade")
    s.add_argument("--level", type=_positive, default=1)
    s.add_argument("--l", type=_nonneg, default=0)
    s.add_argument("--particles", type=_nonneg, default=2)
    s.add_argument("--max-energy", type=_nonneg, default=8)
    s.set_defaults(func=cmd_pair)

    s = sub.add_parser("resummation-demo", help="a_{-n} on the vacuum: closed form and numeric sum")
    s.add_argument("--level", type=_positive, default=1)
    s.add_argument("--l", type=_nonneg, default=0)
    s.add_argument("--n", type=_positive, default=1)
    s.add_argument("--q", type=_complex, default=DEFAULT_Q, help="numeric q (default exp(i*pi/6))")
    s.add_argument("--window", type=_window, default=semimodule.TruncationWindow(10, 12))
    s.add_argument("--tol", type=float, default=1e-10, help="tail bound for stopping the numeric sum")
    s.add_argument("--check-tol", type=float, default=1e-8, help="allowed numeric vs closed-form gap")
    s.add_argument("--max-terms", type=_positive, default=200)
    s.set_defaults(func=cmd_resummation_demo)
    return p


def run(argv=None, stream=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "l") and hasattr(args, "level") and args.l > args.level:
        parser.error(f"--l must satisfy 0 <= l <= level, got l={args.l}, level={args.level}")
    if getattr(args, "window", None) is not None and hasattr(args, "level") and args.window.P < args.level + 2:
        parser.error(f"probe depth P must be >= level+2 = {args.level + 2}")
    out = Output(args.format, stream)
    ok = args.func(args, out)
    out.flush()
    return 0 if ok else 1


def main(argv=None):
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
