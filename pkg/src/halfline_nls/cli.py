"""Command-line interface: ``halfline-nls <subcommand> [flags]``.

Exit codes: 0 success, 1 usage or domain error, 2 no bound state / mass out
of range, 3 verification failure.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import acceptance
from . import boundstate as bs
from . import closedform as cf
from . import groundstate as gs
from . import minimizer as mn
from . import thresholds as th
from .errors import ConvergenceError, DomainError, NoBoundState, OutOfRange

EXIT_OK, EXIT_USAGE, EXIT_NO_STATE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class Sweep:
    start: float
    stop: float
    count: int
    log: bool = False

    def values(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    def spec(self) -> str:
        return f"{self.start!r}:{self.stop!r}:{self.count}:{'log' if self.log else 'lin'}"


def parse_sweep(text: str) -> Sweep:
    """``start:stop:count[:log|lin]``."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise argparse.ArgumentTypeError("sweep must be start:stop:count[:log]")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad sweep {text!r}: {exc}") from None
    mode = parts[3] if len(parts) == 4 else "lin"
    if mode not in ("log", "lin"):
        raise argparse.ArgumentTypeError("sweep mode must be 'log' or 'lin'")
    if count < 2:
        raise argparse.ArgumentTypeError("sweep count must be at least 2")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise argparse.ArgumentTypeError("sweep bounds must be finite")
    if mode == "log" and not (start > 0 and stop > 0):
        raise argparse.ArgumentTypeError("log sweeps need positive bounds")
    return Sweep(start, stop, count, mode == "log")


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float):
        return repr(float(x))
    return str(x)


def write_kv(out, items) -> None:
    for k, v in items:
        out.write(f"{k}={fmt(v)}\n")


def write_table(out, args, command: str, columns: Sequence[str], rows: Sequence[Sequence]) -> None:
    """CSV with a '#' config header, or whitespace-aligned text."""
    config = " ".join(f"{k}={fmt(v)}" for k, v in _config_items(args))
    out.write(f"# halfline-nls {command} {config}\n")
    if args.format == "csv":
        out.write(",".join(columns) + "\n")
        for row in rows:
            out.write(",".join(fmt(v) for v in row) + "\n")
        return
    cells = [list(columns)] + [[fmt(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    for r in cells:
        out.write("  ".join(c.rjust(w) for c, w in zip(r, widths)) + "\n")


def _config_items(args):
    for k in ("p", "alpha", "mu", "omega", "branch", "sweep", "alpha_sweep", "L", "n", "tol", "seed", "regime"):
        v = getattr(args, k, None)
        if v is None:
            continue
        yield k, v.spec() if isinstance(v, Sweep) else v


@contextlib.contextmanager
def _output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join(missing)}")


def write_profile(path: str, x: np.ndarray, u: np.ndarray) -> None:
    with open(path, "w", newline="\n") as fh:
        for xi, ui in zip(x, u):
            fh.write(f"{float(xi)!r} {float(ui)!r}\n")


def read_profile(path: str) -> np.ndarray:
    try:
        data = np.loadtxt(path, ndmin=2)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    if data.shape[1] != 2:
        raise UsageError(f"{path}: expected two columns (x, u)")
    return data[:, 1]


# ------------------------------------------------------------ subcommands

def cmd_bound_state(args) -> int:
    _require(args, "p", "alpha")
    if (args.omega is None) == (args.mu is None):
        raise UsageError("give exactly one of --omega or --mu")
    if args.omega is not None:
        omega = args.omega
    else:
        omega = th.invert_mass(args.p, args.alpha, args.mu, None if args.branch is None else th.BranchSelector(args.branch))
    state = bs.bound_state(args.p, args.alpha, omega)
    s = bs.sample(args.p, args.alpha, omega)
    write_kv(sys.stdout, [
        ("p", args.p), ("alpha", args.alpha), ("omega", omega), ("shift", state.shift),
        ("mass", s.mass), ("energy", s.energy), ("dmass", s.dmass_domega), ("denergy", s.denergy_domega),
    ])
    if args.out:
        L = args.L if args.L is not None else mn.default_length(omega)
        grid = mn.Grid(L, args.n)
        write_profile(args.out, grid.x, state(grid.x))
    return EXIT_OK


def cmd_curves(args) -> int:
    _require(args, "p", "alpha", "sweep")
    rows = []
    for omega in args.sweep.values():
        try:
            s = bs.sample(args.p, args.alpha, float(omega))
        except NoBoundState:
            print(f"note: omega={float(omega)!r} <= alpha^2, no bound state; row omitted", file=sys.stderr)
            continue
        rows.append((float(omega), s.mass, s.energy, s.dmass_domega, s.denergy_domega))
    with _output(args.out) as out:
        write_table(out, args, "curves", ("omega", "mass", "energy", "dmass", "denergy"), rows)
    return EXIT_OK


def cmd_thresholds(args) -> int:
    _require(args, "p", "alpha")
    rep = th.threshold_report(args.p, args.alpha)
    items = [("p", args.p), ("alpha", args.alpha), ("soliton_mass_alpha_sq", rep.soliton_mass_at_alpha_sq)]
    if rep.gamma_p is not None:
        items.append(("gamma_p", rep.gamma_p))
    if rep.omega_star is not None:
        items += [("omega_star", rep.omega_star), ("mu_star", rep.mu_star), ("mu_tilde", rep.mu_tilde)]
        # alpha_threshold inverts mu_tilde; it must hand back alpha
        h = th.alpha_threshold(args.p, rep.mu_tilde).value
        items += [("h_tilde_of_mu_tilde", h), ("h_tilde_consistent", abs(h - args.alpha) <= 1e-8 * args.alpha),
                  ("h_tilde_above_gamma", h > rep.gamma_p * rep.mu_tilde ** cf.beta_exponent(args.p))]
    elif args.alpha > 0 and args.p < cf.P_CRITICAL:
        items.append(("mass_threshold", th.mass_threshold(args.p, args.alpha).value))
    if args.p == cf.P_CRITICAL:
        items.append(("critical_mass_halfline", cf.CRITICAL_MASS_HALFLINE))
    write_kv(sys.stdout, items)
    return EXIT_OK


def phase_cell(p: float, alpha: float, mu: float) -> tuple:
    r = gs.decide(p, alpha, mu)
    lvl = r.level
    value = "minus_infinity" if lvl.kind is gs.LevelKind.MINUS_INFINITY else lvl.value
    return (mu, alpha, r.bound_state_count, r.exists, r.at_threshold, lvl.tag, value, lvl.attained)


def cmd_phase_diagram(args) -> int:
    _require(args, "p", "sweep")
    if (args.alpha is None) == (args.alpha_sweep is None):
        raise UsageError("give exactly one of --alpha or --alpha-sweep")
    alphas = [args.alpha] if args.alpha_sweep is None else args.alpha_sweep.values()
    rows = []
    for a in alphas:
        if a == 0.0:
            print("note: alpha=0 is excluded; row omitted", file=sys.stderr)
            continue
        for mu in args.sweep.values():
            rows.append(phase_cell(args.p, float(a), float(mu)))
    cols = ("mu", "alpha", "bound_state_count", "ground_state_exists", "at_threshold",
            "energy_level", "level_value", "attained")
    with _output(args.out) as out:
        write_table(out, args, "phase-diagram", cols, rows)
    return EXIT_OK


def cmd_flow(args) -> int:
    _require(args, "p", "alpha", "mu")
    try:
        guess = th.least_energy_bound_state(args.p, args.alpha, args.mu).omega
    except (NoBoundState, DomainError):
        guess = None
    L = args.L if args.L is not None else mn.default_length(guess)
    grid = mn.Grid(L, args.n)
    initial = None
    if args.initial:
        initial = read_profile(args.initial)
        if initial.size != grid.n + 1:
            raise UsageError(f"initial field has {initial.size} samples, grid needs {grid.n + 1}")
    res = mn.normalized_gradient_flow(args.p, args.alpha, args.mu, grid, tol=args.tol,
                                      max_iter=args.max_iter, initial=initial, seed=args.seed)
    el = mn.el_residual(res.field, args.p, args.alpha)
    write_kv(sys.stdout, [
        ("p", args.p), ("alpha", args.alpha), ("mu", args.mu), ("L", L), ("n", grid.n),
        ("status", res.status.value), ("iterations", res.iterations), ("energy", res.energy),
        ("mass", res.field.mass), ("omega_estimate", el.omega_estimate),
        ("interior_residual", el.interior_residual), ("boundary_residual", el.boundary_residual),
    ])
    if args.out:
        write_profile(args.out, grid.x, res.field.values)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = acceptance.run_suite(regime=args.regime)
    with _output(args.out) as out:
        for r in report.results:
            out.write(r.line() + "\n")
        write_kv(out, report.summary().items())
    return EXIT_OK if report.passed else EXIT_VERIFY


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="halfline-nls", description="Ground states of the NLS on the half-line with a Robin point interaction.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *, mu=True, omega=False):
        sp.add_argument("--p", type=float, help="nonlinearity power, 2 < p <= 6")
        sp.add_argument("--alpha", type=float, help="boundary strength (nonzero)")
        if mu:
            sp.add_argument("--mu", type=float, help="mass")
        if omega:
            sp.add_argument("--omega", type=float, help="frequency")
        sp.add_argument("--format", choices=("csv", "text"), default="csv")
        sp.add_argument("--out", help="output path (default: stdout)")

    sp = sub.add_parser("bound-state", help="bound state at a frequency or mass")
    common(sp, omega=True)
    sp.add_argument("--branch", choices=[b.value for b in th.BranchSelector])
    sp.add_argument("--L", type=float, help="profile length for --out")
    sp.add_argument("--n", type=int, default=1024, help="profile intervals for --out")
    sp.set_defaults(func=cmd_bound_state)

    sp = sub.add_parser("curves", help="mass/energy curves over a frequency sweep")
    common(sp, mu=False)
    sp.add_argument("--sweep", type=parse_sweep, help="omega sweep start:stop:count[:log]")
    sp.set_defaults(func=cmd_curves)

    sp = sub.add_parser("thresholds", help="existence thresholds at (p, alpha)")
    common(sp, mu=False)
    sp.set_defaults(func=cmd_thresholds)

    sp = sub.add_parser("phase-diagram", help="existence over a (mu, alpha) grid")
    common(sp, mu=False)
    sp.add_argument("--sweep", type=parse_sweep, help="mu sweep start:stop:count[:log]")
    sp.add_argument("--alpha-sweep", type=parse_sweep, help="alpha sweep start:stop:count")
    sp.set_defaults(func=cmd_phase_diagram)

    sp = sub.add_parser("flow", help="discrete minimization by normalized gradient flow")
    common(sp)
    sp.add_argument("--L", type=float)
    sp.add_argument("--n", type=int, default=4096)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-iter", type=int, default=20000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--initial", help="two-column (x, u) starting field")
    sp.set_defaults(func=cmd_flow)

    sp = sub.add_parser("verify", help="run the acceptance suite")
    sp.add_argument("--regime", choices=acceptance.REGIMES)
    sp.add_argument("--out", help="report path (default: stdout)")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NoBoundState, OutOfRange) as exc:
        print(f"halfline-nls: {exc}", file=sys.stderr)
        return EXIT_NO_STATE
    except (UsageError, DomainError, ConvergenceError, OSError) as exc:
        print(f"halfline-nls: {exc}", file=sys.stderr)
        return EXIT_USAGE
