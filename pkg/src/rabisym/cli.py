"""Command-line front end: solve, verify, p-poly, sweep, curve, reorder-oracle.

Exit codes: 0 success, 2 bad configuration or a bias outside (1/2)Z,
3 degenerate solver, 4 failed verification.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import curves, fock
from .symmetry import (
    ModelParams,
    NotHalfInteger,
    ResidualNonzero,
    SolverDegenerate,
    SymmetrySolution,
    commutator_residual,
    extract_p_from,
    parse_eps,
    solve_Q0,
)

EXIT_CONFIG = 2
EXIT_DEGENERATE = 3
EXIT_VERIFY = 4

COMMUTATOR_TOL = 1e-8
PAIR_TOL = 1e-6


class ConfigError(ValueError):
    pass


def _eps_arg(text: str) -> Fraction:
    try:
        return parse_eps(text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"--eps {text!r}: {exc}") from exc


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _eps_str(eps: Fraction) -> str:
    return f"{eps.numerator}/{eps.denominator}"


def _emit(args, text: str, meta: dict) -> None:
    """Write text to --out ('-' is stdout); file output gets a .meta.json sidecar."""
    if args.out == "-":
        sys.stdout.write(text)
        return
    path = Path(args.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    sidecar = path.with_name(path.name + ".meta.json")
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n")


def _config_echo(args) -> dict:
    return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in vars(args).items() if k != "func"}


def _cache_dir(args) -> Path | None:
    if getattr(args, "no_cache", False):
        return None
    if getattr(args, "cache_dir", None):
        return Path(args.cache_dir)
    root = os.environ.get("RABISYM_CACHE")
    if root:
        return Path(root)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "rabisym"


def _check_range(eps: Fraction, max_ell: int) -> int:
    try:
        ell = ModelParams(eps).ell
    except NotHalfInteger as exc:
        raise NotHalfInteger(
            f"eps = {eps} is not in (1/2)Z: the intertwining relation has no polynomial solution"
        ) from exc
    if ell > max_ell:
        raise ConfigError(f"|2 eps| = {ell} exceeds --max-ell {max_ell}")
    return ell


def load_solution(eps: Fraction, max_ell: int = 6, cache: Path | None = None) -> SymmetrySolution:
    """Solve for eps, going through the on-disk cache keyed by l and the sign of eps."""
    ell = _check_range(eps, max_ell)
    if cache is None:
        return solve_Q0(eps)
    key = cache / f"ell{ell}_{'neg' if eps < 0 else 'pos'}.json"
    if key.exists():
        try:
            sol = SymmetrySolution.from_json(key.read_text())
            if sol.eps == eps:
                return sol
        except (ValueError, KeyError, TypeError):
            pass
    sol = solve_Q0(eps)
    try:
        cache.mkdir(parents=True, exist_ok=True)
        key.write_text(sol.to_json() + "\n")
    except OSError:
        pass
    return sol


# --------------------------------------------------------------------------


def cmd_solve(args) -> int:
    eps = _eps_arg(args.eps)
    sol = load_solution(eps, args.max_ell, _cache_dir(args))
    _emit(args, sol.to_json() + "\n", {"command": "solve", "config": _config_echo(args)})
    return 0


def cmd_p_poly(args) -> int:
    eps = _eps_arg(args.eps)
    sol = load_solution(eps, args.max_ell, _cache_dir(args))
    if args.alpha is not None:
        text = str(sol.p.at_x(Fraction(args.alpha))) + "\n"
    elif args.format == "json":
        payload = {"ell": sol.ell, "eps": _eps_str(eps), "p": str(sol.p),
                   "coeffs": [str(c) for c in sol.p.coeffs]}
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = str(sol.p) + "\n"
    _emit(args, text, {"command": "p-poly", "config": _config_echo(args)})
    return 0


def _verify_symbolic(sol: SymmetrySolution) -> tuple[bool, str]:
    residual = commutator_residual(sol.Q0, sol.eps)
    if not residual.is_zero():
        return False, "nonzero: " + "; ".join(residual.to_strings())
    try:
        p = extract_p_from(sol.Q0, sol.eps, sol.ell)
    except ResidualNonzero as exc:
        return False, f"J^2 not polynomial in H: {exc}"
    if p != sol.p:
        return False, f"stored p differs from J^2 = p(H): {p}"
    return True, "exact zero"


def cmd_verify(args) -> int:
    lines = []
    if args.solution:
        try:
            sol = SymmetrySolution.from_json(Path(args.solution).read_text())
        except (OSError, ValueError, KeyError, TypeError) as exc:
            print(f"symbolic residual: FAIL (unreadable solution: {exc})")
            return EXIT_VERIFY
        eps = sol.eps
    else:
        eps = _eps_arg(args.eps)
        sol = load_solution(eps, args.max_ell, _cache_dir(args))

    ok_sym, msg = _verify_symbolic(sol)
    lines.append(f"eps = {eps}, l = {sol.ell}, g = {args.g}, delta = {args.delta}, N = {args.trunc}")
    lines.append(f"symbolic residual Ht Q0 - Q0 H: {'PASS' if ok_sym else 'FAIL'} ({msg})")
    report = {"eps": _eps_str(eps), "ell": sol.ell, "symbolic": ok_sym}
    ok = ok_sym
    if ok_sym:
        margin = sol.Q0.degree() + 8
        H = fock.represent_H(eps, args.g, args.delta, args.trunc)
        J = fock.represent_J(sol, args.g, args.delta, args.trunc)
        comm = fock.commutator_norm_interior(H, J, margin)
        ok_comm = comm.relative < COMMUTATOR_TOL
        lines.append(
            f"interior commutator ({comm.norm} norm, margin {margin}): relative {comm.relative:.3e} "
            f"{'PASS' if ok_comm else 'FAIL'} (< {COMMUTATOR_TOL:g})"
        )
        pairs = fock.joint_spectrum(sol, args.g, args.delta, args.trunc, count=args.count, margin=margin)
        worst = max((e.p_residual for e in pairs), default=float("inf"))
        ok_pairs = len(pairs) == args.count and worst < PAIR_TOL
        lines.append(
            f"|mu^2 - p(lambda)| / (1 + |p|) over {len(pairs)} pairs: max {worst:.3e} "
            f"{'PASS' if ok_pairs else 'FAIL'} (< {PAIR_TOL:g})"
        )
        if sol.ell == 0:
            mus = sorted({round(e.mu, 9) for e in pairs})
            lines.append(f"mu values: {mus}")
        ok = ok_comm and ok_pairs
        report.update(commutator_relative=comm.relative, pairs=len(pairs), max_p_residual=worst,
                      eigensolver=fock.EIGENSOLVER)
    lines.append("PASS" if ok else "FAIL")
    report["pass"] = ok
    _emit(args, "\n".join(lines) + "\n", {"command": "verify", "config": _config_echo(args), "report": report})
    return 0 if ok else EXIT_VERIFY


def _grid(lo: float, hi: float, steps: int) -> np.ndarray:
    if not hi > lo:
        raise ConfigError(f"empty range [{lo}, {hi}]")
    if steps < 2:
        raise ConfigError("--steps must be at least 2")
    return np.linspace(lo, hi, steps)


def cmd_sweep(args) -> int:
    eps = _eps_arg(args.eps)
    grid = _grid(args.gmin, args.gmax, args.steps)
    if args.pairs:
        sol = load_solution(eps, args.max_ell, _cache_dir(args))
        rows = ["g,delta,eps,lambda,mu,defect,p_residual"]
        for gv in grid:
            for e in fock.joint_spectrum(sol, float(gv), args.delta, args.trunc, count=args.k):
                rows.append(",".join([_fmt(gv), _fmt(args.delta), _eps_str(eps), _fmt(e.lam),
                                      _fmt(e.mu), _fmt(e.defect), _fmt(e.p_residual)]))
        text = "\n".join(rows) + "\n"
        meta = {"command": "sweep", "config": _config_echo(args), "eigensolver": fock.EIGENSOLVER}
    else:
        table = fock.spectral_sweep(eps, args.delta, grid, N=args.trunc, k=args.k,
                                    check_convergence=not args.no_convergence)
        text = table.to_csv()
        meta = {"command": "sweep", "config": _config_echo(args), **table.metadata}
    _emit(args, text, meta)
    return 0


def cmd_curve(args) -> int:
    if args.eps is not None:
        eps = _eps_arg(args.eps)
        if args.ell is not None and ModelParams(eps).ell != args.ell:
            raise ConfigError("--ell and --eps disagree")
    elif args.ell is not None:
        if args.ell < 0:
            raise ConfigError("--ell must be nonnegative")
        eps = Fraction(args.ell, 2)
    else:
        raise ConfigError("one of --ell or --eps is required")
    sol = load_solution(eps, args.max_ell, _cache_dir(args))
    if args.mode == "hyper":
        samples = curves.sample_hyperelliptic(sol.p, Fraction(args.g), Fraction(args.delta),
                                              (args.xmin, args.xmax), args.steps)
    elif args.mode == "eigen":
        samples = curves.eigen_overlay(sol.p, Fraction(args.delta), _grid(args.gmin, args.gmax, args.steps),
                                       (args.emin, args.emax))
    else:
        if not (args.gmax > args.gmin and args.dmax > args.dmin):
            raise ConfigError("empty parameter rectangle")
        if args.resolution < 2:
            raise ConfigError("--resolution must be at least 2")
        samples = curves.param_curve(sol.ell, Fraction(args.alpha), (args.gmin, args.gmax),
                                     (args.dmin, args.dmax), args.resolution)
        samples.metadata.pop("corner_values", None)
    meta = {"config": _config_echo(args), "eps": _eps_str(eps), "ell": sol.ell, **json.loads(samples.metadata_json())}
    _emit(args, samples.to_csv(), meta)
    return 0


def cmd_reorder_oracle(args) -> int:
    checks = fock.reorder_oracle(args.max_power, args.trunc, args.tol)
    lines = ["m,p,max_dev,status"]
    lines += [f"{c.m},{c.p},{c.max_dev:.3e},{'PASS' if c.passed else 'FAIL'}" for c in checks]
    ok = all(c.passed for c in checks)
    lines.append("PASS" if ok else "FAIL")
    _emit(args, "\n".join(lines) + "\n", {"command": "reorder-oracle", "config": _config_echo(args)})
    return 0 if ok else EXIT_VERIFY


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rabisym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, eps_required=True):
        p.add_argument("--eps", required=eps_required, help="bias as an exact rational, e.g. 3/2")
        p.add_argument("--max-ell", type=int, default=6)
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--cache-dir", default=None)
        p.add_argument("--no-cache", action="store_true")

    p = sub.add_parser("solve", help="solve for Q0 and p, print JSON")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("p-poly", help="print p(x; g, d)")
    common(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--alpha", default=None, help="print p(alpha; g, d) instead")
    p.set_defaults(func=cmd_p_poly)

    p = sub.add_parser("verify", help="exact and numeric checks of a solution")
    common(p, eps_required=False)
    p.add_argument("--solution", default=None, help="solution JSON to check instead of solving")
    p.add_argument("--g", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--trunc", type=int, default=300)
    p.add_argument("--count", type=int, default=50)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="lowest levels of H over a g grid (CSV)")
    common(p)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--gmin", type=float, default=0.0)
    p.add_argument("--gmax", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=81)
    p.add_argument("--trunc", type=int, default=300)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--pairs", action="store_true", help="emit (lambda, mu) pairs instead")
    p.add_argument("--no-convergence", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("curve", help="curve samples (CSV)")
    common(p, eps_required=False)
    p.add_argument("--mode", choices=("hyper", "eigen", "param"), required=True)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--g", default="1", help="exact value for --mode hyper")
    p.add_argument("--delta", default="1", help="exact value for --mode hyper/eigen")
    p.add_argument("--xmin", type=float, default=-10.0)
    p.add_argument("--xmax", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=401)
    p.add_argument("--gmin", type=float, default=0.0)
    p.add_argument("--gmax", type=float, default=4.0)
    p.add_argument("--dmin", type=float, default=0.0)
    p.add_argument("--dmax", type=float, default=4.0)
    p.add_argument("--emin", type=float, default=-30.0)
    p.add_argument("--emax", type=float, default=10.0)
    p.add_argument("--alpha", default="0")
    p.add_argument("--resolution", type=int, default=400)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("reorder-oracle", help="check reorder against Fock matrices")
    p.add_argument("--max-power", type=int, default=6)
    p.add_argument("--trunc", type=int, default=40)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_reorder_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotHalfInteger as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, ValueError, TypeError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverDegenerate as exc:
        print(f"error: solver degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
