"""Command-line driver.

Examples::

    fracburgers solve --problem example1 --gamma 1 --h 0.01 --tau 0.01 --T 1 --out u.csv
    fracburgers converge-time --problem mms --gamma 0.5 --h 0.001953125 --tau 0.1 --out rates.csv
    fracburgers sweep-gamma --problem example2 --h 0.01 --tau 0.01 --T 1 --out profiles/

Settings can also come from a ``key = value`` file given with ``--config``;
command-line flags take precedence.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .engine import SolverError, solve
from .linalg import SingularPivotError
from .norms import convergence_study, error_norms
from .problems import PROBLEMS, build_problem

log = logging.getLogger("fracburgers")

MODES = ("solve", "converge-space", "converge-time", "sweep-gamma")
SWEEP_GAMMAS = (0.2, 0.5, 0.8)

EXIT_OK, EXIT_NUMERIC, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    mode: str
    problem: str
    out: str
    gamma: float = 1.0
    h: float = 0.01
    tau: float = 0.01
    T: float = 1.0
    nu: Optional[float] = None
    levels: int = 5
    max_linf: Optional[float] = None
    min_order: Optional[float] = None

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.problem not in PROBLEMS:
            raise ConfigError(f"key 'problem': unknown problem {self.problem!r}")
        for key in ("h", "tau", "T"):
            if not getattr(self, key) > 0:
                raise ConfigError(f"key {key!r} must be positive")
        if self.nu is not None and not self.nu > 0:
            raise ConfigError("key 'nu' must be positive")
        if self.mode.startswith("converge") and self.levels < 4:
            raise ConfigError("key 'levels' must be at least 4 for a convergence study")


_TYPES = {
    "problem": str, "out": str, "gamma": float, "h": float, "tau": float, "T": float,
    "nu": float, "levels": int, "max_linf": float, "min_order": float,
}


def read_config_file(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _TYPES[key](value)
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: bad value for key {key!r}: {value!r}") from None
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracburgers",
        description="Trigonometric B-spline solver for the time-fractional Burgers equation.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode)
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--problem", choices=sorted(PROBLEMS))
        p.add_argument("--gamma", type=float, help="fractional order (ignored by sweep-gamma)")
        p.add_argument("--h", type=float, help="spatial step")
        p.add_argument("--tau", type=float, help="time step")
        p.add_argument("--T", type=float, help="final time")
        p.add_argument("--nu", type=float, help="override the diffusion coefficient")
        p.add_argument("--out", help="output CSV (directory for sweep-gamma)")
        if mode.startswith("converge"):
            p.add_argument("--levels", type=int, help="number of refinement levels (default 5)")
            p.add_argument("--min-order", type=float, dest="min_order",
                           help="fail unless the finest observed L-inf order reaches this")
        if mode == "solve":
            p.add_argument("--max-linf", type=float, dest="max_linf",
                           help="fail if the L-inf error at T exceeds this")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = read_config_file(args.config) if args.config else {}
    for key in _TYPES:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    for key in ("problem", "out"):
        if key not in values:
            raise ConfigError(f"missing required key {key!r}")
    cfg = RunConfig(mode=args.mode, **values)
    cfg.validate()
    return cfg


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def read_profile(path) -> dict[str, list[float]]:
    """Read a profile CSV back into columns of floats."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        cols: dict[str, list[float]] = {name: [] for name in reader.fieldnames or []}
        for row in reader:
            for name, v in row.items():
                cols[name].append(float(v))
    return cols


def _run_solve(cfg: RunConfig) -> bool:
    spec, exact = build_problem(cfg.problem, cfg.gamma, cfg.h, cfg.tau, cfg.T, cfg.nu)
    traj = solve(spec)
    out = Path(cfg.out)
    if exact is None:
        write_csv(out, ["x", "u_numeric"], zip(traj.x, traj.final))
        print(f"{cfg.problem}: gamma={spec.gamma} M={spec.grid.M} N={spec.n_steps} "
              f"runtime={traj.runtime:.3f}s (no exact solution)")
        if cfg.max_linf is not None:
            log.error("--max-linf needs a problem with an exact solution")
            return False
        return True

    u_ex = exact(traj.x, spec.T)
    write_csv(out, ["x", "u_numeric", "u_exact", "abs_error"],
              zip(traj.x, traj.final, u_ex, abs(traj.final - u_ex)))
    rep = error_norms(traj.final, u_ex, spec.grid.h)
    rep.N, rep.runtime = spec.n_steps, traj.runtime
    write_csv(out.with_name(out.stem + "_errors.csv"),
              ["l_inf", "l2", "M", "N", "runtime"],
              [[rep.l_inf, rep.l2, rep.M, rep.N, rep.runtime]])
    print(f"{cfg.problem}: gamma={spec.gamma} M={rep.M} N={rep.N} "
          f"l_inf={rep.l_inf:.6e} l2={rep.l2:.6e} runtime={rep.runtime:.3f}s")
    if cfg.max_linf is not None and rep.l_inf > cfg.max_linf:
        log.error("L-inf error %.3e exceeds gate %.3e", rep.l_inf, cfg.max_linf)
        return False
    return True


def _run_converge(cfg: RunConfig) -> bool:
    mode = "space" if cfg.mode == "converge-space" else "time"
    rows = convergence_study(cfg.problem, mode, cfg.gamma, cfg.h, cfg.tau, cfg.T,
                             cfg.levels, cfg.nu)
    write_csv(Path(cfg.out),
              ["level", "h", "tau", "l_inf", "l2", "order_inf", "order_l2"],
              [[r.level, r.h, r.tau, r.l_inf, r.l2, r.order_inf, r.order_l2] for r in rows])
    for r in rows:
        order = "" if r.order_inf is None else f"{r.order_inf:6.3f}"
        print(f"{r.level:3d}  h={r.h:.4e}  tau={r.tau:.4e}  l_inf={r.l_inf:.4e}  "
              f"l2={r.l2:.4e}  order={order}")
    if cfg.min_order is not None and rows[-1].order_inf < cfg.min_order:
        log.error("observed order %.3f below gate %.3f", rows[-1].order_inf, cfg.min_order)
        return False
    return True


def _run_sweep(cfg: RunConfig) -> bool:
    outdir = Path(cfg.out)
    for gamma in SWEEP_GAMMAS:
        spec, _ = build_problem(cfg.problem, gamma, cfg.h, cfg.tau, cfg.T, cfg.nu)
        traj = solve(spec)
        path = outdir / f"profile_gamma_{gamma:g}.csv"
        write_csv(path, ["x", "u_numeric"], zip(traj.x, traj.final))
        print(f"gamma={gamma:g}: wrote {path} (runtime {traj.runtime:.3f}s)")
    return True


RUNNERS = {
    "solve": _run_solve,
    "converge-space": _run_converge,
    "converge-time": _run_converge,
    "sweep-gamma": _run_sweep,
}


def run(cfg: RunConfig) -> int:
    """Execute one configured run and return the process exit code."""
    try:
        ok = RUNNERS[cfg.mode](cfg)
    except (SolverError, SingularPivotError, FloatingPointError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC
    except ValueError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    return EXIT_OK if ok else EXIT_NUMERIC


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if not args.verbose:
        # example2's rounded series constants always trip this
        warnings.filterwarnings("ignore", message="initial and boundary data disagree")
    try:
        cfg = config_from_args(args)
    except (ConfigError, TypeError) as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
