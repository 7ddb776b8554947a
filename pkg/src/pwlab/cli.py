"""Command-line driver: spectrum | condition | toeplitz-distance | solve.

Each command emits a deterministic CSV (identical config, identical
bytes) whose header records the resolved configuration and its hash.
Optional SVG line plots render the emitted table; a plotting failure
warns but never fails the run.

Configuration can come from a flat key=value file (--config) with
command-line flags taking precedence.  Numbers accept a trailing "pi"
multiplier ("0.2pi"), and list-valued flags take comma-separated
values.

Exit codes: 0 ok, 2 configuration error, 3 every experiment cell failed
numerically.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys

import numpy as np

from .circulant import (
    circ_best,
    circ_first_row,
    delta_measure,
    disk_condition_estimate,
    spectrum_report,
    toeplitz_average,
)
from .geometry import CyclicAngles, Disk, Polygon, cyclic_polygon, regular_polygon
from .matrices import assemble_boundary_matrix, system_matrix
from .basis import uniform_basis
from .problems import BesselPoint, PlaneWave, run_experiment, skinny_triangle
from .solver import SolveConfig

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    pass


def parse_number(token: str) -> float:
    """Float with an optional trailing 'pi' multiplier: '0.2pi' -> 0.2*pi."""
    token = token.strip().lower()
    try:
        if token.endswith("pi"):
            head = token[:-2]
            return (float(head) if head not in ("", "+", "-") else float(head + "1")) * math.pi
        return float(token)
    except ValueError as exc:
        raise ConfigError(f"cannot parse number {token!r}") from exc


def parse_number_list(token: str) -> list[float]:
    return [parse_number(part) for part in token.split(",") if part.strip()]


def parse_geometry(spec: str, h: float):
    """Geometry DSL.

    disk | triangle | square | regular:L | cyclic:a0,a1,... |
    vertices:x,y;x,y;... | skinny-triangle[:centroid|apex|foot]

    `h` scales the circumradius of disk/regular/cyclic shapes; explicit
    vertex lists and the skinny triangle ignore it.
    """
    spec = spec.strip()
    name, _, arg = spec.partition(":")
    name = name.lower()
    try:
        if name == "disk":
            return Disk(radius=h)
        if name == "triangle":
            return regular_polygon(3, h)
        if name == "square":
            return regular_polygon(4, h)
        if name == "regular":
            return regular_polygon(int(arg), h)
        if name == "cyclic":
            angles = np.array(parse_number_list(arg))
            return cyclic_polygon(CyclicAngles(angles, h))
        if name == "vertices":
            pts = [
                [parse_number(c) for c in pair.split(",")]
                for pair in arg.split(";")
                if pair.strip()
            ]
            return Polygon(np.asarray(pts, dtype=float))
        if name == "skinny-triangle":
            return skinny_triangle(arg or "centroid")
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad geometry {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown geometry {spec!r}")


def read_config_file(path: str) -> dict:
    """Flat key=value lines; '#' starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
                key, _, val = line.partition("=")
                values[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def config_hash(pairs: dict) -> str:
    canon = ";".join(f"{k}={pairs[k]}" for k in sorted(pairs))
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def emit(stream, command: str, pairs: dict, columns: list[str], rows: list[list]) -> None:
    """Write the CSV with a self-describing header."""
    stream.write(f"# pwlab {command}\n")
    for key in sorted(pairs):
        stream.write(f"# config: {key}={pairs[key]}\n")
    stream.write(f"# config-hash: {config_hash(pairs)}\n")
    stream.write(
        "# units: kappa [1/length], h [length], angles [rad]; "
        "errors and condition numbers dimensionless\n"
    )
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)          # shortest exact round-trip form
    return str(v)


def _maybe_plot(path, series, x_label, y_label, title):
    if not path:
        return
    try:
        from ._svg import write_line_chart

        write_line_chart(path, series, x_label, y_label, title)
    except Exception as exc:  # noqa: BLE001 - plots must never fail a run
        print(f"warning: plot skipped ({exc})", file=sys.stderr)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    kappas = parse_number_list(args.kappa)
    h = parse_number(args.h)
    p = args.p_max if args.p_max is not None else args.p_min
    if p is None or p < 1:
        raise ConfigError("spectrum needs a positive p (use --p-min or --p-max)")
    pairs = {"command": "spectrum", "which": args.which, "kappa": args.kappa,
             "h": args.h, "p": str(p)}
    rows = []
    series = {}
    for kappa in kappas:
        rep = spectrum_report(args.which, p, kappa, h)
        for idx in range(p):
            rows.append([
                kappa, idx,
                float(rep.dft[idx]), 0.0,
                float(rep.integral[idx]),
                float(rep.asymptotic[idx]) if rep.asymptotic is not None else math.nan,
                int(rep.multiplicity[idx]),
            ])
        half = p // 2 + 1
        series[f"dft kappa={kappa:g}"] = (list(range(half)), [abs(v) for v in rep.dft[:half]])
    with _open_out(args.out) as stream:
        emit(stream, "spectrum", pairs,
             ["kappa", "index", "dft_real", "dft_imag", "integral", "asymptotic", "multiplicity"],
             rows)
    _maybe_plot(args.plot, series, "index", "|eigenvalue|", f"disk {args.which} spectrum")
    return EXIT_OK


def cmd_condition(args) -> int:
    kappas = parse_number_list(args.kappa)
    h = parse_number(args.h)
    p_values = _p_range(args)
    pairs = {"command": "condition", "geometry": args.geometry, "which": args.which,
             "kappa": args.kappa, "h": args.h,
             "p_min": str(args.p_min), "p_max": str(args.p_max)}
    geom = parse_geometry(args.geometry, h)
    rows, series = [], {}
    if isinstance(geom, Disk):
        cols = ["kappa", "h", "p", "cond", "lambda_min", "lambda_max",
                "min_dft_coeff", "ln_cond", "ln_proxy"]
        for kappa in kappas:
            xs, ys = [], []
            for p in p_values:
                est = disk_condition_estimate(args.which, p, kappa, h)
                rows.append([kappa, h, p, est.cond, est.lambda_min, est.lambda_max,
                             est.min_dft_coeff, est.ln_cond, est.ln_proxy])
                xs.append(p)
                ys.append(est.cond if math.isfinite(est.cond) else None)
            series[f"cond kappa={kappa:g}"] = (xs, ys)
    else:
        cols = ["kappa", "h", "p", "cond_sys"]
        for kappa in kappas:
            xs, ys = [], []
            for p in p_values:
                basis = uniform_basis(p, kappa, center=geom.center)
                M = assemble_boundary_matrix(basis, geom, "M").data
                S = assemble_boundary_matrix(basis, geom, "S").data
                D = assemble_boundary_matrix(basis, geom, "D").data
                cond = float(np.linalg.cond(system_matrix(M, S, D, kappa).data, 2))
                rows.append([kappa, h, p, cond])
                xs.append(p)
                ys.append(cond)
            series[f"cond kappa={kappa:g}"] = (xs, ys)
    with _open_out(args.out) as stream:
        emit(stream, "condition", pairs, cols, rows)
    _maybe_plot(args.plot, series, "p", "condition number", f"conditioning: {args.geometry}")
    return EXIT_OK


def cmd_toeplitz_distance(args) -> int:
    kappas = parse_number_list(args.kappa)
    h = parse_number(args.h)
    p_values = _p_range(args)
    geom = parse_geometry(args.geometry, h)
    if isinstance(geom, Disk):
        raise ConfigError("toeplitz-distance needs a polygonal geometry")
    pairs = {"command": "toeplitz-distance", "geometry": args.geometry,
             "kappa": args.kappa, "h": args.h,
             "p_min": str(args.p_min), "p_max": str(args.p_max)}
    rows, series = [], {}
    for kappa in kappas:
        xs = []
        d_t, d_r, d_b = [], [], []
        for p in p_values:
            basis = uniform_basis(p, kappa, center=geom.center)
            M = assemble_boundary_matrix(basis, geom, "M").data
            dt = delta_measure(M, toeplitz_average(M))
            dr = delta_measure(M, circ_first_row(M).materialize())
            db = delta_measure(M, circ_best(M).materialize())
            rows.append([kappa, h, p, dt, dr, db])
            xs.append(p)
            d_t.append(dt)
            d_r.append(dr)
            d_b.append(db)
        series[f"toeplitz kappa={kappa:g}"] = (xs, d_t)
        series[f"first-row kappa={kappa:g}"] = (xs, d_r)
        series[f"best kappa={kappa:g}"] = (xs, d_b)
    with _open_out(args.out) as stream:
        emit(stream, "toeplitz-distance", pairs,
             ["kappa", "h", "p", "delta_toeplitz", "delta_first_row", "delta_best"], rows)
    _maybe_plot(args.plot, series, "p", "delta", f"distance to Toeplitz/circulant: {args.geometry}")
    return EXIT_OK


def cmd_solve(args) -> int:
    kappa = parse_number(args.kappa)
    h = parse_number(args.h)
    p_values = _p_range(args)
    geom = parse_geometry(args.geometry, h)
    deltas = parse_number_list(args.delta)
    tols = parse_number_list(args.tol)
    preconds = [tok.strip() for tok in args.precond.split(",") if tok.strip()]
    sides = [tok.strip() for tok in args.side.split(",") if tok.strip()]

    if args.problem == "plane-wave":
        u = PlaneWave(kappa, parse_number(args.incident_angle))
    elif args.problem == "point-source":
        sx, sy = parse_number_list(args.source)
        u = BesselPoint(kappa, (sx, sy), amplitude=1.0)
    else:
        raise ConfigError(f"unknown problem {args.problem!r}")

    sector = None
    if args.basis == "fan":
        if not args.sector:
            raise ConfigError("fan basis needs --sector start,end")
        lo, hi = parse_number_list(args.sector)
        sector = (lo, hi)

    pairs = {"command": "solve", "problem": args.problem, "geometry": args.geometry,
             "kappa": args.kappa, "h": args.h, "p_min": str(args.p_min),
             "p_max": str(args.p_max), "precond": args.precond, "side": args.side,
             "method": args.method, "restart": str(args.restart), "tol": args.tol,
             "maxit": str(args.maxit), "delta": args.delta, "basis": args.basis,
             "sector": args.sector or "", "incident_angle": args.incident_angle,
             "source": args.source}

    methods = ("direct", "gmres") if args.method == "both" else (args.method,)
    rows = []
    series = {}
    n_cells = 0
    n_failed = 0
    for tol in tols:
        for delta in deltas:
            for precond in preconds:
                for side in sides:
                    cfg = SolveConfig(
                        method="gmres", side="none", restart=args.restart,
                        tol=tol, maxit=args.maxit,
                    )
                    reports = run_experiment(
                        u, geom, p_values, precond=precond, side=side,
                        solve_config=cfg, delta=delta,
                        basis_kind=args.basis, sector=sector, methods=methods,
                    )
                    xs, ys = [], []
                    for rep in reports:
                        n_cells += 1
                        if rep.failure is not None:
                            n_failed += 1
                        rows.append([
                            rep.p, rep.error_direct, rep.error_gmres, rep.cond,
                            rep.iterations, rep.converged, rep.preconditioner,
                            rep.side, delta, tol, rep.failure or "",
                        ])
                        plotted = rep.error_gmres if "gmres" in methods else rep.error_direct
                        xs.append(rep.p)
                        ys.append(plotted if rep.failure is None else None)
                    label = f"{precond}/{side}" + (f" d={delta:g}" if len(deltas) > 1 else "")
                    series[label] = (xs, ys)
    with _open_out(args.out) as stream:
        emit(stream, "solve", pairs,
             ["p", "E_direct", "E_gmres", "cond", "iterations", "converged",
              "preconditioner", "side", "delta", "tol", "failure"],
             rows)
    _maybe_plot(args.plot, series, "p", "E(p)", f"{args.problem} on {args.geometry}")
    if n_cells > 0 and n_failed == n_cells:
        print("error: every experiment cell failed", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

class _OutStream:
    def __init__(self, path):
        self.path = path
        self.fh = None

    def __enter__(self):
        if self.path in (None, "-"):
            self.fh = sys.stdout
            return self.fh
        self.fh = open(self.path, "w", encoding="utf-8", newline="\n")
        return self.fh

    def __exit__(self, *exc):
        if self.fh is not sys.stdout and self.fh is not None:
            self.fh.close()
        return False


def _open_out(path):
    return _OutStream(path)


def _p_range(args) -> list[int]:
    lo = args.p_min if args.p_min is not None else args.p_max
    hi = args.p_max if args.p_max is not None else args.p_min
    if lo is None or hi is None or lo < 1 or hi < lo:
        raise ConfigError("need a nonempty p range: --p-min <= --p-max, both >= 1")
    return list(range(lo, hi + 1))


def _add_common(sub):
    sub.add_argument("--config", help="flat key=value config file; flags override")
    sub.add_argument("--kappa", default="1.0", help="wave number(s), comma separated")
    sub.add_argument("--h", default="1.0", help="element circumradius")
    sub.add_argument("--p-min", type=int, default=None)
    sub.add_argument("--p-max", type=int, default=None)
    sub.add_argument("--out", default="-", help="output CSV path (default stdout)")
    sub.add_argument("--plot", default=None, help="optional SVG line-chart path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pwlab",
        description="Single-element plane-wave Helmholtz laboratory",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("spectrum", help="disk matrix eigenvalues by dft/integral/asymptotic")
    _add_common(sp)
    sp.add_argument("--which", choices=["M", "S", "D"], default="M")
    sp.set_defaults(func=cmd_spectrum)

    sc = subs.add_parser("condition", help="condition numbers vs p")
    _add_common(sc)
    sc.add_argument("--geometry", default="disk")
    sc.add_argument("--which", choices=["M", "D"], default="M",
                    help="disk matrix for the closed-form estimate")
    sc.set_defaults(func=cmd_condition)

    st = subs.add_parser("toeplitz-distance", help="distance of M to Toeplitz/circulant approximants")
    _add_common(st)
    st.add_argument("--geometry", default="square")
    st.set_defaults(func=cmd_toeplitz_distance)

    sv = subs.add_parser("solve", help="scattering solve sweeps with preconditioners")
    _add_common(sv)
    sv.add_argument("--geometry", default="triangle")
    sv.add_argument("--problem", choices=["plane-wave", "point-source"], default="plane-wave")
    sv.add_argument("--incident-angle", default="0.0")
    sv.add_argument("--source", default="2,-4")
    sv.add_argument("--precond", default="none", help="comma list from none,P1..P7")
    sv.add_argument("--side", default="left", help="comma list from left,two-sided,right")
    sv.add_argument("--method", choices=["direct", "gmres", "both"], default="both")
    sv.add_argument("--restart", type=int, default=5)
    sv.add_argument("--tol", default="1e-6", help="GMRES tolerance(s), comma separated")
    sv.add_argument("--maxit", type=int, default=None)
    sv.add_argument("--delta", default="1e-10", help="regularization threshold(s)")
    sv.add_argument("--basis", choices=["uniform", "fan"], default="uniform")
    sv.add_argument("--sector", default=None, help="fan sector start,end in radians")
    sv.set_defaults(func=cmd_solve)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            file_values = read_config_file(args.config)
            file_values.pop("config", None)
            flags = []
            for key, value in sorted(file_values.items()):
                flags.extend([f"--{key.replace('_', '-')}", value])
            # file values go first so explicit command-line flags win
            cmd_idx = argv.index(args.command)
            args = parser.parse_args(argv[: cmd_idx + 1] + flags + argv[cmd_idx + 1 :])
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return EXIT_CONFIG if exc.code else EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
