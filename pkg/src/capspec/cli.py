"""Command-line front end: single solves, table batches, and flat exports.

Three subcommands solve one problem each (``p1`` disk, ``p2`` annulus,
``p3`` planar slab) and emit the converged curve as JSON or CSV plus an
optional SVG plot; the ``table`` subcommand runs the built-in fixture sets
and writes one CSV row per solve.  Angles are accepted as decimal radians
or as exact fractions of pi ("pi", "-pi", "3*pi/8").  Exit codes: 0 on
success, 1 for argument problems, 2 when the solver fails (a diagnostic
JSON document goes to standard error) or any table row fails.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .chebcore import bary_eval, cheb_points
from .model import ProblemKind, ProblemSpec, StateVector, residual, select_formulation
from .solver import BvpFailure, SolveReport, SolverConfig, solve

_ANGLE_RE = re.compile(r"^([+-]?)(?:(\d+)\*)?pi(?:/(\d+))?$")


def parse_angle(text: str) -> float:
    """Radians from a decimal literal or the exact forms pi, -pi, k*pi/m."""
    m = _ANGLE_RE.match(text.strip())
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        num = int(m.group(2)) if m.group(2) else 1
        den = int(m.group(3)) if m.group(3) else 1
        if den == 0:
            raise argparse.ArgumentTypeError(f"zero denominator in angle {text!r}")
        return sign * num * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"not an angle: {text!r} (use radians or k*pi/m)") from None


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Join angle flags to their values so a leading minus is not read as a flag."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in ("--psia", "--psib", "--kappa"):
            val = next(it, None)
            out.append(tok if val is None else f"{tok}={val}")
        else:
            out.append(tok)
    return out


@dataclass(frozen=True)
class FlatBandMetrics:
    """Minimum of the height interpolant and the span where it is numerically zero."""

    u_min: float
    tau_min: float
    r_min: float
    band_length: float


def _height_at(report: SolveReport, tau: float) -> float:
    return float(bary_eval(report.grid, report.state.u, np.array([tau]))[0])


def _bisect_band_edge(report: SolveReport, lo: float, hi: float, tol: float) -> float:
    """Refine one crossing of |u| = tol bracketed by [lo, hi] on the interpolant."""
    f_lo = abs(_height_at(report, lo)) - tol
    while hi - lo > 1e-15:
        mid = 0.5 * (lo + hi)
        f_mid = abs(_height_at(report, mid)) - tol
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def flat_band_metrics(report: SolveReport, tol: float = 1e-12) -> FlatBandMetrics:
    """Locate the height minimum and the outermost intersections with +-tol."""
    dense = np.linspace(-1.0, 1.0, 40001)
    u = bary_eval(report.grid, report.state.u, dense)
    i = int(np.argmin(u))
    tau_min = float(dense[i])
    r_min = float(bary_eval(report.grid, report.state.r, np.array([tau_min]))[0])
    inside = np.nonzero(np.abs(u) <= tol)[0]
    if inside.size == 0:
        band = 0.0
    else:
        left = float(dense[inside[0]])
        if inside[0] > 0:
            left = _bisect_band_edge(report, float(dense[inside[0] - 1]), left, tol)
        right = float(dense[inside[-1]])
        if inside[-1] < dense.size - 1:
            right = _bisect_band_edge(report, float(dense[inside[-1] + 1]), right, tol)
        r_edges = bary_eval(report.grid, report.state.r, np.array([left, right]))
        band = float(r_edges[1] - r_edges[0])
    return FlatBandMetrics(float(u[i]), tau_min, r_min, band)


@dataclass
class RunRecord:
    """One converged solve with its fine-grid curve table."""

    spec: ProblemSpec
    config: SolverConfig
    report: SolveReport
    sample_tau: np.ndarray
    sample_r: np.ndarray
    sample_u: np.ndarray
    sample_psi: np.ndarray
    minimum: FlatBandMetrics | None = None


def build_record(spec: ProblemSpec, config: SolverConfig,
                 report: SolveReport) -> RunRecord:
    """Sample the converged interpolant on 10n equispaced points plus the nodes."""
    nodes = report.grid.points
    fine = np.linspace(-1.0, 1.0, 10 * report.n)
    taus = np.unique(np.concatenate([fine, nodes]))
    rec = RunRecord(
        spec, config, report, taus,
        bary_eval(report.grid, report.state.r, taus),
        bary_eval(report.grid, report.state.u, taus),
        bary_eval(report.grid, report.state.psi, taus),
    )
    if spec.kind is ProblemKind.PLANAR:
        rec.minimum = flat_band_metrics(report, config.tol_bvp)
    return rec


def _curve_rows(grid_tau: np.ndarray, r: np.ndarray, u: np.ndarray,
                psi: np.ndarray) -> list[dict]:
    return [
        {"tau": float(t), "r": float(rv), "u": float(uv), "psi": float(pv)}
        for t, rv, uv, pv in zip(grid_tau, r, u, psi)
    ]


def record_payload(rec: RunRecord) -> dict:
    """The JSON document for one converged run."""
    spec, report = rec.spec, rec.report
    params: dict[str, float] = {"b": spec.b, "psi_b": spec.psi_b}
    if spec.kind is not ProblemKind.DISK:
        params = {"a": spec.a, "b": spec.b,
                  "psi_a": spec.psi_a, "psi_b": spec.psi_b}
    params["kappa"] = spec.kappa
    state = report.state
    return {
        "problem": spec.kind.value,
        "params": params,
        "n": report.n,
        "ell": float(state.ell),
        "res_newton": float(report.res_newton_final),
        "res_bvp": float(report.res_bvp_final),
        "iterations": list(report.newton_iterations),
        "wall_time_s": float(report.wall_time),
        "nodes": _curve_rows(report.grid.points, state.r, state.u, state.psi),
        "samples": _curve_rows(rec.sample_tau, rec.sample_r, rec.sample_u,
                               rec.sample_psi),
    }


def load_payload(payload: dict) -> tuple[ProblemSpec, StateVector, int]:
    """Rebuild the problem and nodal state from an exported JSON document."""
    params = payload["params"]
    kind = ProblemKind(payload["problem"])
    if kind is ProblemKind.DISK:
        spec = ProblemSpec.disk(params["b"], params["psi_b"], params["kappa"])
    elif kind is ProblemKind.ANNULUS:
        spec = ProblemSpec.annulus(params["a"], params["b"], params["psi_a"],
                                   params["psi_b"], params["kappa"])
    else:
        spec = ProblemSpec.planar(params["a"], params["b"], params["psi_a"],
                                  params["psi_b"], params["kappa"])
    nodes = payload["nodes"]
    state = StateVector.from_parts(
        np.array([row["r"] for row in nodes]),
        np.array([row["u"] for row in nodes]),
        np.array([row["psi"] for row in nodes]),
        payload["ell"],
    )
    return spec, state, payload["n"]


def payload_residual(payload: dict) -> float:
    """Recompute the scaled residual norm from an exported document's nodes.

    A faithful export satisfies ``payload_residual(doc) ~= doc["res_bvp"]``,
    which is the round-trip check the JSON schema is designed around.
    """
    spec, state, n = load_payload(payload)
    grid = cheb_points(n)
    rhs = residual(spec, select_formulation(spec), grid, state)
    return float(np.linalg.norm(rhs) / np.linalg.norm(state.flat))


def export_json(rec: RunRecord, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record_payload(rec), fh, indent=2)
        fh.write("\n")


def export_csv(rec: RunRecord, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("tau,r,u,psi\n")
        for t, r, u, p in zip(rec.sample_tau, rec.sample_r, rec.sample_u,
                              rec.sample_psi):
            fh.write(f"{float(t)!r},{float(r)!r},{float(u)!r},{float(p)!r}\n")


def render_svg(rec: RunRecord, path: str, width: int = 840,
               height: int = 560) -> None:
    """Curve with node markers, boundary guide lines, equal axis scaling."""
    spec, report = rec.spec, rec.report
    guides = ([-spec.b, spec.b] if spec.kind is ProblemKind.DISK
              else [spec.a, spec.b])
    xs = np.concatenate([rec.sample_r, np.asarray(guides)])
    ys = rec.sample_u
    x_mid = 0.5 * (float(xs.min()) + float(xs.max()))
    y_mid = 0.5 * (float(ys.min()) + float(ys.max()))
    x_span = max(float(xs.max()) - float(xs.min()), 1e-12)
    y_span = float(ys.max()) - float(ys.min())
    margin = 40.0
    scale = min((width - 2 * margin) / x_span,
                (height - 2 * margin) / max(y_span, 1e-12 * x_span))

    def fx(x: float) -> float:
        return (x - x_mid) * scale + width / 2

    def fy(y: float) -> float:
        return height / 2 - (y - y_mid) * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for g in guides:
        parts.append(
            f'<line class="guide" x1="{fx(g):.2f}" y1="0" x2="{fx(g):.2f}" '
            f'y2="{height}" stroke="#999" stroke-dasharray="6 4"/>'
        )
    pts = " ".join(f"{fx(float(x)):.2f},{fy(float(y)):.2f}"
                   for x, y in zip(rec.sample_r, rec.sample_u))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#1f3f9f" '
                 'stroke-width="1.5"/>')
    for x, y in zip(report.state.r, report.state.u):
        parts.append(f'<circle class="node" cx="{fx(float(x)):.2f}" '
                     f'cy="{fy(float(y)):.2f}" r="2.5" fill="#1f3f9f"/>')
    if rec.minimum is not None:
        parts.append(
            f'<circle class="minimum" cx="{fx(rec.minimum.r_min):.2f}" '
            f'cy="{fy(rec.minimum.u_min):.2f}" r="7" fill="none" '
            'stroke="#c02020" stroke-width="1.5"/>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# table fixtures

_TABLE_IDS = ("disc1", "disc2", "ann1", "ann2", "ann3", "fig8")


def table_fixture(table_id: str) -> tuple[list[ProblemSpec], SolverConfig, bool]:
    """Problem list, solver configuration, and whether rows carry band metrics."""
    pi = math.pi
    cfg = SolverConfig()
    if table_id == "disc1":
        rows = [ProblemSpec.disk(1.0, pb)
                for pb in (pi / 6, pi / 3, pi / 2, 2 * pi / 3, pi)]
    elif table_id == "disc2":
        rows = [ProblemSpec.disk(b, pb)
                for b in (0.05, 0.1, 0.5, 1.0, 2.0, 10.0, 20.0)
                for pb in (3 * pi / 8, 7 * pi / 8)]
    elif table_id == "ann1":
        rows = [ProblemSpec.annulus(1.0, 3.0, pa, pb)
                for pb in (pi / 6, pi / 3, pi / 2, 2 * pi / 3, pi)
                for pa in (0.0, -pi / 6, -pi / 3, -pi / 2, -2 * pi / 3, -pi)]
    elif table_id == "ann2":
        rows = [ProblemSpec.annulus(1.0, b, pa, pb)
                for pa, pb in ((-3 * pi / 8, 3 * pi / 8), (-3 * pi / 8, 7 * pi / 8),
                               (-7 * pi / 8, 3 * pi / 8), (-7 * pi / 8, 7 * pi / 8))
                for b in (1.05, 1.10, 1.50, 2.00, 10.0, 15.0)]
    elif table_id == "ann3":
        rows = [ProblemSpec.annulus(a, 1.0, pa, pb)
                for pa, pb in ((-3 * pi / 8, 3 * pi / 8), (-3 * pi / 8, 5 * pi / 8),
                               (-5 * pi / 8, 3 * pi / 8), (-5 * pi / 8, 5 * pi / 8))
                for a in (0.1, 0.5)]
    elif table_id == "fig8":
        rows = [ProblemSpec.planar(1.0, b, -7 * pi / 8, 7 * pi / 8)
                for b in (100.0, 99.0)]
        return rows, SolverConfig(max_iter_newton=100, max_iter_bvp=500), True
    else:
        raise ValueError(f"unknown table id {table_id!r}")
    return rows, cfg, False


def _job_count(requested: int | None) -> int:
    env = os.environ.get("CAPSPEC_JOBS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            raise SystemExit(f"capspec: CAPSPEC_JOBS is not an integer: {env!r}")
        if n < 1:
            raise SystemExit(f"capspec: CAPSPEC_JOBS must be positive, got {n}")
        return n
    if requested is not None:
        return requested
    return os.cpu_count() or 1


def run_table(table_id: str, out_path: str | None, jobs: int | None) -> int:
    rows, cfg, with_band = table_fixture(table_id)

    def one(spec: ProblemSpec):
        try:
            return solve(spec, cfg)
        except BvpFailure as bf:
            return bf

    with ThreadPoolExecutor(max_workers=min(_job_count(jobs), len(rows))) as pool:
        results = list(pool.map(one, rows))

    header = "a,b,psi_a,psi_b,n_final,newton_iters_total,res_bvp,wall_time_s"
    if with_band:
        header += ",u_min,tau_min,zero_band"
    lines = [header]
    failures: list[str] = []
    for spec, result in zip(rows, results):
        a = 0.0 if spec.kind is ProblemKind.DISK else spec.a
        psi_a = -spec.psi_b if spec.kind is ProblemKind.DISK else spec.psi_a
        tag = f"{spec.kind.value} a={a!r} b={spec.b!r} psi_a={psi_a!r} psi_b={spec.psi_b!r}"
        if isinstance(result, BvpFailure):
            failures.append(f"{tag}: {result.reason}")
            continue
        cells = [repr(float(a)), repr(float(spec.b)), repr(float(psi_a)),
                 repr(float(spec.psi_b)), str(result.n),
                 str(result.total_newton_iterations),
                 f"{result.res_bvp_final:.6e}", f"{result.wall_time:.6f}"]
        if with_band:
            metrics = flat_band_metrics(result, cfg.tol_bvp)
            cells += [repr(metrics.u_min), repr(metrics.tau_min),
                      repr(metrics.band_length)]
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        _write_text(out_path, text)
    if failures:
        print(f"capspec: {len(failures)} of {len(rows)} rows failed:",
              file=sys.stderr)
        for f in failures:
            print(f"  {f}", file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


class _Parser(argparse.ArgumentParser):
    """argparse with the argument-error exit code pinned to 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_solver_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--kappa", type=float, default=1.0,
                     help="capillary constant (default 1)")
    sub.add_argument("--tol-newton", type=float, dest="tol_newton")
    sub.add_argument("--tol-bvp", type=float, dest="tol_bvp")
    sub.add_argument("--n0", type=int)
    sub.add_argument("--max-iter-newton", type=int, dest="max_iter_newton")
    sub.add_argument("--max-iter-bvp", type=int, dest="max_iter_bvp")
    sub.add_argument("--out", help="write the run as .json or .csv")
    sub.add_argument("--plot", help="write an SVG plot of the curve")
    sub.add_argument("--quiet", action="store_true",
                     help="suppress the stdout summary / document")


def build_parser() -> _Parser:
    parser = _Parser(prog="capspec",
                     description="Capillary generating curves by spectral collocation.")
    subs = parser.add_subparsers(dest="command", required=True)

    p1 = subs.add_parser("p1", help="disk interface (sessile drop / tube)")
    p1.add_argument("--b", type=float, required=True, help="boundary radius")
    p1.add_argument("--psib", type=parse_angle, required=True,
                    help="inclination angle at r=b")
    _add_solver_flags(p1)

    for name, label in (("p2", "annular interface"), ("p3", "planar slab")):
        sub = subs.add_parser(name, help=label)
        sub.add_argument("--a", type=float, required=True, help="inner boundary")
        sub.add_argument("--b", type=float, required=True, help="outer boundary")
        sub.add_argument("--psia", type=parse_angle, required=True,
                         help="inclination angle at the inner boundary")
        sub.add_argument("--psib", type=parse_angle, required=True,
                         help="inclination angle at the outer boundary")
        _add_solver_flags(sub)

    table = subs.add_parser("table", help="run a built-in fixture table")
    table.add_argument("--id", required=True, choices=_TABLE_IDS)
    table.add_argument("--out", help="CSV output path (default: stdout)")
    table.add_argument("--jobs", type=int,
                       help="concurrent rows (default: available cores; "
                            "CAPSPEC_JOBS overrides)")
    return parser


def _config_from_args(args: argparse.Namespace) -> SolverConfig:
    kwargs = {}
    for name in ("tol_newton", "tol_bvp", "n0", "max_iter_newton",
                 "max_iter_bvp"):
        value = getattr(args, name)
        if value is not None:
            kwargs[name] = value
    return SolverConfig(**kwargs)


def _spec_from_args(args: argparse.Namespace) -> ProblemSpec:
    if args.command == "p1":
        return ProblemSpec.disk(args.b, args.psib, args.kappa)
    if args.command == "p2":
        return ProblemSpec.annulus(args.a, args.b, args.psia, args.psib,
                                   args.kappa)
    return ProblemSpec.planar(args.a, args.b, args.psia, args.psib, args.kappa)


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise SystemExit(f"capspec: cannot write {path}: {exc}")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)  # keep the diagnostic document strict JSON
    return obj


def run_single(args: argparse.Namespace, parser: _Parser) -> int:
    try:
        spec = _spec_from_args(args)
        config = _config_from_args(args)
    except ValueError as exc:
        parser.error(str(exc))
    if args.out is not None and not args.out.endswith((".json", ".csv")):
        parser.error(f"--out must end in .json or .csv, got {args.out!r}")
    try:
        report = solve(spec, config)
    except BvpFailure as bf:
        doc = {"error": bf.reason, "diagnostics": _jsonable(bf.diagnostics)}
        print(json.dumps(doc, indent=2), file=sys.stderr)
        return 2
    rec = build_record(spec, config, report)
    if args.out is not None:
        try:
            if args.out.endswith(".json"):
                export_json(rec, args.out)
            else:
                export_csv(rec, args.out)
        except OSError as exc:
            raise SystemExit(f"capspec: cannot write {args.out}: {exc}")
    if args.plot is not None:
        try:
            render_svg(rec, args.plot)
        except OSError as exc:
            raise SystemExit(f"capspec: cannot write {args.plot}: {exc}")
    if not args.quiet:
        if args.out is None:
            json.dump(record_payload(rec), sys.stdout, indent=2)
            sys.stdout.write("\n")
        else:
            print(f"{spec.kind.value}: n={report.n} "
                  f"iterations={report.total_newton_iterations} "
                  f"res_bvp={report.res_bvp_final:.3e} "
                  f"({report.wall_time:.3f} s) -> {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    raw = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(raw))
    if args.command == "table":
        return run_table(args.id, args.out, args.jobs)
    return run_single(args, parser)


if __name__ == "__main__":
    sys.exit(main())
