"""Command-line front-end: fitting, sampling, refinement, and approximation.

Subcommands
-----------
fit      build a spline from CSV Hermite data (fixed-beta or shape-preserving)
sample   tabulate a stored spline to CSV, or draw it (curve + polygons) as SVG
refine   apply corner-cutting steps and report the coefficient-gap decay
approx   run the quasi-interpolant or Lagrange interpolant on a function

Splines persist as JSON-shaped documents with version tag "gqs-1" and fields
version, knots, betas, coeffs, meta.  Numbers are written with 17 significant
digits so values round-trip exactly and re-serialization is byte-identical.

Exit codes: 0 success, 2 validation error, 3 shape-precondition error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .basis import (
    GqsSpline,
    control_polygon,
    evaluate,
    hermite_to_spline,
    local_control_polygon,
    sample_dyadic,
)
from .errors import GqsError, GqsShapeError, GqsValidationError
from .geometry import build_space
from .operators import (
    empirical_order,
    lagrange_interpolant,
    lagrange_nodes,
    quasi_interpolant,
)
from .refine import POLYGON_LEVEL_CAP, corner_cut, max_coefficient_gap
from .shape import diagnose, fit_convex, fit_monotone, fit_monotone_convex

DOCUMENT_VERSION = "gqs-1"

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SHAPE = 3
EXIT_IO = 4


# ---------------------------------------------------------------------------
# Spline documents

@dataclass
class SplineDocument:
    """On-disk form of a spline: knots, betas, coefficients, and metadata."""

    knots: list
    betas: list
    coeffs: list
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_spline(cls, spline, meta=None):
        return cls(
            knots=[float(v) for v in spline.space.knots],
            betas=[float(v) for v in spline.space.betas],
            coeffs=[float(v) for v in spline.coeffs],
            meta=dict(meta or {}),
        )

    def to_spline(self):
        """Rebuild the spline, re-validating all geometry invariants."""
        space = build_space(self.knots, self.betas)
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.size != space.dimension:
            raise GqsValidationError(
                f"document needs {space.dimension} coefficients, has {coeffs.size}"
            )
        return GqsSpline(space, coeffs)


def _fmt(value):
    return format(float(value), ".17g")


def dumps_document(doc):
    """Canonical serialization: fixed key order, one array per line."""
    lines = ["{"]
    lines.append(f'  "version": "{DOCUMENT_VERSION}",')
    for name in ("knots", "betas", "coeffs"):
        body = ", ".join(_fmt(v) for v in getattr(doc, name))
        lines.append(f'  "{name}": [{body}],')
    meta = json.dumps(doc.meta, sort_keys=True, separators=(", ", ": "))
    lines.append(f'  "meta": {meta}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads_document(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GqsValidationError(f"document is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise GqsValidationError("document must be a JSON object")
    if raw.get("version") != DOCUMENT_VERSION:
        raise GqsValidationError(
            f"unsupported document version {raw.get('version')!r}; expected "
            f"{DOCUMENT_VERSION!r}"
        )
    for name in ("knots", "betas", "coeffs"):
        if not isinstance(raw.get(name), list):
            raise GqsValidationError(f"document field {name!r} must be an array")
    meta = raw.get("meta", {})
    if not isinstance(meta, dict):
        raise GqsValidationError("document field 'meta' must be an object")
    doc = SplineDocument(raw["knots"], raw["betas"], raw["coeffs"], meta)
    doc.to_spline()  # full geometry re-validation
    return doc


def write_document(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_document(doc))


def read_document(path):
    with open(path, "r", encoding="utf-8") as fh:
        return loads_document(fh.read())


# ---------------------------------------------------------------------------
# CSV ingestion

def _read_csv_columns(path, columns):
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError:
        raise
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise GqsValidationError(f"{path}: empty CSV file") from None
        names = [c.strip().lower() for c in header]
        if names != list(columns):
            raise GqsValidationError(
                f"{path}: expected header {','.join(columns)!r}, got {','.join(names)!r}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(columns):
                raise GqsValidationError(
                    f"{path}:{lineno}: expected {len(columns)} fields, got {len(row)}"
                )
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                raise GqsValidationError(
                    f"{path}:{lineno}: non-numeric value in {row!r}"
                ) from None
    if not rows:
        raise GqsValidationError(f"{path}: no data rows")
    return np.asarray(rows, dtype=float).T


def read_hermite_csv(path):
    """Read `x,y,p` rows; x must be strictly increasing."""
    x, y, p = _read_csv_columns(path, ("x", "y", "p"))
    if np.any(np.diff(x) <= 0):
        raise GqsValidationError(f"{path}: x column must be strictly increasing")
    return x, y, p


class TableFunction:
    """Function defined by a dense `x,y` table, nearest-value lookup.

    The lookup tolerance is three quarters of the median table spacing, so
    any table dense enough to cover the requested nodes resolves them; a
    nearest sample farther than that raises.
    """

    def __init__(self, x, y):
        order = np.argsort(x)
        self.x = np.asarray(x, dtype=float)[order]
        self.y = np.asarray(y, dtype=float)[order]
        if self.x.size < 2:
            raise GqsValidationError("function table needs at least two rows")
        spacing = np.diff(self.x)
        if np.any(spacing <= 0):
            raise GqsValidationError("function table has duplicate x values")
        self.tolerance = 0.75 * float(np.median(spacing))

    def __call__(self, pts):
        arr = np.asarray(pts, dtype=float)
        scalar = arr.ndim == 0
        pts1 = np.atleast_1d(arr)
        pos = np.clip(np.searchsorted(self.x, pts1), 1, self.x.size - 1)
        left = self.x[pos - 1]
        right = self.x[pos]
        nearest = np.where(pts1 - left <= right - pts1, pos - 1, pos)
        gap = np.abs(self.x[nearest] - pts1)
        if np.any(gap > self.tolerance):
            worst = int(np.argmax(gap))
            raise GqsValidationError(
                f"table has no sample within {self.tolerance:.3g} of required "
                f"node x = {pts1[worst]:.10g}"
            )
        vals = self.y[nearest]
        return float(vals[0]) if scalar else vals


def read_table_csv(path):
    x, y = _read_csv_columns(path, ("x", "y"))
    return TableFunction(x, y)


# ---------------------------------------------------------------------------
# SVG rendering

def render_svg(spline, resolution=8, width=800, height=600):
    """Static picture: the curve, the global polygon, and the local polygons."""
    x, f, _ = sample_dyadic(spline, resolution)
    scp = control_polygon(spline)
    lcps = [local_control_polygon(spline, i) for i in range(1, spline.space.n + 1)]

    ys = np.concatenate([f, scp.ordinates])
    x_lo, x_hi = float(x.min()), float(x.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    x_span = x_hi - x_lo or 1.0
    y_span = y_hi - y_lo or 1.0
    pad = 40.0

    def to_px(xv, yv):
        px = pad + (xv - x_lo) / x_span * (width - 2 * pad)
        py = height - pad - (yv - y_lo) / y_span * (height - 2 * pad)
        return px, py

    def polyline(xs, ys_, style):
        pts = " ".join("%.3f,%.3f" % to_px(a, b) for a, b in zip(xs, ys_))
        return f'<polyline fill="none" {style} points="{pts}"/>'

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for lcp in lcps:
        parts.append(
            polyline(lcp.abscissae, lcp.ordinates, 'stroke="#2ca02c" stroke-width="1"')
        )
    parts.append(
        polyline(
            scp.abscissae, scp.ordinates,
            'stroke="#d62728" stroke-width="1.5" stroke-dasharray="6 4"',
        )
    )
    parts.append(polyline(x, f, 'stroke="#1f77b4" stroke-width="2"'))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# Subcommands

def _parse_betas(text, n_intervals):
    parts = [p for p in text.split(",") if p.strip()]
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise GqsValidationError(f"cannot parse beta list {text!r}") from None
    if len(values) == 1:
        values = values * n_intervals
    return values


def _print_intervals(space, thetas):
    for i in range(space.n):
        tag = "quadratic" if thetas[i] == 0.25 else "generalized"
        print(
            f"interval {i + 1:3d}: theta={thetas[i]:.6f}  "
            f"beta={space.betas[i]:.6f}  ({tag})"
        )


def cmd_fit(args):
    x, y, p = read_hermite_csv(args.input)
    mode = args.mode
    if mode == "hermite":
        betas = _parse_betas(args.beta, x.size - 1)
        space = build_space(x, betas)
        spline = hermite_to_spline(space, y, p)
        thetas = space.theta
    else:
        if args.beta is not None and mode != "hermite":
            raise GqsValidationError(
                f"'fit {mode}' chooses beta automatically; drop --beta"
            )
        if mode == "monotone":
            sense = args.sense or "increasing"
            if sense not in ("increasing", "decreasing"):
                raise GqsValidationError(
                    "fit monotone needs --sense increasing|decreasing"
                )
            spline, thetas = fit_monotone(x, y, p, sense=sense)
        elif mode == "convex":
            sense = args.sense or "convex"
            if sense not in ("convex", "concave"):
                raise GqsValidationError("fit convex needs --sense convex|concave")
            spline, thetas = fit_convex(x, y, p, sense=sense)
        else:
            spline, thetas = fit_monotone_convex(x, y, p)

    report = diagnose(spline)
    _print_intervals(spline.space, np.asarray(thetas, dtype=float))
    print(f"shape: {report.summary()}")
    meta = {
        "command": f"fit {mode}",
        "shape": {
            "increasing": report.monotone_increasing,
            "decreasing": report.monotone_decreasing,
            "convex": report.convex,
            "concave": report.concave,
        },
    }
    write_document(args.out, SplineDocument.from_spline(spline, meta))
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_sample(args):
    spline = read_document(args.input).to_spline()
    x, f, d = sample_dyadic(spline, args.resolution)
    if args.format == "csv":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "value", "derivative"])
            for row in zip(x, f, d):
                writer.writerow([_fmt(v) for v in row])
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(render_svg(spline, resolution=args.resolution))
    print(f"wrote {args.out} ({x.size} samples)")
    return EXIT_OK


def cmd_refine(args):
    if args.levels > POLYGON_LEVEL_CAP:
        raise GqsValidationError(
            f"--levels {args.levels} exceeds the cap of {POLYGON_LEVEL_CAP}"
        )
    doc = read_document(args.input)
    spline = doc.to_spline()
    gaps = [max_coefficient_gap(spline)]
    current = spline
    for _ in range(args.levels):
        current = corner_cut(current)
        gaps.append(max_coefficient_gap(current))
    print("level  max-gap")
    for j, g in enumerate(gaps):
        print(f"{j:5d}  {g:.12g}")
    bound_ok = all(
        gaps[j] <= gaps[0] / 2.0**j + 1e-12 for j in range(len(gaps))
    )
    print(f"halving bound {'holds' if bound_ok else 'FAILS'}: "
          f"gap[m] <= gap[0] / 2^m + 1e-12")
    meta = dict(doc.meta)
    meta["command"] = f"refine x{args.levels}"
    write_document(args.out, SplineDocument.from_spline(current, meta))
    print(f"wrote {args.out}")
    return EXIT_OK


_BUILTINS = {
    "sin": np.sin,
    "exp": np.exp,
    "runge": lambda x: 1.0 / (1.0 + 25.0 * x * x),
}


def _resolve_function(args, domain):
    if args.builtin is not None:
        if args.builtin == "abs-shifted":
            center = 0.5 * (domain[0] + domain[1])
            return lambda x: np.abs(x - center)
        return _BUILTINS[args.builtin]
    if args.table is None:
        raise GqsValidationError("approx needs --builtin or --table")
    return read_table_csv(args.table)


def cmd_approx(args):
    if args.knots is not None:
        try:
            knots = np.asarray(
                [float(v) for v in args.knots.split(",") if v.strip()], dtype=float
            )
        except ValueError:
            raise GqsValidationError(f"cannot parse knot list {args.knots!r}") from None
    else:
        try:
            a, b = (float(v) for v in args.domain.split(":"))
        except ValueError:
            raise GqsValidationError(
                f"cannot parse domain {args.domain!r}; expected a:b"
            ) from None
        knots = np.linspace(a, b, args.intervals + 1)
    betas = _parse_betas(args.beta or "-1", knots.size - 1)
    space = build_space(knots, betas)
    f = _resolve_function(args, (space.a, space.b))

    if args.operator == "q":
        spline = quasi_interpolant(space, f)
    else:
        spline = lagrange_interpolant(space, f)

    x, vals, _ = sample_dyadic(spline, args.resolution)
    target = np.atleast_1d(np.asarray(f(x), dtype=float))
    max_err = float(np.abs(target - vals).max())
    print(f"max |f - spline| on the level-{args.resolution} grid: {max_err:.6g}")
    if args.operator == "lagrange":
        nodes = lagrange_nodes(space)
        node_vals, _ = evaluate(spline, nodes, tol=args.tol)
        node_err = float(
            np.abs(np.atleast_1d(np.asarray(f(nodes), dtype=float)) - node_vals).max()
        )
        print(f"max node residual: {node_err:.6g}")

    if args.order_study:
        study = empirical_order(
            f,
            operator="quasi" if args.operator == "q" else "lagrange",
            domain=(space.a, space.b),
            beta=float(np.max(space.betas)),
        )
        for h, e in zip(study.step_sizes, study.errors):
            print(f"h={h:.6g}  error={e:.6g}")
        print(f"fitted order: {study.slope:.4f}")

    meta = {"command": f"approx {args.operator}"}
    if args.builtin:
        meta["builtin"] = args.builtin
    write_document(args.out, SplineDocument.from_spline(spline, meta))
    print(f"wrote {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing / entry point

def build_parser():
    parser = argparse.ArgumentParser(
        prog="gqspline",
        description="Generalized C1 quadratic splines: fit, sample, refine, approximate.",
    )
    parser.add_argument("--version", action="version", version=f"gqspline {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="build a spline from x,y,p CSV data")
    p_fit.add_argument(
        "mode", choices=["hermite", "monotone", "convex", "monotone-convex"]
    )
    p_fit.add_argument("input", help="CSV file with header x,y,p")
    p_fit.add_argument("--beta", default=None,
                       help="beta value or comma list (fit hermite only); "
                            "use --beta=-0.5 syntax for negative values")
    p_fit.add_argument("--sense", default=None,
                       choices=["increasing", "decreasing", "convex", "concave"])
    p_fit.add_argument("--out", required=True)
    p_fit.set_defaults(handler=cmd_fit)

    p_sample = sub.add_parser("sample", help="tabulate or draw a stored spline")
    p_sample.add_argument("input", help="spline document")
    p_sample.add_argument("--resolution", type=int, default=8,
                          help="dyadic depth per interval (default 8)")
    p_sample.add_argument("--format", choices=["csv", "svg"], default="csv")
    p_sample.add_argument("--out", required=True)
    p_sample.set_defaults(handler=cmd_sample)

    p_refine = sub.add_parser("refine", help="apply corner-cutting steps")
    p_refine.add_argument("input", help="spline document")
    p_refine.add_argument("--levels", type=int, default=1)
    p_refine.add_argument("--out", required=True)
    p_refine.set_defaults(handler=cmd_refine)

    p_approx = sub.add_parser("approx", help="approximate a function by a spline")
    p_approx.add_argument("operator", choices=["q", "lagrange"])
    p_approx.add_argument("--builtin",
                          choices=["sin", "exp", "runge", "abs-shifted"])
    p_approx.add_argument("--table", help="CSV file with header x,y")
    p_approx.add_argument("--knots", help="comma-separated knot list")
    p_approx.add_argument("--domain", default="0:1", help="a:b for uniform knots")
    p_approx.add_argument("--intervals", type=int, default=8,
                          help="uniform interval count when --knots is absent")
    p_approx.add_argument("--beta", default=None,
                          help="beta value or comma list (default -1)")
    p_approx.add_argument("--resolution", type=int, default=8)
    p_approx.add_argument("--tol", type=float, default=1e-10,
                          help="evaluation tolerance for residual checks")
    p_approx.add_argument("--order-study", action="store_true")
    p_approx.add_argument("--out", required=True)
    p_approx.set_defaults(handler=cmd_approx)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except GqsShapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except GqsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
