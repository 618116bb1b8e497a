"""Parameter sweeps, numerical derivatives and kink detection.

A scan walks a coupling grid, computes the pair state and its obesity /
ellipsoid quantities at every point, then appends finite-difference
derivatives in a second pass over the already-sampled grid (no extra
model evaluations, so a published grid reproduces its own figure).

The first-order-transition detector is deliberately simple: the kink is
placed at the largest absolute second difference of the scanned curve
(equivalently the largest jump of its first derivative between adjacent
grid points), scored against the median absolute second difference.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .chains import (
    ChainSpec,
    NotBellDiagonalError,
    ed_bell_diagonal_params,
    ground_space,
    read_correlator_table,
)
from .ellipsoid import SingularMarginalError, gamma_b, steering_ellipsoid
from .filtering import FilterUndefinedError, apply_filter, ising_optimal_filter
from .ising import DEFAULT_QUAD_TOL, ising_pair_state
from .obesity import obesity, obesity_from_R
from .states import concurrence, correlation_matrix, load_state

__all__ = [
    "ScanRecord",
    "KinkReport",
    "finite_difference",
    "detect_kink",
    "ising_scan",
    "xxz_scan",
    "analyze_state",
    "write_scan_csv",
    "read_scan_csv",
    "ISING_CSV_COLUMNS",
    "XXZ_CSV_COLUMNS",
]

log = logging.getLogger(__name__)

FOUR_PI_THIRDS = 4.0 * math.pi / 3.0

ISING_CSV_COLUMNS = (
    "lambda",
    "omega",
    "d_omega",
    "gamma_b",
    "d_gamma_b",
    "volume",
    "d_volume",
    "omega_filtered",
    "d_omega_filtered",
    "filter_fn_direct",
    "filter_fn_paper",
    "filter_fn_theorem",
)
XXZ_CSV_COLUMNS = ISING_CSV_COLUMNS[:7] + ("c1", "c2", "c3")


@dataclass
class ScanRecord:
    """One grid point of a sweep.  Fields that do not apply (e.g. the
    filtered block of an unfiltered scan) hold NaN."""

    param: float
    omega: float = math.nan
    d_omega: float = math.nan
    gamma_b: float = math.nan
    d_gamma_b: float = math.nan
    volume: float = math.nan
    d_volume: float = math.nan
    omega_filtered: float = math.nan
    d_omega_filtered: float = math.nan
    filter_fn_direct: float = math.nan
    filter_fn_paper: float = math.nan
    filter_fn_theorem: float = math.nan
    c1: float = math.nan
    c2: float = math.nan
    c3: float = math.nan


@dataclass(frozen=True)
class KinkReport:
    """Estimated break point of a scanned curve's derivative."""

    param_hat: float
    score: float
    window: tuple


def finite_difference(xs, ys) -> np.ndarray:
    """Second-order derivative on a uniform grid: central differences in
    the interior, one-sided three-point stencils at the ends."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.size < 3:
        raise ValueError("need a 1-d grid with at least 3 points")
    h = np.diff(xs)
    if np.abs(h - h[0]).max() > 1e-9 * max(abs(h[0]), 1e-30):
        raise ValueError("grid is not uniform")
    h = h[0]
    d = np.empty_like(ys)
    d[1:-1] = (ys[2:] - ys[:-2]) / (2.0 * h)
    d[0] = (-3.0 * ys[0] + 4.0 * ys[1] - ys[2]) / (2.0 * h)
    d[-1] = (3.0 * ys[-1] - 4.0 * ys[-2] + ys[-3]) / (2.0 * h)
    return d


def detect_kink(xs, dys) -> KinkReport:
    """Locate the largest jump of ``dys`` between adjacent grid points.

    ``dys`` is typically a first-derivative curve, so the jump is a
    second difference of the underlying quantity.  Non-finite entries
    (failed grid points) are ignored.  The score is the winning jump
    divided by the median absolute jump; a smooth curve scores ~1.
    """
    xs = np.asarray(xs, dtype=float)
    dys = np.asarray(dys, dtype=float)
    if xs.size != dys.size or xs.size < 5:
        raise ValueError("need at least 5 points")
    jumps = np.abs(np.diff(dys))
    finite = np.isfinite(jumps)
    if not finite.any():
        raise ValueError("no finite derivative jumps")
    med = float(np.median(jumps[finite]))
    idx = int(np.nanargmax(np.where(finite, jumps, -np.inf)))
    best = float(jumps[idx])
    if best == 0.0:
        raise ValueError("degenerate input: all derivative values equal")
    score = best / med if med > 0 else math.inf
    return KinkReport(
        param_hat=0.5 * (xs[idx] + xs[idx + 1]),
        score=score,
        window=(float(xs[idx]), float(xs[idx + 1])),
    )


def _uniform_grid(lo: float, hi: float, step: float) -> np.ndarray:
    if not (lo < hi and step > 0):
        raise ValueError(f"bad grid spec: [{lo}, {hi}] step {step}")
    n = int(round((hi - lo) / step))
    if abs(lo + n * step - hi) > 1e-9 * max(1.0, abs(hi)):
        raise ValueError(f"step {step} does not tile [{lo}, {hi}]")
    return lo + step * np.arange(n + 1)


def _derivative_pass(grid, records, pairs):
    """Fill d_* fields; falls back to np.gradient on non-uniform grids."""
    uniform = np.abs(np.diff(grid) - (grid[1] - grid[0])).max() <= 1e-9
    for src, dst in pairs:
        ys = np.array([getattr(r, src) for r in records])
        ds = finite_difference(grid, ys) if uniform else np.gradient(ys, grid)
        for r, v in zip(records, ds):
            setattr(r, dst, float(v))


def ising_scan(
    lo: float,
    hi: float,
    step: float,
    k: int = 1,
    quad_tol: float = DEFAULT_QUAD_TOL,
    with_filter: bool = True,
    densify: bool = False,
) -> list[ScanRecord]:
    """Sweep the transverse-field Ising pair state over the coupling grid.

    Per point: obesity (direct determinant route), gamma_b, ellipsoid
    volume; with ``with_filter`` also the population-balancing filter,
    the directly computed filtered obesity and the candidate closed forms
    of the enhancement factor.  ``densify`` adds a 10x finer sub-grid on
    [0.9, 1.1] (derivatives then use a non-uniform stencil).

    Failures (quadrature budget, undefined filter at the product point)
    are logged and leave NaNs in the affected fields; the scan continues.
    """
    grid = _uniform_grid(lo, hi, step)
    if densify:
        fine = _uniform_grid(max(lo, 0.9), min(hi, 1.1), step / 10.0)
        grid = np.unique(np.concatenate([grid, fine]))
    records = []
    for lam in grid:
        rec = ScanRecord(param=float(lam))
        records.append(rec)
        try:
            pair = ising_pair_state(lam, k, quad_tol)
        except Exception as exc:
            log.warning("ising scan: point lambda=%g failed: %s", lam, exc)
            continue
        rec.omega = float(obesity(pair.rho))
        try:
            rec.gamma_b = gamma_b(pair.rho)
            rec.volume = float(steering_ellipsoid(pair.rho).volume)
        except SingularMarginalError:
            rec.gamma_b = math.inf
            rec.volume = 0.0  # point ellipsoid of the product state
        if not with_filter:
            continue
        root = float(pair.B + math.sqrt(max(pair.A_plus * pair.A_minus, 0.0)))
        if root > 1e-15:
            rec.filter_fn_paper = root**-0.5 / math.sqrt(2.0)
            rec.filter_fn_theorem = 1.0 / (2.0 * root)
        try:
            filt = ising_optimal_filter(pair.A_plus, pair.A_minus)
        except FilterUndefinedError as exc:
            log.warning("ising scan: filter undefined at lambda=%g: %s", lam, exc)
            continue
        rho_f, _ = apply_filter(pair.rho, filt)
        rec.omega_filtered = float(obesity(rho_f))
        rec.filter_fn_direct = (
            rec.omega_filtered / rec.omega if rec.omega > 0 else math.nan
        )
    _derivative_pass(
        grid,
        records,
        [
            ("omega", "d_omega"),
            ("gamma_b", "d_gamma_b"),
            ("volume", "d_volume"),
            ("omega_filtered", "d_omega_filtered"),
        ],
    )
    return records


def xxz_scan(
    lo: float,
    hi: float,
    step: float,
    n_sites: int = 12,
    source: str = "ed",
    table_file=None,
) -> list[ScanRecord]:
    """Sweep the XXZ anisotropy; pair states are Bell-diagonal so
    gamma_b = 1 exactly and V = (4 pi/3)|c1 c2 c3|.

    ``source='ed'`` diagonalizes the n-site periodic chain per grid
    point; ``source='table'`` reads nearest-neighbor correlators from a
    CSV table (columns model,N,param,k,xx,yy,zz,sz) instead.

    Correlation entries below the Bell-diagonality tolerance (1e-8) are
    snapped to zero before the fourth root, which would otherwise turn
    determinant-level noise into sqrt(eps)-sized obesity in the
    symmetry-broken phase.  Points where the iterative eigensolver
    under-resolves an exactly degenerate multiplet (skewing the mixture
    off Bell-diagonal form) are retried with the dense solver.
    """
    if source == "table":
        if table_file is None:
            raise ValueError("source='table' needs table_file")
        rows = [
            r
            for r in read_correlator_table(table_file)
            if r["model"] == "xxz" and r["k"] == 1 and lo - 1e-12 <= r["param"] <= hi + 1e-12
        ]
        if not rows:
            raise ValueError(f"no usable xxz k=1 rows in {table_file}")
        rows.sort(key=lambda r: r["param"])
        points = [(r["param"], (r["xx"], r["yy"], r["zz"])) for r in rows]
    elif source == "ed":
        points = [(float(d), None) for d in _uniform_grid(lo, hi, step)]
    else:
        raise ValueError(f"unknown source {source!r}")

    bell_tol = 1e-8
    records = []
    for delta, table_c in points:
        rec = ScanRecord(param=delta)
        records.append(rec)
        if table_c is None:
            spec = ChainSpec("xxz", n_sites, delta)
            try:
                try:
                    params = ed_bell_diagonal_params(ground_space(spec), 0, 1, bell_tol)
                except NotBellDiagonalError:
                    log.info("xxz scan: dense retry at Delta=%g", delta)
                    params = ed_bell_diagonal_params(
                        ground_space(spec, method="dense"), 0, 1, bell_tol
                    )
            except Exception as exc:
                log.warning("xxz scan: point Delta=%g failed: %s", delta, exc)
                continue
            c = (params.c1, params.c2, params.c3)
        else:
            c = table_c
        rec.c1, rec.c2, rec.c3 = (0.0 if abs(v) < bell_tol else float(v) for v in c)
        prod = rec.c1 * rec.c2 * rec.c3
        rec.omega = abs(prod) ** 0.25
        rec.gamma_b = 1.0
        rec.volume = FOUR_PI_THIRDS * abs(prod)
    grid = np.array([r.param for r in records])
    _derivative_pass(
        grid,
        records,
        [("omega", "d_omega"), ("gamma_b", "d_gamma_b"), ("volume", "d_volume")],
    )
    return records


def analyze_state(path) -> dict:
    """Full single-state report for a JSON state file."""
    rho = load_state(path)
    cm = correlation_matrix(rho)
    om = obesity_from_R(cm)
    conc = concurrence(rho)
    report = {
        "R": cm.R.tolist(),
        "bloch_a": cm.a.tolist(),
        "bloch_b": cm.b.tolist(),
        "omega": om,
        "concurrence": conc,
        "obesity_bounds_concurrence": bool(om >= conc - 1e-9),
    }
    try:
        ell = steering_ellipsoid(rho)
        report["ellipsoid"] = {
            "steered_party": "A",
            "center": ell.center.tolist(),
            "semiaxes": ell.semiaxes.tolist(),
            "orientation": ell.orientation.tolist(),
            "gamma_b": ell.gamma_b,
        }
        report["volume"] = ell.volume
    except SingularMarginalError as exc:
        report["ellipsoid"] = None
        report["volume"] = None
        report["ellipsoid_error"] = str(exc)
    return report


def _param_header(columns):
    return columns[0]


def write_scan_csv(records, path, columns=ISING_CSV_COLUMNS) -> None:
    """Emit records as CSV; floats are written with repr so the file
    re-parses to bit-identical values."""
    param_col = _param_header(columns)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for rec in records:
            row = []
            for col in columns:
                name = "param" if col == param_col else col
                row.append(repr(float(getattr(rec, name))))
            writer.writerow(row)


def read_scan_csv(path) -> list[ScanRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        cols = reader.fieldnames or ()
        known = {f.name for f in fields(ScanRecord)}
        records = []
        for raw in reader:
            rec = ScanRecord(param=float(raw[cols[0]]))
            for col in cols[1:]:
                if col in known:
                    setattr(rec, col, float(raw[col]))
            records.append(rec)
    return records


def scan_to_json(records) -> str:
    return json.dumps([rec.__dict__ for rec in records], indent=1)


def filtered_records(records):
    """Records whose core fields are all finite (helper for analyses)."""
    return [
        replace(r)
        for r in records
        if np.isfinite([r.omega, r.gamma_b, r.volume]).all()
    ]
