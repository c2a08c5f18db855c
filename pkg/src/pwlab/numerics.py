"""Real-line quadrature and comparability certificates.

Every integral in the package goes through :func:`integrate_line` or
:func:`integrate_pv`.  Tails beyond a cut radius are mapped to compact
intervals by the substitution u = 1/t, which turns O(1/t^2) decay into a
bounded integrand.  Singular points (log singularities, poles) are declared
by the caller and become panel boundaries of the adaptive scheme.

"Comparable" claims (f and g within constant factors of each other) are
rendered as :class:`ComparabilityCertificate` objects: the empirical
min/max of f/g over a grid, judged against a configured band.  A passing
certificate is evidence on that grid, never a proof.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge on some panel."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class PVDivergenceError(RuntimeError):
    """The symmetric principal-value pairing is not integrable."""


class InvalidGridError(ValueError):
    """A grid violates a precondition (empty, unordered, or g vanishes)."""


class InvalidInputError(ValueError):
    """An argument violates an operation precondition."""


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    max_subdivisions: int = 200
    tail_cut: float = 50.0

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise InvalidInputError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise InvalidInputError("max_subdivisions must be >= 1")
        if self.tail_cut < 1:
            raise InvalidInputError("tail_cut must be >= 1")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class Grid:
    """Ordered sample locations (real or complex) with a description."""

    points: np.ndarray
    description: str = ""

    def __post_init__(self):
        pts = np.atleast_1d(np.asarray(self.points))
        if pts.size == 0:
            raise InvalidGridError("grid must be nonempty")
        if np.isrealobj(pts):
            pts = pts.astype(float)
            if pts.size > 1 and not np.all(np.diff(pts) > 0):
                raise InvalidGridError("real grid points must be strictly increasing")
        else:
            pts = pts.astype(complex)
            if pts.size > 1 and not np.all(np.diff(pts.real) >= 0):
                raise InvalidGridError("grid points must be ordered by real part")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def linspace(cls, lo, hi, n, imag=0.0, description=""):
        xs = np.linspace(lo, hi, n)
        if imag != 0.0:
            return cls(xs + 1j * imag, description or f"[{lo},{hi}]x{n}+{imag}i")
        return cls(xs, description or f"[{lo},{hi}]x{n}")

    def __len__(self):
        return self.points.size


@dataclass(frozen=True)
class ComparabilityCertificate:
    """Empirical evidence for an 'f comparable with g' claim on a grid."""

    grid: Grid
    ratio_min: float
    ratio_max: float
    band: tuple[float, float]
    verdict: bool
    notes: str = ""

    def __post_init__(self):
        if self.ratio_min > self.ratio_max:
            raise InvalidInputError("ratio_min must not exceed ratio_max")

    @property
    def passed(self):
        return self.verdict

    def to_dict(self):
        return {
            "kind": "comparability_certificate",
            "grid_description": self.grid.description,
            "grid_size": int(len(self.grid)),
            "ratio_min": float(self.ratio_min),
            "ratio_max": float(self.ratio_max),
            "band": [float(self.band[0]), float(self.band[1])],
            "verdict": "pass" if self.verdict else "fail",
            "notes": self.notes,
        }


def thread_count():
    """Worker cap for grid sweeps, from PWLAB_THREADS (default 1)."""
    try:
        n = int(os.environ.get("PWLAB_THREADS", "1"))
    except ValueError:
        return 1
    return max(1, n)


def sweep(func, points):
    """Apply func over points, in order.  Parallel when PWLAB_THREADS > 1;
    results are always collected in input order for reproducibility."""
    pts = list(points)
    n = thread_count()
    if n <= 1 or len(pts) < 4:
        return [func(p) for p in pts]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, pts))


def _quad_panel(f, a, b, epsabs, epsrel, limit):
    out = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel,
                         limit=limit, full_output=1)
    value, err = out[0], out[1]
    if len(out) > 3:
        # quad issued a convergence warning; tolerate it only if the error
        # estimate is still within an order of the requested accuracy
        if not np.isfinite(value) or err > 10 * max(epsabs, epsrel * abs(value)):
            raise QuadratureError(
                f"quadrature failure on [{a:g}, {b:g}]: {out[3]}", (a, b))
    return value, err


def integrate_line(f, cfg=DEFAULT_CONFIG, singularities=(), breakpoints=()):
    """Integrate f over the whole real line.

    singularities and breakpoints both become panel boundaries; they are
    kept separate only for the caller's bookkeeping.  Tails beyond the cut
    are computed after the substitution u = 1/t.

    Returns (value, err_est).
    """
    pts = sorted({float(p) for p in tuple(singularities) + tuple(breakpoints)
                  if np.isfinite(p)})
    cut = cfg.tail_cut
    if pts:
        cut = max(cut, 1.5 * max(abs(p) for p in pts) + 1.0)
    edges = [-cut] + [p for p in pts if -cut < p < cut] + [cut]

    n_panels = len(edges) + 1
    epsabs = cfg.abs_tol / n_panels
    total = 0.0
    err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        v, e = _quad_panel(f, a, b, epsabs, cfg.rel_tol, cfg.max_subdivisions)
        total += v
        err += e
    for sign in (1.0, -1.0):
        v, e = _quad_panel(lambda u: f(sign / u) / u**2, 0.0, 1.0 / cut,
                           epsabs, cfg.rel_tol, cfg.max_subdivisions)
        total += v
        err += e
    return total, err


def integrate_pv(f, pole, cfg=DEFAULT_CONFIG):
    """Principal value of the integral of f over the line, pole declared.

    Computed through the symmetric pairing
    integral_0^inf (f(pole - t) + f(pole + t)) dt, whose integrand extends
    continuously through t = 0 whenever the principal value exists.
    """
    pole = float(pole)

    def paired(u):
        return f(pole + u) + f(pole - u)

    cut = max(cfg.tail_cut, 2 * abs(pole) + 2.0)
    try:
        v1, e1 = _quad_panel(paired, 0.0, 1.0, cfg.abs_tol / 3, cfg.rel_tol,
                             cfg.max_subdivisions)
        v2, e2 = _quad_panel(paired, 1.0, cut, cfg.abs_tol / 3, cfg.rel_tol,
                             cfg.max_subdivisions)
        v3, e3 = _quad_panel(lambda u: paired(1.0 / u) / u**2, 0.0, 1.0 / cut,
                             cfg.abs_tol / 3, cfg.rel_tol, cfg.max_subdivisions)
    except QuadratureError as exc:
        raise PVDivergenceError(f"principal value diverges near {pole}: {exc}")
    value = v1 + v2 + v3
    if not np.isfinite(value):
        raise PVDivergenceError(f"principal value diverges near {pole}")
    return value


def ray_type_estimate(log_f, rays, radii):
    """Exponential-type estimate from growth along rays.

    log_f maps complex z to log|f(z)| (may be -inf at zeros; such samples
    are skipped).  For each unit direction in rays, fits log|f(r e)| ~ s r
    by least squares over the radii ladder and returns the largest slope,
    clipped below at 0.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size < 2:
        raise InvalidInputError("need at least two radii for a growth fit")
    best = 0.0
    for e in rays:
        e = complex(e)
        e = e / abs(e)
        vals = np.array([log_f(r * e) for r in radii], dtype=float)
        ok = np.isfinite(vals)
        if ok.sum() < 2:
            continue
        slope = np.polyfit(radii[ok], vals[ok], 1)[0]
        best = max(best, float(slope))
    return best


def certify_comparable(f, g, grid, band, notes=""):
    """Certificate for f(x)/g(x) over the grid, judged against band.

    Raises InvalidGridError if g vanishes at any grid point.
    """
    lo, hi = float(band[0]), float(band[1])
    if not lo < hi:
        raise InvalidInputError("band must satisfy lo < hi")
    gv = np.array(sweep(g, grid.points), dtype=float)
    if np.any(gv == 0.0) or not np.all(np.isfinite(gv)):
        bad = grid.points[np.flatnonzero((gv == 0.0) | ~np.isfinite(gv))[0]]
        raise InvalidGridError(f"g vanishes or is not finite at grid point {bad}")
    fv = np.array(sweep(f, grid.points), dtype=float)
    ratios = fv / gv
    rmin, rmax = float(ratios.min()), float(ratios.max())
    verdict = (lo <= rmin) and (rmax <= hi)
    return ComparabilityCertificate(grid, rmin, rmax, (lo, hi), verdict, notes)
