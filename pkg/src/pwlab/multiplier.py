"""Multiplier construction: from a weight to a Hermite-Biehler model.

The recipe: partition the line into cells of unit m-mass anchored at
x_0 = 0, place one zero per cell at the mass centroid pushed to depth -i,
and add an exponential drift e^{alpha z} with
alpha = integral_{-R}^{R} chi(t) m(t)/t dt.  The drift and the zero set
must share the same truncation radius R: the limit exists only as a
paired limit, and unpaired truncation destroys the conditional
convergence.

The resulting model satisfies |E_m(z)| comparable with e^{omega_m(z)}
above (and slightly below) the real axis; :func:`verify_multiplier_lemma`
renders that claim as a certificate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hbmodel import HBModel, log_abs_E, majorant_halfplane
from .numerics import (DEFAULT_CONFIG, Grid, InvalidGridError,
                       InvalidInputError, certify_comparable,
                       ray_type_estimate)
from .potential import Weight, eval_omega_closed


@dataclass(frozen=True)
class Partition:
    """Cell boundaries x_k with x_0 = 0 and unit m-mass per cell.

    x holds boundaries for k = -count .. count; cell k is
    [x_k, x_{k+1}] for k in index_range = [-count, count-1].
    """

    x: np.ndarray
    index_range: tuple[int, int]

    def __post_init__(self):
        xs = np.asarray(self.x, dtype=float)
        if not np.all(np.diff(xs) > 0):
            raise InvalidInputError("partition boundaries must be increasing")
        xs.setflags(write=False)
        object.__setattr__(self, "x", xs)

    def boundary(self, k):
        return float(self.x[k - self.index_range[0]])

    def cell(self, k):
        lo, hi = self.index_range
        if not lo <= k <= hi:
            raise InvalidInputError(f"cell index {k} outside [{lo}, {hi}]")
        return self.boundary(k), self.boundary(k + 1)

    def cells(self):
        lo, hi = self.index_range
        return [(k,) + self.cell(k) for k in range(lo, hi + 1)]


@dataclass(frozen=True)
class CentroidSequence:
    """Mass centroids xi_k, one per partition cell, strictly interior."""

    xi: np.ndarray
    index_range: tuple[int, int]

    def __post_init__(self):
        xs = np.asarray(self.xi, dtype=float)
        if not np.all(np.diff(xs) > 0):
            raise InvalidInputError("centroids must be increasing")
        xs.setflags(write=False)
        object.__setattr__(self, "xi", xs)

    def value(self, k):
        return float(self.xi[k - self.index_range[0]])


def build_partition(m: Weight, count: int) -> Partition:
    """Boundaries with x_0 = 0 and unit mass per cell, count cells per side.

    The cumulative mass of a piecewise-constant weight is piecewise linear,
    so the boundaries are exact inverses (linear interpolation on the knot
    table), well within the 1e-12 contract of the root-finding design.
    """
    count = int(count)
    if count < 1:
        raise InvalidInputError("count must be >= 1")
    m_lo, _ = m.bounds
    reach = (count + 1) / m_lo + max(abs(m.window[0]), abs(m.window[1])) + 1.0
    knots = np.array(sorted({-reach, reach, 0.0, *m.breakpoints()}))
    mass = m.cumulative_mass(knots)
    targets = np.arange(-count, count + 1, dtype=float)
    x = np.interp(targets, mass, knots)
    return Partition(x, (-count, count - 1))


def build_centroids(m: Weight, p: Partition) -> CentroidSequence:
    """xi_k = integral_{x_k}^{x_{k+1}} t m(t) dt (cells carry unit mass)."""
    xi = np.array([m.moment(a, b) for _, a, b in p.cells()])
    return CentroidSequence(xi, p.index_range)


def drift_coefficient(m: Weight, R: float) -> float:
    """integral_{-R}^{R} chi(t) m(t)/t dt, exact (log primitives per piece)."""
    if R <= 1.0:
        return 0.0
    total = 0.0
    for a, b, v in m.segments(1.0, R):
        total += v * (math.log(b) - math.log(a))
    for a, b, v in m.segments(-R, -1.0):
        total += v * (math.log(-b) - math.log(-a))
    return total


def build_multiplier(m: Weight, R: float) -> HBModel:
    """Hermite-Biehler model with zeros {xi_k - i : |xi_k| < R}.

    R must cover the weight window.  The constant is normalized to
    E_m(0) = 1 and the drift integral is truncated to the same R as the
    zero set.
    """
    if R < max(1.0, abs(m.window[0]), abs(m.window[1])):
        raise InvalidInputError("truncation radius must cover the weight window")
    _, m_hi = m.bounds
    count = int(math.ceil(R * m_hi)) + 2
    centroids = build_centroids(m, build_partition(m, count))
    xi = centroids.xi[np.abs(centroids.xi) < R]
    zeros = tuple(x - 1j for x in xi)
    return HBModel(zeros=zeros, constant=1.0, drift=drift_coefficient(m, R),
                   genus_factors=False, truncation_radius=float(R))


def verify_multiplier_lemma(model: HBModel, m: Weight, grid: Grid, band):
    """Certificate for |E_m(z)| / e^{omega_m(z)} over the grid.

    Also checks the reflection identity |E_m(conj z)| = |E_m(z - 2i)|,
    exact for zeros at depth -i; the maximum log deviation is recorded in
    the certificate notes.
    """
    pts = np.atleast_1d(np.asarray(grid.points, dtype=complex))
    R = model.truncation_radius
    if np.isfinite(R) and np.any(np.abs(pts.real) > R / 2):
        raise InvalidGridError("grid exceeds the reliable range |Re z| <= R/2")
    if np.any(pts.imag < -0.5):
        raise InvalidGridError("lemma range is Im z >= -0.5")

    sym_dev = float(np.max(np.abs(log_abs_E(model, np.conj(pts))
                                  - log_abs_E(model, pts - 2j))))
    ratio_log = log_abs_E(model, pts) - eval_omega_closed(m, pts)
    lookup = {complex(p): float(r) for p, r in zip(pts, np.exp(ratio_log))}
    return certify_comparable(lambda z: lookup[complex(z)], lambda z: 1.0,
                              grid, band,
                              notes=f"|E|/e^omega; reflection log-deviation {sym_dev:.2e}")


def halfplane_majorant_check(model: HBModel, m: Weight, grid: Grid, band):
    """Certificate for sqrt(k_z(z)) vs e^{omega_m(z)}/sqrt(Im z), Im z >= 2."""
    pts = np.atleast_1d(np.asarray(grid.points, dtype=complex))
    if np.any(pts.imag < 2.0):
        raise InvalidGridError("half-plane check needs Im z >= 2")

    def f(z):
        return float(majorant_halfplane(model, complex(z)))

    def g(z):
        z = complex(z)
        return float(np.exp(eval_omega_closed(m, z)) / np.sqrt(z.imag))

    return certify_comparable(f, g, grid, band,
                              notes="kernel-diagonal majorant vs e^omega/sqrt(y)")


def _poly_real(coeffs, z):
    if coeffs is None:
        return 0.0
    return float(np.real(np.polynomial.polynomial.polyval(z, coeffs)))


def pw_membership_diagnostic(f, m: Weight, g_coeffs, grid: Grid,
                             cfg=DEFAULT_CONFIG, type_tol=0.2):
    """Consistency report for membership of f in the weighted space.

    Computes (a) the truncated-line norm of f e^{-g} e^{-omega_m} over the
    grid interval, (b) a growth estimate of log(|f| e^{-Re g} e^{-omega_m})
    along rays avoiding the real axis, (c) a verdict: membership requires
    the subtracted type to vanish, so an estimate above type_tol means the
    function grows too fast for the space.
    """
    pts = np.real(np.atleast_1d(np.asarray(grid.points)))
    lo, hi = float(pts[0]), float(pts[-1])

    # dense trapezoid: the density is bounded and each sample costs a
    # full model evaluation, which defeats adaptive subdivision
    xs = np.linspace(lo, hi, 2001)
    f_abs = np.array([abs(f(complex(x))) for x in xs])
    g_vals = np.array([_poly_real(g_coeffs, x) for x in xs])
    with np.errstate(divide="ignore"):
        expo = np.where(f_abs > 0.0, np.log(np.maximum(f_abs, 1e-300)),
                        -np.inf) - g_vals - eval_omega_closed(m, xs)
    norm_sq = float(np.trapezoid(np.exp(2.0 * expo), xs))

    def log_reduced(z):
        fz = f(z)
        if fz == 0:
            return -np.inf
        return (float(np.log(abs(fz))) - _poly_real(g_coeffs, z)
                - eval_omega_closed(m, z))

    rays = [np.exp(1j * a) for a in
            (np.pi / 3, 2 * np.pi / 3, -np.pi / 3, -2 * np.pi / 3, np.pi / 2)]
    radii = np.linspace(2.0, max(8.0, (hi - lo) / 4.0), 12)
    type_est = ray_type_estimate(log_reduced, rays, radii)
    verdict = "consistent with membership" if type_est <= type_tol else "type too large"
    return {
        "norm": float(np.sqrt(norm_sq)),
        "type_estimate": float(type_est),
        "type_tolerance": float(type_tol),
        "verdict": verdict,
    }
