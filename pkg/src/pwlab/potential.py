"""The compensated log-potential of a line weight and its transforms.

A weight m is positive, piecewise constant on a window, and constant
outside it, with certified bounds m_lo <= m <= m_hi.  Its potential is

    omega_m(z) = integral log*|1 - z/t| m(t) dt,

where log*|1 - z/t| = log|1 - z/t| + chi(t) x/t and chi kills the
compensation term on [-1, 1].  The x/t term makes the integral absolutely
convergent for weights comparable with 1.

Two evaluation routes are provided: :func:`eval_omega` (adaptive
quadrature, the generic contract) and :func:`eval_omega_closed` (exact
antiderivatives, available because the weights are piecewise constant).
The second is used by grid-heavy pipelines; the two are cross-checked in
the test suite.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .numerics import (DEFAULT_CONFIG, ComparabilityCertificate, Grid,
                       InvalidGridError, InvalidInputError, certify_comparable,
                       integrate_line)


def chi(t):
    """Cutoff 1 - indicator([-1, 1]): 0 on [-1, 1], 1 outside."""
    return np.where(np.abs(t) <= 1.0, 0.0, 1.0)


def log_star_abs(z, t):
    """log*|1 - z/t| = log|1 - z/t| + chi(t) Re(z)/t."""
    return np.log(np.abs(1.0 - z / t)) + chi(t) * np.real(z) / t


@dataclass(frozen=True)
class Weight:
    """Positive weight: piecewise constant on [window], constant outside."""

    window: tuple[float, float]
    pieces: tuple[tuple[float, float, float], ...] = ()
    outside_value: float = 1.0

    def __post_init__(self):
        lo, hi = float(self.window[0]), float(self.window[1])
        if lo > hi:
            raise InvalidInputError("window must satisfy lo <= hi")
        if self.outside_value <= 0:
            raise InvalidInputError("outside value must be positive")
        pieces = tuple((float(a), float(b), float(v)) for a, b, v in self.pieces)
        cursor = lo
        for a, b, v in pieces:
            if v <= 0:
                raise InvalidInputError("piece values must be positive")
            if a >= b:
                raise InvalidInputError("piece endpoints must be increasing")
            if abs(a - cursor) > 1e-9:
                raise InvalidInputError("pieces must tile the window without gaps")
            cursor = b
        if pieces and abs(cursor - hi) > 1e-9:
            raise InvalidInputError("pieces must cover the window")
        if not pieces and lo != hi:
            raise InvalidInputError("nonempty window requires pieces")
        object.__setattr__(self, "window", (lo, hi))
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "outside_value", float(self.outside_value))
        # lookup tables: piece edges for O(log n) evaluation and the knot
        # values of the (piecewise-linear) cumulative mass
        if pieces:
            edges = np.array([p[0] for p in pieces] + [hi])
            values = np.array([p[2] for p in pieces])
            mass_tab = np.concatenate(
                ([0.0], np.cumsum(values * np.diff(edges))))
        else:
            edges = np.array([lo, hi])
            values = np.array([])
            mass_tab = np.array([0.0, 0.0])
        object.__setattr__(self, "_edges", edges)
        object.__setattr__(self, "_values", values)
        object.__setattr__(self, "_mass_tab", mass_tab)

    @classmethod
    def constant(cls, value=1.0):
        return cls(window=(0.0, 0.0), pieces=(), outside_value=value)

    @classmethod
    def from_pieces(cls, pieces, outside_value=1.0):
        pieces = tuple(pieces)
        if not pieces:
            return cls.constant(outside_value)
        return cls((pieces[0][0], pieces[-1][1]), pieces, outside_value)

    @property
    def bounds(self):
        values = [v for _, _, v in self.pieces] + [self.outside_value]
        return (min(values), max(values))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, self.outside_value)
        if self.pieces:
            idx = np.searchsorted(self._edges, x, side="right") - 1
            inside = (idx >= 0) & (idx < self._values.size)
            out = np.where(inside,
                           self._values[np.clip(idx, 0, self._values.size - 1)],
                           out)
        return out if out.shape else float(out)

    def breakpoints(self):
        return sorted({self.window[0], self.window[1],
                       *self._edges.tolist()})

    def segments(self, lo, hi):
        """(a, b, value) triples tiling [lo, hi], outside parts included."""
        edges = [lo] + [p for p in self.breakpoints() if lo < p < hi] + [hi]
        segs = []
        for a, b in zip(edges[:-1], edges[1:]):
            if b > a:
                segs.append((a, b, float(self((a + b) / 2.0))))
        return segs

    def _cumulative_from_left_edge(self, x):
        lo, hi = self._edges[0], self._edges[-1]
        out = np.interp(x, self._edges, self._mass_tab)
        out = np.where(x < lo, (x - lo) * self.outside_value, out)
        out = np.where(x > hi,
                       self._mass_tab[-1] + (x - hi) * self.outside_value, out)
        return out

    def cumulative_mass(self, x):
        """integral_0^x m(t) dt, vectorized, exact.

        The cumulative mass is piecewise linear with knots at the
        breakpoints, so table interpolation reproduces it exactly.
        """
        x = np.asarray(x, dtype=float)
        out = (self._cumulative_from_left_edge(x)
               - self._cumulative_from_left_edge(np.asarray(0.0)))
        return out if out.shape else float(out)

    def moment(self, a, b):
        """integral_a^b t m(t) dt, exact."""
        if b <= a:
            return 0.0
        return sum(v * (y**2 - x**2) / 2.0 for x, y, v in self.segments(a, b))

    def to_dict(self):
        d = {
            "window": [self.window[0], self.window[1]],
            "pieces": [{"from": a, "to": b, "value": v} for a, b, v in self.pieces],
        }
        if self.outside_value != 1.0:
            d["outside_value"] = self.outside_value
        return d

    @classmethod
    def from_dict(cls, d):
        pieces = tuple((p["from"], p["to"], p["value"]) for p in d.get("pieces", []))
        window = tuple(d["window"])
        return cls(window, pieces, d.get("outside_value", 1.0))


def _log_dist_primitive(t, z):
    """Antiderivative of s -> log|s - z| evaluated at t: Re[(t-z)(log(t-z)-1)].

    Valid for complex z including real z (principal branch); the value at
    t == z is 0 by continuity.
    """
    s = np.asarray(t, dtype=complex) - z
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.real(s * (np.log(s) - 1.0))
    return np.where(np.abs(s) == 0.0, 0.0, out)


def _chi_over_t_primitive(t):
    """Antiderivative of chi(t)/t: log|t| outside [-1,1], 0 inside."""
    at = np.abs(np.asarray(t, dtype=float))
    with np.errstate(divide="ignore"):
        return np.where(at >= 1.0, np.log(np.maximum(at, 1.0)), 0.0)


def omega_signed(pieces, outside_value, z):
    """Closed-form potential of a piecewise-constant density, vectorized.

    pieces is a list of (a, b, value) with arbitrary (possibly negative or
    zero) values, the density being outside_value beyond them; the Weight
    positivity constraint is not imposed here.  This low-level entry point
    serves the sqrt(sigma) representation, whose density -Hf'/pi is signed.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    zs = np.atleast_1d(z)
    x, y = zs.real, zs.imag
    out = outside_value * np.pi * np.abs(y)
    for a, b, v in pieces:
        d = v - outside_value
        if d == 0.0:
            continue
        log_dist = _log_dist_primitive(b, zs) - _log_dist_primitive(a, zs)
        log_abs = _log_dist_primitive(b, 0.0) - _log_dist_primitive(a, 0.0)
        comp = _chi_over_t_primitive(b) - _chi_over_t_primitive(a)
        out = out + d * (log_dist - log_abs + x * comp)
    return float(out[0]) if scalar else out


def eval_omega_closed(m: Weight, z):
    """Exact omega_m(z) for piecewise-constant weights, vectorized in z."""
    return omega_signed(m.pieces, m.outside_value, z)


def eval_omega(m: Weight, z, cfg=DEFAULT_CONFIG):
    """omega_m(z) by adaptive quadrature.

    The integrable singularities at t = 0 and (for real z) t = Re z are
    declared to the quadrature as panel boundaries.
    """
    z = complex(z)
    x, y = z.real, z.imag

    def integrand(t):
        return float(m(t)) * (np.log(abs(1.0 - z / t)) + (0.0 if abs(t) <= 1 else x / t))

    singular = [0.0]
    if y == 0.0 and x != 0.0:
        singular.append(x)
    breaks = m.breakpoints() + [-1.0, 1.0, x]
    value, _ = integrate_line(integrand, cfg, singularities=singular, breakpoints=breaks)
    return value


def eval_poisson(m: Weight, z, cfg=DEFAULT_CONFIG):
    """Poisson transform (1/pi) integral y/((x-t)^2+y^2) m(t) dt.

    Exact for piecewise-constant weights (arctangent primitive); requires
    Im z != 0.
    """
    z = complex(z)
    x, y = z.real, z.imag
    if y == 0.0:
        raise InvalidInputError("Poisson transform needs Im z != 0")
    total = m.outside_value * np.sign(y) * np.pi
    for a, b, v in m.pieces:
        d = v - m.outside_value
        if d != 0.0:
            total += d * (np.arctan((b - x) / y) - np.arctan((a - x) / y))
    return total / np.pi


def verify_poisson_derivative(m: Weight, grid: Grid, h=1e-3,
                              cfg=DEFAULT_CONFIG, band=(0.999, 1.001)):
    """Certify the identity d/dy omega_m = pi * P_m by central differences.

    Grid points must keep |Im z| > 2h so the difference quotient stays on
    one side of the real axis.
    """
    pts = np.atleast_1d(np.asarray(grid.points, dtype=complex))
    if np.any(np.abs(pts.imag) <= 2 * h):
        raise InvalidGridError("grid points must satisfy |Im z| > 2h")

    def fd(z):
        return (eval_omega(m, z + 1j * h, cfg) - eval_omega(m, z - 1j * h, cfg)) / (2 * h)

    def rhs(z):
        return np.pi * eval_poisson(m, z, cfg)

    return certify_comparable(fd, rhs, grid, band,
                              notes=f"central difference h={h:g} vs pi*Poisson")


def eval_conjugate_omega(m: Weight, z, cfg=DEFAULT_CONFIG):
    """Harmonic conjugate of omega_m on the upper half-plane.

    Kernel (x-t)/((x-t)^2+y^2) + chi(t)/t against m; the additive constant
    is fixed by the normalization conj(i) = 0.
    """
    z = complex(z)
    if z.imag <= 0:
        raise InvalidInputError("conjugate potential needs Im z > 0")

    def raw(w):
        x, y = w.real, w.imag

        def integrand(t):
            k = (x - t) / ((x - t) ** 2 + y**2)
            if abs(t) > 1:
                k += 1.0 / t
            return float(m(t)) * k

        breaks = m.breakpoints() + [-1.0, 1.0, 0.0, x]
        value, _ = integrate_line(integrand, cfg, breakpoints=breaks)
        return value

    return raw(z) - raw(1j)


def _gauss_panel(a, b, n):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    mid, half = (a + b) / 2.0, (b - a) / 2.0
    return mid + half * nodes, half * weights


def verify_laplacian(m: Weight, psi, lap_psi, box, cfg=DEFAULT_CONFIG, order=48):
    """Distributional Laplacian check: Delta omega_m = 2 pi m(x) dx d delta_0(y).

    psi and lap_psi are callables (x, y) -> value, supported in box =
    (x0, x1, y0, y1).  Returns (lhs, rhs, rel_err) where
    lhs = integral omega_m * lap_psi dA and rhs = 2 pi integral psi(x,0) m dx.
    The box is split along y = 0 because omega has a corner there.
    """
    x0, x1, y0, y1 = map(float, box)
    y_splits = sorted({y0, y1} | ({0.0} if y0 < 0.0 < y1 else set()))
    gx, wx = _gauss_panel(x0, x1, order)
    lhs = 0.0
    for ya, yb in zip(y_splits[:-1], y_splits[1:]):
        gy, wy = _gauss_panel(ya, yb, order)
        zgrid = gx[:, None] + 1j * gy[None, :]
        om = eval_omega_closed(m, zgrid.ravel()).reshape(zgrid.shape)
        lap = np.array([[lap_psi(xv, yv) for yv in gy] for xv in gx])
        lhs += float(np.einsum("i,j,ij->", wx, wy, om * lap))

    def line_integrand(t):
        return 2 * np.pi * psi(t, 0.0) * float(m(t))

    rhs, _ = integrate.quad(line_integrand, x0, x1, limit=cfg.max_subdivisions,
                            points=[p for p in m.breakpoints() if x0 < p < x1] or None)
    rel_err = abs(lhs - rhs) / max(abs(rhs), 1e-12)
    return lhs, rhs, rel_err
