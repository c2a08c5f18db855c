"""Finite-truncation Hermite-Biehler models and their derived quantities.

A model is a finite zero list in the open lower half-plane together with a
constant, a real drift coefficient, and optional genus-1 convergence
factors:

    E(z) = C e^{drift z} prod (1 - z/lambda) [e^{z Re(1/lambda)}].

Everything downstream is computed from this data: the phase phi with
E(x) = |E(x)| e^{-i phi(x)}, its derivative (a sum of Poisson kernels of
the zeros), the reproducing kernel, and the majorant M(x) =
sqrt(phi'(x)/pi) |E(x)|.  Products are accumulated in log space since
truncations with 10^4 factors overflow linear arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import Grid, InvalidInputError

_ZERO_CHUNK = 4096


@dataclass(frozen=True)
class HBModel:
    """Zero list in the open lower half-plane plus constant and drift."""

    zeros: tuple[complex, ...]
    constant: complex = 1.0 + 0.0j
    drift: float = 0.0
    genus_factors: bool = False
    truncation_radius: float = np.inf

    def __post_init__(self):
        zeros = tuple(complex(w) for w in self.zeros)
        if any(w.imag >= 0 for w in zeros):
            raise InvalidInputError("all zeros must lie in the open lower half-plane")
        if self.constant == 0:
            raise InvalidInputError("constant must be nonzero")
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "constant", complex(self.constant))
        object.__setattr__(self, "drift", float(self.drift))

    @property
    def zero_array(self):
        return np.asarray(self.zeros, dtype=complex)

    def strip_zeros(self, delta):
        """Zeros in the strip -delta < Im z < 0, sorted by real part."""
        lam = self.zero_array
        sel = lam[lam.imag > -delta]
        return sel[np.argsort(sel.real, kind="stable")]

    def to_dict(self):
        return {
            "constant_re": self.constant.real,
            "constant_im": self.constant.imag,
            "drift": self.drift,
            "genus_factors": bool(self.genus_factors),
            "zeros": [[w.real, w.imag] for w in self.zeros],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            zeros=tuple(complex(re, im) for re, im in d["zeros"]),
            constant=complex(d.get("constant_re", 1.0), d.get("constant_im", 0.0)),
            drift=d.get("drift", 0.0),
            genus_factors=d.get("genus_factors", False),
        )


def log_E(model: HBModel, z):
    """Complex logarithm of E(z) (principal branch per factor), vectorized.

    The imaginary part is a sum of per-factor principal arguments, not a
    continuous phase branch; use :func:`phase` for that.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    zs = np.atleast_1d(z)
    out = np.full(zs.shape, np.log(model.constant), dtype=complex)
    out += model.drift * zs
    lam = model.zero_array
    for start in range(0, lam.size, _ZERO_CHUNK):
        chunk = lam[start:start + _ZERO_CHUNK]
        ratio = zs[..., None] / chunk
        terms = np.log1p(-ratio)
        if model.genus_factors:
            terms = terms + zs[..., None] * np.real(1.0 / chunk)
        out += terms.sum(axis=-1)
    return out[0] if scalar else out


def log_abs_E(model: HBModel, z):
    """log|E(z)|, safe against overflow of the product."""
    return np.real(log_E(model, z))


def eval_E(model: HBModel, z):
    """E(z); use log_abs_E instead when the modulus may overflow."""
    return np.exp(log_E(model, z))


def phase_derivative(model: HBModel, x):
    """phi'(x) = sum eta/((x-xi)^2 + eta^2) over zeros xi - i eta.

    Strictly positive: each zero contributes a Poisson kernel.  Drift and
    genus factors are real on the real axis and do not enter.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    xs = np.atleast_1d(x)
    out = np.zeros(xs.shape)
    lam = model.zero_array
    for start in range(0, lam.size, _ZERO_CHUNK):
        chunk = lam[start:start + _ZERO_CHUNK]
        xi, eta = chunk.real, -chunk.imag
        out += (eta / ((xs[..., None] - xi) ** 2 + eta**2)).sum(axis=-1)
    return float(out[0]) if scalar else out


def phase(model: HBModel, x):
    """Continuous phase branch with phi(0) = -arg E(0) (principal).

    phi(x) = phi(0) + integral_0^x phi', and the integral of each Poisson
    kernel is an arctangent, so the branch is exact rather than quadrature.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    xs = np.atleast_1d(x)
    out = np.full(xs.shape, -np.angle(model.constant))
    lam = model.zero_array
    for start in range(0, lam.size, _ZERO_CHUNK):
        chunk = lam[start:start + _ZERO_CHUNK]
        xi, eta = chunk.real, -chunk.imag
        out += (np.arctan((xs[..., None] - xi) / eta)
                - np.arctan(-xi / eta)).sum(axis=-1)
    return float(out[0]) if scalar else out


def _E_star(model: HBModel, z):
    z = np.asarray(z, dtype=complex)
    return np.conj(eval_E(model, np.conj(z)))


def reproducing_kernel(model: HBModel, zeta, z):
    """k_zeta(z) = (E*(z) conj(E*(zeta)) - E(z) conj(E(zeta))) / (2 pi i (z - conj zeta)).

    E*(w) = conj(E(conj w)).  On the real diagonal z = zeta = x the
    removable singularity is filled by the limit (1/pi) phi'(x) |E(x)|^2.
    """
    z, zeta = complex(z), complex(zeta)
    denom = z - np.conj(zeta)
    if abs(denom) < 1e-9:
        if abs(z.imag) < 1e-9 and abs(z - zeta) < 1e-9:
            xr = z.real
            return complex(phase_derivative(model, xr)
                           * abs(eval_E(model, xr)) ** 2 / np.pi)
        # z = conj(zeta) off the axis: the numerator vanishes too, take a
        # symmetric limit
        h = 1e-6
        return (reproducing_kernel(model, zeta, z + h)
                + reproducing_kernel(model, zeta, z - h)) / 2.0
    num = (_E_star(model, z) * np.conj(_E_star(model, zeta))
           - eval_E(model, z) * np.conj(eval_E(model, zeta)))
    return complex(num / (2j * np.pi * denom))


def majorant(model: HBModel, x):
    """M(x) = sqrt(k_x(x)) = (1/sqrt(pi)) sqrt(phi'(x)) |E(x)| on the line."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(phase_derivative(model, x) / np.pi) * np.exp(log_abs_E(model, x))


def log_majorant(model: HBModel, x):
    """log M(x), safe when |E| overflows."""
    x = np.asarray(x, dtype=float)
    return (0.5 * np.log(phase_derivative(model, x) / np.pi)
            + log_abs_E(model, x))


def majorant_halfplane(model: HBModel, z):
    """sqrt(k_z(z)) for Im z > 0, via the diagonal formula
    k_z(z) = (|E(z)|^2 - |E*(z)|^2) / (4 pi Im z), computed in log space."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    zs = np.atleast_1d(z)
    if np.any(zs.imag <= 0):
        raise InvalidInputError("diagonal majorant needs Im z > 0")
    la = log_abs_E(model, zs)
    lb = log_abs_E(model, np.conj(zs))
    # |E|^2 (1 - |E*/E|^2) with the ratio < 1 by the HB inequality
    out = np.exp(la) * np.sqrt(-np.expm1(2.0 * (lb - la)) / (4 * np.pi * zs.imag))
    return float(out[0]) if scalar else out


def check_hb_property(model: HBModel, grid: Grid):
    """Verify |E(z)| > |E(conj z)| on a grid in the open upper half-plane.

    Returns (passed, worst_margin) where the margin is the minimum of
    log|E(z)| - log|E(conj z)| over the grid.
    """
    pts = np.atleast_1d(np.asarray(grid.points, dtype=complex))
    if np.any(pts.imag <= 0):
        raise InvalidInputError("grid must lie strictly in the upper half-plane")
    margin = log_abs_E(model, pts) - log_abs_E(model, np.conj(pts))
    worst = float(margin.min())
    return worst > 0.0, worst
