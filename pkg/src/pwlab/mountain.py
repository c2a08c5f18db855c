"""Mountain-chain analysis of a Hermite-Biehler model.

Zeros in the shallow strip S_delta = {-delta < Im z < 0} dominate the
phase derivative near their real parts.  The line splits into "mountains"
(intervals where the nearest zero lies in the strip) and "plateaux" (the
rest), and the canonical representative

    gamma_delta(x) = eta(x)/|x - lambda(x)|^2   if lambda(x) in S_delta,
                     1                          otherwise,

with lambda(x) the nearest zero, should be comparable with phi'.  That
comparability, simplicity of the strip zeros, and sublinear growth of the
summit logs |log eta_k - log eta_l| <= C |xi_k - xi_l|^{1-eps} form the
axioms checked here.  The module also provides the shift-down companion
model (strip zeros pushed to depth exactly delta) and its ratio
certificates.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hbmodel import HBModel, log_abs_E, phase_derivative
from .numerics import (DEFAULT_CONFIG, ComparabilityCertificate, Grid,
                       InvalidInputError, certify_comparable, integrate_line,
                       sweep)


@dataclass(frozen=True)
class StripParams:
    """delta strip height, growth exponent and constant for axiom 3."""

    delta: float = 0.5
    epsilon_growth: float = 0.3
    growth_constant: float = 1.0
    separation_threshold: float = 0.25

    def __post_init__(self):
        if not 0.0 < self.delta <= 1.0:
            raise InvalidInputError("delta must lie in (0, 1]")
        if not 0.0 < self.epsilon_growth < 1.0:
            raise InvalidInputError("epsilon_growth must lie in (0, 1)")


@dataclass(frozen=True)
class Mountain:
    base: tuple[float, float]
    summit_x: float
    summit_height: float
    zero: complex

    def to_dict(self):
        return {
            "base": [self.base[0], self.base[1]],
            "summit_x": self.summit_x,
            "summit_height": self.summit_height,
            "zero": [self.zero.real, self.zero.imag],
        }


@dataclass(frozen=True)
class MountainChain:
    """Partition of a window into mountains and plateaux at a given delta."""

    delta: float
    window: tuple[float, float]
    mountains: tuple[Mountain, ...]
    plateaux: tuple[tuple[float, float], ...]

    def sigma(self, x):
        """min(1, eta(x)): summit depth under mountains, 1 on plateaux."""
        x = np.asarray(x, dtype=float)
        out = np.ones(x.shape if x.shape else (1,))
        xs = np.atleast_1d(x)
        for mt in self.mountains:
            a, b = mt.base
            out = np.where((xs > a) & (xs <= b),
                           min(1.0, -mt.zero.imag), out)
        return float(out[0]) if x.ndim == 0 else out

    def to_dict(self):
        return {
            "delta": self.delta,
            "window": [self.window[0], self.window[1]],
            "mountains": [mt.to_dict() for mt in self.mountains],
            "plateaux": [[a, b] for a, b in self.plateaux],
        }


@dataclass(frozen=True)
class AxiomVerdict:
    passed: bool
    value: float
    witness: object = None


@dataclass(frozen=True)
class AxiomReport:
    axiom1: ComparabilityCertificate
    axiom2: AxiomVerdict
    axiom3: AxiomVerdict
    separation: AxiomVerdict

    @property
    def passed(self):
        return (self.axiom1.passed and self.axiom2.passed
                and self.axiom3.passed and self.separation.passed)

    def to_dict(self):
        return {
            "axiom1": self.axiom1.to_dict(),
            "axiom2": {"pass": self.axiom2.passed, "value": self.axiom2.value,
                       "witness": repr(self.axiom2.witness)},
            "axiom3": {"pass": self.axiom3.passed, "value": self.axiom3.value,
                       "witness": repr(self.axiom3.witness)},
            "separation": {"pass": self.separation.passed,
                           "value": self.separation.value,
                           "witness": repr(self.separation.witness)},
            "overall": "pass" if self.passed else "fail",
        }


def _nearest_index(lam, x):
    """Index of the zero nearest to real x; ties go to smallest real part."""
    d2 = (x - lam.real) ** 2 + lam.imag**2
    dmin = d2.min()
    tied = d2 <= dmin + 1e-12 * (1.0 + dmin)
    cand = np.where(tied, lam.real, np.inf)
    return int(cand.argmin())


def nearest_zero(model: HBModel, x, sp: StripParams):
    """(nearest zero, region) for a real point x.

    Region I: the zero is in the strip and within distance delta of x;
    region II: in the strip but farther; region III: below the strip.
    """
    lam = model.zero_array
    if lam.size == 0:
        raise InvalidInputError("model has no zeros")
    z = lam[_nearest_index(lam, float(x))]
    if -z.imag < sp.delta:
        region = "I" if abs(x - z) < sp.delta else "II"
    else:
        region = "III"
    return z, region


def gamma_delta(model: HBModel, x, sp: StripParams):
    """The two-branch canonical representative of phi' at real x."""
    z, _ = nearest_zero(model, float(x), sp)
    eta = -z.imag
    if eta < sp.delta:
        return eta / abs(x - z) ** 2
    return 1.0


def _bisector(left: complex, right: complex):
    # crossing of the perpendicular bisector of two zeros with the line:
    # |x - left| = |x - right| for real x
    return (abs(right) ** 2 - abs(left) ** 2) / (2.0 * (right.real - left.real))


def segment_chain(model: HBModel, sp: StripParams, window) -> MountainChain:
    """Mountains I_lambda = {x : nearest zero is lambda}, strip zeros only.

    Each candidate interval is the 1-D Voronoi cell of its zero among all
    zeros of the model, an intersection of half-lines bounded by exact
    bisector crossings; boundary ties belong to the smaller real part, so
    cells are half-open (a, b].
    """
    lo, hi = float(window[0]), float(window[1])
    lam = model.zero_array
    mountains = []
    for z in model.strip_zeros(sp.delta):
        a, b = -np.inf, np.inf
        dominated = False
        for w in lam:
            if w == z:
                continue
            if w.real == z.real:
                # same abscissa: the shallower zero is nearest everywhere
                if abs(w) <= abs(z):
                    dominated = True
                    break
                continue
            cut = _bisector(min(z, w, key=lambda u: u.real),
                            max(z, w, key=lambda u: u.real))
            if w.real < z.real:
                a = max(a, cut)
            else:
                b = min(b, cut)
        if dominated:
            continue
        a, b = max(a, lo), min(b, hi)
        if b > a:
            mountains.append(Mountain((a, b), z.real, 1.0 / (-z.imag), z))
    mountains.sort(key=lambda mt: mt.base[0])
    plateaux = []
    cursor = lo
    for mt in mountains:
        if mt.base[0] > cursor:
            plateaux.append((cursor, mt.base[0]))
        cursor = mt.base[1]
    if cursor < hi:
        plateaux.append((cursor, hi))
    return MountainChain(sp.delta, (lo, hi), tuple(mountains), tuple(plateaux))


def check_axioms(model: HBModel, sp: StripParams, window, band,
                 grid_step=0.1) -> AxiomReport:
    """Run the four mountain-chain checks over a window.

    Failures are verdicts with witnesses, never errors.
    """
    lo, hi = float(window[0]), float(window[1])
    n = max(2, int(round((hi - lo) / grid_step)) + 1)
    grid = Grid(np.linspace(lo, hi, n), f"axiom grid [{lo},{hi}]")
    axiom1 = certify_comparable(
        lambda x: float(phase_derivative(model, float(np.real(x)))),
        lambda x: gamma_delta(model, float(np.real(x)), sp),
        grid, band, notes="phi' vs gamma_delta")

    strip = model.strip_zeros(sp.delta)
    # axiom 2: simplicity, read off as pairwise distinctness of strip zeros
    dup_gap, dup_pair = np.inf, None
    sep_gap, sep_pair = np.inf, None
    for i in range(strip.size):
        for j in range(i + 1, strip.size):
            d = abs(strip[i] - strip[j])
            if d < sep_gap:
                sep_gap, sep_pair = d, (complex(strip[i]), complex(strip[j]))
            if d < dup_gap:
                dup_gap, dup_pair = d, (complex(strip[i]), complex(strip[j]))
    axiom2 = AxiomVerdict(dup_gap > 1e-9, float(min(dup_gap, 1e18)), dup_pair)
    separation = AxiomVerdict(sep_gap >= sp.separation_threshold,
                              float(min(sep_gap, 1e18)), sep_pair)

    worst, witness = 0.0, None
    for i in range(strip.size):
        for j in range(i + 1, strip.size):
            dx = abs(strip[i].real - strip[j].real)
            if dx == 0.0:
                continue
            ratio = (abs(np.log(-strip[i].imag) - np.log(-strip[j].imag))
                     / dx ** (1.0 - sp.epsilon_growth))
            if ratio > worst:
                worst, witness = ratio, (complex(strip[i]), complex(strip[j]))
    axiom3 = AxiomVerdict(worst <= sp.growth_constant, float(worst), witness)
    return AxiomReport(axiom1, axiom2, axiom3, separation)


def delta_ladder(model: HBModel, window, band, deltas,
                 epsilon_growth=0.3, growth_constant=1.0):
    """check_axioms over a delta ladder; reports the largest passing delta.

    Returns (best_delta_or_None, {delta: AxiomReport}).
    """
    reports = {}
    best = None
    for d in sorted(deltas):
        sp = StripParams(delta=d, epsilon_growth=epsilon_growth,
                         growth_constant=growth_constant)
        rep = check_axioms(model, sp, window, band)
        reports[d] = rep
        if rep.passed:
            best = d
    return best, reports


def poisson_remainder(model: HBModel, x, sp: StripParams):
    """phi'(x) minus the Poisson term of the nearest zero.

    Only defined under a mountain (nearest zero in the strip); the paper's
    claim is that this remainder stays O(1) there.
    """
    z, region = nearest_zero(model, float(x), sp)
    if region == "III":
        raise InvalidInputError(f"x={x} is not under a mountain")
    eta = -z.imag
    return float(phase_derivative(model, float(x))
                 - eta / ((x - z.real) ** 2 + eta**2))


def shift_down(model: HBModel, sp: StripParams) -> HBModel:
    """Companion model with every strip zero moved to depth exactly delta.

    Real parts, the constant, and the genus flag are preserved.  The drift
    is adjusted so that explicit drift plus the moved zeros' implied
    genus-factor terms stay consistent; for genus-factor models the moved
    zeros change Re(1/lambda), which the drift absorbs.
    """
    new_zeros = []
    drift = model.drift
    for w in model.zeros:
        if -w.imag < sp.delta:
            moved = complex(w.real, -sp.delta)
            if model.genus_factors:
                drift += np.real(1.0 / w) - np.real(1.0 / moved)
            new_zeros.append(moved)
        else:
            new_zeros.append(w)
    return HBModel(zeros=tuple(new_zeros), constant=model.constant,
                   drift=drift, genus_factors=model.genus_factors,
                   truncation_radius=model.truncation_radius)


def _strip_distance(strip, z):
    if strip.size == 0:
        return np.inf
    return float(np.min(np.abs(strip - z)))


def verify_shift_ratio(E: HBModel, F: HBModel, sp: StripParams, grid: Grid,
                       band):
    """Certificate for |F(z)| min(1, dist(z, strip zeros of E)) / |E(z)|."""
    strip = E.strip_zeros(sp.delta)

    def f(z):
        z = complex(z)
        scale = min(1.0, _strip_distance(strip, z))
        if scale == 0.0:
            scale = 1e-300
        return float(np.exp(log_abs_E(F, z) + np.log(scale)))

    def g(z):
        return float(np.exp(log_abs_E(E, complex(z))))

    return certify_comparable(f, g, grid, band,
                              notes="|F| min(1, dist to strip zeros) vs |E|")


def verify_shift_ratio_real(E: HBModel, F: HBModel, chain: MountainChain,
                            grid: Grid, band):
    """Real-axis form: |F(x)/E(x)|^2 vs phi'(x)/sigma(x)."""

    def f(x):
        x = float(np.real(x))
        return float(np.exp(2.0 * (log_abs_E(F, x) - log_abs_E(E, x))))

    def g(x):
        x = float(np.real(x))
        return float(phase_derivative(E, x) / chain.sigma(x))

    return certify_comparable(f, g, grid, band, notes="|F/E|^2 vs phi'/sigma")


def mountain_integral_check(chain: MountainChain, model: HBModel, f, p,
                            eps, cfg=DEFAULT_CONFIG, y_samples=5):
    """Per-mountain gamma integrals and the strip-norm domination report.

    (a) integral of gamma_delta over each mountain base (these should sit
    in a common band); (b) integral of |f|^p gamma_delta over the window
    against sup over |y| < eps of the horizontal integral of |f(t+iy)|^p,
    with the empirical constant recorded.
    """
    if p <= 1:
        raise InvalidInputError("exponent must satisfy p > 1")
    sp = StripParams(delta=chain.delta)
    per_mountain = []
    for mt in chain.mountains:
        eta, xi = -mt.zero.imag, mt.zero.real
        a, b = mt.base
        value = (np.arctan((b - xi) / eta) - np.arctan((a - xi) / eta))
        per_mountain.append(float(value))

    from scipy import integrate
    lo, hi = chain.window

    def weighted(t):
        return abs(f(complex(t))) ** p * gamma_delta(model, t, sp)

    pts = sorted({mt.base[0] for mt in chain.mountains}
                 | {mt.base[1] for mt in chain.mountains}
                 | {mt.summit_x for mt in chain.mountains})
    lhs, _ = integrate.quad(weighted, lo, hi, limit=cfg.max_subdivisions,
                            points=[q for q in pts if lo < q < hi] or None)

    rhs = 0.0
    for y in np.linspace(-eps * 0.9, eps * 0.9, y_samples):
        val, _ = integrate.quad(lambda t: abs(f(t + 1j * y)) ** p, lo, hi,
                                limit=cfg.max_subdivisions)
        rhs = max(rhs, val)
    constant = lhs / rhs if rhs > 0 else (0.0 if lhs == 0.0 else np.inf)
    return {
        "per_mountain_integrals": per_mountain,
        "weighted_norm": float(lhs),
        "strip_sup_norm": float(rhs),
        "constant": float(constant),
        "verdict": "bounded" if np.isfinite(constant) else "unbounded",
    }
