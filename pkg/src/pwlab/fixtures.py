"""Reference models used across the verification suites.

The stair model has zeros at the integers with depths decaying like
(1+|k|)^{-1/2}: slow enough that the summit logs grow sublinearly, so the
mountain-chain axioms hold.  The bad model decays like e^{-|k|}, which
makes the summit logs grow linearly and defeats the growth axiom (and,
downstream, the level-set separation).  The single-zero model {-i} has a
constant majorant 1/sqrt(pi) by exact cancellation and anchors several
closed-form tests.
"""
from __future__ import annotations

import numpy as np

from .hbmodel import HBModel


def stair_model(count=40):
    """Zeros k - i min(1, (1+|k|)^{-1/2}) for |k| <= count."""
    ks = np.arange(-count, count + 1)
    zeros = tuple(complex(k, -min(1.0, (1.0 + abs(k)) ** -0.5)) for k in ks)
    return HBModel(zeros=zeros, constant=1.0, drift=0.0, genus_factors=True,
                   truncation_radius=float(count))


def bad_model(count=25):
    """Zeros k - i e^{-|k|} for |k| <= count; fails the growth axiom.

    count is capped to avoid depths below double precision.
    """
    count = min(count, 30)
    ks = np.arange(-count, count + 1)
    zeros = tuple(complex(k, -np.exp(-abs(k))) for k in ks)
    return HBModel(zeros=zeros, constant=1.0, drift=0.0, genus_factors=True,
                   truncation_radius=float(count))


def single_zero_model():
    """The model with the lone zero -i: E(z) = 1 - iz, M = 1/sqrt(pi)."""
    return HBModel(zeros=(-1j,), constant=1.0)
