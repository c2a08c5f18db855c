"""Figure rendering for reports.

All functions render to files through the Agg backend (no display
needed) and return the written path.  They are used by the report
command; the analysis modules never import this one.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .hbmodel import HBModel, majorant
from .mountain import MountainChain
from .numerics import ComparabilityCertificate
from .smoothing import MajorantRepresentation


def save_certificate_figure(cert: ComparabilityCertificate, path):
    """Ratio span of a certificate against its band."""
    fig, ax = plt.subplots(figsize=(5, 3))
    lo, hi = cert.band
    ax.axhspan(lo, hi, color="tab:green", alpha=0.15, label="band")
    ax.plot([0, 1], [cert.ratio_min] * 2, "tab:blue", lw=2, label="ratio min")
    ax.plot([0, 1], [cert.ratio_max] * 2, "tab:orange", lw=2, label="ratio max")
    ax.set_xticks([])
    ax.set_ylabel("f/g ratio")
    ax.set_title(f"{'pass' if cert.passed else 'FAIL'}: {cert.notes[:60]}",
                 fontsize=9)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_chain_figure(chain: MountainChain, path):
    """Mountains as summit spikes over their bases, plateaux at level 1."""
    fig, ax = plt.subplots(figsize=(7, 3))
    for a, b in chain.plateaux:
        ax.plot([a, b], [1.0, 1.0], "tab:gray", lw=2)
    for mt in chain.mountains:
        a, b = mt.base
        ax.plot([a, mt.summit_x, b], [1.0, mt.summit_height, 1.0],
                "tab:blue", lw=1)
        ax.plot(mt.zero.real, -mt.zero.imag, "rx", ms=4)
    ax.set_yscale("log")
    ax.set_xlabel("x")
    ax.set_ylabel("summit height 1/eta")
    ax.set_title(f"mountain chain, delta={chain.delta:g}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_envelope_figure(rep: MajorantRepresentation, path, n=400):
    """Representation envelope e^{g+ax+c} e^omega over the weight window."""
    lo, hi = rep.m.window
    if hi <= lo:
        lo, hi = -10.0, 10.0
    xs = np.linspace(lo, hi, n)
    fig, ax = plt.subplots(figsize=(7, 3))
    ax.plot(xs, rep.envelope(xs), "tab:orange", lw=1)
    ax.set_yscale("log")
    ax.set_xlabel("x")
    ax.set_ylabel("envelope")
    ax.set_title(f"representation envelope, branch {rep.branch}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_majorant_figure(model: HBModel, rep: MajorantRepresentation,
                         window, path, n=400):
    """Majorant against its representation envelope on a window."""
    xs = np.linspace(window[0], window[1], n)
    fig, ax = plt.subplots(figsize=(7, 3))
    ax.plot(xs, majorant(model, xs), "tab:blue", lw=1, label="M(x)")
    ax.plot(xs, rep.envelope(xs), "tab:orange", lw=1,
            label="e^(g+ax+c) e^omega")
    ax.set_yscale("log")
    ax.set_xlabel("x")
    ax.legend(fontsize=8)
    ax.set_title(f"majorant representation, branch {rep.branch}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
