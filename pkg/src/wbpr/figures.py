"""Figure rendering for the command-line report path."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_FLOOR = 1e-18


def modulus_figure(path, x, mf, mg, labels=("|f|", "|g|"), xlabel="x", title=""):
    """Overlay two modulus curves and their absolute gap."""
    x = np.asarray(x, float)
    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(7.0, 5.4), sharex=True,
                                   gridspec_kw={"height_ratios": [2, 1]})
    ax0.plot(x, mf, lw=1.6, label=labels[0])
    ax0.plot(x, mg, lw=1.0, ls="--", label=labels[1])
    ax0.set_ylabel("modulus")
    ax0.legend(loc="best", fontsize=9)
    if title:
        ax0.set_title(title, fontsize=10)
    gap = np.maximum(np.abs(np.asarray(mg) - np.asarray(mf)), _FLOOR)
    ax1.semilogy(x, gap, lw=0.9, color="#7a1f1f")
    ax1.set_ylabel("abs gap")
    ax1.set_xlabel(xlabel)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def pauli_figure(path, x, t1, t2, xi, s1, s2, pattern=""):
    """Time and spectral moduli of a Pauli pair."""
    mt1, mt2 = np.abs(np.asarray(t1)), np.abs(np.asarray(t2))
    ms1, ms2 = np.abs(np.asarray(s1)), np.abs(np.asarray(s2))
    fig, axes = plt.subplots(2, 2, figsize=(9.0, 5.6))
    (ax_t, ax_td), (ax_s, ax_sd) = axes
    ax_t.plot(x, mt1, lw=1.5, label="base")
    ax_t.plot(x, mt2, lw=0.9, ls="--", label=f"partner {pattern}".strip())
    ax_t.set_title("time modulus", fontsize=10)
    ax_t.set_xlabel("x")
    ax_t.legend(fontsize=8)
    ax_td.semilogy(x, np.maximum(np.abs(mt2 - mt1), _FLOOR),
                   lw=0.9, color="#7a1f1f")
    ax_td.set_title("time modulus gap", fontsize=10)
    ax_td.set_xlabel("x")
    ax_s.plot(xi, ms1, lw=1.5, label="base")
    ax_s.plot(xi, ms2, lw=0.9, ls="--", label="partner")
    ax_s.set_title("spectral modulus", fontsize=10)
    ax_s.set_xlabel("xi")
    ax_s.legend(fontsize=8)
    ax_sd.semilogy(xi, np.maximum(np.abs(ms2 - ms1), _FLOOR),
                   lw=0.9, color="#7a1f1f")
    ax_sd.set_title("spectral modulus gap", fontsize=10)
    ax_sd.set_xlabel("xi")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def report_figure(path, report, title=""):
    """Bar chart of check errors against their tolerances."""
    names = [c.name for c in report.checks]
    errs = [max(c.max_err, _FLOOR) if np.isfinite(c.max_err) else 1.0
            for c in report.checks]
    tols = [max(c.tol, _FLOOR) for c in report.checks]
    colors = ["#2d6a4f" if c.passed else "#9d0208" for c in report.checks]
    pos = np.arange(len(names))
    fig, ax = plt.subplots(figsize=(7.0, 1.2 + 0.6 * max(len(names), 1)))
    ax.barh(pos, errs, color=colors, height=0.55, log=True)
    ax.scatter(tols, pos, marker="|", s=220, color="black", zorder=3, label="tolerance")
    ax.set_yticks(pos, names, fontsize=9)
    ax.invert_yaxis()
    ax.set_xlabel("max error (log scale)")
    if title:
        ax.set_title(title, fontsize=10)
    ax.legend(fontsize=8, loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def solutions_figure(path, max_errs, tol, title="companions"):
    """Per-solution worst deviation for an enumeration run."""
    errs = np.maximum(np.asarray(max_errs, float), _FLOOR)
    fig, ax = plt.subplots(figsize=(7.0, 3.2))
    ax.semilogy(np.arange(len(errs)), errs, "o", ms=4, color="#1d3557")
    ax.axhline(tol, color="#9d0208", lw=1.0, ls="--", label="tolerance")
    ax.set_xlabel("solution index")
    ax.set_ylabel("max modulus deviation")
    ax.set_title(title, fontsize=10)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
