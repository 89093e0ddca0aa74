"""Riesz-product signals whose sign patterns are Pauli partners.

The finite product ``R(x) = prod_n (1 + 2i*alpha_n*eps_n*sin(2*pi*3^n*x))``
has a lacunary spectrum: its Fourier coefficients live on integers with
a balanced-ternary digit expansion over the powers 3^1..3^N and factor
as ``a_k = prod_{digits} (digit_j * eps_j * alpha_j)``.  Because the
modulus of every coefficient is independent of the sign pattern eps,
all 2^N sign patterns share the modulus of both the time signal and its
spectrum once multiplied by a common envelope, while no two of them are
constant multiples of each other.

Coefficient tables are built by sparse convolution over the integer
indices, never by FFT; the support structure guarantees that no two
contributions ever collide, so every coefficient is a bare product of
its factors in ascending digit order.  That makes the modulus law exact
in floating point, bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable

import numpy as np

from .errors import DepthTooLarge
from .harness import CheckResult, VerificationReport

MAX_DEPTH = 16
_TWO_PI = 2.0 * math.pi


def default_alpha(depth: int) -> tuple[float, ...]:
    """Amplitudes exp(-2*3^(j+1)) meeting the spectral decay bound.

    Every nonzero coefficient then satisfies |a_k| <= exp(-2|k|).  The
    values underflow to zero from j = 5 on, which RieszSpec rejects as
    non-finite-nonzero; use display_alpha for deep demonstrations.
    """
    return tuple(math.exp(-2.0 * 3 ** (j + 1)) for j in range(1, depth + 1))


def display_alpha(depth: int) -> tuple[float, ...]:
    """Amplitudes 3^-j: well scaled for demonstration and plotting."""
    return tuple(3.0 ** -j for j in range(1, depth + 1))


@dataclass(frozen=True)
class RieszSpec:
    """Depth, amplitudes and sign pattern of one finite Riesz product."""

    alphas: tuple[float, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        signs = tuple(int(s) for s in self.signs)
        if len(alphas) != len(signs):
            raise ValueError("alphas and signs must have equal length")
        if len(alphas) > MAX_DEPTH:
            raise DepthTooLarge(
                f"depth {len(alphas)} exceeds the supported maximum {MAX_DEPTH}")
        for a in alphas:
            if not (math.isfinite(a) and a != 0.0):
                raise ValueError(f"amplitudes must be finite and nonzero, got {a}")
        for s in signs:
            if s not in (-1, 1):
                raise ValueError(f"signs must be +1 or -1, got {s}")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "signs", signs)

    @property
    def depth(self) -> int:
        return len(self.alphas)

    @classmethod
    def with_signs(cls, alphas, signs) -> "RieszSpec":
        return cls(tuple(alphas), tuple(signs))

    @classmethod
    def all_plus(cls, alphas) -> "RieszSpec":
        alphas = tuple(alphas)
        return cls(alphas, (1,) * len(alphas))


@dataclass(frozen=True)
class CoefficientTable:
    """Sparse Fourier coefficients of a finite Riesz product."""

    entries: MappingProxyType
    depth: int

    @property
    def support_bound(self) -> int:
        return (3 ** (self.depth + 1) - 3) // 2

    def moduli(self) -> dict[int, float]:
        return {k: abs(v) for k, v in self.entries.items()}

    def __getitem__(self, k: int) -> float:
        return self.entries.get(k, 0.0)


def balanced_ternary_digits(k: int, depth: int) -> tuple[int, ...] | None:
    """Digits (eta_1..eta_depth) with k = sum eta_j * 3^j, eta_j in {-1,0,1}.

    Returns None when k has no such expansion (including any k needing a
    3^0 digit or exceeding the representable range).
    """
    if k % 3 != 0:
        return None
    m = k // 3
    digits = []
    for _ in range(depth):
        r = m % 3
        if r == 0:
            digits.append(0)
        elif r == 1:
            digits.append(1)
            m -= 1
        else:
            digits.append(-1)
            m += 1
        m //= 3
    if m != 0:
        return None
    return tuple(digits)


def riesz_coefficients(spec: RieszSpec) -> CoefficientTable:
    """Sparse integer-indexed coefficient table of the product.

    Convolves the three-term factors ``{-3^j: -alpha_j*eps_j, 0: 1,
    +3^j: +alpha_j*eps_j}`` in ascending j.  At step j every existing
    index satisfies |k| < 3^j / 2, so the three shifted copies never
    collide and each final coefficient is the left-to-right product of
    its digit factors; the modulus audit below is therefore exact.
    """
    table: dict[int, float] = {0: 1.0}
    for j in range(1, spec.depth + 1):
        step = spec.alphas[j - 1] * spec.signs[j - 1]
        p = 3 ** j
        grown: dict[int, float] = {}
        for k, v in table.items():
            for kk, vv in ((k, v), (k + p, v * step), (k - p, v * -step)):
                if kk in grown:
                    raise RuntimeError("coefficient indices collided; depth bookkeeping broken")
                grown[kk] = vv
        table = grown

    for k, v in table.items():
        digits = balanced_ternary_digits(k, spec.depth)
        if digits is None:
            raise RuntimeError(f"coefficient index {k} escaped the ternary support")
        ref = 1.0
        for j, d in enumerate(digits):
            if d != 0:
                ref *= abs(spec.alphas[j])
        if abs(v) != ref:
            raise RuntimeError(
                f"modulus law violated at k={k}: |a_k|={abs(v)!r} vs {ref!r}")
    return CoefficientTable(MappingProxyType(dict(sorted(table.items()))), spec.depth)


def eval_riesz(spec: RieszSpec, x):
    """Evaluate the product form at real points."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    out = np.ones(arr.shape, dtype=complex)
    for j in range(1, spec.depth + 1):
        amp = spec.alphas[j - 1] * spec.signs[j - 1]
        out = out * (1.0 + 2j * amp * np.sin(_TWO_PI * 3 ** j * arr))
    return complex(out) if scalar else out


def evaluate_table(table: CoefficientTable, x):
    """Evaluate sum_k a_k exp(2*pi*i*k*x) from the sparse table."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    ks = np.array(list(table.entries.keys()), dtype=float)
    vals = np.array(list(table.entries.values()))
    waves = np.exp(2j * math.pi * np.multiply.outer(arr, ks))
    out = waves @ vals
    return complex(out) if scalar else out


@dataclass(frozen=True)
class SpectralEnvelope:
    """Common envelope: closed-form time signal and its spectral profile.

    ``hat`` must describe a bounded profile supported in [0, 1) so that
    the translated copies tile without overlap; ``time`` must be its
    exact inverse transform.
    """

    name: str
    time: Callable[[np.ndarray], np.ndarray]
    hat: Callable[[np.ndarray], np.ndarray]


def indicator_envelope() -> SpectralEnvelope:
    """Envelope with spectrum 1 on [0, 1): time signal exp(i*pi*x)*sinc(x)."""
    return SpectralEnvelope(
        name="indicator",
        time=lambda x: np.exp(1j * math.pi * np.asarray(x, float)) * np.sinc(np.asarray(x, float)),
        hat=lambda xi: ((np.asarray(xi, float) >= 0.0)
                        & (np.asarray(xi, float) < 1.0)).astype(float),
    )


@dataclass(frozen=True)
class WideBandSignal:
    """Riesz product times an envelope, with both domains evaluable."""

    riesz: RieszSpec
    envelope: SpectralEnvelope
    table: CoefficientTable

    def time(self, x):
        arr = np.asarray(x, dtype=float)
        scalar = arr.ndim == 0
        out = eval_riesz(self.riesz, arr) * self.envelope.time(arr)
        return complex(out) if scalar else out

    def freq(self, xi):
        arr = np.asarray(xi, dtype=float)
        scalar = arr.ndim == 0
        out = np.zeros(arr.shape, dtype=complex)
        for k, a in self.table.entries.items():
            out = out + a * self.envelope.hat(arr - k)
        return complex(out) if scalar else out


def pauli_partner(spec: RieszSpec,
                  envelope: SpectralEnvelope | None = None) -> WideBandSignal:
    """Assemble the signal for one sign pattern over the common envelope."""
    return WideBandSignal(spec, envelope or indicator_envelope(),
                          riesz_coefficients(spec))


ENVELOPE_SKIP = 1e-12


def verify_pauli_pair(first: RieszSpec, second: RieszSpec,
                      envelope: SpectralEnvelope | None = None,
                      xgrid: np.ndarray | None = None,
                      xigrid: np.ndarray | None = None,
                      time_tol: float = 1e-12,
                      freq_tol: float = 1e-12,
                      ratio_tol: float = 1e-6) -> VerificationReport:
    """Check that two sign patterns form a genuine Pauli pair.

    (a) equal time moduli, (b) bit-identical coefficient modulus tables,
    (c) equal spectral moduli, (d) the ratio of the two signals is
    constant exactly when the sign patterns coincide.  The ratio test
    skips points where the envelope is below 1e-12; its sensitivity is
    set by ratio_tol, which should be far below 4*min|alpha_j| to detect
    non-proportionality reliably.
    """
    if first.alphas != second.alphas:
        raise ValueError("pair members must share amplitudes")
    envelope = envelope or indicator_envelope()
    xgrid = np.linspace(0.0, 1.0, 64) if xgrid is None else np.asarray(xgrid, float)
    xigrid = (np.linspace(-30.0, 30.0, 241) if xigrid is None
              else np.asarray(xigrid, float))
    fa = pauli_partner(first, envelope)
    fb = pauli_partner(second, envelope)
    report = VerificationReport(metadata={
        "depth": first.depth,
        "signs_first": list(first.signs),
        "signs_second": list(second.signs),
    })

    ta = fa.time(xgrid)
    tb = fb.time(xgrid)
    scale = np.maximum(np.abs(ta), 1e-300)
    err_t = float(np.max(np.abs(np.abs(tb) - np.abs(ta)) / scale))
    report.checks.append(CheckResult("time_moduli", err_t <= time_tol, err_t, time_tol))

    ma = fa.table.moduli()
    mb = fb.table.moduli()
    exact = ma.keys() == mb.keys() and all(ma[k] == mb[k] for k in ma)
    worst = 0.0 if exact else max(
        abs(ma.get(k, 0.0) - mb.get(k, 0.0)) for k in set(ma) | set(mb))
    report.checks.append(CheckResult(
        "coefficient_moduli", exact, worst, 0.0, note="bit-for-bit"))

    sa = fa.freq(xigrid)
    sb = fb.freq(xigrid)
    err_s = float(np.max(np.abs(np.abs(sb) - np.abs(sa))))
    report.checks.append(CheckResult("spectral_moduli", err_s <= freq_tol, err_s, freq_tol))

    env = np.abs(envelope.time(xgrid))
    mask = env > ENVELOPE_SKIP
    report.metadata["ratio_points_skipped"] = int(np.sum(~mask))
    ratio = tb[mask] / ta[mask]
    mean = np.mean(ratio)
    spread = float(np.max(np.abs(ratio - mean)) / max(abs(mean), 1e-300))
    same = first.signs == second.signs
    if same:
        ok = spread < ratio_tol
        note = "identical patterns must give a constant ratio"
    else:
        ok = spread >= ratio_tol
        note = "distinct patterns must not be proportional"
    report.checks.append(CheckResult(
        "ratio_constancy", ok, spread, ratio_tol, note=note))
    return report
