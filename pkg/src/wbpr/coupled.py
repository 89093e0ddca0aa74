"""Coupled constraints: reference signals, derivations, interior segments.

Three ways of pinning down a function beyond the modulus of its values:
coupling against a known reference (two circles in the complex plane
whose intersection leaves at most two candidates), sharing modulus with
a derived signal (derivative, shift difference or dilation difference,
which forces a constant-ratio or periodic-factor structure), and
sharing modulus along an interior segment of the strip (which is a
genuine uniqueness statement away from rational segment angles).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ZeroReference
from .harness import CheckResult, Grid1D, VerificationReport, modulus_deviation
from .hardy import ZeroMultiset, multiset_match
from .strip import StripFunction

FD_STEP = 1e-5
RATIO_VARIANCE_TOL = 1e-12
VALID_FLOOR = 1e-12


@dataclass(frozen=True)
class ReferencePoint:
    """One sample of the unknown f and the reference h at the same point."""

    fx: complex
    hx: complex

    def __post_init__(self):
        object.__setattr__(self, "fx", complex(self.fx))
        object.__setattr__(self, "hx", complex(self.hx))


def reference_solutions(p: ReferencePoint) -> tuple[complex, complex]:
    """Both values g(x) allowed by |g| = |f| and |g - h| = |f - h|.

    They are f itself and the reflection of conj(f) by the squared phase
    of h.  h = 0 leaves the phase undefined and raises ZeroReference.
    """
    if p.hx == 0:
        raise ZeroReference("reference value h(x) = 0 has no phase")
    phi = p.hx / abs(p.hx)
    return p.fx, p.fx.conjugate() * phi * phi


@dataclass(frozen=True)
class DerivationKind:
    """Derivative d/dx, shift difference delta_b, or dilation difference gamma_q."""

    kind: str
    b: float = 0.0
    q: float = 0.0

    def __post_init__(self):
        if self.kind not in ("derivative", "shift_difference", "dilation_difference"):
            raise ValueError(f"unknown derivation kind {self.kind!r}")
        if self.kind == "shift_difference" and self.b == 0.0:
            raise ValueError("shift difference needs a nonzero step b")
        if self.kind == "dilation_difference" and not 0.0 < abs(self.q) < 1.0:
            raise ValueError("dilation difference needs 0 < |q| < 1")

    @classmethod
    def derivative(cls) -> "DerivationKind":
        return cls("derivative")

    @classmethod
    def shift(cls, b: float) -> "DerivationKind":
        return cls("shift_difference", b=float(b))

    @classmethod
    def dilation(cls, q: float) -> "DerivationKind":
        return cls("dilation_difference", q=float(q))


def apply_derivation(kind: DerivationKind, f, x):
    """Apply a derivation to a callable at points x.

    The derivative uses central differences with one Richardson
    extrapolation level (steps h and h/2, h = 1e-5), accurate to about
    1e-10 relative for well-scaled analytic functions.
    """
    arr = np.asarray(x)
    if kind.kind == "derivative":
        h = FD_STEP
        d1 = (np.asarray(f(arr + h)) - np.asarray(f(arr - h))) / (2.0 * h)
        d2 = (np.asarray(f(arr + h / 2)) - np.asarray(f(arr - h / 2))) / h
        return (4.0 * d2 - d1) / 3.0
    if kind.kind == "shift_difference":
        return np.asarray(f(arr + kind.b)) - np.asarray(f(arr))
    return np.asarray(f(arr * kind.q)) - np.asarray(f(arr))


def _star_callable(f):
    if isinstance(f, StripFunction):
        return f.star()
    return lambda z: np.conj(f(np.conj(z)))


def _rel_variance(values: np.ndarray) -> tuple[float, complex]:
    mean = complex(np.mean(values))
    denom = max(abs(mean) ** 2, 1e-300)
    return float(np.var(values) / denom), mean


@dataclass
class DichotomyResult:
    """Classification of a pair with equal modulus of derived signals."""

    branch: str                   # "constant_ratio", "constant_ratio_star",
                                  # "periodic_factor", "periodic_factor_star",
                                  # "unclassified"
    beta: complex | None
    beta_is_real: bool | None
    factor_values: np.ndarray | None
    report: VerificationReport = field(default_factory=VerificationReport)


def check_derivation_dichotomy(f, g, kind: DerivationKind,
                               grid: Grid1D | None = None,
                               premise_tol: float = 1e-6) -> DichotomyResult:
    """Classify g against f under a shared-derivation-modulus premise.

    Records whether |g| = |f| and |Dg| = |Df| actually hold on the grid
    (the classification is only meaningful under both), then classifies:
    a constant
    ratio g/f or g/f* (real beta expected, reported either way), or for
    the shift difference a unimodular factor with period b.  The
    classification runs even when a premise fails, so deliberately
    scaled examples still land in their structural branch; the premise
    checks flag the inconsistency.
    """
    grid = grid or Grid1D.default_real()
    x = grid.points()
    fstar = _star_callable(f)
    fv = np.asarray(f(x))
    gv = np.asarray(g(x))
    fsv = np.asarray(fstar(x))

    report = VerificationReport(metadata={"kind": kind.kind, "b": kind.b, "q": kind.q})
    dev = modulus_deviation(np.abs(fv), np.abs(gv))
    err = float(np.max(dev))
    report.checks.append(CheckResult(
        "premise_modulus", err <= premise_tol, err, premise_tol,
        note="|g| = |f| on the grid"))

    df = apply_derivation(kind, f, x)
    dg = apply_derivation(kind, g, x)
    errd = float(np.max(modulus_deviation(np.abs(df), np.abs(dg))))
    report.checks.append(CheckResult(
        "premise_derived_modulus", errd <= premise_tol, errd, premise_tol,
        note="|Dg| = |Df| on the grid"))

    valid = np.abs(fv) > VALID_FLOOR * np.max(np.abs(fv))
    result = DichotomyResult("unclassified", None, None, None, report)
    if not np.any(valid):
        report.metadata["note"] = "f vanishes on the whole grid"
        return result

    r1 = gv[valid] / fv[valid]
    var1, mean1 = _rel_variance(r1)
    if var1 < RATIO_VARIANCE_TOL:
        result.branch = "constant_ratio"
        result.beta = mean1
        result.beta_is_real = abs(mean1.imag) <= 1e-10
        report.metadata["beta"] = [mean1.real, mean1.imag]
        report.metadata["abs_beta"] = abs(mean1)
        return result

    valid_s = valid & (np.abs(fsv) > VALID_FLOOR * np.max(np.abs(fsv)))
    r2 = gv[valid_s] / fsv[valid_s]
    var2, mean2 = _rel_variance(r2)
    if var2 < RATIO_VARIANCE_TOL:
        result.branch = "constant_ratio_star"
        result.beta = mean2
        result.beta_is_real = abs(mean2.imag) <= 1e-10
        report.metadata["beta"] = [mean2.real, mean2.imag]
        report.metadata["abs_beta"] = abs(mean2)
        return result

    if kind.kind == "shift_difference":
        for name, base in (("periodic_factor", fv), ("periodic_factor_star", fsv)):
            mask = np.abs(base) > VALID_FLOOR * np.max(np.abs(base))
            ratio = np.where(mask, gv / np.where(mask, base, 1.0), np.nan)
            vals = ratio[mask]
            if vals.size == 0:
                continue
            unimod = float(np.max(np.abs(np.abs(vals) - 1.0)))
            src = f if name == "periodic_factor" else fstar
            shifted_num = np.asarray(g(x + kind.b))
            shifted_den = np.asarray(src(x + kind.b))
            ok = mask & (np.abs(shifted_den) > VALID_FLOOR * np.max(np.abs(base)))
            period = float(np.max(np.abs(
                shifted_num[ok] / shifted_den[ok] - ratio[ok]))) if np.any(ok) else math.inf
            if unimod <= 1e-8 and period <= 1e-8:
                result.branch = name
                result.factor_values = vals
                report.metadata["factor_unimodularity_defect"] = unimod
                report.metadata["factor_periodicity_defect"] = period
                return result
    return result


@dataclass(frozen=True)
class SegmentSpec:
    """Open segment anchor + t*exp(i*theta), |t| < half_length, in the strip."""

    theta: float
    anchor: complex = 0.0
    half_length: float = 1.0
    samples: int = 129

    def __post_init__(self):
        object.__setattr__(self, "anchor", complex(self.anchor))
        if not 0.0 < self.theta < math.pi:
            raise ValueError("theta must lie in (0, pi); other lines repeat these")
        if not 0.0 < self.half_length <= 1.0:
            raise ValueError("half_length must lie in (0, 1]")
        if self.samples < 3:
            raise ValueError("use at least 3 segment samples")
        reach = abs(self.anchor.imag) + self.half_length * abs(math.sin(self.theta))
        if reach > 1.0:
            raise ValueError("segment endpoints leave the closed strip")

    def points(self) -> np.ndarray:
        t = np.linspace(-self.half_length, self.half_length, self.samples + 2)[1:-1]
        return self.anchor + t * complex(math.cos(self.theta), math.sin(self.theta))


def segment_agreement(f, g, seg: SegmentSpec, tol: float = 1e-8) -> VerificationReport:
    """Compare |f| and |g| along an interior segment of the strip."""
    pts = seg.points()
    report = VerificationReport(metadata={
        "theta": seg.theta,
        "anchor": [seg.anchor.real, seg.anchor.imag],
        "half_length": seg.half_length,
        "samples": seg.samples,
        "tol": tol,
    })
    try:
        mf = np.abs(np.asarray(f(pts)))
        mg = np.abs(np.asarray(g(pts)))
    except Exception as exc:   # noqa: BLE001
        report.checks.append(CheckResult(
            "segment_modulus", False, math.inf, tol, note=f"evaluation failed: {exc!r}"))
        return report
    dev = modulus_deviation(mf, mg)
    k = int(np.argmax(dev))
    report.checks.append(CheckResult(
        "segment_modulus", bool(dev[k] <= tol), float(dev[k]), tol,
        argmax=complex(pts[k])))
    return report


@dataclass
class UniquenessResult:
    """Outcome of the line-plus-segment uniqueness test."""

    status: str              # "unique", "modulus_mismatch_line",
                             # "modulus_mismatch_segment", "inconclusive"
    constant: complex | None
    report: VerificationReport

    @property
    def unique_up_to_constant(self) -> bool:
        return self.status == "unique"


def conclude_uniqueness(f, g, seg: SegmentSpec,
                        grid: Grid1D | None = None,
                        modulus_tol: float = 1e-8,
                        constant_tol: float = 1e-10) -> UniquenessResult:
    """Decide whether g = c*f with a unimodular constant c.

    Requires matching modulus on the real grid and on the segment, then
    estimates c at a well-conditioned point and verifies g = c*f
    everywhere sampled.  Matching moduli with a non-constant ratio is
    reported as inconclusive, never as uniqueness: rational segment
    angles genuinely admit such pairs.  The angle's irrationality is
    recorded as an assumption, not enforced.
    """
    grid = grid or Grid1D.default_real()
    x = grid.points()
    seg_pts = seg.points()
    report = VerificationReport(metadata={
        "theta_over_pi": seg.theta / math.pi,
        "assumption": "theta/pi irrational is assumed, not verified",
    })

    fv = np.asarray(f(x))
    gv = np.asarray(g(x))
    dev_line = float(np.max(modulus_deviation(np.abs(fv), np.abs(gv))))
    report.checks.append(CheckResult(
        "line_modulus", dev_line <= modulus_tol, dev_line, modulus_tol))
    if dev_line > modulus_tol:
        return UniquenessResult("modulus_mismatch_line", None, report)

    fs = np.asarray(f(seg_pts))
    gs = np.asarray(g(seg_pts))
    dev_seg = float(np.max(modulus_deviation(np.abs(fs), np.abs(gs))))
    report.checks.append(CheckResult(
        "segment_modulus", dev_seg <= modulus_tol, dev_seg, modulus_tol))
    if dev_seg > modulus_tol:
        return UniquenessResult("modulus_mismatch_segment", None, report)

    peak = np.max(np.abs(fv))
    anchors = np.flatnonzero(np.abs(fv) >= 1e-8 * peak)
    if anchors.size == 0:
        report.metadata["note"] = "f numerically vanishes on the grid"
        return UniquenessResult("inconclusive", None, report)
    i0 = int(anchors[0])
    c = complex(gv[i0] / fv[i0])
    report.metadata["constant"] = [c.real, c.imag]

    err_uni = abs(abs(c) - 1.0)
    report.checks.append(CheckResult(
        "constant_unimodular", err_uni <= constant_tol, err_uni, constant_tol))

    allf = np.concatenate([fv, fs])
    allg = np.concatenate([gv, gs])
    denom = np.maximum(np.abs(allf), 1e-300)
    err_fit = float(np.max(np.abs(allg - c * allf) / denom))
    report.checks.append(CheckResult(
        "constant_ratio_fit", err_fit <= modulus_tol, err_fit, modulus_tol))

    if err_uni <= constant_tol and err_fit <= modulus_tol:
        return UniquenessResult("unique", c, report)
    return UniquenessResult("inconclusive", None, report)


@dataclass
class RotationOrbitReport:
    """Structure of the zero-set symmetric difference under the segment group."""

    difference: list[complex]
    conjugation_closed: bool
    reflection_closed: bool
    orbit_contained: bool
    orbit_escape_step: int | None
    verdict: str
    # "consistent_with_uniqueness" | "rational_angle_ambiguity_possible"
    # | "modulus_must_differ_on_segment"


def _multiset_remove(points: list[complex], target: complex, tol: float) -> bool:
    for i, p in enumerate(points):
        if abs(p - target) <= tol:
            points.pop(i)
            return True
    return False


def _closed_under(points: list[complex], op, tol: float) -> bool:
    rest = list(points)
    for p in points:
        if not _multiset_remove(rest, op(p), tol):
            return False
    return True


def rotation_orbit_witness(zf: ZeroMultiset, zg: ZeroMultiset, theta: float,
                           steps: int = 16,
                           tol: float = 1e-10) -> RotationOrbitReport:
    """Probe the zero-set symmetric difference for segment-angle symmetry.

    A pair agreeing in modulus on the real line and on the segment at
    angle theta forces the symmetric difference of the zero multisets to
    be closed under conjugation, under reflection across the segment
    direction, and hence invariant under rotation by 2*theta.  An
    irrational angle then makes any nonempty difference impossible, so
    an empty difference is the only verdict consistent with uniqueness.
    """
    left = zf.expand()
    right = zg.expand()
    rest = list(right)
    diff: list[complex] = []
    for p in left:
        if not _multiset_remove(rest, p, tol):
            diff.append(p)
    diff.extend(rest)

    if not diff:
        return RotationOrbitReport([], True, True, True, None,
                                   "consistent_with_uniqueness")

    w = complex(math.cos(2 * theta), math.sin(2 * theta))
    conj_ok = _closed_under(diff, lambda p: p.conjugate(), tol)
    refl_ok = _closed_under(diff, lambda p: w * p.conjugate(), tol)
    orbit_ok = True
    escape: int | None = None
    if conj_ok and refl_ok:
        for p in diff:
            q = p
            for step in range(1, steps + 1):
                q = w * q
                if not any(abs(q - r) <= tol for r in diff):
                    orbit_ok = False
                    escape = step
                    break
            if not orbit_ok:
                break
    else:
        orbit_ok = False

    verdict = ("rational_angle_ambiguity_possible" if conj_ok and refl_ok and orbit_ok
               else "modulus_must_differ_on_segment")
    return RotationOrbitReport(diff, conj_ok, refl_ok, orbit_ok, escape, verdict)
