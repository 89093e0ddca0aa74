"""Verification harness: grids, modulus comparison, equivalence conditions.

Everything here reduces a claim ("these two functions share modulus on
this set", "these two factored specs satisfy the equal-modulus
characterization") to a small structured report.  Reports carry the
numbers that justify a verdict; rendering and persistence live with the
command-line layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hardy import (
    AtomicMeasure,
    DiscFactorization,
    ZERO_MATCH_TOL,
    multiset_match,
    reflect_samples,
)

MODULUS_FLOOR = 1e-300      # denominator floor for relative deviations
TINY_BOTH = 1e-14           # both moduli below this count as agreeing


def modulus_deviation(mf: np.ndarray, mg: np.ndarray) -> np.ndarray:
    """Pointwise relative deviation of two modulus arrays.

    Deviation is ``| |g| - |f| | / max(|f|, floor)``; points where both
    moduli are below 1e-14 are treated as agreeing exactly, so common
    zeros do not poison a comparison.
    """
    mf = np.asarray(mf, dtype=float)
    mg = np.asarray(mg, dtype=float)
    dev = np.abs(mg - mf) / np.maximum(mf, MODULUS_FLOOR)
    dev = np.where((mf < TINY_BOTH) & (mg < TINY_BOTH), 0.0, dev)
    return dev


@dataclass(frozen=True)
class Grid1D:
    """One-dimensional evaluation grid.

    kind selects the geometry: ``real_line`` (points on the strip axis),
    ``disc_diameter`` (points on (-1, 1) of the disc), or ``segment``
    (points ``anchor + t * exp(i*theta)`` with t running from start to
    stop inside the strip).
    """

    start: float
    stop: float
    count: int
    kind: str = "real_line"
    theta: float = 0.0
    anchor: float = 0.0

    def __post_init__(self):
        if self.kind not in ("real_line", "disc_diameter", "segment"):
            raise ValueError(f"unknown grid kind {self.kind!r}")
        if self.count < 2:
            raise ValueError("grids need at least two points")
        if not self.stop > self.start:
            raise ValueError("grid stop must exceed start")
        if self.kind == "disc_diameter" and (self.start <= -1 or self.stop >= 1):
            raise ValueError("disc diameter grids must stay inside (-1, 1)")
        if self.kind == "segment":
            reach = max(abs(self.start), abs(self.stop)) * abs(math.sin(self.theta))
            if reach >= 1.0:
                raise ValueError("segment leaves the unit strip; shorten it")

    def points(self) -> np.ndarray:
        t = np.linspace(self.start, self.stop, self.count)
        if self.kind == "segment":
            return self.anchor + t * complex(math.cos(self.theta), math.sin(self.theta))
        return t

    @classmethod
    def default_real(cls) -> "Grid1D":
        return cls(-4.0, 4.0, 257, "real_line")

    @classmethod
    def default_diameter(cls) -> "Grid1D":
        return cls(-0.95, 0.95, 257, "disc_diameter")


@dataclass
class CheckResult:
    """Outcome of one named check."""

    name: str
    passed: bool
    max_err: float
    tol: float
    argmax: complex | float | None = None
    note: str = ""

    def line(self) -> str:
        word = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.note})" if self.note else ""
        return f"{word} {self.name}: max_err={self.max_err:.3e} tol={self.tol:.1e}{extra}"


@dataclass
class VerificationReport:
    """A bundle of check results plus free-form metadata."""

    checks: list[CheckResult] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


def compare_modulus(f, g, grid: Grid1D, tol: float = 1e-9) -> VerificationReport:
    """Compare |f| and |g| on a grid; f and g are callables on points.

    Evaluation errors do not propagate: they turn into a failed check
    whose note records the exception.
    """
    pts = grid.points()
    report = VerificationReport(metadata={
        "grid": {"start": grid.start, "stop": grid.stop, "count": grid.count,
                 "kind": grid.kind, "theta": grid.theta, "anchor": grid.anchor},
        "tol": tol,
    })
    try:
        mf = np.abs(np.asarray(f(pts)))
        mg = np.abs(np.asarray(g(pts)))
    except Exception as exc:   # noqa: BLE001 - diagnostics, not control flow
        report.checks.append(CheckResult(
            "modulus_match", False, math.inf, tol, note=f"evaluation failed: {exc!r}"))
        return report
    dev = modulus_deviation(mf, mg)
    k = int(np.argmax(dev))
    report.checks.append(CheckResult(
        "modulus_match", bool(dev[k] <= tol), float(dev[k]), tol,
        argmax=complex(pts[k]) if np.iscomplexobj(pts) else float(pts[k])))
    return report


def _symmetrized_zero_set(spec: DiscFactorization) -> list[complex]:
    return spec.zeros.expand() + spec.zeros.conjugate().expand()


def check_lemma_conditions(f: DiscFactorization, g: DiscFactorization,
                           zero_tol: float = ZERO_MATCH_TOL,
                           outer_tol: float = 1e-9) -> VerificationReport:
    """Check the three equal-modulus-on-the-line conditions for disc specs.

    (i)   the zero multisets closed under conjugation coincide (within a
          matching tolerance),
    (ii)  the singular measures symmetrized by conjugation coincide as
          exact multisets of (angle, mass) atoms,
    (iii) the conjugation-symmetrized boundary log-modulus samples agree
          on the grid.

    The verdict is symmetric in f and g.
    """
    report = VerificationReport(metadata={"zero_tol": zero_tol, "outer_tol": outer_tol})

    matched, worst = multiset_match(
        _symmetrized_zero_set(f), _symmetrized_zero_set(g), zero_tol)
    report.checks.append(CheckResult(
        "zeros_symmetrized", matched, worst if matched else math.inf, zero_tol))

    sym_f = f.singular.symmetrized()
    sym_g = g.singular.symmetrized()
    if sym_f == sym_g:
        err = 0.0
    else:
        masses_f = dict(sym_f)
        masses_g = dict(sym_g)
        err = max(abs(masses_f.get(t, 0.0) - masses_g.get(t, 0.0))
                  for t in set(masses_f) | set(masses_g))
        if err == 0.0:        # same masses at different float angles
            err = math.inf
    report.checks.append(CheckResult(
        "measures_symmetrized", err == 0.0, err, 0.0,
        note="exact atom arithmetic"))

    if f.outer.grid_size != g.outer.grid_size:
        report.checks.append(CheckResult(
            "outer_symmetrized", False, math.inf, outer_tol,
            note="grid sizes differ"))
        return report
    sf = f.outer.samples + reflect_samples(f.outer.samples)
    sg = g.outer.samples + reflect_samples(g.outer.samples)
    err3 = float(np.max(np.abs(sf - sg)))
    report.checks.append(CheckResult(
        "outer_symmetrized", err3 <= outer_tol, err3, outer_tol))
    return report


def measure_moments(measure: AtomicMeasure, n_max: int) -> np.ndarray:
    """Fourier moments hat(nu)(n) = sum_k mass_k * exp(-i*n*theta_k), |n| <= n_max."""
    ns = np.arange(-n_max, n_max + 1)
    thetas = np.array([t for t, _ in measure.atoms])
    masses = np.array([m for _, m in measure.atoms])
    if thetas.size == 0:
        return np.zeros(ns.size, dtype=complex)
    return (masses * np.exp(-1j * np.outer(ns, thetas))).sum(axis=1)


def fourier_pairing_check(nu_f: AtomicMeasure, nu_g: AtomicMeasure,
                          theta: float, n_max: int,
                          tol: float = 1e-10) -> VerificationReport:
    """Moment-pairing test for measures constrained on two reflected lines.

    The plain pairing checks ``hat(nu)(n) + hat(nu)(-n)`` (conjugation
    symmetry across the real line); the rotated pairing checks
    ``exp(i n theta) hat(nu)(n) + exp(-i n theta) hat(nu)(-n)`` for the
    line at angle theta.  When both pairings agree for all |n| <= n_max
    the two-by-two systems (determinant ``exp(-i n theta) - exp(i n theta)``)
    force the moments themselves to agree, which is checked directly.
    Whether theta is an irrational multiple of pi is noted, never enforced.
    """
    report = VerificationReport(metadata={"theta": theta, "n_max": n_max, "tol": tol})
    scale = max(1.0, nu_f.total_mass, nu_g.total_mass)
    ns = np.arange(-n_max, n_max + 1)
    mf = measure_moments(nu_f, n_max)
    mg = measure_moments(nu_g, n_max)
    flip = mf[::-1]        # hat(nu_f)(-n) aligned with index of n
    glip = mg[::-1]

    plain = np.abs((mf + flip) - (mg + glip))
    err_p = float(np.max(plain)) if plain.size else 0.0
    report.checks.append(CheckResult(
        "plain_pairing", err_p <= tol * scale, err_p, tol * scale))

    wplus = np.exp(1j * ns * theta)
    rot = np.abs((wplus * mf + np.conj(wplus) * flip)
                 - (wplus * mg + np.conj(wplus) * glip))
    err_r = float(np.max(rot)) if rot.size else 0.0
    report.checks.append(CheckResult(
        "rotated_pairing", err_r <= tol * scale, err_r, tol * scale))

    min_det = min((abs(math.sin(n * theta)) for n in range(1, n_max + 1)),
                  default=1.0)
    report.metadata["min_abs_sin_n_theta"] = min_det
    report.metadata["theta_note"] = (
        "theta*n stays away from pi*Z up to n_max; looks irrational at this depth"
        if min_det > 1e-6 else
        "theta*n approaches pi*Z within the tested range; pairing may be degenerate")

    if err_p <= tol * scale and err_r <= tol * scale:
        direct = float(np.max(np.abs(mf - mg))) if ns.size else 0.0
        report.checks.append(CheckResult(
            "moments_direct", direct <= tol * scale, direct, tol * scale,
            note="solved from the two pairings"))
    return report
