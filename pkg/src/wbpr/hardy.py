"""Factored Hardy-space functions on the unit disc.

A square-integrable holomorphic function on the disc splits into a
unimodular constant, a Blaschke product over its interior zeros, a
singular inner factor driven by a finite atomic boundary measure, and
an outer factor reconstructed from boundary log-modulus data.  This
module keeps that factored form explicit: each piece is an immutable
value object and every operation is a pure function, so specs can be
shared freely between threads.

Boundary data lives on the uniform angular grid ``theta_m = -pi + 2*pi*m/M``
for ``m = 0..M-1``.  The grid is built in an exactly antisymmetric form
(index ``m`` and index ``(M - m) % M`` carry exactly opposite angles), which
makes reflection and oddness checks exact in floating point.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, QuadratureAccuracyWarning, RootOnCircle

DEFAULT_GRID_SIZE = 4096
INTERIOR_MARGIN = 1e-12     # zeros with |alpha| >= 1 - margin are rejected
CIRCLE_BAND = 1e-9          # polynomial roots this close to |w| = 1 are ambiguous
ZERO_MATCH_TOL = 1e-10      # tolerance for zero-multiset comparisons

_TWO_PI = 2.0 * math.pi


def canonical_angle(theta: float) -> float:
    """Reduce an angle to the canonical range (-pi, pi].

    Angles already inside the open interval pass through bit-exactly, so
    conjugating an atom (negating its angle) stays an exact operation.
    """
    t = math.remainder(theta, _TWO_PI)
    if t == -math.pi:
        t = math.pi
    if t == 0.0:           # normalise -0.0
        t = 0.0
    return t


def boundary_grid(size: int) -> np.ndarray:
    """Angular sample grid theta_m = -pi + 2*pi*m/size, m = 0..size-1.

    Computed as ``(m - size//2) * (2*pi/size)`` so that the angles at
    indices m and (size - m) % size are exact floating-point negatives
    of each other.
    """
    if size < 4 or size & (size - 1):
        raise ValueError(f"grid size must be a power of two >= 4, got {size}")
    return (np.arange(size) - size // 2) * (_TWO_PI / size)


def reflect_samples(samples: np.ndarray) -> np.ndarray:
    """Reorder grid samples under theta -> -theta (index m -> (M - m) % M)."""
    return np.roll(samples[::-1], 1)


def odd_part(samples: np.ndarray) -> np.ndarray:
    """Project boundary samples onto their odd component, exactly.

    The result r satisfies ``reflect_samples(r) == -r`` bit for bit, which
    downstream oddness validation relies on.
    """
    samples = np.asarray(samples, dtype=float)
    return (samples - reflect_samples(samples)) / 2.0


def _as_points(w) -> tuple[np.ndarray, bool]:
    arr = np.asarray(w, dtype=complex)
    return arr, arr.ndim == 0


def _require_interior(arr: np.ndarray, what: str = "evaluation point") -> None:
    if np.any(np.abs(arr) >= 1.0):
        bad = np.asarray(arr).reshape(-1)
        bad = bad[np.abs(bad) >= 1.0][0]
        raise DomainError(f"{what} {bad} is not in the open unit disc")


@dataclass(frozen=True)
class ZeroMultiset:
    """Interior zeros with multiplicities, kept in a canonical order.

    Entries are (point, multiplicity) pairs sorted by (Re, Im); exactly
    coincident points are merged at construction.  Points must satisfy
    |alpha| < 1 - 1e-12 so that Blaschke denominators stay well away
    from zero on the closed evaluation region.
    """

    entries: tuple[tuple[complex, int], ...] = ()

    def __post_init__(self):
        merged: dict[complex, int] = {}
        for alpha, mult in self.entries:
            alpha = complex(alpha)
            if not (isinstance(mult, (int, np.integer)) and mult >= 1):
                raise ValueError(f"multiplicity must be a positive integer, got {mult!r}")
            if abs(alpha) >= 1.0 - INTERIOR_MARGIN:
                raise DomainError(
                    f"zero {alpha} too close to the unit circle (|alpha| >= 1 - 1e-12)")
            merged[alpha] = merged.get(alpha, 0) + int(mult)
        ordered = tuple(sorted(merged.items(), key=lambda e: (e[0].real, e[0].imag)))
        object.__setattr__(self, "entries", ordered)

    @property
    def count(self) -> int:
        return sum(m for _, m in self.entries)

    def conjugate(self) -> "ZeroMultiset":
        return ZeroMultiset(tuple((a.conjugate(), m) for a, m in self.entries))

    def expand(self) -> list[complex]:
        """Zeros repeated per multiplicity."""
        out: list[complex] = []
        for a, m in self.entries:
            out.extend([a] * m)
        return out


def zeros_close(a: ZeroMultiset, b: ZeroMultiset, tol: float = ZERO_MATCH_TOL) -> bool:
    """Multiset equality of zeros up to a pointwise matching tolerance."""
    return multiset_match(a.expand(), b.expand(), tol)[0]


def multiset_match(left: list[complex], right: list[complex],
                   tol: float) -> tuple[bool, float]:
    """Greedy matching of two complex multisets.

    Returns (matched, worst_distance); worst_distance is inf when the
    multisets cannot be paired within tol.
    """
    if len(left) != len(right):
        return False, math.inf
    rest = list(right)
    worst = 0.0
    for p in left:
        if not rest:
            return False, math.inf
        dists = [abs(p - q) for q in rest]
        i = int(np.argmin(dists))
        if dists[i] > tol:
            return False, math.inf
        worst = max(worst, dists[i])
        rest.pop(i)
    return True, worst


def _merge_atoms(pairs, signed: bool) -> tuple[tuple[float, float], ...]:
    bucket: dict[float, list[float]] = {}
    for theta, mass in pairs:
        theta = canonical_angle(float(theta))
        bucket.setdefault(theta, []).append(float(mass))
    out = []
    for theta in sorted(bucket):
        mass = math.fsum(bucket[theta])
        if mass == 0.0:
            continue
        if mass < 0.0 and not signed:
            raise ValueError(f"atom at theta={theta} has non-positive mass {mass}")
        out.append((theta, mass))
    return tuple(out)


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite atomic measure on the unit circle, atoms keyed by angle.

    Atoms are (theta, mass) pairs with theta in (-pi, pi]; duplicates are
    merged by summed mass and atoms are sorted by angle.  Masses are
    strictly positive unless ``signed=True``, which exists only for the
    intermediate measures of the u/v splitting and is not a public
    modelling device.
    """

    atoms: tuple[tuple[float, float], ...] = ()
    signed: bool = False

    def __post_init__(self):
        for _, mass in self.atoms:
            if not math.isfinite(mass):
                raise ValueError("atom masses must be finite")
            if mass <= 0.0 and not self.signed:
                raise ValueError(f"atom masses must be strictly positive, got {mass}")
        object.__setattr__(self, "atoms", _merge_atoms(self.atoms, self.signed))

    @property
    def total_mass(self) -> float:
        return math.fsum(m for _, m in self.atoms)

    def mass_at(self, theta: float) -> float:
        theta = canonical_angle(theta)
        for t, m in self.atoms:
            if t == theta:
                return m
        return 0.0

    def conjugate(self) -> "AtomicMeasure":
        return AtomicMeasure(tuple((-t, m) for t, m in self.atoms), signed=self.signed)

    def add(self, other: "AtomicMeasure") -> "AtomicMeasure":
        signed = self.signed or other.signed
        return AtomicMeasure(self.atoms + other.atoms, signed=signed)

    def scaled(self, factor: float) -> "AtomicMeasure":
        signed = self.signed or factor < 0
        return AtomicMeasure(tuple((t, m * factor) for t, m in self.atoms), signed=signed)

    def symmetrized(self) -> tuple[tuple[float, float], ...]:
        """Atoms of (self + conjugate pushforward of self), canonically merged."""
        pairs = list(self.atoms) + [(-t, m) for t, m in self.atoms]
        return _merge_atoms(pairs, self.signed)

    def points(self) -> np.ndarray:
        return np.exp(1j * np.array([t for t, _ in self.atoms]))


@dataclass(frozen=True)
class BoundaryLogModulus:
    """Sampled log-modulus on the angular boundary grid.

    ``samples[m]`` is the value at angle ``boundary_grid(M)[m]``.  The
    array is stored read-only; M must be a power of two.
    """

    samples: np.ndarray

    def __post_init__(self):
        arr = np.array(self.samples, dtype=float)   # own the buffer
        if arr.ndim != 1:
            raise ValueError("boundary samples must be a 1-d array")
        n = arr.size
        if n < 4 or n & (n - 1):
            raise ValueError(f"sample count must be a power of two >= 4, got {n}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("boundary samples must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def grid_size(self) -> int:
        return self.samples.size

    @property
    def mean(self) -> float:
        return float(np.mean(self.samples))

    def reflected(self) -> "BoundaryLogModulus":
        return BoundaryLogModulus(reflect_samples(self.samples))

    def plus(self, other_samples: np.ndarray) -> "BoundaryLogModulus":
        other_samples = np.asarray(other_samples, dtype=float)
        if other_samples.shape != self.samples.shape:
            raise ValueError("sample arrays differ in length")
        return BoundaryLogModulus(self.samples + other_samples)

    @classmethod
    def flat(cls, grid_size: int = DEFAULT_GRID_SIZE, value: float = 0.0):
        return cls(np.full(grid_size, float(value)))

    @classmethod
    def from_function(cls, fn, grid_size: int = DEFAULT_GRID_SIZE):
        """Sample ``fn(theta)`` on the boundary grid."""
        return cls(np.asarray(fn(boundary_grid(grid_size)), dtype=float))

    def __eq__(self, other):
        if not isinstance(other, BoundaryLogModulus):
            return NotImplemented
        return self.samples.shape == other.samples.shape and bool(
            np.all(self.samples == other.samples))


@dataclass(frozen=True)
class DiscFactorization:
    """Fully factored function on the disc: phase, zeros, atoms, outer data.

    Evaluates as ``exp(i*phase) * B(w) * S(w) * O(w)`` where B is the
    Blaschke product over ``zeros``, S the singular inner factor of
    ``singular`` and O the outer factor reconstructed from ``outer``.
    Instances are callable on scalars or arrays of interior points.
    """

    phase: float = 0.0
    zeros: ZeroMultiset = field(default_factory=ZeroMultiset)
    singular: AtomicMeasure = field(default_factory=AtomicMeasure)
    outer: BoundaryLogModulus = field(
        default_factory=lambda: BoundaryLogModulus.flat(DEFAULT_GRID_SIZE))

    def __post_init__(self):
        if not math.isfinite(self.phase):
            raise ValueError("phase must be finite")

    @property
    def grid_size(self) -> int:
        return self.outer.grid_size

    def __call__(self, w):
        return eval_disc(self, w)

    def with_outer(self, outer: BoundaryLogModulus) -> "DiscFactorization":
        return DiscFactorization(self.phase, self.zeros, self.singular, outer)

    def with_phase(self, phase: float) -> "DiscFactorization":
        return DiscFactorization(float(phase), self.zeros, self.singular, self.outer)

    @classmethod
    def trivial(cls, grid_size: int = DEFAULT_GRID_SIZE):
        return cls(outer=BoundaryLogModulus.flat(grid_size))


def blaschke_factor(alpha: complex, w):
    """Single Blaschke factor for an interior zero alpha.

    Convention: the factor for alpha = 0 is w itself; otherwise
    ``(alpha/|alpha|) * (alpha - w) / (1 - conj(alpha)*w)``, which is
    positive at w = 0.
    """
    alpha = complex(alpha)
    if abs(alpha) >= 1.0:
        raise DomainError(f"Blaschke zero {alpha} must lie inside the disc")
    arr, scalar = _as_points(w)
    _require_interior(arr)
    if alpha == 0:
        out = arr
    else:
        out = (alpha / abs(alpha)) * (alpha - arr) / (1.0 - alpha.conjugate() * arr)
    return complex(out) if scalar else out


def eval_blaschke(zeros: ZeroMultiset, w):
    """Blaschke product over a zero multiset (empty product = 1)."""
    arr, scalar = _as_points(w)
    _require_interior(arr)
    out = np.ones_like(arr)
    for alpha, mult in zeros.entries:
        out = out * blaschke_factor(alpha, arr) ** mult
    return complex(out) if scalar else out


def eval_singular_inner(measure: AtomicMeasure, w):
    """Singular inner factor exp(sum_k mass_k * (w + zeta_k)/(w - zeta_k)).

    zeta_k = exp(i*theta_k) are the atom positions on the circle.  With
    positive masses the exponent has negative real part inside the disc,
    so the factor is bounded by one.
    """
    arr, scalar = _as_points(w)
    _require_interior(arr)
    expo = np.zeros_like(arr)
    for theta, mass in measure.atoms:
        zeta = cmath.exp(1j * theta)
        expo = expo + mass * (arr + zeta) / (arr - zeta)
    out = np.exp(expo)
    return complex(out) if scalar else out


def _herglotz(samples: np.ndarray, arr: np.ndarray) -> np.ndarray:
    """Trapezoid Herglotz transform of boundary samples at interior points."""
    m = samples.size
    bound = np.exp(1j * boundary_grid(m))
    flat = arr.reshape(-1, 1)
    kern = (bound + flat) / (bound - flat)
    return (kern @ samples / m).reshape(arr.shape)


def eval_outer(data: BoundaryLogModulus, w):
    """Outer factor from boundary log-modulus samples.

    Discretizes ``exp((1/2pi) Int (e^{i t} + w)/(e^{i t} - w) * L(t) dt)``
    by the trapezoid rule on the sample grid.  The quadrature is
    spectrally accurate for smooth L but degrades near the boundary; a
    warning is emitted for points with ``|w| > 1 - 10/M``.
    """
    arr, scalar = _as_points(w)
    _require_interior(arr)
    r_max = 1.0 - 10.0 / data.grid_size
    if np.any(np.abs(arr) > r_max):
        warnings.warn(
            f"outer evaluation beyond |w| = {r_max:.6f} is quadrature-limited",
            QuadratureAccuracyWarning, stacklevel=2)
    out = np.exp(_herglotz(data.samples, arr))
    return complex(out) if scalar else out


def eval_disc(spec: DiscFactorization, w):
    """Evaluate a factored disc function at interior points."""
    arr, scalar = _as_points(w)
    out = (cmath.exp(1j * spec.phase)
           * eval_blaschke(spec.zeros, arr)
           * eval_singular_inner(spec.singular, arr)
           * eval_outer(spec.outer, arr))
    return complex(out) if scalar else out


def star(spec: DiscFactorization) -> DiscFactorization:
    """Star conjugate F*(w) = conj(F(conj(w))) in factored form.

    Zeros conjugate, atoms reflect (theta -> -theta), the outer samples
    reflect on the grid and the global phase negates.  Applying star
    twice returns the original spec field-for-field.
    """
    return DiscFactorization(
        phase=-spec.phase,
        zeros=spec.zeros.conjugate(),
        singular=spec.singular.conjugate(),
        outer=spec.outer.reflected(),
    )


_PHASE_PROBES = (0.0, 0.37 - 0.21j, -0.11 + 0.43j, 0.52 + 0.18j, 0.05 + 0.66j)


def factorize_polynomial(coeffs, grid_size: int = DEFAULT_GRID_SIZE) -> DiscFactorization:
    """Factor a polynomial (ascending coefficients) over the disc.

    Roots strictly inside the circle populate the zero multiset; the
    boundary log-modulus of the whole polynomial becomes the outer data
    (exterior roots and the leading constant live entirely there, and
    interior-root factors are unimodular on the circle).  The phase is
    fixed so that evaluating the factorization reproduces the polynomial
    itself, not just its modulus.

    Raises RootOnCircle when any root lies within 1e-9 of the circle,
    where interior/exterior classification would be meaningless.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficients must be a non-empty 1-d sequence")
    while c.size > 1 and c[-1] == 0:
        c = c[:-1]
    if c.size == 1:
        if c[0] == 0:
            raise ValueError("the zero polynomial has no factorization")
        roots = np.array([], dtype=complex)
    else:
        roots = np.polynomial.polynomial.polyroots(c)
        dc = np.polynomial.polynomial.polyder(c)
        # one Newton step to tighten the companion-matrix eigenvalues
        pv = np.polynomial.polynomial.polyval(roots, c)
        dv = np.polynomial.polynomial.polyval(roots, dc)
        ok = np.abs(dv) > 1e-8
        roots = np.where(ok, roots - pv / np.where(ok, dv, 1.0), roots)

    interior = []
    for r in roots:
        dist = abs(abs(r) - 1.0)
        if dist <= CIRCLE_BAND:
            raise RootOnCircle(f"root {r} is within {CIRCLE_BAND} of the unit circle")
        if abs(r) < 1.0:
            interior.append(complex(r))

    merged: dict[complex, int] = {}
    for r in interior:
        for known in merged:
            if abs(known - r) <= 1e-12:
                merged[known] += 1
                break
        else:
            merged[r] = 1
    zeros = ZeroMultiset(tuple(merged.items()))

    bound = np.exp(1j * boundary_grid(grid_size))
    bvals = np.polynomial.polynomial.polyval(bound, c)
    outer = BoundaryLogModulus(np.log(np.abs(bvals)))

    bare = DiscFactorization(0.0, zeros, AtomicMeasure(), outer)
    for probe in _PHASE_PROBES:
        val = bare(probe)
        if abs(val) > 1e-12:
            target = complex(np.polynomial.polynomial.polyval(probe, c))
            phase = cmath.phase(target / val)
            break
    else:                                    # pragma: no cover - probes exhaust only
        phase = 0.0                          # for pathological inputs
    return bare.with_phase(phase)
