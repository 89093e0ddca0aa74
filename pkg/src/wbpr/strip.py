"""Transfer between the unit strip and the unit disc.

The conformal map ``strip_to_disc(z) = tanh(pi*z/4)`` carries the strip
``{|Im z| < 1}`` onto the disc, with inverse
``disc_to_strip(w) = (2/pi) * log((1+w)/(1-w))``.  A function that is
square-integrable on horizontal lines of the strip corresponds to a disc
Hardy function F through division by the square root of the weight
``W(z) = 4*cosh(pi*z/4)**2``; the identity ``W(z) * d/dz strip_to_disc(z) = pi``
pins the normalisation.

Boundary atoms of the disc measure at the images of the two strip ends
(w = 1 and w = -1) do not transfer as atoms: they become the corner
factors ``exp(-a * exp(+/- pi*z/2))``, which is why :class:`StripFunction`
stores two corner masses next to its disc data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, ResamplingError
from .hardy import (
    DEFAULT_GRID_SIZE,
    AtomicMeasure,
    BoundaryLogModulus,
    DiscFactorization,
    ZeroMultiset,
    boundary_grid,
    eval_disc,
)

STRIP_MARGIN = 1e-12


def _as_strip_points(z) -> tuple[np.ndarray, bool]:
    arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(arr.imag) >= 1.0):
        bad = arr.reshape(-1)
        bad = bad[np.abs(bad.imag) >= 1.0][0]
        raise DomainError(f"point {bad} is not inside the unit strip")
    return arr, arr.ndim == 0


def strip_to_disc(z):
    """Conformal map of the unit strip onto the unit disc, tanh(pi*z/4)."""
    arr, scalar = _as_strip_points(z)
    out = np.tanh(math.pi / 4.0 * arr)
    return complex(out) if scalar else out


def disc_to_strip(w):
    """Inverse map (2/pi) * Log((1+w)/(1-w)) with the principal logarithm."""
    arr = np.asarray(w, dtype=complex)
    scalar = arr.ndim == 0
    if np.any(np.abs(arr) >= 1.0):
        raise DomainError("disc_to_strip needs points inside the open disc")
    out = (2.0 / math.pi) * np.log((1.0 + arr) / (1.0 - arr))
    return complex(out) if scalar else out


def strip_to_disc_derivative(z):
    """d/dz of the strip-to-disc map: (pi/4) / cosh(pi*z/4)**2."""
    arr, scalar = _as_strip_points(z)
    out = (math.pi / 4.0) / np.cosh(math.pi / 4.0 * arr) ** 2
    return complex(out) if scalar else out


def strip_weight(z):
    """Line weight W(z) = 4*cosh(pi*z/4)**2 = pi / strip_to_disc_derivative(z)."""
    arr, scalar = _as_strip_points(z)
    out = 4.0 * np.cosh(math.pi / 4.0 * arr) ** 2
    return complex(out) if scalar else out


def _weight_root(arr):
    # 2*cosh(pi*z/4) has positive real part on the strip, so it is the
    # principal square root of the weight
    return 2.0 * np.cosh(math.pi / 4.0 * arr)


def boundary_to_strip(theta: float) -> tuple[float, int]:
    """Map a circle angle to its strip boundary point (x, side).

    Angles in (0, pi) come from the top edge x + i, angles in (-pi, 0)
    from the bottom edge x - i, via x = (2/pi)*log(cot(|theta|/2)).
    The corner angles 0 and pi have no boundary preimage.
    """
    if theta == 0.0 or abs(theta) == math.pi:
        raise ValueError("angles 0 and pi correspond to the strip corners, not edges")
    if not -math.pi < theta < math.pi:
        raise ValueError(f"angle {theta} outside the canonical range")
    side = 1 if theta > 0 else -1
    x = -(2.0 / math.pi) * math.log(math.tan(abs(theta) / 2.0))
    return x, side


def strip_boundary_angle(x: float, side: int) -> float:
    """Inverse of :func:`boundary_to_strip`: the circle angle of x +/- i."""
    if side not in (-1, 1):
        raise ValueError("side must be +1 (top edge) or -1 (bottom edge)")
    u = math.pi / 4.0 * x
    t = math.tanh(u)
    sech2 = 1.0 / math.cosh(u) ** 2
    theta = math.atan2(sech2, 2.0 * t)
    return theta if side == 1 else -theta


@dataclass(frozen=True)
class PushforwardResult:
    """Disc measure transported to the strip: corner masses plus edge atoms."""

    corner_plus: float
    corner_minus: float
    atoms: tuple[tuple[float, int, float], ...]   # (x, side, mass)


def pushforward_measure(measure: AtomicMeasure) -> PushforwardResult:
    """Transport a circle measure to strip coordinates.

    Atoms exactly at angle 0 (the point 1) and angle pi (the point -1)
    turn into the corner masses; all other atoms land on the horizontal
    edges with their mass preserved.
    """
    a_plus = 0.0
    a_minus = 0.0
    atoms = []
    for theta, mass in measure.atoms:
        if theta == 0.0:
            a_plus += mass
        elif abs(theta) == math.pi:
            a_minus += mass
        else:
            x, side = boundary_to_strip(theta)
            atoms.append((x, side, mass))
    return PushforwardResult(a_plus, a_minus, tuple(atoms))


@dataclass(frozen=True)
class StripFunction:
    """Strip-side function in factored form.

    Wraps a disc factorization with the two corner masses, a dilation
    scale and an optional exponential twist.  Evaluation at z uses the
    unit-strip coordinate ``zeta = z / scale``:

        exp(i*eta*z) * F(strip_to_disc(zeta)) / (2*cosh(pi*zeta/4))
            * exp(-corner_plus*exp(pi*zeta/2) - corner_minus*exp(-pi*zeta/2))

    The disc part may not carry atoms at angles 0 or pi; those belong in
    the corner masses.
    """

    disc: DiscFactorization = field(default_factory=DiscFactorization.trivial)
    corner_plus: float = 0.0
    corner_minus: float = 0.0
    scale: float = 1.0
    eta: float = 0.0

    def __post_init__(self):
        if self.corner_plus < 0 or self.corner_minus < 0:
            raise ValueError("corner masses must be non-negative")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError("scale must be a positive real")
        if not math.isfinite(self.eta):
            raise ValueError("eta must be finite")
        for theta, _ in self.disc.singular.atoms:
            if theta == 0.0 or abs(theta) == math.pi:
                raise ValueError(
                    f"disc atom at theta={theta} must be expressed as a corner mass")

    @property
    def grid_size(self) -> int:
        return self.disc.grid_size

    def __call__(self, z):
        return eval_strip(self, z)

    def star(self) -> "StripFunction":
        """Star conjugate f*(z) = conj(f(conj(z))) in factored form."""
        from .hardy import star as disc_star
        return StripFunction(
            disc=disc_star(self.disc),
            corner_plus=self.corner_plus,
            corner_minus=self.corner_minus,
            scale=self.scale,
            eta=-self.eta,
        )

    def with_disc(self, disc: DiscFactorization) -> "StripFunction":
        return replace(self, disc=disc)


def eval_strip(f: StripFunction, z):
    """Evaluate a strip function at points with |Im z| < scale."""
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    zeta = arr / f.scale
    zarr, _ = _as_strip_points(zeta)
    w = np.tanh(math.pi / 4.0 * zarr)
    out = eval_disc(f.disc, w) / _weight_root(zarr)
    if f.corner_plus != 0.0 or f.corner_minus != 0.0:
        out = out * np.exp(-f.corner_plus * np.exp(math.pi / 2.0 * zarr)
                           - f.corner_minus * np.exp(-math.pi / 2.0 * zarr))
    if f.eta != 0.0:
        out = out * np.exp(1j * f.eta * arr)
    return complex(out) if scalar else out


def lower(disc: DiscFactorization, scale: float = 1.0) -> StripFunction:
    """Wrap a disc factorization as a strip function.

    Atoms of the singular measure sitting exactly at the points 1 and -1
    are routed into the corner masses; everything else carries over
    unchanged.
    """
    push = pushforward_measure(disc.singular)
    kept = tuple((t, m) for t, m in disc.singular.atoms
                 if t != 0.0 and abs(t) != math.pi)
    inner = DiscFactorization(disc.phase, disc.zeros,
                              AtomicMeasure(kept, signed=disc.singular.signed),
                              disc.outer)
    return StripFunction(inner, push.corner_plus, push.corner_minus, scale)


@dataclass(frozen=True)
class StripSideData:
    """Factored strip-side input for :func:`lift`.

    zeros: (point, multiplicity) pairs inside the strip.
    boundary_atoms: (x, side, mass) triples on the horizontal edges.
    corners: the two corner masses (plus end, minus end).
    outer_top / outer_bottom: (x, log|W^{1/2} f(x +/- i)|) samples along
    the edges, i.e. boundary log-modulus of the disc-side function.
    """

    zeros: tuple[tuple[complex, int], ...] = ()
    boundary_atoms: tuple[tuple[float, int, float], ...] = ()
    corners: tuple[float, float] = (0.0, 0.0)
    outer_top: tuple[tuple[float, float], ...] = ()
    outer_bottom: tuple[tuple[float, float], ...] = ()


def required_halfwidth(grid_size: int) -> float:
    """Edge-sample halfwidth needed to cover the angular grid: (2/pi)*log(4*M)."""
    return (2.0 / math.pi) * math.log(4.0 * grid_size)


def _resample_edge(samples, thetas_needed, side_name, grid_size):
    if len(samples) < 4:
        raise ResamplingError(f"{side_name} edge needs at least 4 outer samples")
    xs = np.array([x for x, _ in samples], dtype=float)
    ls = np.array([v for _, v in samples], dtype=float)
    thetas = np.array([strip_boundary_angle(x, 1) for x in xs])
    order = np.argsort(thetas)
    thetas = thetas[order]
    ls = ls[order]
    lo, hi = thetas[0], thetas[-1]
    need_lo = float(np.min(np.abs(thetas_needed)))
    need_hi = float(np.max(np.abs(thetas_needed)))
    if lo > need_lo or hi < need_hi:
        raise ResamplingError(
            f"{side_name} edge samples cover angles [{lo:.3e}, {hi:.3e}] but the "
            f"grid needs [{need_lo:.3e}, {need_hi:.3e}]; extend |x| to at least "
            f"{required_halfwidth(grid_size):.3f}")
    interp = PchipInterpolator(thetas, ls, extrapolate=False)
    return interp, lo, hi


def lift(data: StripSideData, grid_size: int = DEFAULT_GRID_SIZE,
         scale: float = 1.0, phase: float = 0.0) -> StripFunction:
    """Build a strip function from factored strip-side data.

    Zeros map through ``strip_to_disc``, edge atoms map to circle atoms
    with mass preserved, corner masses pass through, and the two edge
    log-modulus sample sets are resampled onto the angular grid by
    monotone cubic interpolation in the angle variable.  The two grid
    angles with no edge preimage (0 and -pi) take the value of the
    nearest covered angle.
    """
    disc_zeros = ZeroMultiset(tuple(
        (strip_to_disc(complex(beta)), int(mult)) for beta, mult in data.zeros))

    atom_pairs = []
    for x, side, mass in data.boundary_atoms:
        atom_pairs.append((strip_boundary_angle(float(x), int(side)), float(mass)))
    atoms = AtomicMeasure(tuple(atom_pairs))

    grid = boundary_grid(grid_size)
    half = grid_size // 2
    samples = np.empty(grid_size)

    top_idx = np.arange(half + 1, grid_size)          # angles in (0, pi)
    bot_idx = np.arange(1, half)                      # angles in (-pi, 0)
    top_interp, tlo, thi = _resample_edge(data.outer_top, grid[top_idx],
                                          "top", grid_size)
    bot_interp, blo, bhi = _resample_edge(data.outer_bottom, -grid[bot_idx],
                                          "bottom", grid_size)
    samples[top_idx] = top_interp(np.clip(grid[top_idx], tlo, thi))
    samples[bot_idx] = bot_interp(np.clip(-grid[bot_idx], blo, bhi))
    # the corner angles have no edge preimage; clamp to the nearest sample
    samples[half] = top_interp(tlo)                   # angle 0, approached from the top
    samples[0] = bot_interp(bhi)                      # angle -pi, approached from below

    disc = DiscFactorization(float(phase), disc_zeros, atoms,
                             BoundaryLogModulus(samples))
    return StripFunction(disc, float(data.corners[0]), float(data.corners[1]), scale)
