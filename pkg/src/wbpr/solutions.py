"""Constructions that preserve modulus on the line.

Three moves generate the full family of companions of a factored
function: conjugating a subset of its zeros, moving singular mass to
conjugate-reflected positions, and multiplying the outer part by a
factor with odd boundary log-modulus.  Composed with a unimodular
constant and the exponential twist ``exp(i*eta*z)`` these exhaust the
functions sharing |f| on the real axis.

The u/v splitting expresses any such companion pair as ``f = u*v`` and
``g = u*conj-reflected(v)``; the intermediate v-part is the one place a
signed atomic measure is allowed to appear.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, DominanceViolated, NotUnimodular, OddnessViolated
from .hardy import (
    AtomicMeasure,
    BoundaryLogModulus,
    DiscFactorization,
    ZeroMultiset,
    canonical_angle,
    odd_part,
    reflect_samples,
)
from .harness import Grid1D, compare_modulus
from .strip import StripFunction

ODDNESS_TOL = 1e-12
UNIMODULAR_TOL = 1e-12


@dataclass(frozen=True)
class FlipSelection:
    """Which zero-multiset entries to keep; the rest get conjugated.

    ``kept`` maps an entry index of the canonical zero list to the number
    of copies that stay in place.  Indices absent from the map are fully
    conjugated.  ``None`` counts mean "all copies of that entry".
    """

    kept: tuple[tuple[int, int | None], ...] = ()

    def __post_init__(self):
        seen = set()
        for idx, cnt in self.kept:
            if idx in seen:
                raise ValueError(f"duplicate flip index {idx}")
            seen.add(idx)
            if cnt is not None and cnt < 0:
                raise ValueError("kept counts must be non-negative")
        object.__setattr__(self, "kept", tuple(sorted(self.kept)))

    @classmethod
    def keep_all(cls, zeros: ZeroMultiset) -> "FlipSelection":
        return cls(tuple((i, None) for i in range(len(zeros.entries))))

    @classmethod
    def keep_none(cls) -> "FlipSelection":
        return cls(())

    @classmethod
    def from_indices(cls, indices) -> "FlipSelection":
        return cls(tuple((int(i), None) for i in indices))

    def kept_count(self, index: int, mult: int) -> int:
        for idx, cnt in self.kept:
            if idx == index:
                return mult if cnt is None else cnt
        return 0


def flip_zeros(f: DiscFactorization, sel: FlipSelection) -> DiscFactorization:
    """Keep the selected zeros, conjugate the rest.

    Real zeros are their own conjugates, so flips on them are no-ops.
    Keeping every entry returns f itself; keeping none yields the fully
    reflected zero set.
    """
    entries = f.zeros.entries
    for idx, _ in sel.kept:
        if not 0 <= idx < len(entries):
            raise IndexError(f"flip index {idx} out of range for {len(entries)} entries")
    new_entries: list[tuple[complex, int]] = []
    for i, (alpha, mult) in enumerate(entries):
        k = sel.kept_count(i, mult)
        if k > mult:
            raise ValueError(
                f"cannot keep {k} copies of entry {i}; multiplicity is {mult}")
        if k > 0:
            new_entries.append((alpha, k))
        if mult - k > 0:
            new_entries.append((alpha.conjugate(), mult - k))
    return DiscFactorization(f.phase, ZeroMultiset(tuple(new_entries)),
                             f.singular, f.outer)


@dataclass(frozen=True)
class OddSingularPerturbation:
    """Mass sigma_plus to add; the same mass leaves the conjugate positions.

    The support must be disjoint from its own conjugate reflection, which
    rules out atoms on the real axis (angles 0 and pi) and conjugate
    pairs inside the support.
    """

    sigma_plus: AtomicMeasure = field(default_factory=AtomicMeasure)

    def __post_init__(self):
        angles = [t for t, _ in self.sigma_plus.atoms]
        for t in angles:
            if t == 0.0 or abs(t) == math.pi:
                raise ValueError(
                    f"sigma_plus atom at theta={t} lies on the real axis; "
                    "its conjugate reflection would coincide with it")
        for t in angles:
            if canonical_angle(-t) in angles:
                raise ValueError(
                    f"sigma_plus atoms at theta={t} and theta={-t} overlap with "
                    "their conjugate reflection; the support must avoid its mirror")


def perturb_singular(f: DiscFactorization,
                     p: OddSingularPerturbation) -> DiscFactorization:
    """Move singular mass to conjugate-reflected positions.

    For every atom (theta, m) of sigma_plus the base measure must hold at
    least mass m at -theta; that much is removed there and deposited at
    theta.  The conjugation-symmetrized measure is untouched, atom for
    atom, in exact float arithmetic.
    """
    base = {t: m for t, m in f.singular.atoms}
    for theta, mass in p.sigma_plus.atoms:
        avail = base.get(canonical_angle(-theta), 0.0)
        if avail < mass:
            raise DominanceViolated(
                f"sigma_plus atom at theta={theta} needs mass {mass} but the "
                f"base measure holds only {avail} at theta={canonical_angle(-theta)}")
    moved = f.singular.add(p.sigma_plus).add(p.sigma_plus.conjugate().scaled(-1.0))
    moved = AtomicMeasure(moved.atoms)     # re-validate as a positive measure
    return DiscFactorization(f.phase, f.zeros, moved, f.outer)


@dataclass(frozen=True)
class OuterModifier:
    """Outer multiplier with odd boundary log-modulus.

    Three kinds: ``exponential`` is the strip-side factor exp(i*eta*z)
    (constant log-modulus -eta on the top edge, +eta on the bottom, so it
    never touches the sampled disc data and is applied at strip
    evaluation time); ``star_quotient`` divides the reflected outer by
    the outer, which always has odd boundary data; ``odd_boundary``
    supplies an explicit odd sample array.
    """

    kind: str
    eta: float = 0.0
    samples: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("exponential", "star_quotient", "odd_boundary"):
            raise ValueError(f"unknown outer modifier kind {self.kind!r}")
        if self.kind == "odd_boundary":
            arr = np.array(self.samples, dtype=float)
            if arr.ndim != 1 or arr.size < 4 or arr.size & (arr.size - 1):
                raise ValueError("odd_boundary needs a power-of-two sample array")
            err = float(np.max(np.abs(arr + reflect_samples(arr))))
            if err > ODDNESS_TOL:
                raise OddnessViolated(
                    f"boundary samples are not odd on the grid (defect {err:.3e})")
            arr.setflags(write=False)
            object.__setattr__(self, "samples", arr)
        elif self.samples is not None:
            raise ValueError(f"kind {self.kind!r} takes no sample array")

    @classmethod
    def exponential(cls, eta: float) -> "OuterModifier":
        return cls("exponential", eta=float(eta))

    @classmethod
    def star_quotient(cls) -> "OuterModifier":
        return cls("star_quotient")

    @classmethod
    def odd_boundary(cls, samples) -> "OuterModifier":
        return cls("odd_boundary", samples=samples)

    def log_modulus_for(self, f: DiscFactorization) -> np.ndarray:
        """The odd sample array this modifier adds to f's outer data."""
        if self.kind == "star_quotient":
            return reflect_samples(f.outer.samples) - f.outer.samples
        if self.kind == "odd_boundary":
            if self.samples.size != f.outer.grid_size:
                raise ValueError(
                    f"modifier has {self.samples.size} samples but the "
                    f"factorization grid has {f.outer.grid_size}")
            return self.samples
        raise ValueError(
            "the exponential modifier acts at strip evaluation time; apply it "
            "through strip-side solutions, not on disc outer data")


def modify_outer(f: DiscFactorization, u: OuterModifier) -> DiscFactorization:
    """Multiply the outer part by a factor with odd boundary log-modulus."""
    return f.with_outer(f.outer.plus(u.log_modulus_for(f)))


def trivial_solutions(f: StripFunction, c: complex = 1.0, eta: float = 0.0,
                      use_star: bool = False) -> StripFunction:
    """The companions c * exp(i*eta*z) * f and c * exp(i*eta*z) * f*.

    c must be unimodular; eta must be real.  These transformations never
    change |f| on the real axis.
    """
    c = complex(c)
    if abs(abs(c) - 1.0) > UNIMODULAR_TOL:
        raise NotUnimodular(f"|c| = {abs(c)} is not 1 within {UNIMODULAR_TOL}")
    g = f.star() if use_star else f
    disc = g.disc.with_phase(g.disc.phase + cmath.phase(c))
    return StripFunction(disc, g.corner_plus, g.corner_minus, g.scale,
                         g.eta + float(eta))


def strip_solutions(f: StripFunction,
                    sel: FlipSelection | None = None,
                    perturbation: OddSingularPerturbation | None = None,
                    modifier: OuterModifier | None = None) -> StripFunction:
    """Apply flip / singular-perturbation / outer moves to a strip function.

    The moves act on the underlying disc data; corner masses, the scale
    and any existing exponential twist ride along unchanged.  An
    ``exponential`` modifier adds to the twist instead of touching the
    sampled outer data.
    """
    disc = f.disc
    if sel is not None:
        disc = flip_zeros(disc, sel)
    if perturbation is not None:
        disc = perturb_singular(disc, perturbation)
    eta = f.eta
    if modifier is not None:
        if modifier.kind == "exponential":
            eta += modifier.eta
        else:
            disc = modify_outer(disc, modifier)
    return StripFunction(disc, f.corner_plus, f.corner_minus, f.scale, eta)


@dataclass(frozen=True)
class SolutionRequest:
    """One companion, described by its deviation from the base function."""

    flip: FlipSelection | None = None
    sigma_plus: OddSingularPerturbation | None = None
    outer: OuterModifier | None = None
    phase: float = 0.0
    eta: float = 0.0
    star: bool = False


def build_solution(f: StripFunction, req: SolutionRequest) -> StripFunction:
    """Realize a solution request: star first, then flips, mass moves,
    outer modifier, and finally the constant phase and exponential twist."""
    g = f.star() if req.star else f
    g = strip_solutions(g, req.flip, req.sigma_plus, req.outer)
    if req.phase != 0.0 or req.eta != 0.0:
        g = trivial_solutions(g, cmath.exp(1j * req.phase), req.eta)
    return g


def _flip_choices(zeros: ZeroMultiset) -> list[list[tuple[int, int]]]:
    """Per-entry (index, kept) options; real zeros contribute one option."""
    options: list[list[tuple[int, int]]] = []
    for i, (alpha, mult) in enumerate(zeros.entries):
        if alpha.imag == 0.0:
            options.append([(i, mult)])
        else:
            options.append([(i, k) for k in range(mult + 1)])
    return options


def enumerate_solutions(f: StripFunction, flip_cap: int = 4096,
                        sigma_menu=(), outer_menu=(),
                        verify: bool = True,
                        verify_grid: Grid1D | None = None,
                        budget: int = 100_000,
                        rng: np.random.Generator | None = None
                        ) -> list[StripFunction]:
    """Enumerate companions over flip subsets and optional move menus.

    Every subset of the zero multiset (with partial multiplicities) is
    combined with each singular perturbation and each outer modifier;
    the identity move is always included in both menus.  When the flip
    lattice exceeds ``flip_cap`` a seeded sample of that many subsets is
    drawn instead of the full lattice.  The total combination count is
    bounded by ``budget``.  Results are deduplicated up to a unimodular
    constant, and (unless ``verify=False``) each survivor is checked to
    share modulus with f on the verification grid.
    """
    options = _flip_choices(f.disc.zeros)
    lattice = 1
    for opt in options:
        lattice *= len(opt)
    sigma_choices = [None, *sigma_menu]
    outer_choices = [None, *outer_menu]
    n_flip = min(lattice, flip_cap)
    total = n_flip * len(sigma_choices) * len(outer_choices)
    if total > budget:
        raise BudgetExceeded(
            f"{total} combinations exceed the budget of {budget}; tighten "
            "flip_cap or the menus")

    if lattice <= flip_cap:
        flip_iter = itertools.product(*options) if options else [()]
    else:
        rng = rng or np.random.default_rng(0)
        picks = set()
        draws = 0
        while len(picks) < flip_cap and draws < 50 * flip_cap:
            choice = tuple(opt[rng.integers(len(opt))] for opt in options)
            picks.add(choice)
            draws += 1
        flip_iter = sorted(picks)

    solutions: list[StripFunction] = []
    for combo in flip_iter:
        sel = FlipSelection(tuple(combo))
        for sigma in sigma_choices:
            for mod in outer_choices:
                g = strip_solutions(f, sel, sigma, mod)
                if not any(_same_up_to_constant(g, kept) for kept in solutions):
                    solutions.append(g)

    if verify:
        grid = verify_grid or Grid1D.default_real()
        for g in solutions:
            report = compare_modulus(f, g, grid, tol=1e-6)
            if not report.passed:
                raise RuntimeError(
                    "constructed companion fails the modulus check: "
                    + "; ".join(report.lines()))
    return solutions


_DEDUP_PROBES = np.linspace(-1.5, 1.5, 16)


def _same_up_to_constant(a: StripFunction, b: StripFunction) -> bool:
    if a.scale != b.scale or a.eta != b.eta:
        return False
    if a.corner_plus != b.corner_plus or a.corner_minus != b.corner_minus:
        return False
    da, db = a.disc, b.disc
    structural = (
        da.zeros.entries == db.zeros.entries
        and da.singular.atoms == db.singular.atoms
        and da.outer.grid_size == db.outer.grid_size
        and bool(np.all(np.abs(da.outer.samples - db.outer.samples) <= 1e-12)))
    if not structural:
        return False
    va = a(_DEDUP_PROBES)
    vb = b(_DEDUP_PROBES)
    mask = (np.abs(va) > 1e-14) & (np.abs(vb) > 1e-14)
    if not np.any(mask):
        return True
    ratio = va[mask] / vb[mask]
    mean = np.mean(ratio)
    if abs(mean) < 1e-14:
        return False
    return float(np.var(ratio) / abs(mean) ** 2) < 1e-16


def uv_split(f: DiscFactorization,
             sel: FlipSelection | None = None,
             perturbation: OddSingularPerturbation | None = None,
             modifier: OuterModifier | None = None
             ) -> tuple[DiscFactorization, DiscFactorization]:
    """Split f into u, v with f = u*v and companion g = u*star(v).

    u carries the kept zeros, the measure ``nu_f + (sigma - conj(sigma))/2``
    (still positive under the dominance rule), the full outer part and
    half of the modifier; v carries the conjugated-away zeros, the signed
    measure ``(conj(sigma) - sigma)/2`` and the other half of the
    modifier inverted.  Multiplying u by v restores f exactly; replacing
    v by its star gives the companion built from the same moves.
    """
    zeros = f.zeros
    sel = sel or FlipSelection.keep_all(zeros)
    kept_entries: list[tuple[complex, int]] = []
    flip_entries: list[tuple[complex, int]] = []
    for i, (alpha, mult) in enumerate(zeros.entries):
        k = sel.kept_count(i, mult)
        if k > mult:
            raise ValueError(
                f"cannot keep {k} copies of entry {i}; multiplicity is {mult}")
        if k > 0:
            kept_entries.append((alpha, k))
        if mult - k > 0:
            flip_entries.append((alpha, mult - k))

    sigma = (perturbation.sigma_plus if perturbation is not None
             else AtomicMeasure())
    if perturbation is not None:
        # reuse the dominance validation
        perturb_singular(f, perturbation)
    half_move = sigma.scaled(0.5).add(sigma.conjugate().scaled(-0.5))
    nu1 = AtomicMeasure(f.singular.add(half_move).atoms)
    nu2 = sigma.conjugate().scaled(0.5).add(sigma.scaled(-0.5))

    if modifier is None:
        half_u = np.zeros(f.outer.grid_size)
    else:
        half_u = odd_part(modifier.log_modulus_for(f) / 2.0)

    u = DiscFactorization(f.phase, ZeroMultiset(tuple(kept_entries)),
                          nu1, f.outer.plus(half_u))
    v = DiscFactorization(0.0, ZeroMultiset(tuple(flip_entries)),
                          nu2, BoundaryLogModulus(-half_u))
    return u, v
