"""Shared builders for randomized factored specs.

Masses are dyadic (k/16) so that atom sums and differences stay exact
in binary floating point; the symmetrized-measure identities are checked
with exact equality downstream.
"""

import numpy as np

from wbpr import (
    AtomicMeasure,
    BoundaryLogModulus,
    DiscFactorization,
    ZeroMultiset,
    boundary_grid,
)

DYADIC = tuple(k / 16 for k in range(1, 9))


def smooth_samples(rng, grid_size, modes=4, scale=0.2):
    theta = boundary_grid(grid_size)
    out = np.zeros(grid_size)
    for k in range(1, modes + 1):
        out += rng.normal(0, scale) * np.cos(k * theta)
        out += rng.normal(0, scale) * np.sin(k * theta)
    out += rng.normal(0, scale)
    return out


def random_zeros(rng, max_zeros=6, allow_real=True):
    entries = []
    for _ in range(int(rng.integers(1, max_zeros + 1))):
        r = rng.uniform(0.1, 0.8)
        if allow_real and rng.uniform() < 0.25:
            point = complex(r * rng.choice((-1.0, 1.0)), 0.0)
        else:
            point = r * np.exp(1j * rng.uniform(-np.pi, np.pi))
        entries.append((complex(point), int(rng.integers(1, 3))))
    return ZeroMultiset(tuple(entries))


def random_atoms(rng, max_atoms=3):
    # angles stay 0.2 away from the real axis so conjugate pairs are distinct
    atoms = []
    for _ in range(int(rng.integers(0, max_atoms + 1))):
        theta = rng.uniform(0.2, np.pi - 0.2) * rng.choice((-1.0, 1.0))
        atoms.append((float(theta), float(rng.choice(DYADIC))))
    return AtomicMeasure(tuple(atoms))


def random_disc(rng, max_zeros=6, max_atoms=3, grid_size=1024):
    return DiscFactorization(
        phase=float(rng.uniform(-np.pi, np.pi)),
        zeros=random_zeros(rng, max_zeros),
        singular=random_atoms(rng, max_atoms),
        outer=BoundaryLogModulus(smooth_samples(rng, grid_size)),
    )


def random_interior(rng, count, rmax=0.85):
    r = np.sqrt(rng.uniform(0.0, rmax**2, count))
    return r * np.exp(1j * rng.uniform(-np.pi, np.pi, count))
