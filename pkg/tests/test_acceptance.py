"""End-to-end acceptance checks, one per numbered criterion.

Each test prints a single PASS line with the measured numbers once its
assertions hold, so a full run reads as a ten-line scorecard.
"""

import cmath
import itertools
import math
import time

import numpy as np
import pytest

from wbpr import (
    AtomicMeasure,
    BoundaryLogModulus,
    DiscFactorization,
    FlipSelection,
    Grid1D,
    OddSingularPerturbation,
    OuterModifier,
    ReferencePoint,
    RieszSpec,
    SegmentSpec,
    StripFunction,
    ZeroMultiset,
    boundary_grid,
    check_derivation_dichotomy,
    check_lemma_conditions,
    compare_modulus,
    conclude_uniqueness,
    default_alpha,
    DerivationKind,
    disc_to_strip,
    display_alpha,
    eval_disc,
    eval_outer,
    flip_zeros,
    modify_outer,
    pauli_partner,
    perturb_singular,
    reference_solutions,
    riesz_coefficients,
    rotation_orbit_witness,
    segment_agreement,
    star,
    strip_solutions,
    strip_to_disc,
    strip_to_disc_derivative,
    strip_weight,
    trivial_solutions,
    uv_split,
)
from wbpr.errors import DominanceViolated

from helpers import random_disc, random_interior, smooth_samples

GRID = Grid1D(-2.0, 2.0, 129, "real_line")


def random_selection(rng, zeros):
    kept = []
    for i, (_, mult) in enumerate(zeros.entries):
        k = int(rng.integers(0, mult + 1))
        if k == mult:
            kept.append((i, None))
        elif k > 0:
            kept.append((i, k))
    return FlipSelection(tuple(kept))


def test_criterion_01_flip_soundness(rng):
    start = time.perf_counter()
    grid = Grid1D.default_diameter()
    worst = 0.0
    for _ in range(100):
        f = random_disc(rng)
        g = flip_zeros(f, random_selection(rng, f.zeros))
        report = compare_modulus(f, g, grid, tol=1e-9)
        worst = max(worst, report.checks[0].max_err)
        assert report.passed
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"PASS criterion 1: 100 random flips, worst modulus deviation "
          f"{worst:.3e} (tol 1e-09), {elapsed:.2f}s")


def test_criterion_02_singular_perturbations(rng):
    f = DiscFactorization(
        zeros=ZeroMultiset(((0.3 + 0.4j, 1),)),
        singular=AtomicMeasure(((1.2, 0.5), (-2.0, 0.25), (0.7, 0.125))),
        outer=BoundaryLogModulus(smooth_samples(rng, 1024)))
    menu = [
        OddSingularPerturbation(),
        OddSingularPerturbation(AtomicMeasure(((-1.2, 0.25),))),
        OddSingularPerturbation(AtomicMeasure(((2.0, 0.25),))),
        OddSingularPerturbation(AtomicMeasure(((-1.2, 0.125), (-0.7, 0.0625)))),
    ]
    grid = Grid1D.default_diameter()
    worst = 0.0
    for pert in menu:
        g = perturb_singular(f, pert)
        assert sorted(g.singular.symmetrized()) == sorted(f.singular.symmetrized())
        report = compare_modulus(f, g, grid, tol=1e-9)
        worst = max(worst, report.checks[0].max_err)
        assert report.passed

    base = DiscFactorization(singular=AtomicMeasure(((-math.pi / 2, 1.0),)),
                             outer=BoundaryLogModulus(np.zeros(1024)))
    with pytest.raises(DominanceViolated) as err:
        perturb_singular(base, OddSingularPerturbation(
            AtomicMeasure(((math.pi / 2, 2.0),))))
    assert "theta=1.5707963267948966" in str(err.value)
    assert "holds only 1.0" in str(err.value)
    print(f"PASS criterion 2: {len(menu)} sigma_plus menus exact, worst modulus "
          f"deviation {worst:.3e} (tol 1e-09); dominance rejection names the atom")


def test_criterion_03_outer_modifiers(rng):
    errs = {}
    for m in (4096, 2048):
        theta = boundary_grid(m)
        f = DiscFactorization(outer=BoundaryLogModulus(
            smooth_samples(rng, m, modes=3, scale=0.3)))
        mod = OuterModifier.odd_boundary(
            0.3 * np.sin(theta) + 0.1 * np.sin(3 * theta))
        g = modify_outer(f, mod)
        report = compare_modulus(
            f, g, Grid1D(-0.9, 0.9, 257, "disc_diameter"), tol=1e-6)
        errs[m] = report.checks[0].max_err
    assert errs[4096] <= 1e-6
    assert errs[2048] <= 2e-6
    print(f"PASS criterion 3: odd modifier deviation {errs[4096]:.3e} at M=4096 "
          f"(tol 1e-06), {errs[2048]:.3e} at M=2048 (tol 2e-06)")


def test_criterion_04_uv_split(rng):
    worst = 0.0
    for trial in range(20):
        f = random_disc(rng, max_zeros=4, max_atoms=2)
        sel = random_selection(rng, f.zeros)
        pert = OddSingularPerturbation()
        theta = boundary_grid(f.outer.grid_size)
        mod = OuterModifier.odd_boundary(
            float(rng.uniform(0.05, 0.3)) * np.sin(theta))
        g = modify_outer(perturb_singular(flip_zeros(f, sel), pert), mod)
        u_fn, v_fn = uv_split(f, sel, pert, mod)
        w = random_interior(rng, 32)
        fw = eval_disc(f, w)
        gw = eval_disc(g, w)
        uv = np.asarray(u_fn(w)) * np.asarray(v_fn(w))
        uvs = np.asarray(u_fn(w)) * np.asarray(star(v_fn)(w))
        worst = max(worst,
                    float(np.max(np.abs(uv - fw) / np.abs(fw))),
                    float(np.max(np.abs(uvs - gw) / np.abs(gw))))
    assert worst < 1e-8
    print(f"PASS criterion 4: f = u*v and g = u*v_star over 20 triples x 32 "
          f"points, worst relative error {worst:.3e} (tol 1e-08)")


def test_criterion_05_strip_transfer(rng):
    start = time.perf_counter()
    z = (rng.uniform(-5.0, 5.0, 200) + 1j * rng.uniform(-0.99, 0.99, 200))
    err_round = np.max(np.abs(disc_to_strip(strip_to_disc(z)) - z))
    w = random_interior(rng, 200, rmax=0.999)
    err_round = max(err_round,
                    float(np.max(np.abs(strip_to_disc(disc_to_strip(w)) - w))))
    assert err_round < 1e-12

    err_wphi = np.max(np.abs(
        strip_weight(z) * strip_to_disc_derivative(z) - math.pi)) / math.pi
    assert err_wphi < 1e-10

    flat = DiscFactorization(outer=BoundaryLogModulus(np.zeros(2048)))
    bare = StripFunction(flat)
    corner = StripFunction(flat, corner_plus=0.375, corner_minus=0.125)
    zc = (rng.uniform(-2.5, 2.5, 100) + 1j * rng.uniform(-0.7, 0.7, 100))
    direct = np.exp(-0.375 * np.exp(0.5 * math.pi * zc)
                    - 0.125 * np.exp(-0.5 * math.pi * zc))
    ratio = np.asarray(corner(zc)) / np.asarray(bare(zc))
    err_corner = np.max(np.abs(ratio - direct) / np.abs(direct))
    assert err_corner < 1e-12

    theta = boundary_grid(4096)
    boundary = (2.0 - np.exp(1j * theta)) * (1.5 + 0.6 * np.exp(1j * theta))
    outer = BoundaryLogModulus(np.log(np.abs(boundary)))
    pts = random_interior(rng, 64, rmax=0.9)
    target = np.abs((2.0 - pts) * (1.5 + 0.6 * pts))
    got = np.abs(eval_outer(outer, pts))
    err_outer = np.max(np.abs(got - target) / target)
    assert err_outer < 1e-6

    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"PASS criterion 5: round trip {err_round:.1e} (1e-12), W*phi'=pi "
          f"{err_wphi:.1e} (1e-10), corner {err_corner:.1e} (1e-12), "
          f"outer oracle {err_outer:.1e} (1e-06), {elapsed:.2f}s")


def test_criterion_06_pauli_family():
    start = time.perf_counter()
    alphas = display_alpha(4)
    patterns = list(itertools.product((-1, 1), repeat=4))
    assert len(patterns) == 16
    xgrid = np.linspace(0.0, 1.0, 64)
    xigrid = np.linspace(-30.0, 30.0, 241)
    signals = [pauli_partner(RieszSpec(alphas, s)) for s in patterns]
    times = [sig.time(xgrid) for sig in signals]
    freqs = [sig.freq(xigrid) for sig in signals]
    moduli = [sig.table.moduli() for sig in signals]
    env = np.abs(signals[0].envelope.time(xgrid))
    mask = env > 1e-12

    worst_t = worst_s = 0.0
    worst_ratio = math.inf
    for i, j in itertools.combinations(range(16), 2):
        scale = np.maximum(np.abs(times[i]), 1e-300)
        worst_t = max(worst_t, float(np.max(
            np.abs(np.abs(times[j]) - np.abs(times[i])) / scale)))
        worst_s = max(worst_s, float(np.max(
            np.abs(np.abs(freqs[j]) - np.abs(freqs[i])))))
        assert moduli[i] == moduli[j]
        ratio = times[j][mask] / times[i][mask]
        mean = np.mean(ratio)
        spread = float(np.max(np.abs(ratio - mean)) / abs(mean))
        worst_ratio = min(worst_ratio, spread)
    assert worst_t <= 1e-13
    assert worst_s <= 1e-12
    assert worst_ratio >= 1e-6

    for depth in range(1, 5):
        table = riesz_coefficients(RieszSpec.all_plus(default_alpha(depth)))
        for k, v in table.entries.items():
            assert abs(v) <= math.exp(-2.0 * abs(k))

    elapsed = time.perf_counter() - start
    assert elapsed < 2.0
    print(f"PASS criterion 6: 16 patterns, time moduli {worst_t:.1e} (1e-13), "
          f"spectral {worst_s:.1e} (1e-12), tables bit-for-bit, min ratio "
          f"variation {worst_ratio:.1e} (>= 1e-06), decay bound at N<=4, "
          f"{elapsed:.2f}s")


def quadratic_circle_solver(c, r1, r2):
    """Brute-force oracle: intersect |z| = r1 with |z - c| = r2."""
    d = abs(c)
    u = (r1 * r1 + d * d - r2 * r2) / (2.0 * d)
    v = math.sqrt(max(r1 * r1 - u * u, 0.0))
    direction = c / d
    return direction * complex(u, v), direction * complex(u, -v)


def test_criterion_07_reference_coupling(rng):
    worst_residual = 0.0
    worst_oracle = 0.0
    done = 0
    while done < 1000:
        fx = complex(*rng.standard_normal(2))
        hx = complex(*rng.standard_normal(2))
        if abs(hx) < 1e-3:
            continue
        done += 1
        pair = ReferencePoint(fx, hx)
        ours = reference_solutions(pair)
        for g in ours:
            worst_residual = max(
                worst_residual,
                abs(abs(g) - abs(fx)),
                abs(abs(g - hx) - abs(fx - hx)))
        oracle = quadratic_circle_solver(hx, abs(fx), abs(fx - hx))
        for g in ours:
            worst_oracle = max(worst_oracle, min(abs(g - t) for t in oracle))
    assert worst_residual <= 1e-12
    assert worst_oracle <= 1e-10
    print(f"PASS criterion 7: 1000 pairs, worst circle residual "
          f"{worst_residual:.1e} (1e-12), worst oracle gap {worst_oracle:.1e} "
          f"(1e-10)")


def strip_fixture():
    disc = DiscFactorization(
        zeros=ZeroMultiset(((0.3 + 0.4j, 1),)),
        singular=AtomicMeasure(()),
        outer=BoundaryLogModulus(np.zeros(2048)))
    return StripFunction(disc)


def test_criterion_08_derivation_dichotomy():
    f = strip_fixture()
    kind = DerivationKind.derivative()

    doubled = check_derivation_dichotomy(
        f, lambda z: 2.0 * np.asarray(f(z)), kind, GRID)
    assert doubled.branch == "constant_ratio"
    assert abs(doubled.beta - 2.0) <= 1e-8

    starred = check_derivation_dichotomy(f, f.star(), kind, GRID)
    assert starred.branch == "constant_ratio_star"
    assert abs(starred.beta - 1.0) <= 1e-8

    twisted = trivial_solutions(f, 1.0, eta=2.0 * math.pi)
    shifted = check_derivation_dichotomy(f, twisted, DerivationKind.shift(1.0), GRID)
    assert shifted.branch == "periodic_factor"
    x = GRID.points()
    err_v = float(np.max(np.abs(shifted.factor_values - np.exp(2j * math.pi * x))))
    assert err_v <= 1e-8
    print(f"PASS criterion 8: 2f -> constant_ratio (beta err "
          f"{abs(doubled.beta - 2.0):.1e}), f_star -> constant_ratio_star "
          f"(beta err {abs(starred.beta - 1.0):.1e}), exp(2 pi i z) f -> "
          f"periodic_factor (V err {err_v:.1e}, tol 1e-08)")


def test_criterion_09_segment_uniqueness():
    f = strip_fixture()
    c = cmath.exp(0.7j)
    g = trivial_solutions(f, c)
    seg = SegmentSpec(theta=1.0)
    res = conclude_uniqueness(f, g, seg, GRID)
    assert res.status == "unique"
    err_c = abs(res.constant - c)
    assert err_c <= 1e-10

    flipped = strip_solutions(f, sel=FlipSelection.keep_none())
    dev = segment_agreement(f, flipped, seg).checks[0].max_err
    assert dev > 1e-6

    shared = rotation_orbit_witness(f.disc.zeros, g.disc.zeros, theta=1.0)
    assert shared.difference == []
    assert shared.verdict == "consistent_with_uniqueness"
    distinct = rotation_orbit_witness(f.disc.zeros, flipped.disc.zeros, theta=1.0)
    assert distinct.difference != []
    assert distinct.verdict != "consistent_with_uniqueness"
    print(f"PASS criterion 9: constant recovered to {err_c:.1e} (1e-10), flip "
          f"segment deviation {dev:.3e} (> 1e-06), orbit witness empty exactly "
          f"for shared zeros")


def test_criterion_10_lemma_conditions(rng):
    f = DiscFactorization(
        zeros=ZeroMultiset(((0.3 + 0.4j, 2), (-0.2, 1))),
        singular=AtomicMeasure(((1.2, 0.5), (-0.7, 0.25))),
        outer=BoundaryLogModulus(smooth_samples(rng, 1024)))
    theta = boundary_grid(1024)
    pairs = [
        flip_zeros(f, FlipSelection.keep_none()),
        flip_zeros(f, FlipSelection(((0, 1),))),
        perturb_singular(f, OddSingularPerturbation(
            AtomicMeasure(((-1.2, 0.25),)))),
        modify_outer(f, OuterModifier.odd_boundary(0.2 * np.sin(theta))),
        modify_outer(perturb_singular(
            flip_zeros(f, FlipSelection.keep_none()),
            OddSingularPerturbation(AtomicMeasure(((0.7, 0.125),)))),
            OuterModifier.odd_boundary(0.1 * np.sin(2 * theta))),
    ]
    for g in pairs:
        report = check_lemma_conditions(f, g)
        assert report.passed, [c.name for c in report.checks if not c.passed]

    corrupted = DiscFactorization(
        phase=f.phase,
        zeros=ZeroMultiset(f.zeros.entries + ((0.5, 1),)),
        singular=f.singular,
        outer=f.outer)
    report = check_lemma_conditions(f, corrupted)
    assert not report.check("zeros_symmetrized").passed
    assert report.check("measures_symmetrized").passed
    assert report.check("outer_symmetrized").passed
    print(f"PASS criterion 10: {len(pairs)} generated pairs pass all three "
          f"conditions; an extra zero fails condition (i) and only (i)")
