import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wbpr import (
    AtomicMeasure,
    BoundaryLogModulus,
    DiscFactorization,
    ZeroMultiset,
    blaschke_factor,
    boundary_grid,
    eval_blaschke,
    eval_disc,
    eval_outer,
    eval_singular_inner,
    factorize_polynomial,
    odd_part,
    reflect_samples,
    star,
)
from wbpr.errors import DomainError, QuadratureAccuracyWarning, RootOnCircle

from helpers import random_disc, random_interior


@pytest.mark.parametrize("alpha, w, expected", [
    (0.5, 0.5, 0.0),
    (0.5, 0.0, 0.5),
    (0.0, 0.3j, 0.3j),
    (0.3j, 0.3j, 0.0),
])
def test_blaschke_factor_values(alpha, w, expected):
    assert blaschke_factor(alpha, w) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("alpha, w", [(1.0, 0.0), (0.0, 1.0), (2.0, 0.5), (0.5, -1.5)])
def test_blaschke_factor_domain(alpha, w):
    with pytest.raises(DomainError):
        blaschke_factor(alpha, w)


@given(
    st.floats(min_value=0.0, max_value=0.95),
    st.floats(min_value=-math.pi, max_value=math.pi),
    st.floats(min_value=0.0, max_value=0.95),
    st.floats(min_value=-math.pi, max_value=math.pi),
)
def test_blaschke_factor_contracts(ra, ta, rw, tw):
    alpha = ra * cmath.exp(1j * ta)
    w = rw * cmath.exp(1j * tw)
    assert abs(blaschke_factor(alpha, w)) < 1.0
    assert abs(blaschke_factor(alpha, alpha)) < 1e-12


def test_eval_blaschke_empty_product():
    assert eval_blaschke(ZeroMultiset(), 0.7j) == 1.0


def test_eval_blaschke_multiplicity():
    zeros = ZeroMultiset(((0.5, 2),))
    assert eval_blaschke(zeros, 0.0) == pytest.approx(0.25, abs=1e-15)


def test_eval_blaschke_near_boundary_unimodular():
    zeros = ZeroMultiset(((0.5, 1),))
    # stay 0.1 rad away from the zero direction (angle 0)
    theta = np.linspace(0.1, 2 * np.pi - 0.1, 45)
    vals = eval_blaschke(zeros, 0.9999 * np.exp(1j * theta))
    assert np.all(np.abs(np.abs(vals) - 1.0) < 1e-3)


@pytest.mark.parametrize("measure, w, expected", [
    (AtomicMeasure(((0.0, 1.0),)), 0.0, math.exp(-1.0)),
    (AtomicMeasure(), 0.3 + 0.1j, 1.0),
    (AtomicMeasure(((0.0, 1.0),)), 0.9, math.exp(-19.0)),
])
def test_singular_inner_values(measure, w, expected):
    assert eval_singular_inner(measure, w) == pytest.approx(expected, rel=1e-12)


def test_singular_inner_central_value(rng):
    measure = AtomicMeasure(((1.3, 0.5), (-0.7, 0.25), (2.9, 0.125)))
    assert abs(eval_singular_inner(measure, 0.0) - math.exp(-measure.total_mass)) < 1e-12


def test_outer_flat_is_constant_one():
    data = BoundaryLogModulus(np.zeros(256))
    assert eval_outer(data, 0.3 + 0.1j) == pytest.approx(1.0, abs=1e-12)


def test_outer_polynomial_center():
    theta = boundary_grid(1024)
    data = BoundaryLogModulus(np.log(np.abs(2.0 - np.exp(1j * theta))))
    assert eval_outer(data, 0.0) == pytest.approx(2.0, rel=1e-9)


def test_outer_constant_modulus():
    data = BoundaryLogModulus(np.full(512, math.log(3.0)))
    assert eval_outer(data, 0.5) == pytest.approx(3.0, rel=1e-12)


def test_outer_central_value_is_sample_mean(rng):
    from helpers import smooth_samples

    samples = smooth_samples(rng, 512)
    data = BoundaryLogModulus(samples)
    assert abs(eval_outer(data, 0.0) - math.exp(samples.mean())) < 1e-12


def test_outer_oracle_zero_free_polynomial():
    # P nonvanishing on the closed disc: roots 2.0 and -2.5
    theta = boundary_grid(4096)
    circle = np.exp(1j * theta)

    def poly(w):
        return (2.0 - w) * (1.5 + 0.6 * w)

    data = BoundaryLogModulus(np.log(np.abs(poly(circle))))
    rng = np.random.default_rng(7)
    w = random_interior(rng, 64, rmax=0.9)
    got = eval_outer(data, w)
    want = poly(w)
    assert np.max(np.abs(np.abs(got) - np.abs(want)) / np.abs(want)) < 1e-6
    ratio = got / want
    assert np.max(np.abs(ratio - ratio[0])) < 1e-6


def test_outer_quadrature_warning():
    data = BoundaryLogModulus(np.zeros(64))
    with pytest.warns(QuadratureAccuracyWarning):
        eval_outer(data, 0.95)


@pytest.mark.parametrize("spec, w, expected", [
    (DiscFactorization(outer=BoundaryLogModulus(np.zeros(64))), 0.2, 1.0),
    (DiscFactorization(zeros=ZeroMultiset(((0.5, 1),)),
                       outer=BoundaryLogModulus(np.zeros(64))), 0.0, 0.5),
    (DiscFactorization(phase=math.pi / 2,
                       outer=BoundaryLogModulus(np.zeros(64))), 0.7j, 1j),
])
def test_eval_disc_compositions(spec, w, expected):
    assert eval_disc(spec, w) == pytest.approx(expected, abs=1e-12)


def test_star_is_involution(rng):
    spec = random_disc(rng)
    assert star(star(spec)) == spec


def test_star_conjugates_zeros_and_atoms():
    spec = DiscFactorization(
        zeros=ZeroMultiset(((0.3 + 0.2j, 1),)),
        singular=AtomicMeasure(((math.pi / 2, 0.5),)),
        outer=BoundaryLogModulus(np.zeros(64)),
    )
    flipped = star(spec)
    assert flipped.zeros.entries == ((0.3 - 0.2j, 1),)
    assert flipped.singular.atoms == ((-math.pi / 2, 0.5),)


def test_star_evaluation_identity(rng):
    spec = random_disc(rng)
    w = random_interior(rng, 32, rmax=0.85)
    lhs = eval_disc(star(spec), w)
    rhs = np.conj(eval_disc(spec, np.conj(w)))
    assert np.max(np.abs(lhs - rhs) / np.abs(rhs)) < 1e-10


def test_factorize_linear():
    spec = factorize_polynomial([-0.5, 1.0])
    assert spec.zeros.entries == ((0.5, 1),)
    rng = np.random.default_rng(3)
    w = random_interior(rng, 64, rmax=0.8)
    ratio = eval_disc(spec, w) / (w - 0.5)
    assert np.max(np.abs(np.abs(ratio) - 1.0)) < 1e-6
    assert np.max(np.abs(ratio - ratio[0])) < 1e-6


def test_factorize_constant():
    spec = factorize_polynomial([2.0], grid_size=256)
    assert spec.zeros.count == 0
    np.testing.assert_allclose(spec.outer.samples, math.log(2.0), atol=1e-12)


def test_factorize_monomial():
    spec = factorize_polynomial([0.0, 0.0, 1.0], grid_size=256)
    assert spec.zeros.entries == ((0.0, 2),)
    np.testing.assert_allclose(spec.outer.samples, 0.0, atol=1e-10)


def test_factorize_rejects_circle_roots():
    with pytest.raises(RootOnCircle):
        factorize_polynomial([-1.0, 1.0])


def test_factorize_mixed_roots_matches_polynomial():
    # roots at 0.4, -0.3+0.5j inside and 1.7 outside
    coeffs = np.poly((0.4, -0.3 + 0.5j, 1.7))[::-1]
    spec = factorize_polynomial(list(coeffs))
    rng = np.random.default_rng(11)
    w = random_interior(rng, 64, rmax=0.8)
    values = np.polyval(coeffs[::-1], w)
    ratio = eval_disc(spec, w) / values
    assert np.max(np.abs(np.abs(ratio) - 1.0)) < 1e-6


def test_reflect_and_odd_part_are_exact(rng):
    samples = rng.normal(size=512)
    reflected = reflect_samples(samples)
    assert reflected[0] == samples[0]
    odd = odd_part(samples)
    assert odd[0] == 0.0
    assert odd[256] == 0.0
    np.testing.assert_array_equal(odd_part(odd), odd)
    np.testing.assert_array_equal(reflect_samples(odd), -odd)


def test_boundary_grid_is_antisymmetric():
    theta = boundary_grid(256)
    assert theta[128] == 0.0
    # every positive angle pairs with its negation on the grid
    np.testing.assert_allclose(np.sort(-theta[1:]), np.sort(theta[1:]), atol=0)
