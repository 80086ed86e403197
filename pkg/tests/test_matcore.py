import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tord.errors import UsageError, ValidationError
from tord.matcore import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    as_matrix,
    as_state,
    commutator,
    expm_hermitian_generator,
    frobenius_distance,
    ordered_product,
    unitarity_defect,
)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def test_commutator_examples():
    assert np.array_equal(commutator(SIGMA_X, SIGMA_X), np.zeros((2, 2)))
    np.testing.assert_allclose(commutator(SIGMA_X, SIGMA_Y), 2j * SIGMA_Z, atol=0)
    a = np.arange(9).reshape(3, 3) * (1 + 2j)
    assert np.array_equal(commutator(a, np.eye(3)), np.zeros((3, 3)))


def test_commutator_dimension_mismatch():
    with pytest.raises(UsageError):
        commutator(np.eye(2), np.eye(3))


def test_expm_examples():
    h = np.array([[0.3, 1 - 1j], [1 + 1j, -2.0]])
    np.testing.assert_allclose(expm_hermitian_generator(h, 0), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(expm_hermitian_generator(SIGMA_X, -1j * np.pi / 2), -1j * SIGMA_X, atol=1e-15)
    np.testing.assert_allclose(
        expm_hermitian_generator(np.diag([1.0, 2.0]), -1j), np.diag(np.exp([-1j, -2j])), atol=1e-15
    )


def test_expm_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        expm_hermitian_generator(np.array([[0, 1], [0, 0]]), -1j)


def test_expm_accepts_stacks(rng):
    hs = np.array([random_hermitian(rng, 3) for _ in range(5)])
    batched = expm_hermitian_generator(hs, -0.7j)
    for h, u in zip(hs, batched):
        np.testing.assert_allclose(u, expm_hermitian_generator(h, -0.7j), atol=1e-14)


def test_frobenius_examples():
    a = np.array([[1, 2j], [3, 4]])
    assert frobenius_distance(a, a) == 0
    assert frobenius_distance(np.eye(2), np.zeros((2, 2))) == pytest.approx(np.sqrt(2), abs=1e-15)
    assert frobenius_distance(SIGMA_Z, -SIGMA_Z) == pytest.approx(np.sqrt(8), abs=1e-15)
    with pytest.raises(UsageError):
        frobenius_distance(np.eye(2), np.eye(3))


def test_validation_of_carriers():
    with pytest.raises(ValidationError):
        as_matrix(np.ones((2, 3)))
    with pytest.raises(ValidationError):
        as_matrix([[np.nan, 0], [0, 1]])
    with pytest.raises(ValidationError):
        as_state([1, 1])
    assert as_state([1 / np.sqrt(2), 1j / np.sqrt(2)]).dtype == complex


def test_ordered_product_puts_later_factors_left(rng):
    fs = rng.normal(size=(7, 3, 3)) + 1j * rng.normal(size=(7, 3, 3))
    expected = np.eye(3)
    for f in fs:
        expected = f @ expected
    np.testing.assert_allclose(ordered_product(fs), expected, rtol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6), s=st.floats(-20, 20))
def test_imaginary_scale_gives_unitary(seed, n, s):
    h = random_hermitian(np.random.default_rng(seed), n)
    assert unitarity_defect(expm_hermitian_generator(h, 1j * s)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6))
def test_commutator_antisymmetric(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    assert np.max(np.abs(commutator(a, b) + commutator(b, a))) <= 1e-15


@settings(max_examples=40, deadline=None)
@given(
    d1=st.lists(st.floats(-5, 5), min_size=3, max_size=3),
    d2=st.lists(st.floats(-5, 5), min_size=3, max_size=3),
)
def test_commuting_generators_factorize(d1, d2):
    a, b = np.diag(d1), np.diag(d2)
    lhs = expm_hermitian_generator(a + b, -1j)
    rhs = expm_hermitian_generator(a, -1j) @ expm_hermitian_generator(b, -1j)
    assert frobenius_distance(lhs, rhs) < 1e-12
