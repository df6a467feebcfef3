import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dirac_tube.numerics import (NumericalError, bisect, fourier_coeffs, gauss_legendre,
                                 hermitian_defect, hermitian_eigen, inverse_fourier, lstsq)
from oracles import sturm_eigenvalues


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (A + A.conj().T) / 2


def test_eigen_small_cases():
    assert np.allclose(hermitian_eigen(np.diag([3.0, 1.0, 2.0])), [1, 2, 3])
    assert np.allclose(hermitian_eigen(np.array([[0.0, 1.0], [1.0, 0.0]])), [-1, 1])


def test_eigen_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_eigen_matches_sturm_oracle(seed):
    M = random_hermitian(50, seed)
    ours = hermitian_eigen(M)
    ref = sturm_eigenvalues(M)
    assert np.max(np.abs(ours - ref)) <= 1e-9 * max(1.0, np.max(np.abs(ref)))


def test_eigen_residuals_and_subset():
    M = random_hermitian(40, 7)
    w, V = hermitian_eigen(M, vectors=True, check_residual=True)
    res = np.linalg.norm(M @ V - V * w, axis=0)
    assert res.max() <= 1e-10 * np.linalg.norm(M, 2)
    assert np.allclose(hermitian_eigen(M, n_eigs=5), w[:5], atol=1e-12)


def test_hermitian_defect_zero_for_symmetrized():
    M = random_hermitian(10, 3)
    assert hermitian_defect(M) == 0.0


def test_gauss_legendre_order2():
    t, w = gauss_legendre(2)
    assert np.allclose(np.sort(t), [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    assert np.allclose(w, 1.0, atol=1e-15)


@pytest.mark.parametrize("order", [2, 5, 16, 32, 64, 128])
def test_gauss_legendre_exactness(order):
    t, w = gauss_legendre(order)
    assert abs(w.sum() - 2) <= 1e-14
    for d in range(0, 2 * order):
        exact = 0.0 if d % 2 else 2.0 / (d + 1)
        # monomials grow badly conditioned; compare against the L1 size of the sum
        assert abs(np.sum(w * t ** d) - exact) <= 1e-13 * max(1.0, np.sum(w * np.abs(t) ** d) * 10)


def test_gauss_legendre_cosine_and_range():
    t, w = gauss_legendre(16)
    assert abs(np.sum(w * np.cos(np.pi * t / 2)) - 4 / np.pi) <= 1e-13
    assert abs(np.sum(w * t * t) - 2 / 3) <= 1e-15
    for bad in (1, 129):
        with pytest.raises(ValueError):
            gauss_legendre(bad)


def test_fourier_constant_and_cosine():
    L = 3.7
    c = fourier_coeffs(np.ones(64), L)
    assert abs(c[0] - math.sqrt(L)) < 1e-13 and np.all(np.abs(c[1:]) < 1e-13)
    s = np.arange(64) * L / 64
    c = fourier_coeffs(np.cos(2 * np.pi * s / L), L)
    nz = np.nonzero(np.abs(c) > 1e-12)[0]
    assert set(nz) == {1, 63}
    with pytest.raises(ValueError):
        fourier_coeffs(np.ones(12), L)


@given(st.integers(0, 10**6), st.sampled_from([16, 64, 256]), st.floats(0.5, 20.0))
def test_fourier_parseval_roundtrip(seed, n, L):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n) + 1j * rng.normal(size=n)
    c = fourier_coeffs(x, L)
    # ∫|f|² by the trapezoid rule equals Σ|c|²
    assert abs(np.sum(np.abs(c) ** 2) - (L / n) * np.sum(np.abs(x) ** 2)) <= 1e-12 * np.sum(np.abs(c) ** 2)
    assert np.max(np.abs(inverse_fourier(c, L) - x)) <= 1e-12 * np.max(np.abs(x))


def test_bisect_cases():
    assert abs(bisect(lambda x: x * x - 2, 1, 2) - math.sqrt(2)) < 1e-15
    F = lambda mu: 2 * math.sin(mu) + mu * math.cos(mu)
    assert abs(bisect(F, math.pi / 2, math.pi) - 2.2889) < 1e-3
    with pytest.raises(ValueError):
        bisect(lambda x: x * x + 1, -1, 1)


def test_lstsq_exact_and_rank_deficient():
    A = np.column_stack([np.ones(4), np.arange(4.0)])
    x, res = lstsq(A, A @ np.array([2.0, -3.0]))
    assert np.allclose(x, [2, -3]) and res < 1e-12
    with pytest.raises(ValueError):
        lstsq(np.column_stack([np.ones(4), np.ones(4)]), np.ones(4))


def test_numerical_error_is_runtime():
    assert issubclass(NumericalError, RuntimeError)
