"""Shared numerical kernels.

Dense Hermitian eigensolves, Gauss-Legendre rules, periodic Fourier
coefficients, bracketed bisection and linear least squares.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np
import scipy.linalg


class NumericalError(RuntimeError):
    """A kernel failed to converge or produced an unusable result."""


HERMITIAN_RTOL = 1e-12
RESIDUAL_RTOL = 1e-10


def hermitian_defect(M: np.ndarray) -> float:
    """Max-norm of M - M^H relative to max|M|."""
    scale = np.max(np.abs(M)) if M.size else 0.0
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(M - M.conj().T)) / scale)


def hermitian_eigen(M, n_eigs: int | None = None, vectors: bool = False,
                    check_residual: bool = False):
    """Ascending eigenvalues (and optionally eigenvectors) of a Hermitian matrix.

    LAPACK's Householder tridiagonalization followed by an implicit
    iteration does the work. ``n_eigs`` restricts the output to the
    lowest eigenpairs.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if hermitian_defect(M) > HERMITIAN_RTOL:
        raise ValueError("matrix is not Hermitian within tolerance")
    n = M.shape[0]
    subset = None
    if n_eigs is not None:
        if not 1 <= n_eigs <= n:
            raise ValueError(f"n_eigs must lie in [1, {n}], got {n_eigs}")
        subset = (0, n_eigs - 1)
    H = 0.5 * (M + M.conj().T)
    want_vectors = vectors or check_residual
    try:
        out = scipy.linalg.eigh(H, eigvals_only=not want_vectors,
                                subset_by_index=subset, driver="evr" if subset else "evd")
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}") from exc
    if not want_vectors:
        return out
    w, v = out
    if check_residual:
        norm = max(np.linalg.norm(H, 2), np.finfo(float).tiny)
        res = np.linalg.norm(H @ v - v * w, axis=0)
        if np.any(res > RESIDUAL_RTOL * norm):
            raise NumericalError(f"eigenpair residual {res.max():.3e} exceeds contract")
    return (w, v) if vectors else w


@lru_cache(maxsize=64)
def _leggauss(order: int):
    t, w = np.polynomial.legendre.leggauss(order)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``order``-point Gauss-Legendre rule on (-1, 1)."""
    if not isinstance(order, (int, np.integer)) or not 2 <= order <= 128:
        raise ValueError(f"Gauss-Legendre order must be an integer in [2, 128], got {order!r}")
    return _leggauss(int(order))


def _check_pow2(n: int) -> None:
    if n < 1 or n & (n - 1):
        raise ValueError(f"sample count must be a power of two, got {n}")


def fourier_coeffs(samples, period: float) -> np.ndarray:
    """Coefficients of ``samples`` in the orthonormal basis exp(2*pi*i*k*s/period)/sqrt(period).

    Output is in FFT order: entry ``k % N`` holds mode ``k``.
    """
    f = np.asarray(samples)
    _check_pow2(f.shape[-1])
    n = f.shape[-1]
    return np.fft.fft(f, axis=-1) * (np.sqrt(period) / n)


def inverse_fourier(coeffs, period: float) -> np.ndarray:
    """Inverse of :func:`fourier_coeffs` (sample values on the uniform grid)."""
    c = np.asarray(coeffs)
    n = c.shape[-1]
    return np.fft.ifft(c, axis=-1) * (n / np.sqrt(period))


def bisect(f: Callable[[float], float], a: float, b: float, tol: float = 0.0,
           maxiter: int = 400) -> float:
    """Root of ``f`` in [a, b] by plain bisection.

    Iterates until the bracket is below ``tol`` (absolute) or stops shrinking
    in floating point; ``f(a)`` and ``f(b)`` must have opposite signs.
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if not np.isfinite(fa) or not np.isfinite(fb) or np.sign(fa) == np.sign(fb):
        raise ValueError(f"invalid bracket: f({a})={fa}, f({b})={fb}")
    for _ in range(maxiter):
        mid = 0.5 * (a + b)
        if mid <= min(a, b) or mid >= max(a, b) or abs(b - a) <= tol:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if np.sign(fm) == np.sign(fa):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    return a if abs(fa) <= abs(fb) else b


def lstsq(A, y, weights=None) -> tuple[np.ndarray, float]:
    """Weighted linear least squares; returns (solution, residual 2-norm).

    ``weights`` multiply the squared residuals. Raises on rank deficiency.
    """
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    if weights is not None:
        r = np.sqrt(np.asarray(weights, dtype=float))
        Aw, yw = A * r[:, None], y * r
    else:
        Aw, yw = A, y
    x, _, rank, _ = np.linalg.lstsq(Aw, yw, rcond=None)
    if rank < A.shape[1]:
        raise ValueError(f"least-squares system is rank deficient (rank {rank} < {A.shape[1]})")
    return x, float(np.linalg.norm(A @ x - y))
