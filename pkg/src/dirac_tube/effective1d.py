"""Effective operator on the loop, defined by the form

    q[f] = ∫ |f' + iaκσ₃f|² - (κ²/π²)|f|² ds,   a = 1/2 - 1/π,

on H¹(T, C²). σ₃ is diagonal, so q splits into two scalar forms
h_±[g] = ∫ |g' ± iaκg|² - (κ²/π²)|g|², assembled in the Fourier basis
e_k(s) = exp(2πiks/ℓ)/√ℓ, k ∈ [-K, K].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ArclengthFrame
from .numerics import hermitian_eigen

COUPLING = 0.5 - 1.0 / math.pi
MIN_MODES = 8
PAIR_RTOL = 1e-8


def wavenumbers(K: int, length: float) -> np.ndarray:
    return 2 * np.pi * np.arange(-K, K + 1) / length


def toeplitz_from_samples(samples: np.ndarray, K: int) -> np.ndarray:
    """Matrix of ∫ conj(e_k') F e_k ds from uniform samples of F (last axis).

    Entry [k', k] is the mean-normalized coefficient F_{k'-k}, computed by the
    trapezoid rule (exact for band-limited F when N_s ≥ 4K+2).
    """
    n = samples.shape[-1]
    coeffs = np.fft.fft(samples, axis=-1) / n
    k = np.arange(-K, K + 1)
    diff = (k[:, None] - k[None, :]) % n
    return coeffs[..., diff]


def _check_aliasing(frame: ArclengthFrame, K: int) -> None:
    if frame.n_s < 4 * K + 2:
        raise ValueError(f"aliasing guard: N_s={frame.n_s} < 4K+2={4 * K + 2}")


def assemble_effective(frame: ArclengthFrame, K: int, connection=None):
    """Hermitian matrices of h_+ and h_- (size 2K+1).

    ``connection`` replaces κ in the gauge term iaκσ₃ only (the -κ²/π²
    potential always uses the true curvature).
    """
    if K < MIN_MODES:
        raise ValueError(f"K must be at least {MIN_MODES}, got {K}")
    _check_aliasing(frame, K)
    kappa = frame.kappa
    conn = kappa if connection is None else np.broadcast_to(np.asarray(connection, dtype=float), kappa.shape)
    q = wavenumbers(K, frame.length)
    C = toeplitz_from_samples(conn, K)
    V = toeplitz_from_samples(COUPLING ** 2 * conn ** 2 - kappa ** 2 / math.pi ** 2, K)
    kin = np.diag(q * q).astype(complex)
    cross = COUPLING * (q[:, None] + q[None, :]) * C
    mats = []
    for sgn in (1, -1):
        M = kin + sgn * cross + V
        mats.append(0.5 * (M + M.conj().T))
    return mats[0], mats[1]


@dataclass(frozen=True)
class EffectiveSpectrum:
    eigenvalues: np.ndarray      # merged, ascending
    plus: np.ndarray             # spectrum of h_+
    minus: np.ndarray            # spectrum of h_-
    K: int
    pair_gaps: np.ndarray        # |μ_{2j-1} - μ_{2j}|

    def mu(self, j: int) -> float:
        """μ_j, 1-based."""
        return float(self.eigenvalues[j - 1])

    def paired(self, rtol: float = PAIR_RTOL) -> bool:
        top = self.eigenvalues[1::2][: len(self.pair_gaps)]
        return bool(np.all(self.pair_gaps <= rtol * np.maximum(1.0, np.abs(top))))


def _pairing(ev: np.ndarray) -> np.ndarray:
    m = len(ev) // 2
    return np.abs(ev[0:2 * m:2] - ev[1:2 * m:2])


def effective_spectrum(frame: ArclengthFrame, K: int = 32, n_eigs: int | None = None,
                       connection=None) -> EffectiveSpectrum:
    """Lowest ``n_eigs`` eigenvalues μ_j of the effective operator (all if None)."""
    dim = 2 * K + 1
    if n_eigs is None:
        n_eigs = 2 * dim
    if not 1 <= n_eigs <= 2 * dim:
        raise ValueError(f"n_eigs must lie in [1, {2 * dim}], got {n_eigs}")
    hp, hm = assemble_effective(frame, K, connection)
    ep = hermitian_eigen(hp)
    em = hermitian_eigen(hm)
    merged = np.sort(np.concatenate([ep, em]))[:n_eigs]
    return EffectiveSpectrum(eigenvalues=merged, plus=ep, minus=em, K=K, pair_gaps=_pairing(merged))


def effective_spectrum_circle_exact(radius: float, n_eigs: int = 20) -> EffectiveSpectrum:
    """Closed form for a circle: ((k+a)/R)² - 1/(π²R²), each value twice."""
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    kmax = n_eigs // 2 + 2
    k = np.arange(-kmax, kmax + 1)
    branch = np.sort(((k + COUPLING) / radius) ** 2 - 1 / (math.pi * radius) ** 2)
    merged = np.sort(np.concatenate([branch, branch]))[:n_eigs]
    return EffectiveSpectrum(eigenvalues=merged, plus=branch, minus=branch.copy(), K=kmax,
                             pair_gaps=_pairing(merged))
