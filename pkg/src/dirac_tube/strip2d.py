"""Rayleigh-Ritz for the squared Dirac operator on the tube, in (s, t) coordinates.

After pulling back to T × (-1, 1) and flattening the metric, ‖D u‖² becomes

    c[w] = ∫∫ W|∂_s w|² + V|w|² ds dt + ε⁻² ∫ ‖T_ν(mε) w(s, ·)‖² ds

with W = (1-εtκ)⁻² and
V = -εtκ''/(2(1-εtκ)³) - (5/4)ε²t²κ'²/(1-εtκ)⁴ - κ²/(4(1-εtκ)²).

The substitution w = diag(1, n(s)) ŵ, n = ν₁ + iν₂, makes the boundary
condition s-independent and turns ∂_s into ∂_s + iκP₂ (P₂ = diag(0, 1)),
because n' = iκn. The Galerkin basis is e_k(s) ⊗ φ^±_{j,mε}(t); the
transverse block is then diagonal with entries λ_j(mε)²/ε².
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .effective1d import toeplitz_from_samples, wavenumbers
from .geometry import ArclengthFrame, epsilon_max
from .numerics import gauss_legendre, hermitian_defect, hermitian_eigen
from .transverse import dphi_ds, mode_table, transverse_eigenvalue, ungauged_mode

DEFAULT_QUAD_ORDER = 32


@dataclass(frozen=True)
class StripProblem:
    frame: ArclengthFrame
    eps: float
    m: float = 0.0
    K: int = 24
    N_t: int = 6
    quad_order: int = DEFAULT_QUAD_ORDER
    eps_max: float = field(init=False, repr=False)

    def __post_init__(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            emax = epsilon_max(self.frame)
        object.__setattr__(self, "eps_max", emax)
        if not 0 < self.eps < emax:
            raise ValueError(f"ε={self.eps} outside (0, {emax:.6g})")
        if self.m < 0:
            raise ValueError(f"mass must be non-negative (transverse δ = mε ≥ 0), got {self.m}")
        if self.K < 1 or self.N_t < 1:
            raise ValueError(f"basis too small: K={self.K}, N_t={self.N_t}")
        if self.frame.n_s < 4 * self.K + 2:
            raise ValueError(f"aliasing guard: N_s={self.frame.n_s} < 4K+2={4 * self.K + 2}")

    @property
    def delta(self) -> float:
        return self.m * self.eps

    @property
    def dim(self) -> int:
        return (2 * self.K + 1) * 2 * self.N_t

    def with_basis(self, K: int, N_t: int) -> "StripProblem":
        return StripProblem(self.frame, self.eps, self.m, K, N_t, self.quad_order)


def _tensor_matrix(problem: StripProblem, W, Wk, Wk2, V) -> np.ndarray:
    """Σ_q w_q [A_q ⊗ G0_q + B_q ⊗ G1_q] + diag(λ²/ε²); rows ordered (k, a)."""
    K, eps = problem.K, problem.eps
    t, wq = gauss_legendre(problem.quad_order)
    phi, lam2 = mode_table(problem.N_t, problem.delta, t)       # (A, 2, Q)
    q = wavenumbers(K, problem.frame.length)

    SW, SWk, SWk2, SV = (toeplitz_from_samples(F, K) for F in (W, Wk, Wk2, V))
    A = q[None, :, None] * SW * q[None, None, :] + SV
    B = q[None, :, None] * SWk + SWk * q[None, None, :] + SWk2

    G0 = np.einsum("ack,bck->kab", phi.conj(), phi)
    G1 = np.einsum("ak,bk->kab", phi[:, 1].conj(), phi[:, 1])

    nk, na = 2 * K + 1, len(lam2)
    nq = len(t)
    M = ((wq[:, None] * A.reshape(nq, -1)).T @ G0.reshape(nq, -1)
         + (wq[:, None] * B.reshape(nq, -1)).T @ G1.reshape(nq, -1))
    M = M.reshape(nk, nk, na, na).transpose(0, 2, 1, 3).reshape(nk * na, nk * na)
    M[np.diag_indices_from(M)] += np.tile(lam2, nk) / eps ** 2
    return M


def _exact_weights(problem: StripProblem):
    f = problem.frame
    eps = problem.eps
    t, _ = gauss_legendre(problem.quad_order)
    tk = np.multiply.outer(t, f.kappa)
    g = 1.0 - eps * tk
    W = g ** -2
    V = (-eps * np.multiply.outer(t, f.d2kappa) / (2 * g ** 3)
         - 1.25 * eps ** 2 * np.multiply.outer(t * t, f.dkappa ** 2) / g ** 4
         - f.kappa ** 2 / (4 * g ** 2))
    return W, W * f.kappa, W * f.kappa ** 2, V


def assemble_strip_form(problem: StripProblem) -> np.ndarray:
    """Galerkin matrix of the exact transformed form in the gauged tensor basis."""
    M = _tensor_matrix(problem, *_exact_weights(problem))
    return 0.5 * (M + M.conj().T)


def assemble_sandwich_form(problem: StripProblem, C: float, sign: int) -> np.ndarray:
    """Simplified form (1±Cε)|∂_s w|² - κ²/4|w|² ± Cε|w|² + exact transverse block."""
    f = problem.frame
    t, _ = gauss_legendre(problem.quad_order)
    one = np.ones((len(t), f.n_s))
    W = (1 + sign * C * problem.eps) * one
    V = (-f.kappa ** 2 / 4 + sign * C * problem.eps) * one
    M = _tensor_matrix(problem, W, W * f.kappa, W * f.kappa ** 2, V)
    return 0.5 * (M + M.conj().T)


@dataclass(frozen=True)
class StripSpectrum:
    mu: np.ndarray           # ascending eigenvalues of the discretized form
    energies: np.ndarray     # E_j = sqrt(μ_{2j})
    pair_gaps: np.ndarray    # |μ_{2j-1} - μ_{2j}| / μ_{2j}
    dim: int
    K: int
    N_t: int

    def E(self, j: int) -> float:
        return float(self.energies[j - 1])


def spectrum_from_matrix(M: np.ndarray, n_eigs: int, K: int, N_t: int) -> StripSpectrum:
    dim = M.shape[0]
    if not 2 <= n_eigs <= dim // 2:
        raise ValueError(f"n_eigs must lie in [2, {dim // 2}], got {n_eigs}")
    mu = hermitian_eigen(M, n_eigs=n_eigs)
    npair = n_eigs // 2
    odd, even = mu[0:2 * npair:2], mu[1:2 * npair:2]
    return StripSpectrum(mu=mu, energies=np.sqrt(even), pair_gaps=np.abs(even - odd) / np.abs(even),
                         dim=dim, K=K, N_t=N_t)


def strip_spectrum(problem: StripProblem, n_eigs: int = 8) -> StripSpectrum:
    """Lowest eigenvalues of the 2D form and the derived positive Dirac eigenvalues."""
    return spectrum_from_matrix(assemble_strip_form(problem), n_eigs, problem.K, problem.N_t)


def conservative_C(frame: ArclengthFrame, eps: float) -> float:
    """A constant making the sandwich forms bracket the exact one at this ε.

    With η = ε‖κ‖∞ < 1: |W - 1| ≤ ε·2‖κ‖/(1-η)², and
    |V + κ²/4| ≤ ε[‖κ''‖/(2(1-η)³) + (5/4)ε‖κ'‖²/(1-η)⁴ + ‖κ‖³(2-η)/(4(1-η)²)].
    """
    k0 = np.max(np.abs(frame.kappa))
    k1 = np.max(np.abs(frame.dkappa))
    k2 = np.max(np.abs(frame.d2kappa))
    eta = eps * k0
    if eta >= 1:
        raise ValueError("ε‖κ‖∞ must be below 1")
    c_kin = 2 * k0 / (1 - eta) ** 2
    c_pot = (k2 / (2 * (1 - eta) ** 3) + 1.25 * eps * k1 ** 2 / (1 - eta) ** 4
             + k0 ** 3 * (2 - eta) / (4 * (1 - eta) ** 2))
    return float(max(c_kin, c_pot))


@dataclass(frozen=True)
class SandwichBounds:
    lower: np.ndarray
    upper: np.ndarray
    minus: np.ndarray        # spectrum of the (1 - Cε) form
    plus: np.ndarray         # spectrum of the (1 + Cε) form
    minus_is_lower: bool


def sandwich_bounds(problem: StripProblem, C: float, n_eigs: int = 8) -> SandwichBounds:
    """Spectra of the two simplified forms; the lower/upper labels are decided from the numbers."""
    if not C >= 0:
        raise ValueError(f"C must be non-negative, got {C}")
    minus = hermitian_eigen(assemble_sandwich_form(problem, C, -1), n_eigs=n_eigs)
    plus = hermitian_eigen(assemble_sandwich_form(problem, C, +1), n_eigs=n_eigs)
    minus_low = bool(np.all(minus <= plus))
    lo, hi = (minus, plus) if minus_low else (plus, minus)
    return SandwichBounds(lower=lo, upper=hi, minus=minus, plus=plus, minus_is_lower=minus_low)


def assemble_strip_form_ungauged(problem: StripProblem) -> np.ndarray:
    """Same form by direct (s, t) quadrature in the s-dependent basis e_k(s)φ_{j}^{x=ν(s)}(t).

    ∂_s of the basis uses :func:`dphi_ds`; no gauge, FFT or P₂ algebra is
    involved. Cost grows like N_s·Q·dim², so keep the basis small.
    """
    f = problem.frame
    K, eps, delta = problem.K, problem.eps, problem.delta
    t, wq = gauss_legendre(problem.quad_order)
    ns = f.n_s
    q = wavenumbers(K, f.length)
    ek = np.exp(1j * np.multiply.outer(q, f.s)) / np.sqrt(f.length)      # (k, i)

    psi, dpsi, lam2 = [], [], []
    for j in range(1, problem.N_t + 1):
        lam = transverse_eigenvalue(j, delta)
        for sign in (1, -1):
            psi.append(np.array([ungauged_mode(j, delta, f.normal[:, i], t, sign) for i in range(ns)]))
            dpsi.append(np.array([dphi_ds(f, delta, f.s[i], t, 1, sign, p=j) for i in range(ns)]))
            lam2.append(lam * lam)
    psi = np.array(psi)     # (a, i, c, q)
    dpsi = np.array(dpsi)
    lam2 = np.array(lam2)

    W, _, _, V = _exact_weights(problem)     # (q, i)
    chi = np.einsum("ki,aicq->kaicq", ek, psi)
    dchi = np.einsum("ki,aicq->kaicq", 1j * q[:, None] * ek, psi) + np.einsum("ki,aicq->kaicq", ek, dpsi)
    wts = (f.length / ns) * wq[None, :] * np.ones((ns, 1))          # (i, q)
    nb = chi.shape[0] * chi.shape[1]
    chi = chi.reshape(nb, ns, 2, len(t)).transpose(0, 1, 3, 2)   # (b, i, q, c)
    dchi = dchi.reshape(nb, ns, 2, len(t)).transpose(0, 1, 3, 2)
    kin = np.einsum("biqc,iq,diqc->bd", dchi.conj(), wts * W.T, dchi)
    pot = np.einsum("biqc,iq,diqc->bd", chi.conj(), wts * V.T, chi)
    M = kin + pot
    M[np.diag_indices_from(M)] += np.tile(lam2, 2 * K + 1) / eps ** 2
    return 0.5 * (M + M.conj().T)


__all__ = [
    "StripProblem", "StripSpectrum", "SandwichBounds", "assemble_strip_form",
    "assemble_sandwich_form", "assemble_strip_form_ungauged", "strip_spectrum",
    "spectrum_from_matrix", "sandwich_bounds", "conservative_C", "hermitian_defect",
]
