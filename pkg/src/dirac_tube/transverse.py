"""One-dimensional transverse Dirac operator -i(σ·x) d/dt + δσ₃ on (-1, 1).

Boundary conditions f₂(±1) = ±i(x₁+ix₂) f₁(±1). Eigenvalues are ±λ_p with
λ_p² = E_p² + δ², where 2E_p is the unique root of 2δ sin μ + μ cos μ in
((2p-1)π/2, pπ). Everything here works in the gauged frame x = (1, 0)
unless an explicit normal is passed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ArclengthFrame
from .numerics import bisect, gauss_legendre

DEFAULT_T_ORDER = 48
NORM_AGREEMENT_TOL = 1e-8


def _check_args(p: int, delta: float) -> None:
    if not isinstance(p, (int, np.integer)) or p < 1:
        raise ValueError(f"mode index p must be a positive integer, got {p!r}")
    if not delta >= 0:
        raise ValueError(f"δ must be non-negative, got {delta}")


def implicit_residual(lam: float, delta: float) -> float:
    """δ sin(2E) + E cos(2E) with E = sqrt(λ² - δ²)."""
    E = math.sqrt(max(lam * lam - delta * delta, 0.0))
    return delta * math.sin(2 * E) + E * math.cos(2 * E)


def interval_root(p: int, delta: float) -> float:
    """x_p = 2E_p ∈ ((2p-1)π/2, pπ)."""
    _check_args(p, delta)
    lo, hi = (2 * p - 1) * math.pi / 2, p * math.pi
    if delta == 0:
        return lo
    F = lambda mu: 2 * delta * math.sin(mu) + mu * math.cos(mu)
    if F(lo) * F(hi) >= 0:
        # δ below rounding of cos at lo: the root sits on the left endpoint
        return lo
    return bisect(F, lo, hi, tol=1e-15 * hi)


def transverse_eigenvalue(p: int, delta: float) -> float:
    """p-th positive eigenvalue λ_p(δ)."""
    if delta == 0:
        _check_args(p, delta)
        return (2 * p - 1) * math.pi / 4
    x = interval_root(p, delta)
    return math.sqrt(x * x / 4 + delta * delta)


def transverse_eigenvalue_series(p: int, delta: float) -> float:
    """Second-order small-δ expansion of λ_p(δ)."""
    if not isinstance(p, (int, np.integer)) or p < 1:
        raise ValueError(f"mode index p must be a positive integer, got {p!r}")
    q = (2 * p - 1) * math.pi
    return q / 4 + 2 * delta / q + (-16 / q ** 3 + 2 / q) * delta ** 2


def norm_formula(lam: float, E: float, delta: float) -> float:
    """Closed-form ∫|φ|² of the unnormalized eigenfunction."""
    r = (lam + delta) / E
    s4 = math.sin(4 * E) / (4 * E)
    return (2 * (1 + s4) + (1 - s4) * (r * r + 1 / (r * r))
            + (1 - math.cos(4 * E)) / (2 * E) * (r - 1 / r))


def _spinor(t, E, r, n, N, sign):
    y = np.asarray(t, dtype=float) + 1.0
    c, s = np.cos(E * y), np.sin(E * y)
    n = np.asarray(n)
    phi = np.array([c + r * s, n * (-1j * c + 1j * s / r)], dtype=complex) / math.sqrt(N)
    if sign < 0:
        # charge conjugation σ₁ C
        phi = np.conj(phi[::-1])
    return phi


@dataclass(frozen=True)
class TransverseMode:
    p: int
    delta: float
    sign: int
    lam: float          # eigenvalue for this branch (negative for sign=-1)
    E: float
    x: float            # 2E, root of the interval problem
    N: float            # normalization constant in use
    N_formula: float
    N_quadrature: float
    norm_flag: bool     # closed form and quadrature disagreed
    t: np.ndarray
    weights: np.ndarray
    values: np.ndarray  # (2, len(t)) spinor samples

    def __call__(self, t) -> np.ndarray:
        r = (abs(self.lam) + self.delta) / self.E
        return _spinor(t, self.E, r, 1.0, self.N, self.sign)


def _mode_constants(p: int, delta: float):
    lam = transverse_eigenvalue(p, delta)
    E = interval_root(p, delta) / 2
    return lam, E, (lam + delta) / E


def transverse_mode(p: int, delta: float, sign: int = 1,
                    n_t: int = DEFAULT_T_ORDER) -> TransverseMode:
    """Normalized eigenfunction φ^±_{p,δ} sampled on Gauss-Legendre nodes."""
    _check_args(p, delta)
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    lam, E, r = _mode_constants(p, delta)
    t, w = gauss_legendre(n_t)
    N_f = norm_formula(lam, E, delta)
    # quadrature is the authority; a large order resolves cos(E(t+1)) products
    tq, wq = gauss_legendre(max(n_t, 96))
    raw = _spinor(tq, E, r, 1.0, 1.0, 1)
    N_q = float(np.sum(wq * np.sum(np.abs(raw) ** 2, axis=0)))
    flag = abs(N_f - N_q) > NORM_AGREEMENT_TOL * N_q
    values = _spinor(t, E, r, 1.0, N_q, sign)
    return TransverseMode(p=p, delta=delta, sign=sign, lam=sign * lam, E=E, x=2 * E,
                          N=N_q, N_formula=N_f, N_quadrature=N_q, norm_flag=flag,
                          t=t, weights=w, values=values)


def mode_table(n_modes: int, delta: float, t) -> tuple[np.ndarray, np.ndarray]:
    """Gauged eigenbasis on nodes ``t``.

    Returns (values, lam2): ``values[a]`` has shape (2, len(t)); basis index
    a = 2(j-1) + (0 for +, 1 for -), and ``lam2[a] = λ_j(δ)²``.
    """
    vals, lam2 = [], []
    for j in range(1, n_modes + 1):
        lam, E, r = _mode_constants(j, delta)
        N = norm_formula(lam, E, delta)
        for sign in (1, -1):
            vals.append(_spinor(t, E, r, 1.0, N, sign))
            lam2.append(lam * lam)
    return np.array(vals), np.array(lam2)


def ungauged_mode(p: int, delta: float, normal, t, sign: int = 1) -> np.ndarray:
    """φ^±_{p,δ} for the boundary condition with x = ``normal`` (a unit 2-vector)."""
    _check_args(p, delta)
    lam, E, r = _mode_constants(p, delta)
    n = complex(normal[0], normal[1])
    return _spinor(t, E, r, n, norm_formula(lam, E, delta), sign)


def check_boundary(values_left, values_right, n: complex = 1.0) -> float:
    """Largest defect of f₂(±1) = ±i n f₁(±1) given samples at t = -1 and t = 1."""
    dl = abs(values_left[1] + 1j * n * values_left[0])
    dr = abs(values_right[1] - 1j * n * values_right[0])
    return float(max(dl, dr))


def transverse_form_norm(f, df, f_left, f_right, delta: float, weights,
                         bc_tol: float = 1e-8) -> tuple[float, float]:
    """Both sides of ‖T(δ)f‖² = ‖f'‖² + δ²‖f‖² + δ(|f(1)|² + |f(-1)|²).

    ``f`` and ``df`` are (2, n) samples of f and f' on quadrature nodes with
    ``weights``; ``f_left``/``f_right`` are the endpoint values. Gauged frame.
    """
    f = np.asarray(f)
    df = np.asarray(df)
    fl, fr = np.asarray(f_left), np.asarray(f_right)
    scale = max(np.abs(fl).max(), np.abs(fr).max(), 1.0)
    if check_boundary(fl, fr) > bc_tol * scale:
        raise ValueError("f violates the infinite-mass boundary condition")
    # -iσ₁ f' + δσ₃ f
    Tf = np.array([-1j * df[1] + delta * f[0], -1j * df[0] - delta * f[1]])
    w = np.asarray(weights)
    lhs = float(np.sum(w * np.sum(np.abs(Tf) ** 2, axis=0)))
    rhs = float(np.sum(w * np.sum(np.abs(df) ** 2, axis=0))
                + delta ** 2 * np.sum(w * np.sum(np.abs(f) ** 2, axis=0))
                + delta * (np.sum(np.abs(fl) ** 2) + np.sum(np.abs(fr) ** 2)))
    return lhs, rhs


def dphi_ds(frame: ArclengthFrame, delta: float, s: float, t, order: int = 1,
            sign: int = 1, p: int = 1) -> np.ndarray:
    """Closed-form ∂_s^order of the ungauged φ^±_{p,δ}(s, t) (boundary normal ν(s)).

    With n = ν₁ + iν₂ and n' = iκn only the second spinor component moves:
    order 1 carries κn, order 2 carries (κn)' = (κ' + iκ²)n.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order!r}")
    _check_args(p, delta)
    i = frame.index_of(s)
    n = frame.n_complex[i]
    k = frame.kappa[i]
    g = k * n if order == 1 else (frame.dkappa[i] + 1j * k * k) * n
    lam, E, r = _mode_constants(p, delta)
    N = norm_formula(lam, E, delta)
    y = np.asarray(t, dtype=float) + 1.0
    second = g * (np.cos(E * y) - np.sin(E * y) / r) / math.sqrt(N)
    out = np.array([np.zeros_like(second), second])
    if sign < 0:
        out = np.conj(out[::-1])
    return out
