"""Thin-tube expansion of the Dirac eigenvalues and its numerical verification.

    E_j(ε) = π/(4ε) + 2m/π - 16m²ε/π³ + (2/π)(m² + μ_{2j})ε + O(ε²)

where μ_{2j} is the 2j-th eigenvalue of the effective loop operator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .effective1d import effective_spectrum
from .geometry import ArclengthFrame
from .numerics import lstsq
from .strip2d import StripProblem, strip_spectrum
from .transverse import transverse_eigenvalue

DEFAULT_TOLERANCES = {"c_minus1": ("abs", 1e-3), "c0": ("abs", 2e-3), "c1": ("rel", 0.10)}


@dataclass(frozen=True)
class ExpansionCoefficients:
    c_minus1: float
    c0: float
    c1: float
    residual: float = 0.0

    def as_tuple(self) -> tuple[float, float, float]:
        return self.c_minus1, self.c0, self.c1


def predicted_coefficients(mu2j: float, m: float) -> ExpansionCoefficients:
    return ExpansionCoefficients(math.pi / 4, 2 * m / math.pi,
                                 -16 * m * m / math.pi ** 3 + 2 / math.pi * (m * m + mu2j))


def predicted_Ej(mu2j: float, m: float, eps: float, j: int | None = None) -> float:
    """Three-term prediction of E_j(ε); ``j`` is informational (μ_{2j} carries it)."""
    if not eps > 0:
        raise ValueError(f"ε must be positive, got {eps}")
    c = predicted_coefficients(mu2j, m)
    return c.c_minus1 / eps + c.c0 + c.c1 * eps


def predicted_Ej_squared(mu2j: float, m: float, eps: float) -> float:
    """λ₁(mε)²/ε² + μ_{2j}, with λ₁ from the implicit equation (not its series)."""
    if not eps > 0:
        raise ValueError(f"ε must be positive, got {eps}")
    lam = transverse_eigenvalue(1, m * eps)
    return lam * lam / (eps * eps) + mu2j


def fit_expansion(eps_list, E_list, weighted: bool = True) -> ExpansionCoefficients:
    """Least-squares fit of E(ε) = c₋₁/ε + c₀ + c₁ε.

    With ``weighted`` the squared residuals carry weight ε², which is the
    same as fitting εE = c₋₁ + c₀ε + c₁ε².
    """
    eps = np.asarray(eps_list, dtype=float)
    E = np.asarray(E_list, dtype=float)
    if eps.shape != E.shape:
        raise ValueError("ε and E lists differ in length")
    if len(np.unique(eps)) < 3:
        raise ValueError("need at least 3 distinct ε values to fit three coefficients")
    if np.any(eps <= 0):
        raise ValueError("ε values must be positive")
    A = np.column_stack([1 / eps, np.ones_like(eps), eps])
    x, res = lstsq(A, E, weights=eps ** 2 if weighted else None)
    return ExpansionCoefficients(float(x[0]), float(x[1]), float(x[2]), res)


def _within(kind: str, tol: float, fitted: float, expected: float) -> tuple[float, bool]:
    err = abs(fitted - expected)
    if kind == "rel":
        err = err / abs(expected) if expected != 0 else math.inf
    return err, err <= tol


@dataclass
class VerificationReport:
    m: float
    j: int
    eps: np.ndarray
    E_computed: np.ndarray
    E_predicted: np.ndarray
    mu2j: float
    fitted: ExpansionCoefficients
    predicted: ExpansionCoefficients
    errors: dict = field(default_factory=dict)
    passed: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    K: int = 0
    N_t: int = 0

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def rows(self) -> list[dict]:
        return [{"epsilon": float(e), "j": self.j, "E_computed": float(a),
                 "E_predicted": float(b), "abs_diff": float(abs(a - b))}
                for e, a, b in zip(self.eps, self.E_computed, self.E_predicted)]

    def items(self) -> list[tuple[str, object]]:
        out = [("m", self.m), ("j", self.j), ("K", self.K), ("N_t", self.N_t),
               ("mu_2j", self.mu2j), ("fit_residual", self.fitted.residual)]
        for name in ("c_minus1", "c0", "c1"):
            kind, tol = self.tolerances[name]
            out += [(f"{name}_fitted", getattr(self.fitted, name)),
                    (f"{name}_predicted", getattr(self.predicted, name)),
                    (f"{name}_error_{kind}", self.errors[name]),
                    (f"{name}_tolerance_{kind}", tol),
                    (f"{name}_pass", self.passed[name])]
        out.append(("all_pass", self.ok))
        return out

    def to_text(self) -> str:
        return "".join(f"{k} = {_fmt(v)}\n" for k, v in self.items())


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def verify_theorem(frame: ArclengthFrame, m: float, j: int, eps_list, K: int = 24, N_t: int = 6,
                   tolerances: dict | None = None, K_eff: int = 32,
                   quad_order: int = 32) -> VerificationReport:
    """Solve the 2D problem on each ε, fit the expansion and compare with the prediction."""
    eps = np.asarray(sorted(set(float(e) for e in eps_list), reverse=True))
    if len(eps) == 0:
        raise ValueError("ε list is empty")
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    n_eigs = 2 * j
    E = []
    for e in eps:
        S = strip_spectrum(StripProblem(frame, e, m, K, N_t, quad_order), max(n_eigs, 2))
        E.append(S.E(j))
    E = np.array(E)
    K_eff = max(K_eff, j + 8)
    mu2j = effective_spectrum(frame, K_eff, 2 * j).mu(2 * j)
    pred = predicted_coefficients(mu2j, m)
    fitted = fit_expansion(eps, E)
    errors, passed = {}, {}
    for name in ("c_minus1", "c0", "c1"):
        kind, t = tol[name]
        errors[name], passed[name] = _within(kind, t, getattr(fitted, name), getattr(pred, name))
    E_pred = np.array([predicted_Ej(mu2j, m, e) for e in eps])
    return VerificationReport(m=m, j=j, eps=eps, E_computed=E, E_predicted=E_pred, mu2j=mu2j,
                              fitted=fitted, predicted=pred, errors=errors, passed=passed,
                              tolerances=tol, K=K, N_t=N_t)
