import dataclasses
import math

import numpy as np
import pytest

from dirac_tube.geometry import build_frame, make_circle, make_ellipse
from dirac_tube.numerics import hermitian_defect
from dirac_tube.strip2d import (StripProblem, _exact_weights, _tensor_matrix, assemble_sandwich_form,
                                assemble_strip_form, assemble_strip_form_ungauged, conservative_C,
                                sandwich_bounds, strip_spectrum)
from dirac_tube.transverse import transverse_eigenvalue
from oracles import annulus_dirac_eigenvalues

MU2_CIRCLE = 0.25 - 1 / math.pi


def test_raw_matrix_nearly_hermitian(ellipse21):
    P = StripProblem(ellipse21, 0.1, 1.0, 12, 4)
    raw = _tensor_matrix(P, *_exact_weights(P))
    assert hermitian_defect(raw) <= 1e-12
    M = assemble_strip_form(P)
    assert np.max(np.abs(M - M.conj().T)) <= 1e-12 * np.max(np.abs(M))


def test_leading_order(circle1):
    for eps in (0.02, 0.01):
        mu1 = strip_spectrum(StripProblem(circle1, eps, 0.0, 8, 3), 2).mu[0]
        assert abs(mu1 * 16 * eps ** 2 / math.pi ** 2 - 1) < 3 * eps


def test_flat_coefficients_block_diagonal(circle1):
    flat = dataclasses.replace(circle1, kappa=0 * circle1.kappa, dkappa=0 * circle1.dkappa,
                               d2kappa=0 * circle1.d2kappa)
    P = StripProblem(flat, 0.1, 1.0, 6, 3)
    M = assemble_strip_form(P)
    q = 2 * np.pi * np.arange(-6, 7) / flat.length
    lam2 = np.repeat([transverse_eigenvalue(j, 0.1) ** 2 for j in (1, 2, 3)], 2)
    diag = (q[:, None] ** 2 + lam2[None, :] / 0.01).ravel()
    assert np.max(np.abs(M - np.diag(diag))) <= 1e-10 * np.max(diag)


def test_E1_examples(circle1):
    base = StripProblem(circle1, 0.05, 0.0, 24, 6)
    E1 = strip_spectrum(base).E(1)
    assert abs(E1 - 15.70579) <= 3e-3
    big = strip_spectrum(base.with_basis(32, 8)).E(1)
    assert abs(E1 - big) <= 1e-6 * big
    Em = strip_spectrum(StripProblem(circle1, 0.05, 1.0, 24, 6)).E(1)
    assert abs(Em - 16.3446) <= 2e-2


@pytest.mark.parametrize("eps,m,tol", [(0.05, 0.0, 1e-8), (0.1, 1.0, 3e-7)])
def test_against_exact_annulus(circle1, eps, m, tol):
    ref = annulus_dirac_eigenvalues(1 - eps, 1 + eps, m, 6)
    S = strip_spectrum(StripProblem(circle1, eps, m, 24, 6), 12)
    # Ritz values are upper bounds of the exact squared energies
    assert np.all(S.energies >= ref * (1 - 1e-12))
    assert np.max((S.energies - ref) / ref) < tol


def test_gauged_matches_ungauged_on_circle():
    f = build_frame(make_circle(1.0), 64)
    P = StripProblem(f, 0.2, 0.5, 5, 3, quad_order=24)
    A = assemble_strip_form(P)
    B = assemble_strip_form_ungauged(P)
    ea = np.linalg.eigvalsh(A)[:6]
    eb = np.linalg.eigvalsh(B)[:6]
    assert np.max(np.abs(ea - eb) / ea) < 1e-9


def test_rotation_invariance():
    a = build_frame(make_ellipse(2, 1), 256)
    b = build_frame(make_ellipse(2, 1).rotated(1.1), 256)
    ea = strip_spectrum(StripProblem(a, 0.1, 0.5, 16, 4), 8).mu
    eb = strip_spectrum(StripProblem(b, 0.1, 0.5, 16, 4), 8).mu
    assert np.max(np.abs(ea - eb) / ea) < 1e-9


@pytest.mark.parametrize("curve,eps", [(make_circle(1.0), 0.1), (make_ellipse(2, 1), 0.1),
                                       (make_ellipse(2, 1), 0.05)])
def test_pairing(curve, eps):
    f = build_frame(curve, 512)
    for m in (0.0, 1.0):
        S = strip_spectrum(StripProblem(f, eps, m, 24, 6), 8)
        assert np.all(S.mu > 0)
        assert np.all(S.pair_gaps <= 1e-6)


def test_monotone_in_basis(ellipse21):
    P = StripProblem(ellipse21, 0.1, 0.0, 12, 3)
    ref = strip_spectrum(P, 8).mu
    for K, N in ((16, 3), (16, 5), (20, 6)):
        mu = strip_spectrum(P.with_basis(K, N), 8).mu
        assert np.all(mu <= ref * (1 + 1e-12))
        ref = mu


def test_sandwich_circle(circle1):
    P = StripProblem(circle1, 0.05, 0.0, 24, 6)
    b = sandwich_bounds(P, 5.0, 12)
    mu = strip_spectrum(P, 12).mu
    assert b.minus_is_lower
    assert np.all(b.lower[:6] <= mu[:6]) and np.all(mu[:6] <= b.upper[:6])
    z = sandwich_bounds(P, 0.0, 8)
    assert np.array_equal(z.minus, z.plus)
    assert np.allclose(assemble_sandwich_form(P, 0.0, 1), assemble_sandwich_form(P, 0.0, -1))
    gaps = [sandwich_bounds(StripProblem(circle1, e, 0.0, 24, 6), 5.0, 6) for e in (0.05, 0.025)]
    ratio = (gaps[0].upper - gaps[0].lower) / (gaps[1].upper - gaps[1].lower)
    assert np.all((1.8 < ratio) & (ratio < 2.2))
    with pytest.raises(ValueError):
        sandwich_bounds(P, -1.0)


def test_conservative_constant_brackets(ellipse21):
    for eps in (0.1, 0.05):
        P = StripProblem(ellipse21, eps, 0.5, 16, 4)
        b = sandwich_bounds(P, conservative_C(ellipse21, eps), 8)
        mu = strip_spectrum(P, 8).mu
        assert np.all(b.lower <= mu) and np.all(mu <= b.upper)


@pytest.mark.parametrize("kwargs", [dict(eps=0.6), dict(eps=0.0), dict(eps=0.1, m=-1.0),
                                    dict(eps=0.1, K=0), dict(eps=0.1, N_t=0), dict(eps=0.1, K=200)])
def test_problem_validation(ellipse21, kwargs):
    with pytest.raises(ValueError):
        StripProblem(ellipse21, **kwargs)


def test_n_eigs_guard(circle1):
    with pytest.raises(ValueError):
        strip_spectrum(StripProblem(circle1, 0.1, 0.0, 1, 1), 8)
