import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from ptbethe import ed, magnon
from ptbethe.core import DomainError, fields_from_h, pt_fields


def one_down_sector(N, fields):
    return ed.build_sector(N, 1, fields).entries


def ed_energies(N, fields):
    return ed.sector_spectrum(ed.build_sector(N, 1, fields)).eigenvalues


def mp_roots(N, fields):
    """Canonical roots of the polynomial form, solved at 40 digits."""
    with mpmath.workdps(40):
        a = [mpmath.mpf(0.5) - mpmath.mpc(x) for x in fields.xi_pair]
        x = mpmath.mpc(0, 1)
        # (mu - i/2)^2N (mu + i a-)(mu + i a+) - (mu + i/2)^2N (mu - i a-)(mu - i a+)
        lhs = np.polynomial.polynomial.polymul(
            np.array(mpmath.taylor(lambda m: (m - x / 2) ** (2 * N), 0, 2 * N), dtype=object),
            np.array([(x * a[0]) * (x * a[1]), x * (a[0] + a[1]), 1], dtype=object))
        rhs = np.polynomial.polynomial.polymul(
            np.array(mpmath.taylor(lambda m: (m + x / 2) ** (2 * N), 0, 2 * N), dtype=object),
            np.array([(x * a[0]) * (x * a[1]), -x * (a[0] + a[1]), 1], dtype=object))
        coeffs = [l - r for l, r in zip(lhs, rhs)]
        while abs(coeffs[-1]) < mpmath.mpf(10) ** -30:
            coeffs.pop()
        roots = mpmath.polyroots(coeffs[::-1], maxsteps=400, extraprec=200)
    out = [complex(r) for r in roots if abs(r) > 1e-12]
    return [r for r in out if r.real > 1e-12 or (abs(r.real) <= 1e-12 and r.imag > 0)]


def test_roots_match_high_precision_polynomial():
    N, f = 10, pt_fields(0.25, 0.2)
    ours = magnon.one_magnon_roots(N, f)
    ref = mp_roots(N, f)
    assert len(ref) == N
    for m in ours:
        assert min(abs(m - r) for r in ref) < 1e-12


def test_n12_matches_ed():
    N, f = 12, pt_fields(0.25, 0.2)
    roots = magnon.one_magnon_roots(N, f)
    assert len(roots) == N
    E = [magnon.magnon_energy(m, N, f) for m in roots]
    rep = ed.match_bethe_to_ed(E, ed_energies(N, f))
    assert rep.max_mismatch < 1e-8 and not rep.cardinality_mismatch


def test_b_phase_roots_real():
    roots = magnon.one_magnon_roots(12, pt_fields(0.75, 0.0))
    assert all(m.imag == 0 for m in roots)


def test_string_root_near_ideal():
    f = pt_fields(0.25, 0.1)
    roots = magnon.one_magnon_roots(12, f)
    ideal = 1j * (0.5 - f.xi_minus)
    assert min(abs(m - ideal) for m in roots) < 1e-3


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 11), st.floats(-2, 2), st.floats(-1.5, 1.5))
def test_pt_roots_match_ed(N, xi, chi):
    assume(abs(xi) > 0.02 and abs(abs(xi) - 0.5) > 0.02)
    f = pt_fields(xi, chi)
    E = [magnon.magnon_energy(m, N, f) for m in magnon.one_magnon_roots(N, f)]
    assert ed.match_bethe_to_ed(E, ed_energies(N, f)).max_mismatch < 1e-8


def test_non_pt_fields_use_polynomial():
    N, f = 8, fields_from_h(1 + 0.5j, -0.3 + 0.2j)
    E = [magnon.magnon_energy(m, N, f) for m in magnon.one_magnon_roots(N, f)]
    assert ed.match_bethe_to_ed(E, ed_energies(N, f)).max_mismatch < 1e-8


def test_real_roots_solve_product_form():
    N, f = 12, pt_fields(0.25, 0.2)
    for m in magnon.one_magnon_roots(N, f):
        if m.imag == 0:
            assert abs(magnon.product_residual(m, N, f)) < 1e-12


@pytest.mark.parametrize("xi, chi", [(0.25, 0.2), (0.75, 0.0), (-0.3, 0.4)])
def test_wavefunction_is_ed_eigenvector(xi, chi):
    N, f = 10, pt_fields(xi, chi)
    H = one_down_sector(N, f)      # basis order = site order for one down spin
    for m in magnon.one_magnon_roots(N, f):
        F = magnon.magnon_wavefunction(m, f, N).amplitude
        E = magnon.magnon_energy(m, N, f)
        assert np.linalg.norm(H @ F - E * F) < 1e-8 * np.linalg.norm(F) * max(1, abs(E))


def test_real_rapidity_standing_wave():
    f = pt_fields(0.3, 0.0)
    mu = magnon.one_magnon_roots(10, f)[3]
    F = magnon.magnon_wavefunction(mu, f, 10).amplitude
    k = np.argmax(np.abs(F))
    G = F / (F[k] / abs(F[k]))
    assert np.max(np.abs(G.imag)) < 1e-12
    assert np.any(np.diff(np.sign(G.real)) != 0)


def test_wavefunction_pole():
    with pytest.raises(DomainError):
        magnon.magnon_wavefunction(0.5j, pt_fields(0.25, 0.2), 6)


def test_bound_mode_ratio():
    f = pt_fields(0.25, 0.0)
    F = magnon.bound_mode_wavefunction("L", f, 10).amplitude
    assert np.allclose(np.abs(F[1:] / F[:-1]), 1 / 3, atol=1e-12, rtol=0)
    R = magnon.bound_mode_wavefunction("R", f, 10).probability
    assert np.allclose(R, magnon.bound_mode_wavefunction("L", f, 10).probability[::-1], atol=1e-14)


def test_bound_mode_matches_string_eigenvector():
    N, f = 14, pt_fields(0.25, 0.2)
    ideal = 1j * (0.5 - f.xi_minus)
    mu = min(magnon.one_magnon_roots(N, f), key=lambda m: abs(m - ideal))
    exact = magnon.magnon_wavefunction(mu, f, N).probability
    approx = magnon.bound_mode_wavefunction("L", f, N).probability
    assert np.max(np.abs(exact - approx)) < 1e-4


def test_bound_mode_b_phase():
    with pytest.raises(DomainError, match="no bound mode"):
        magnon.bound_mode_wavefunction("L", pt_fields(0.75, 0.0), 10)


def test_localization_length():
    assert magnon.localization_length("L", pt_fields(0.25, 0.0)) == pytest.approx(1 / math.log(3))
    lengths = [magnon.localization_length("L", pt_fields(0.25, 0.1 * k)) for k in range(11)]
    assert all(b > a for a, b in zip(lengths, lengths[1:]))
    with pytest.raises(DomainError, match="mode not localized"):
        magnon.localization_length("L", pt_fields(0.5, 0.0))


def test_profile_broadens_with_chi():
    spread = []
    for chi in (0.0, 0.5, 1.0):
        p = magnon.bound_mode_wavefunction("L", pt_fields(0.25, chi), 20).probability
        spread.append(float(np.sum(p * np.arange(1, 21))))
    assert spread[0] < spread[1] < spread[2]
