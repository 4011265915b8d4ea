import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from scipy import integrate
from hypothesis import assume, given, settings, strategies as st

from ptbethe import thermo
from ptbethe.core import DomainError, PhaseLabel, Reference, pt_fields
from ptbethe.thermo import Parity, StateSpec

DOWN, UP = Reference.ALL_DOWN, Reference.ALL_UP
A1 = pt_fields(0.25, 0.2)


def state(ref, strings="", n_spin=0, parity=Parity.ODD, theta=1.0):
    return StateSpec(ref, frozenset(strings), (theta,) * n_spin, parity)


# --------------------------------------------------------------------------- densities and counting


def test_density_at_zero():
    N = 11
    g = state(DOWN)
    assert thermo.density_fourier(g, A1, N, 0.0) == pytest.approx((N - 1) / 2, abs=1e-14)
    spin = thermo.density_fourier(state(DOWN, "", 1, Parity.EVEN), A1, N + 1, 0.0)
    assert spin - thermo.density_fourier(state(DOWN, parity=Parity.EVEN), A1, N + 1, 0.0) \
        == pytest.approx(-0.5, abs=1e-14)
    left = thermo.density_fourier(state(DOWN, "L", 0, Parity.EVEN), A1, N + 1, 0.0)
    assert left - (N + 1 - 1) / 2 == pytest.approx(-0.5, abs=1e-14)


@pytest.mark.parametrize("st_, N, M, sz", [
    # (state, N, M, S^z) as quoted for the A1 phase
    (state(DOWN), 11, 5, Fraction(-1, 2)),
    (state(DOWN, "L", 0, Parity.EVEN), 12, 6, 0),
    (state(DOWN, "L", 1), 11, 5, Fraction(-1, 2)),
    (state(UP), 11, 5, Fraction(1, 2)),
    (state(UP, "R", 1), 11, 5, Fraction(1, 2)),
    (state(DOWN, "", 1, Parity.EVEN), 12, 5, -1),
    (state(DOWN, "LR", 1, Parity.EVEN), 12, 6, 0),
    (state(UP, "", 1, Parity.EVEN), 12, 5, 1),
    (state(UP, "LR", 1, Parity.EVEN), 12, 6, 0),
    (state(UP, "R", 0, Parity.EVEN), 12, 6, 0),
])
def test_counting_a1(st_, N, M, sz):
    assert thermo.count_roots(st_, N, A1) == M
    assert thermo.sz_of(st_, N, A1) == sz


def test_count_roots_without_fields():
    assert thermo.count_roots(state(DOWN), 11) == 5


def test_parity_mismatch():
    with pytest.raises(DomainError, match="parity mismatch"):
        thermo.count_roots(state(DOWN), 10, A1)


def test_strings_rejected_in_b_phase():
    with pytest.raises(DomainError):
        thermo.density_form(state(DOWN, "L", 1), pt_fields(0.75, 0.1), 11)


def mp_ground_density(mu, N, xi, chi):
    """Inverse transform of the all-down ground-state density, delta part at mu = 0 removed."""
    a, b = 0.5 + xi + 1j * chi, 0.5 + xi - 1j * chi

    def f(w, part):
        e = mpmath.exp(-w)
        val = ((2 * N + 1) * mpmath.exp(-w / 2) - mpmath.exp(-a * w) - mpmath.exp(-b * w)) / (2 * (1 + e))
        val += e / (2 * (1 + e))          # -1/(2(1+e^-w)) + 1/2
        val *= mpmath.cos(w * mu)
        return val.real if part == 0 else val.imag
    if abs(mu) < 1:
        # slow oscillation: tanh-sinh on the whole line; fast: cycle-by-cycle summation
        re = mpmath.quad(lambda w: f(w, 0), [0, mpmath.inf])
        im = mpmath.quad(lambda w: f(w, 1), [0, mpmath.inf])
    else:
        re = mpmath.quadosc(lambda w: f(w, 0), [0, mpmath.inf], omega=mu)
        im = mpmath.quadosc(lambda w: f(w, 1), [0, mpmath.inf], omega=mu)
    return complex(re, im) / math.pi


@pytest.mark.parametrize("mu", [0.0, 0.0025, 0.05, 0.3, 0.999, 1.0, 1.7, 6.0])
def test_density_realspace_matches_oracle(mu):
    N = 11
    dens = thermo.density_realspace(state(DOWN), A1, N, [mu])
    assert abs(dens.rho[0] - mp_ground_density(mu, N, 0.25, 0.2)) < 1e-8
    assert dens.atoms == [(0.0, -0.5)]


def test_density_realspace_total_count():
    N = 12
    st_ = state(DOWN, "", 1, Parity.EVEN, theta=0.7)
    grid = np.linspace(-14, 14, 1401)
    dens = thermo.density_realspace(st_, A1, N, grid)
    # the kink of rho~ at w = 0 gives rho ~ -rho~'(0+)/(pi mu^2); add both tails beyond |mu| = L
    h = 1e-6
    slope = (thermo.density_fourier(st_, A1, N, h) - thermo.density_fourier(st_, A1, N, 0.0)) / h
    tails = -2 * np.real(slope) / (math.pi * grid[-1])
    total = integrate.simpson(np.real(dens.rho), x=grid) + tails + sum(w for _, w in dens.atoms)
    assert total == pytest.approx(float(thermo.count_roots(st_, N, A1)), abs=2e-4)


def test_density_continuity_in_chi():
    a = thermo.density_realspace(state(DOWN), pt_fields(0.25, 1e-7), 11, [0.4]).rho
    b = thermo.density_realspace(state(DOWN), pt_fields(0.25, 0.0), 11, [0.4]).rho
    assert abs(a[0] - b[0]) < 1e-6


# --------------------------------------------------------------------------- energies


def mp_e0(xi, chi, N):
    z, w = mpmath.mpc(xi, chi), mpmath.mpc(xi, -chi)
    psi = mpmath.digamma
    val = (N - 1 + mpmath.pi - (2 * N + 1) * mpmath.log(4) - 1 / z - 1 / w
           + psi(z / 2 + 1) - psi(z / 2 + 0.5) + psi(w / 2 + 1) - psi(w / 2 + 0.5))
    return complex(val)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.02, 3.0), st.floats(-2, 2), st.integers(3, 500))
def test_e0_matches_mpmath(xi, chi, N):
    assume(abs(xi - 0.5) > 1e-3)
    ref = mp_e0(xi, chi, N)
    assert abs(ref.imag) < 1e-10 * abs(ref)
    assert abs(thermo.e0(pt_fields(xi, chi), N) - ref.real) < 1e-11 * max(1, abs(ref))


def test_e0_continuity_in_chi():
    assert abs(thermo.e0(pt_fields(0.3, 1e-9), 101) - thermo.e0(pt_fields(0.3, 0), 101)) < 1e-7


def test_spinon_energy():
    assert thermo.spinon_energy(0) == pytest.approx(2 * math.pi)
    assert thermo.spinon_energy(1.3) == thermo.spinon_energy(-1.3)
    assert 0 < thermo.spinon_energy(40) < 1e-50


def test_bound_energy_values():
    assert thermo.bound_energy("L", pt_fields(0.25, 0)) == pytest.approx(2 * math.pi * math.sqrt(2))
    m = thermo.bound_energy("L", A1)
    assert abs(m - (5.6330 - 3.1370j)) < 5e-4
    assert abs(thermo.bound_energy("R", A1) - m.conjugate()) < 1e-14
    re, im = thermo.bound_energy_parts(A1)
    assert abs(complex(re, im) - m) < 1e-13


@pytest.mark.parametrize("chi", [0.0, 0.4, 1.7])
def test_bound_parts_vanish_at_half(chi):
    assert thermo.bound_energy_parts(pt_fields(0.5, chi))[1] == pytest.approx(0, abs=1e-14)


def test_no_bound_state_in_b():
    with pytest.raises(DomainError, match="no bound state"):
        thermo.bound_energy("L", pt_fields(0.75, 0.1))


@settings(max_examples=60)
@given(st.floats(0.01, 0.49), st.floats(0.01, 3))
def test_bound_energy_loss_at_left_edge(xi, chi):
    f = pt_fields(xi, chi)
    assert thermo.bound_energy("L", f).imag < 0
    # A2 at the mirrored point: same energy at the spin-flipped parameters
    assert abs(thermo.bound_energy("L", pt_fields(-xi, -chi)) - thermo.bound_energy("L", f)) < 1e-12


def test_state_energy_examples():
    N, E0 = 11, thermo.ground_energy(A1, 11)
    m = thermo.bound_energy("L", A1)
    tl = StateSpec(DOWN, frozenset("L"), (1.0,))
    assert abs(thermo.state_energy(tl, A1, N) - (E0 + m + 2 * math.pi / math.cosh(math.pi))) < 1e-12
    lr = thermo.state_energy(state(UP), A1, N)
    xi, chi = 0.25, 0.2
    closed = E0 + 8 * math.pi * math.sin(math.pi * xi) * math.cosh(math.pi * chi) / (
        math.cosh(2 * math.pi * chi) - math.cos(2 * math.pi * xi))
    assert abs(lr - closed) < 1e-12 and abs(lr.imag) < 1e-13
    b = pt_fields(0.75, 0.1)
    assert thermo.state_energy(state(DOWN), b, N) == thermo.ground_energy(b, N)


def fields_in(phase, u, chi):
    xi = {PhaseLabel.A1: 0.02 + 0.46 * u, PhaseLabel.A2: -0.02 - 0.46 * u,
          PhaseLabel.B1: 0.52 + 2 * u, PhaseLabel.B2: -0.52 - 2 * u}[phase]
    return pt_fields(xi, chi)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(list(PhaseLabel)), st.sampled_from(list(Parity)),
       st.floats(0, 1), st.floats(-2, 2), st.floats(-3, 3))
def test_catalog_energy_matches_density_integral(phase, parity, u, chi, theta):
    fields = fields_in(phase, u, chi)
    N = 21 if parity is Parity.ODD else 20
    for st_ in thermo.enumerate_states(phase, parity, theta):
        E = thermo.state_energy(st_, fields, N)
        assert abs(E - thermo.density_energy(st_, fields, N)) < 1e-9 * max(1, abs(E))
        # real energies exactly for the Unbroken rows
        if thermo.pt_sector(st_, fields) == "Unbroken":
            assert abs(E.imag) < 1e-9 * max(1, abs(E))


def test_catalog_a1_odd():
    rows = thermo.enumerate_states(PhaseLabel.A1, Parity.ODD)
    assert len(rows) == 6
    assert [thermo.pt_sector(s, A1) for s in rows] == ["Unbroken"] * 2 + ["Broken"] * 4
    assert rows[0].label == "|-1/2>" and rows[1].label == "|1/2>_{L,R}"


def test_catalog_b2_even():
    f = pt_fields(-0.75, 0.1)
    rows = thermo.enumerate_states(PhaseLabel.B2, Parity.EVEN)
    assert sorted(s.label for s in rows) == ["|0>_{theta}", "|1>_{theta}"]
    assert all(thermo.pt_sector(s, f) == "Unbroken" for s in rows)


def test_catalog_a1_even_edge_state():
    st_ = thermo.find_state("down+L", PhaseLabel.A1, Parity.EVEN)
    assert st_.label == "|0>_{L}" and thermo.pt_sector(st_, A1) == "Broken"
    E = thermo.state_energy(st_, A1, 12)
    assert abs(E - thermo.ground_energy(A1, 12) - thermo.bound_energy("L", A1)) < 1e-12


def test_find_state_unknown():
    with pytest.raises(DomainError, match="not in the"):
        thermo.find_state("up+L", PhaseLabel.B1, Parity.ODD)
