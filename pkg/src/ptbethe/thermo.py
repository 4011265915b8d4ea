"""Thermodynamic-limit densities, energies and the elementary-state catalog.

Every state is built on the real-root sea of one reference state, optionally
with boundary strings (one per edge) and spinons (holes at rapidity theta).
Its Fourier-space density is a sum of terms

    A e^{-c|w|} / (2 (1 + e^{-|w|}))        (exp terms)
    A cos(theta w) / (1 + e^{-|w|})         (cos terms)

and everything else (root count, energy, real-space density) follows from
the terms alone.  Write ``q_b = -s xi_b`` for reference sign ``s`` (all-down:
``q = xi``).  The string on edge ``b`` sits at ``i(1/2 + q_b)``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .core import (BoundaryFields, DomainError, PhaseLabel, Reference, classify_phase,
                   flip_fields)
from .special import csc_pi, digamma

SIDES = ("L", "R")
# below this |mu| the density integral uses plain adaptive quadrature
FOURIER_MU_MIN = 1.0
QUAD_RTOL = 1e-7


class Parity(enum.Enum):
    ODD = "odd"
    EVEN = "even"

    @classmethod
    def of(cls, N: int) -> "Parity":
        return cls.ODD if N % 2 else cls.EVEN


class TermKind(enum.Enum):
    EXP = "exp"
    COS = "cos"


@dataclass(frozen=True)
class DensityTerm:
    amplitude: float
    decay: complex        # c for exp terms, theta for cos terms
    kind: TermKind = TermKind.EXP
    tag: str = ""

    def __call__(self, omega):
        w = np.abs(omega)
        if self.kind is TermKind.EXP:
            return self.amplitude * np.exp(-self.decay * w) / (2 * (1 + np.exp(-w)))
        return self.amplitude * np.cos(self.decay.real * w) / (1 + np.exp(-w))

    def at_zero(self) -> float:
        return self.amplitude / 4 if self.kind is TermKind.EXP else self.amplitude / 2


@dataclass(frozen=True)
class DensityForm:
    terms: tuple
    n_strings: int = 0

    def __call__(self, omega):
        return sum(t(omega) for t in self.terms)

    @property
    def leading(self) -> DensityTerm:
        return self.terms[0]


@dataclass(frozen=True)
class StateSpec:
    reference: Reference
    strings: frozenset = frozenset()
    spinons: tuple = ()
    parity: Parity = Parity.ODD
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "reference", Reference.parse(self.reference))
        strings = frozenset(s.upper() for s in self.strings)
        if not strings <= set(SIDES):
            raise DomainError(f"unknown string side in {sorted(self.strings)}")
        object.__setattr__(self, "strings", strings)
        object.__setattr__(self, "spinons", tuple(float(t) for t in self.spinons))

    @property
    def key(self) -> str:
        """Shell-safe identifier, e.g. ``down+L+th``."""
        parts = [self.reference.value] + sorted(self.strings)
        parts += ["th"] * len(self.spinons)
        return "+".join(parts)


# --------------------------------------------------------------------------- phases


def _natural_reference(phase: PhaseLabel) -> Reference:
    # ground state sea: all-down in A1/B1, all-up in A2/B2
    return Reference.ALL_DOWN if phase in (PhaseLabel.A1, PhaseLabel.B1) else Reference.ALL_UP


def _q(fields: BoundaryFields, reference: Reference) -> dict:
    s = reference.sign
    return {"L": -s * fields.xi_minus, "R": -s * fields.xi_plus}


def _require_pt(fields: BoundaryFields) -> PhaseLabel:
    if not fields.is_pt:
        raise DomainError("thermodynamic formulas require PT-symmetric fields")
    return classify_phase(fields)


def _check_state(state: StateSpec, phase: PhaseLabel):
    if state.strings and not phase.is_a:
        raise DomainError(f"no boundary strings in phase {phase.value}")


# --------------------------------------------------------------------------- densities


def density_form(state: StateSpec, fields: BoundaryFields, N: int) -> DensityForm:
    phase = _require_pt(fields)
    _check_state(state, phase)
    q = _q(fields, state.reference)
    terms = [DensityTerm(2 * N + 1, 0.5, tag="bulk"), DensityTerm(-1, 0.0, tag="zero-root")]
    for b in SIDES:
        c = 0.5 + q[b]
        # a_c has Fourier transform sign(Re c) e^{-|c||w|}
        sgn = 1 if c.real > 0 else -1
        terms.append(DensityTerm(-sgn, sgn * c, tag=f"boundary-{b}"))
    for b in sorted(state.strings):
        terms.append(DensityTerm(-1, 0.5 - q[b], tag=f"string-{b}"))
        terms.append(DensityTerm(-1, 1.5 + q[b], tag=f"string-{b}"))
    for theta in state.spinons:
        terms.append(DensityTerm(-1, complex(theta), TermKind.COS, tag="spinon"))
    return DensityForm(tuple(terms), len(state.strings))


def density_fourier(state: StateSpec, fields: BoundaryFields, N: int, omega):
    """rho~(omega); real for zero- and two-string states."""
    val = density_form(state, fields, N)(np.asarray(omega, dtype=float))
    imag = np.max(np.abs(np.imag(val)), initial=0.0)
    if len(state.strings) != 1 and imag < 1e-12 * (1 + np.max(np.abs(val), initial=0.0)):
        val = np.real(val)
    return val if np.ndim(val) else val[()]


def count_roots(state: StateSpec, N: int, fields: BoundaryFields | None = None) -> Fraction:
    """Number of Bethe roots, ``#strings + rho~(0)``.

    The boundary terms contribute -1/4 each whenever ``Re(1/2 + q) > 0`` and
    +1/4 otherwise, which is why ``fields`` matters outside the A phases.
    """
    if state.parity is not Parity.of(N):
        raise DomainError(f"parity mismatch: state declared {state.parity.value}, N = {N}")
    n_str = len(state.strings)
    count = Fraction(N, 2) + n_str - Fraction(n_str + len(state.spinons), 2)
    if fields is None:
        count -= Fraction(1, 2)
    else:
        for b, qb in _q(fields, state.reference).items():
            count += Fraction(-1 if (0.5 + qb).real > 0 else 1, 4)
    if count.denominator != 1:
        raise DomainError(f"parity mismatch: N = {N} gives {count} roots")
    return count


def sz_of(state: StateSpec, N: int, fields: BoundaryFields | None = None) -> Fraction:
    """``+(N/2 - M)`` on the all-up sea, ``-(N/2 - M)`` on the all-down sea."""
    M = count_roots(state, N, fields)
    return state.reference.sign * (Fraction(N, 2) - M)


# --------------------------------------------------------------------------- energies


def _beta(x: complex) -> complex:
    # int_0^inf e^{-x w} / (1 + e^{-w}) dw
    return 0.5 * (digamma((x + 1) / 2) - digamma(x / 2))


def e0(fields: BoundaryFields, N: int) -> float:
    """Ground-state energy of the all-down sea with no strings or holes."""
    if not fields.is_pt:
        raise DomainError("E0 requires PT-symmetric fields")
    z = fields.xi_minus
    w = fields.xi_plus
    val = (N - 1 + math.pi - (2 * N + 1) * math.log(4) - 1 / z - 1 / w
           + digamma(z / 2 + 1) - digamma(z / 2 + 0.5)
           + digamma(w / 2 + 1) - digamma(w / 2 + 0.5))
    if abs(val.imag) > 1e-10 * max(1.0, abs(val)):
        raise ArithmeticError(f"E0 has imaginary part {val.imag:.3g}")
    return val.real


def ground_energy(fields: BoundaryFields, N: int) -> float:
    """E0 of the phase: the formula at (xi, chi), or at (-xi, -chi) in A2/B2."""
    phase = _require_pt(fields)
    if _natural_reference(phase) is Reference.ALL_UP:
        fields = flip_fields(fields)
    return e0(fields, N)


def spinon_energy(theta: float) -> float:
    theta = abs(float(theta))
    if theta > 300:
        return 4 * math.pi * math.exp(-math.pi * theta)
    return 2 * math.pi / math.cosh(math.pi * theta)


def bound_energy(side: str, fields: BoundaryFields) -> complex:
    """Energy of the bound state on edge ``side``.

    In A1 this is ``2 pi csc(pi xi_b)``; in A2 the same expression at the
    spin-flipped parameters ``-xi_b``.
    """
    side = side.upper()
    if side not in SIDES:
        raise DomainError(f"side must be L or R, got {side!r}")
    phase = _require_pt(fields)
    if not phase.is_a:
        raise DomainError(f"no bound state in phase {phase.value}")
    q = _q(fields, _natural_reference(phase))[side]
    return 2 * math.pi * csc_pi(q)


def bound_energy_parts(fields: BoundaryFields) -> tuple[float, float]:
    """(Re, Im) of the left bound-state energy, in closed trigonometric form.

    Also defined at the A/B boundary ``|xi| = 1/2``, where Im vanishes.
    """
    if not fields.is_pt:
        raise DomainError("thermodynamic formulas require PT-symmetric fields")
    xi, chi = fields.xi, fields.chi
    if abs(xi) != 0.5:
        phase = classify_phase(fields)
        if not phase.is_a:
            raise DomainError(f"no bound state in phase {phase.value}")
    if xi < 0:
        xi, chi = -xi, -chi
    den = math.cosh(2 * math.pi * chi) - math.cos(2 * math.pi * xi)
    re = 4 * math.pi * math.sin(math.pi * xi) * math.cosh(math.pi * chi) / den
    im = -4 * math.pi * math.cos(math.pi * xi) * math.sinh(math.pi * chi) / den
    return re, im


def bound_states(state: StateSpec, fields: BoundaryFields) -> frozenset:
    """Edges carrying a bound state.

    Relative to the phase's natural sea each string adds a bound state; the
    opposite sea in an A phase already carries both, and each string removes one.
    """
    phase = _require_pt(fields)
    _check_state(state, phase)
    if state.reference is _natural_reference(phase) or not phase.is_a:
        return frozenset(state.strings)
    return frozenset(SIDES) - state.strings


def pt_sector(state: StateSpec, fields: BoundaryFields) -> str:
    return "Broken" if len(bound_states(state, fields)) == 1 else "Unbroken"


def state_energy(state: StateSpec, fields: BoundaryFields, N: int) -> complex:
    """E0 + bound-state energies + spinon energies."""
    count_roots(state, N, fields)
    E = complex(ground_energy(fields, N))
    for b in sorted(bound_states(state, fields)):
        E += bound_energy(b, fields)
    E += sum(spinon_energy(t) for t in state.spinons)
    return E


def density_energy(state: StateSpec, fields: BoundaryFields, N: int) -> complex:
    """Energy integrated directly from the density terms.

    Independent of the composition rule in :func:`state_energy`: uses
    ``-int rho(mu) 2/(mu^2 + 1/4) dmu = -2 int rho~(w) e^{-|w|/2} dw`` plus the
    bare string energies and the boundary constant of the reference.
    """
    form = density_form(state, fields, N)
    q = _q(fields, state.reference)
    E = complex(N - 1 - 1 / q["L"] - 1 / q["R"])
    for b in state.strings:
        E += 2 / (q[b] * (1 + q[b]))
    for t in form.terms:
        if t.kind is TermKind.EXP:
            E += -2 * t.amplitude * _beta(t.decay + 0.5)
        else:
            E += -t.amplitude * spinon_energy(t.decay.real)
    return E


# --------------------------------------------------------------------------- catalog

def _ket(sz: Fraction, extras: list[str]) -> str:
    s = str(sz)
    return f"|{s}>" + (f"_{{{','.join(extras)}}}" if extras else "")


def _catalog_rows(phase: PhaseLabel, parity: Parity):
    """(reference, strings, n_spinons) for the natural-sea orientation A1/B1."""
    down, up = Reference.ALL_DOWN, Reference.ALL_UP
    if phase is PhaseLabel.B1:
        if parity is Parity.ODD:
            return [(down, "", 0)]
        return [(down, "", 1), (up, "", 1)]
    if parity is Parity.ODD:
        return [(down, "", 0), (up, "", 0), (down, "L", 1), (up, "R", 1),
                (down, "R", 1), (up, "L", 1)]
    return [(down, "", 1), (up, "LR", 1), (up, "", 1), (down, "LR", 1),
            (down, "L", 0), (down, "R", 0)]


def _representative_fields(phase: PhaseLabel) -> BoundaryFields:
    from .core import pt_fields
    xi = {PhaseLabel.A1: 0.25, PhaseLabel.A2: -0.25, PhaseLabel.B1: 0.75,
          PhaseLabel.B2: -0.75}[phase]
    return pt_fields(xi, 0.1)


def enumerate_states(phase: PhaseLabel, parity: Parity, theta: float = 1.0) -> list[StateSpec]:
    """Elementary states of one phase and parity, in table order.

    A2/B2 rows are the spin flips of the A1/B1 rows.
    """
    phase = PhaseLabel(phase)
    parity = Parity(parity)
    base = phase if phase in (PhaseLabel.A1, PhaseLabel.B1) else phase.flipped()
    flip = base is not phase
    fields = _representative_fields(phase)
    N = 11 if parity is Parity.ODD else 10
    states = []
    for ref, strings, n_spin in _catalog_rows(base, parity):
        if flip:
            ref = ref.flipped()
        st = StateSpec(ref, frozenset(strings), (theta,) * n_spin, parity)
        sz = sz_of(st, N, fields)
        extras = ["theta"] * n_spin + sorted(bound_states(st, fields))
        states.append(StateSpec(ref, st.strings, st.spinons, parity, _ket(sz, extras)))
    return states


def find_state(key: str, phase: PhaseLabel, parity: Parity, theta: float = 1.0) -> StateSpec:
    for st in enumerate_states(phase, parity, theta):
        if st.key == key:
            return st
    keys = ", ".join(s.key for s in enumerate_states(phase, parity, theta))
    raise DomainError(f"state {key!r} not in the {phase.value}/{parity.value} catalog ({keys})")


# --------------------------------------------------------------------------- real space


@dataclass
class RealSpaceDensity:
    mu: np.ndarray
    rho: np.ndarray
    # point masses (position, weight) carried by delta functions
    atoms: list


def density_realspace(state: StateSpec, fields: BoundaryFields, N: int, mu_grid,
                      abs_tol: float = 1e-10) -> RealSpaceDensity:
    """Inverse Fourier transform of rho~ on ``mu_grid``.

    Terms with zero decay (the removed mu = 0 root and each spinon hole) tend
    to a nonzero constant or oscillation at large omega; their delta-function
    parts are split off analytically and returned as atoms, and the regular
    remainder is integrated on [0, inf): by QUADPACK's Fourier routine for
    ``|mu| >= 1`` and plain adaptive quadrature below.  Any quadrature warning
    is raised as an error rather than returned as a number.
    """
    form = density_form(state, fields, N)
    atoms = []
    smooth = []
    for t in form.terms:
        if t.kind is TermKind.COS:
            # A cos(theta w)/(1+e^-w) = A cos(theta w) - A cos(theta w) e^-w/(1+e^-w)
            th = t.decay.real
            atoms += [(th, t.amplitude / 2), (-th, t.amplitude / 2)]
            smooth.append(("cos", t.amplitude, th))
        elif t.decay == 0:
            atoms.append((0.0, t.amplitude / 2))
            smooth.append(("zero", t.amplitude, 0.0))
        else:
            smooth.append(("exp", t.amplitude, t.decay))

    def g(w, part):
        e = math.exp(-w)
        val = 0j
        for kind, A, c in smooth:
            if kind == "exp":
                val += A * np.exp(-c * w) / (2 * (1 + e))
            elif kind == "zero":
                val += -A * e / (2 * (1 + e))
            else:
                val += -A * math.cos(c * w) * e / (1 + e)
        return val.real if part == 0 else val.imag

    mu_grid = np.asarray(mu_grid, dtype=float)
    out = np.zeros(len(mu_grid), dtype=complex)
    for k, mu in enumerate(mu_grid):
        for part in (0, 1):
            with warnings.catch_warnings():
                warnings.simplefilter("error", integrate.IntegrationWarning)
                try:
                    if abs(mu) < FOURIER_MU_MIN:
                        # the cosine period is too long for the cycle-by-cycle routine
                        val, err = integrate.quad(lambda w: g(w, part) * math.cos(mu * w), 0, np.inf,
                                                  epsabs=abs_tol, limit=400)
                    else:
                        val, err = integrate.quad(g, 0, np.inf, args=(part,), weight="cos",
                                                  wvar=abs(mu), epsabs=abs_tol, limlst=200)
                except integrate.IntegrationWarning as exc:
                    val, err = math.nan, math.inf
                    reason = str(exc).splitlines()[0]
                else:
                    reason = ""
            # the Fourier routine works to an absolute target, so allow a relative
            # error floor for the O(N) values of large chains
            if not np.isfinite(val) or err > 1e3 * abs_tol + QUAD_RTOL * abs(val):
                raise ArithmeticError(
                    f"density quadrature did not converge at mu = {mu} "
                    f"(estimate {val}, error {err}) {reason}".rstrip())
            out[k] += (val if part == 0 else 1j * val) / math.pi
    rho = out.real if np.max(np.abs(out.imag), initial=0) < 1e-12 else out
    return RealSpaceDensity(mu_grid, rho, atoms)
