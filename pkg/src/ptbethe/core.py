"""Boundary parameters, phase labels and the spin-flip map.

The chain is

    H = sum_j sigma_j . sigma_{j+1} + h1 sigma^z_1 + hN sigma^z_N

and the integrable parametrisation uses ``xi_minus = 1/h1``, ``xi_plus = 1/hN``.
PT-symmetric fields have ``xi_minus = xi + i chi`` and ``xi_plus = xi - i chi``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

PT_RTOL = 1e-12


class DomainError(ValueError):
    """Input outside the domain where a quantity is defined."""


class Reference(enum.Enum):
    ALL_UP = "up"
    ALL_DOWN = "down"

    @property
    def sign(self) -> int:
        # +1 for the all-up reference, -1 for all-down (boundary terms flip)
        return 1 if self is Reference.ALL_UP else -1

    def flipped(self) -> "Reference":
        return Reference.ALL_DOWN if self is Reference.ALL_UP else Reference.ALL_UP

    @classmethod
    def parse(cls, value) -> "Reference":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "").replace("-", "")
        if key in ("up", "allup"):
            return cls.ALL_UP
        if key in ("down", "alldown"):
            return cls.ALL_DOWN
        raise DomainError(f"unknown reference {value!r}")


class PhaseLabel(enum.Enum):
    A1 = "A1"
    A2 = "A2"
    B1 = "B1"
    B2 = "B2"

    @property
    def is_a(self) -> bool:
        return self in (PhaseLabel.A1, PhaseLabel.A2)

    def flipped(self) -> "PhaseLabel":
        return {
            PhaseLabel.A1: PhaseLabel.A2,
            PhaseLabel.A2: PhaseLabel.A1,
            PhaseLabel.B1: PhaseLabel.B2,
            PhaseLabel.B2: PhaseLabel.B1,
        }[self]


@dataclass(frozen=True)
class BoundaryFields:
    """Boundary fields in both parametrisations.

    Build with :func:`fields_from_h` or :func:`pt_fields`; ``xi`` and ``chi``
    are ``None`` unless ``xi_plus == conj(xi_minus)``.
    """

    h1: complex
    hN: complex
    xi_minus: complex
    xi_plus: complex
    xi: float | None = None
    chi: float | None = None

    @property
    def is_pt(self) -> bool:
        return self.xi is not None

    @property
    def xi_pair(self) -> tuple[complex, complex]:
        return self.xi_minus, self.xi_plus


@dataclass(frozen=True)
class ChainSpec:
    N: int
    M: int
    reference: Reference = Reference.ALL_UP

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("N must be positive")
        if not 0 <= self.M <= self.N:
            raise DomainError("need 0 <= M <= N")
        object.__setattr__(self, "reference", Reference.parse(self.reference))

    @property
    def n_down(self) -> int:
        """Number of down spins of the Bethe state."""
        return self.M if self.reference is Reference.ALL_UP else self.N - self.M

    @property
    def sz(self) -> Fraction:
        return Fraction(self.N, 2) - self.n_down


def _is_conjugate_pair(a: complex, b: complex) -> bool:
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b.conjugate()) <= PT_RTOL * scale


def _from_xi(xi_minus: complex, xi_plus: complex, h1: complex, hN: complex) -> BoundaryFields:
    if _is_conjugate_pair(xi_minus, xi_plus):
        xi = 0.5 * (xi_minus.real + xi_plus.real)
        chi = 0.5 * (xi_minus.imag - xi_plus.imag)
        return BoundaryFields(h1, hN, xi_minus, xi_plus, xi, chi)
    return BoundaryFields(h1, hN, xi_minus, xi_plus)


def fields_from_h(h1: complex, hN: complex) -> BoundaryFields:
    h1 = complex(h1)
    hN = complex(hN)
    if h1 == 0 or hN == 0:
        raise DomainError("field must be nonzero")
    return _from_xi(1 / h1, 1 / hN, h1, hN)


def fields_from_xi(xi_minus: complex, xi_plus: complex) -> BoundaryFields:
    xi_minus = complex(xi_minus)
    xi_plus = complex(xi_plus)
    if xi_minus == 0 or xi_plus == 0:
        raise DomainError("boundary parameter must be nonzero")
    return _from_xi(xi_minus, xi_plus, 1 / xi_minus, 1 / xi_plus)


def pt_fields(xi: float, chi: float) -> BoundaryFields:
    """PT-symmetric fields with ``xi_minus = xi + i chi``."""
    xi_minus = complex(xi, chi)
    if xi_minus == 0:
        raise DomainError("boundary parameter must be nonzero")
    return BoundaryFields(1 / xi_minus, 1 / xi_minus.conjugate(), xi_minus,
                          xi_minus.conjugate(), float(xi), float(chi))


def classify_phase(fields: BoundaryFields) -> PhaseLabel:
    if not fields.is_pt:
        raise DomainError("phase undefined: fields are not PT-symmetric")
    xi = fields.xi
    if xi in (-0.5, 0.0, 0.5):
        raise DomainError(f"phase undefined: xi = {xi} lies on a phase boundary")
    if xi > 0.5:
        return PhaseLabel.B1
    if xi > 0:
        return PhaseLabel.A1
    if xi > -0.5:
        return PhaseLabel.A2
    return PhaseLabel.B2


def flip_fields(fields: BoundaryFields) -> BoundaryFields:
    flipped = BoundaryFields(-fields.h1, -fields.hN, -fields.xi_minus, -fields.xi_plus)
    if fields.is_pt:
        flipped = BoundaryFields(flipped.h1, flipped.hN, flipped.xi_minus,
                                 flipped.xi_plus, -fields.xi, -fields.chi)
    return flipped


def spin_flip(fields: BoundaryFields, sz) -> tuple[BoundaryFields, Fraction]:
    """Global spin flip: ``h -> -h`` on both edges and ``S^z -> -S^z``."""
    return flip_fields(fields), -Fraction(sz)


def effective_xi(fields: BoundaryFields, reference: Reference) -> tuple[complex, complex]:
    """Boundary parameters seen by the Bethe equations of ``reference``.

    The all-down equations are the all-up ones with ``xi_pm -> -xi_pm``.
    """
    s = Reference.parse(reference).sign
    return s * fields.xi_minus, s * fields.xi_plus
