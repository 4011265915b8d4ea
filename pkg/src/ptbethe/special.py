"""Complex digamma and an overflow-safe cosecant of pi*z."""

from __future__ import annotations

import cmath
import math

from .core import DomainError

# Bernoulli numbers B_2k, k = 1..10
_BERNOULLI = (
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
    -3617 / 510, 43867 / 798, -174611 / 330,
)
_ASYMPTOTIC_RE = 10.0


def digamma(z: complex) -> complex:
    """psi(z) by upward recurrence to Re z >= 10, then the Stirling series."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise DomainError(f"digamma pole at z = {z.real:g}")
    shift = 0j
    while z.real < _ASYMPTOTIC_RE:
        shift -= 1 / z
        z += 1
    inv2 = 1 / (z * z)
    series = 0j
    power = inv2
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k) * power
        power *= inv2
    return shift + cmath.log(z) - 0.5 / z - series


def csc_pi(z: complex) -> complex:
    """1/sin(pi z); the exponential form keeps |Im z| up to several hundred finite."""
    z = complex(z)
    if z.imag == 0 and z.real == math.floor(z.real):
        raise DomainError(f"cosecant pole at z = {z.real:g}")
    if abs(z.imag) < 20:
        return 1 / cmath.sin(math.pi * z)
    # sin(pi z) = (w - 1/w) / (2i) with w = exp(i pi z), |w| < 1 for Im z > 0
    if z.imag > 0:
        w = cmath.exp(1j * math.pi * z)
        return -2j * w / (1 - w * w)
    w = cmath.exp(-1j * math.pi * z)
    return 2j * w / (1 - w * w)
