"""One-magnon sector: quantization, wavefunctions and edge-mode localization.

With ``a_b = 1/2 - xi_b`` the one-magnon equation is

    ((mu - i/2)/(mu + i/2))^(2N) prod_b (mu + i a_b)/(mu - i a_b) = 1

and its N solutions (one per +/- pair, mu = 0 excluded) exhaust the sector
with a single down spin.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import BoundaryFields, DomainError, classify_phase

log = logging.getLogger(__name__)

SCAN_PER_SITE = 64
NEWTON_TOL = 1e-13


@dataclass(frozen=True)
class MagnonProfile:
    x: np.ndarray
    amplitude: np.ndarray
    probability: np.ndarray
    mu: complex | None = None


def _profile(amplitude, mu=None) -> MagnonProfile:
    amplitude = np.asarray(amplitude, dtype=complex)
    weight = np.abs(amplitude) ** 2
    total = weight.sum()
    if not np.isfinite(total) or total == 0:
        raise ArithmeticError("wavefunction not normalizable")
    return MagnonProfile(np.arange(1, len(amplitude) + 1), amplitude, weight / total, mu)


def _a(fields: BoundaryFields) -> np.ndarray:
    return 0.5 - np.array(fields.xi_pair, dtype=complex)


def magnon_energy(mu: complex, N: int, fields: BoundaryFields) -> complex:
    return -2 / (mu * mu + 0.25) + N - 1 + 1 / fields.xi_minus + 1 / fields.xi_plus


def product_residual(mu: complex, N: int, fields: BoundaryFields) -> complex:
    mu = complex(mu)
    val = ((mu - 0.5j) / (mu + 0.5j)) ** (2 * N)
    for ab in _a(fields):
        val *= (mu + 1j * ab) / (mu - 1j * ab)
    return val - 1


# --------------------------------------------------------------------------- roots


def _counting(mu, N, a):
    # 2N atan(2 mu) - sum_b atan(mu / a_b), divided by pi
    val = 2 * N * np.arctan(2 * mu)
    for ab in a:
        val = val - np.arctan(mu / ab)
    return np.real(val) / math.pi


def _real_roots(N: int, fields: BoundaryFields) -> list[float]:
    """All positive real roots, by bracketing every integer crossing of the counting function."""
    a = _a(fields)
    # mu = tan(t)/2 maps (0, pi/2) onto (0, inf) with sites resolved near the band edge
    t = np.linspace(0, math.pi / 2, SCAN_PER_SITE * (N + 4) + 1)[1:-1]
    mu = np.tan(t) / 2
    G = _counting(mu, N, a)
    roots = []
    for k in range(len(t) - 1):
        lo, hi = sorted((G[k], G[k + 1]))
        for target in range(math.ceil(lo), math.floor(hi) + 1):
            if target == G[k + 1] and k + 2 < len(t):
                continue  # counted by the next interval
            f = lambda m, I=target: _counting(m, N, a) - I
            if f(mu[k]) == 0:
                roots.append(float(mu[k]))
                continue
            roots.append(brentq(f, mu[k], mu[k + 1], xtol=1e-15, rtol=1e-15, maxiter=200))
    return roots


def _string_roots(N: int, fields: BoundaryFields) -> list[complex]:
    """The two string roots near ``i a_-`` and ``i a_+``.

    With ``mu = i a_c + v`` and ``Delta = a_c - a_other`` the equation becomes

        v (v + i Delta) = C(mu) = (mu + i a_-)(mu + i a_+) ((mu - i/2)/(mu + i/2))^(2N)

    which stays well conditioned when the strings nearly coincide (chi -> 0)
    and keeps ``v`` to full relative precision however small it is.
    """
    a = _a(fields)

    def C(mu):
        val = (mu + 1j * a[0]) * (mu + 1j * a[1]) * ((mu - 0.5j) / (mu + 0.5j)) ** (2 * N)
        der = val * (1 / (mu + 1j * a[0]) + 1 / (mu + 1j * a[1])
                     + 2 * N * (1 / (mu - 0.5j) - 1 / (mu + 0.5j)))
        return val, der

    # seeds: roots of v^2 + i Delta v - C(i a_-) = 0 around a_-
    delta = a[0] - a[1]
    c0, _ = C(1j * a[0])
    disc = np.sqrt(-delta * delta + 4 * c0 + 0j)
    big = (-1j * delta - disc) / 2 if abs(-1j * delta - disc) > abs(-1j * delta + disc) else \
        (-1j * delta + disc) / 2
    small = -c0 / big if big != 0 else 0j
    found = []
    for v in (small, big):
        # re-centre on whichever string parameter is closer
        c, other = (0, 1) if abs(v) <= abs(v + 1j * delta) else (1, 0)
        if c == 1:
            v = v + 1j * delta
        d = a[c] - a[other]
        for _ in range(100):
            mu = 1j * a[c] + v
            val, der = C(mu)
            g = v * (v + 1j * d) - val
            dg = 2 * v + 1j * d - der
            if dg == 0 or not np.isfinite(dg):
                break
            step = g / dg
            v = v - step
            if abs(step) <= NEWTON_TOL * max(abs(v), 1e-300):
                found.append(complex(1j * a[c] + v))
                break
    return found


def _polynomial_roots(N: int, fields: BoundaryFields) -> list[complex]:
    # (mu - i/2)^2N prod(mu + i a) - (mu + i/2)^2N prod(mu - i a), companion-matrix roots
    P = np.polynomial.polynomial
    a = _a(fields)
    lhs = P.polymul(P.polypow([-0.5j, 1], 2 * N), P.polymul([1j * a[0], 1], [1j * a[1], 1]))
    rhs = P.polymul(P.polypow([0.5j, 1], 2 * N), P.polymul([-1j * a[0], 1], [-1j * a[1], 1]))
    r = np.roots(P.polysub(lhs, rhs)[::-1])
    r = r[np.abs(r) > 1e-8]
    keep = [z for z in r if z.real > 1e-12 or (abs(z.real) <= 1e-12 and z.imag > 0)]
    return keep


def _canonical(mu: complex) -> complex:
    # one representative per +/- pair: Re > 0, or Im > 0 on the imaginary axis
    if mu.real < 0 or (mu.real == 0 and mu.imag < 0):
        return -mu
    return mu


def _distinct(roots, tol=1e-9) -> list[complex]:
    out = []
    for mu in roots:
        if all(abs(mu - nu) > tol * max(1.0, abs(mu)) for nu in out):
            out.append(mu)
    return out


def one_magnon_roots(N: int, fields: BoundaryFields) -> list[complex]:
    """All N one-magnon rapidities, real ones first in increasing order.

    Real roots come from the logarithmic counting function (PT or real
    fields); complex ones from Newton seeded at the ideal strings
    ``i(1/2 - xi_b)``.  For non-PT fields, or if that search comes up short,
    the polynomial form is solved directly.
    """
    if N < 2:
        raise DomainError("need N >= 2")
    roots: list[complex] = []
    if fields.is_pt:
        roots = [complex(m) for m in _real_roots(N, fields)]
        if len(roots) < N:
            strings = [_canonical(m) for m in _string_roots(N, fields) if abs(m.imag) > 1e-10]
            roots = _distinct(roots + strings, tol=1e-15)
    if len(roots) != N:
        if fields.is_pt:
            log.info("scan found %d of %d roots; solving the polynomial form", len(roots), N)
        roots = _distinct([_canonical(complex(m)) for m in _polynomial_roots(N, fields)])
    if len(roots) != N:
        raise ArithmeticError(f"incomplete magnon set: found {len(roots)} of {N} roots")
    real = sorted((m for m in roots if abs(m.imag) <= 1e-10), key=lambda m: m.real)
    cplx = sorted((m for m in roots if abs(m.imag) > 1e-10), key=lambda m: (m.imag, m.real))
    return [complex(m.real, 0.0) if abs(m.imag) <= 1e-10 else m for m in real] + cplx


# --------------------------------------------------------------------------- wavefunctions


def magnon_wavefunction(mu: complex, fields: BoundaryFields, N: int) -> MagnonProfile:
    """Amplitude F(x), x = 1..N, of the one-magnon state with rapidity ``mu``."""
    mu = complex(mu)
    if mu in (0.5j, -0.5j):
        raise DomainError("pole rapidity mu = +/- i/2")
    z = (mu + 0.5j) / (mu - 0.5j)
    c = 1 / fields.xi_minus - 1
    x = np.arange(1, N + 1)
    amp = (1 + c / z) * z ** x - (1 + c * z) * z ** (-x.astype(float))
    return _profile(amp, mu)


def _decay_ratio(side: str, fields: BoundaryFields) -> complex:
    xi = fields.xi_minus if side == "L" else fields.xi_plus
    return (xi - 1) / xi


def bound_mode_wavefunction(side: str, fields: BoundaryFields, N: int) -> MagnonProfile:
    side = side.upper()
    if side not in ("L", "R"):
        raise DomainError(f"side must be L or R, got {side!r}")
    if not fields.is_pt or not classify_phase(fields).is_a:
        raise DomainError("no bound mode outside the A phases")
    x = np.arange(1, N + 1)
    r = _decay_ratio(side, fields)
    if side == "L":
        xm = fields.xi_minus
        amp = (2 * xm - 1) / xm ** 2 * r ** (-x.astype(float))
        mu = 1j * (0.5 - xm)
    else:
        xp = fields.xi_plus
        amp = (1 - 2 * xp) / ((xp - 1) * xp) * r ** (-(N - x).astype(float))
        mu = 1j * (0.5 - xp)
    return _profile(amp, mu)


def localization_length(side: str, fields: BoundaryFields) -> float:
    """Decay length ``1 / ln|(xi_b - 1)/xi_b|`` in lattice sites."""
    side = side.upper()
    if side not in ("L", "R"):
        raise DomainError(f"side must be L or R, got {side!r}")
    r = abs(_decay_ratio(side, fields))
    if r <= 1:
        raise DomainError(f"mode not localized: |(xi - 1)/xi| = {r:.6g} <= 1")
    return 1 / math.log(r)
