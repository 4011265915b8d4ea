"""Finite-size Bethe equations of the open chain.

Roots are stored one per +/- pair.  With effective boundary parameters
``p = (p_minus, p_plus)`` (``p = xi`` for the all-up reference, ``p = -xi`` for
all-down) and ``a_b = 1/2 - p_b`` the equations read

    ((mu_j - i/2)/(mu_j + i/2))^(2N) prod_b (mu_j + i a_b)/(mu_j - i a_b)
        = prod_{l != j} (mu_j - mu_l - i)(mu_j + mu_l - i)
                        / ((mu_j - mu_l + i)(mu_j + mu_l + i))

and the energy is ``-sum 2/(mu^2 + 1/4) + N - 1 + 1/p_minus + 1/p_plus``.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import (BoundaryFields, ChainSpec, DomainError, Reference, classify_phase,
                   effective_xi, pt_fields)

log = logging.getLogger(__name__)

NEWTON_TOL = 1e-11
NEWTON_MAX_ITER = 200
NEWTON_MAX_HALVINGS = 20
CONTINUATION_STEPS = 10
# a real root beyond this is treated as escaping to infinity
ESCAPE_BOUND = 1e6


class RootKind(enum.Enum):
    REAL = "real"
    STRING_LEFT = "L"
    STRING_RIGHT = "R"


class SingularJacobian(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class BetheRoots:
    roots: tuple
    kinds: tuple
    quantum_numbers: tuple
    spec: ChainSpec
    fields: BoundaryFields

    def __post_init__(self):
        roots = tuple(complex(m) for m in self.roots)
        object.__setattr__(self, "roots", roots)
        kinds = tuple(self.kinds) if self.kinds else (RootKind.REAL,) * len(roots)
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "quantum_numbers", tuple(int(i) for i in self.quantum_numbers))
        if len(roots) != self.spec.M:
            raise DomainError(f"expected {self.spec.M} roots, got {len(roots)}")
        if len(kinds) != len(roots):
            raise DomainError("one kind per root required")
        for j, mu in enumerate(roots):
            if mu == 0:
                raise DomainError("root mu = 0 is excluded")
            for nu in roots[j + 1:]:
                if mu == nu or mu == -nu:
                    raise DomainError(f"roots {mu} and {nu} coincide up to sign")

    @property
    def mu(self) -> np.ndarray:
        return np.array(self.roots, dtype=complex)

    @property
    def N(self) -> int:
        return self.spec.N

    @property
    def p(self) -> tuple[complex, complex]:
        return effective_xi(self.fields, self.spec.reference)

    @property
    def is_real(self) -> bool:
        return all(m.imag == 0 for m in self.roots)


@dataclass(frozen=True)
class SolveReport:
    converged: bool
    iterations: int
    final_residual_norm: float
    roots: BetheRoots
    # side -> offset of the refined string root from its ideal position
    string_offsets: dict = field(default_factory=dict)


def make_roots(spec: ChainSpec, fields: BoundaryFields, roots, kinds=None,
               quantum_numbers=()) -> BetheRoots:
    return BetheRoots(tuple(roots), tuple(kinds or ()), tuple(quantum_numbers), spec, fields)


def _string_params(p) -> np.ndarray:
    return 0.5 - np.asarray(p, dtype=complex)


# --------------------------------------------------------------------------- product form


def _product_factors(mu: np.ndarray, N: int, a: np.ndarray):
    """LHS_j and RHS_j of the product equations, with pole checks."""
    ih = 0.5j
    if np.any(mu + ih == 0):
        raise ZeroDivisionError("pole of bulk factor (mu + i/2) = 0")
    lhs = ((mu - ih) / (mu + ih)) ** (2 * N)
    for b, ab in enumerate(a):
        den = mu - 1j * ab
        if np.any(den == 0):
            raise ZeroDivisionError(f"pole of boundary factor {b}: mu = i a")
        lhs = lhs * (mu + 1j * ab) / den
    d = mu[:, None] - mu[None, :]
    s = mu[:, None] + mu[None, :]
    off = ~np.eye(len(mu), dtype=bool)
    den = (d + 1j) * (s + 1j)
    if np.any(den[off] == 0):
        raise ZeroDivisionError("pole of scattering factor mu_j -/+ mu_l = -i")
    ratio = np.where(off, (d - 1j) * (s - 1j) / np.where(off, den, 1), 1)
    rhs = np.prod(ratio, axis=1)
    return lhs, rhs


def bae_residual_product(roots: BetheRoots) -> np.ndarray:
    """``LHS_j / RHS_j - 1`` for every root."""
    lhs, rhs = _product_factors(roots.mu, roots.N, _string_params(roots.p))
    if np.any(rhs == 0):
        raise ZeroDivisionError("zero of scattering product mu_j -/+ mu_l = i")
    return lhs / rhs - 1


def with_signs(roots: BetheRoots, signs) -> BetheRoots:
    """Replace each representative ``mu_j`` by ``s_j mu_j``."""
    mu = roots.mu * np.asarray(signs, dtype=float)
    return replace(roots, roots=tuple(mu))


def symmetric_extension_residual(roots: BetheRoots) -> np.ndarray:
    """Product residuals at all 2M points ``+mu_j`` and ``-mu_j``."""
    flipped = with_signs(roots, -np.ones(len(roots.roots)))
    return np.concatenate([bae_residual_product(roots), bae_residual_product(flipped)])


# --------------------------------------------------------------------------- logarithmic form


def _boundary_phase(x: np.ndarray, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """sum_b atan(x / a_b) and its x-derivative, real for PT or real fields."""
    if np.any(a == 0):
        raise DomainError("log form undefined at xi = 1/2")
    val = np.zeros(len(x), dtype=complex)
    der = np.zeros(len(x), dtype=complex)
    for ab in a:
        val += np.arctan(x / ab)
        der += ab / (ab * ab + x * x)
    if np.max(np.abs(val.imag), initial=0) > 1e-12 * (1 + np.max(np.abs(val), initial=0)):
        raise DomainError("log form requires PT-symmetric or real boundary fields")
    return val.real, der.real


def _log_residual(x: np.ndarray, N: int, a: np.ndarray, I: np.ndarray):
    bval, bder = _boundary_phase(x, a)
    d = x[:, None] - x[None, :]
    s = x[:, None] + x[None, :]
    scatter = np.sum(np.arctan(d) + np.arctan(s), axis=1)
    res = (2 * N + 1) * np.arctan(2 * x) - bval - scatter - math.pi * I
    kd = 1 / (1 + d * d)
    ks = 1 / (1 + s * s)
    jac = kd - ks
    diag = (2 * N + 1) * 2 / (1 + 4 * x * x) - bder - (kd.sum(1) - 1 + ks.sum(1) + np.diag(ks))
    np.fill_diagonal(jac, diag)
    return res, jac


def log_bae_residual(roots: BetheRoots) -> np.ndarray:
    if not roots.is_real:
        raise DomainError("log form requires real roots")
    if len(roots.quantum_numbers) != len(roots.roots):
        raise DomainError("log form requires one quantum number per root")
    x = roots.mu.real
    res, _ = _log_residual(x, roots.N, _string_params(roots.p),
                           np.array(roots.quantum_numbers, dtype=float))
    return res


def default_quantum_numbers(spec: ChainSpec) -> list[int]:
    """Consecutive ladder ``I_j = j``; callers pass gapped ladders for excitations."""
    return list(range(1, spec.M + 1))


def free_seed(N: int, I) -> np.ndarray:
    return np.tan(math.pi * np.asarray(I, dtype=float) / (2 * N + 1)) / 2


def _newton_real(x0, N, a, I, tol, max_iter):
    x = np.array(x0, dtype=float)
    res, jac = _log_residual(x, N, a, I)
    norm = np.max(np.abs(res), initial=0.0)
    it = 0
    while norm >= tol and it < max_iter:
        it += 1
        try:
            dx = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian("singular Jacobian") from exc
        step = 1.0
        for _ in range(NEWTON_MAX_HALVINGS + 1):
            trial = x + step * dx
            if np.all(trial > 0):
                tres, tjac = _log_residual(trial, N, a, I)
                tnorm = np.max(np.abs(tres))
                if tnorm < norm:
                    break
            step *= 0.5
        else:
            if not np.all(trial > 0):
                break
        x, res, jac, norm = trial, tres, tjac, tnorm
        if x.max() > ESCAPE_BOUND:
            log.info("root escaping to infinity (%.3g); no finite solution for this ladder", x.max())
            break
    return x, norm, it


def _check_real_solve_input(spec: ChainSpec, fields: BoundaryFields, I):
    if not fields.is_pt:
        raise DomainError("real-root solver requires PT-symmetric fields")
    if spec.M > (spec.N - 1) / 2 + 1:
        raise DomainError("too many roots for an all-real solution")
    I = np.asarray(I, dtype=int)
    if len(I) != spec.M:
        raise DomainError("need one quantum number per root")
    if len(I) and (I[0] < 1 or np.any(np.diff(I) <= 0)):
        raise DomainError("quantum numbers must be strictly increasing positive integers")
    return I


def solve_real_roots(spec: ChainSpec, fields: BoundaryFields, I=None, seed=None, *,
                     tol: float = NEWTON_TOL, max_iter: int = NEWTON_MAX_ITER) -> SolveReport:
    """Damped Newton on the logarithmic equations for an all-real root set.

    Falls back to a chi-continuation from the real-field chain when the direct
    solve does not converge.
    """
    I = default_quantum_numbers(spec) if I is None else list(I)
    Iarr = _check_real_solve_input(spec, fields, I)
    if spec.M == 0:
        return SolveReport(True, 0, 0.0, make_roots(spec, fields, []))
    a = _string_params(effective_xi(fields, spec.reference))
    x0 = free_seed(spec.N, Iarr) if seed is None else np.asarray(seed, dtype=float)
    x, norm, it = _newton_real(x0, spec.N, a, Iarr, tol, max_iter)
    if norm >= tol and fields.chi and x.max() <= ESCAPE_BOUND:
        log.info("direct solve stalled at %.3g; continuing in chi", norm)
        x, norm, extra = _chi_continuation(spec, fields, Iarr, x0, tol, max_iter)
        it += extra
    order = np.argsort(x)
    roots = make_roots(spec, fields, x[order], quantum_numbers=Iarr[order])
    converged = bool(norm < tol and x.max() <= ESCAPE_BOUND)
    return SolveReport(converged, it, float(norm), roots)


def _chi_continuation(spec, fields, I, x0, tol, max_iter):
    total = 0
    x = x0
    for chi in np.linspace(0.0, fields.chi, CONTINUATION_STEPS + 1):
        step_fields = pt_fields(fields.xi, chi)
        a = _string_params(effective_xi(step_fields, spec.reference))
        x, norm, it = _newton_real(x, spec.N, a, I, tol, max_iter)
        total += it
        if x.max() > ESCAPE_BOUND:
            break
    return x, norm, total


# --------------------------------------------------------------------------- energy


def energy_from_roots(roots: BetheRoots) -> complex:
    mu = roots.mu
    den = mu * mu + 0.25
    if np.any(den == 0):
        raise ZeroDivisionError("energy pole: root at +/- i/2")
    pm, pp = roots.p
    return complex(-np.sum(2 / den) + roots.N - 1 + 1 / pm + 1 / pp)


# --------------------------------------------------------------------------- boundary strings


def boundary_string_candidates(fields: BoundaryFields, reference) -> list[tuple[complex, str]]:
    """Ideal string roots ``i(1/2 - p_b)``: unprimed for all-down, primed for all-up."""
    reference = Reference.parse(reference)
    if not classify_phase(fields).is_a:
        raise DomainError("no boundary strings outside the A phases")
    pm, pp = effective_xi(fields, reference)
    return [(1j * (0.5 - pm), "L"), (1j * (0.5 - pp), "R")]


def _string_side_param(p, side: str) -> complex:
    return 0.5 - (p[0] if side == "L" else p[1])


def _complex_system(z, kinds, N, a, ideal, I):
    """Residuals and Jacobian for the refinement unknowns.

    Real-kind roots use the logarithmic equations with quantum numbers ``I``,
    continued to complex ``mu`` (they acquire small imaginary parts when the
    strings break the conjugate pairing of the boundary factors); pinning the
    branch keeps Newton in the right basin at large N.  A string root
    ``mu = i a_b + delta`` uses ``delta - (mu + i a_b) Y`` with
    ``Y = P (mu - i a_b)/(mu + i a_b)``, which is regular at the ideal position
    and keeps ``delta`` to full relative precision.
    """
    mu = np.array([ideal[k] + z[k] if kind != RootKind.REAL else z[k]
                   for k, kind in enumerate(kinds)], dtype=complex)
    M = len(mu)
    ih = 0.5j
    d = mu[:, None] - mu[None, :]
    s = mu[:, None] + mu[None, :]
    off = ~np.eye(M, dtype=bool)
    res = np.empty(M, dtype=complex)
    jac = np.empty((M, M), dtype=complex)

    real = [j for j, kind in enumerate(kinds) if kind == RootKind.REAL]
    if real:
        x = mu[real]
        kd = 1 / (1 + d[real] ** 2)
        ks = 1 / (1 + s[real] ** 2)
        scatter = np.sum(np.arctan(d[real]) + np.arctan(s[real]), axis=1)
        bval = sum(np.arctan(x / ab) for ab in a)
        bder = sum(ab / (ab * ab + x * x) for ab in a)
        res[real] = ((2 * N + 1) * np.arctan(2 * x) - bval - scatter
                     - math.pi * np.asarray(I, dtype=float))
        jac[real] = kd - ks
        for r, j in enumerate(real):
            jac[j, j] = ((2 * N + 1) * 2 / (1 + 4 * x[r] ** 2) - bder[r]
                         - (kd[r].sum() - 1 + ks[r].sum() + ks[r, j]))

    # string row j never carries its own boundary factor: mu_j - i a_b = delta_j
    # may round to exactly zero once delta is below one ulp of the ideal position
    for j, kind in enumerate(kinds):
        if kind == RootKind.REAL:
            continue
        b = 0 if kind == RootKind.STRING_LEFT else 1
        other = a[1 - b]
        # log-derivative of Y_j with respect to mu_j (diag) and mu_l
        dd = np.where(off[j], 1 / np.where(off[j], d[j] - 1j, 1) - 1 / np.where(off[j], d[j] + 1j, 1), 0)
        ds = np.where(off[j], 1 / np.where(off[j], s[j] - 1j, 1) - 1 / np.where(off[j], s[j] + 1j, 1), 0)
        g = dd - ds
        g[j] = (2 * N * (1 / (mu[j] - ih) - 1 / (mu[j] + ih))
                + 1 / (mu[j] + 1j * other) - 1 / (mu[j] - 1j * other) - np.sum(dd + ds))
        # in logs: the 2N-th power underflows long before delta does
        logY = (2 * N * np.log((mu[j] - ih) / (mu[j] + ih))
                - np.sum(np.log(np.where(off[j], (d[j] - 1j) * (s[j] - 1j)
                                         / np.where(off[j], (d[j] + 1j) * (s[j] + 1j), 1), 1)))
                + np.log((mu[j] + 1j * other) / (mu[j] - 1j * other)))
        Y = np.exp(logY)
        c = mu[j] + 1j * a[b]
        res[j] = z[j] - c * Y
        jac[j] = -c * Y * g
        jac[j, j] += 1 - Y
    return res, jac, mu


def refine_boundary_strings(spec: ChainSpec, fields: BoundaryFields, I=None, sides=("L",), *,
                            tol: float = NEWTON_TOL, max_iter: int = NEWTON_MAX_ITER,
                            real_seed=None) -> SolveReport:
    """Complex Newton on the product equations with string roots at their ideal positions.

    ``spec.M`` counts all roots; ``I`` (default ``1..M - len(sides)``) seeds the
    real ones through :func:`solve_real_roots`.
    """
    sides = tuple(sides)
    if not sides or len(set(sides)) != len(sides) or not set(sides) <= {"L", "R"}:
        raise DomainError("sides must be a nonempty subset of {'L', 'R'}")
    if not classify_phase(fields).is_a:
        raise DomainError("no boundary strings outside the A phases")
    n_real = spec.M - len(sides)
    if n_real < 0:
        raise DomainError("M smaller than the number of strings")
    real_spec = replace(spec, M=n_real)
    I = default_quantum_numbers(real_spec) if I is None else list(I)
    if real_seed is None:
        real_seed = solve_real_roots(real_spec, fields, I).roots.mu.real

    p = effective_xi(fields, spec.reference)
    a = _string_params(p)
    kinds = [RootKind.REAL] * n_real + [RootKind(s) for s in sides]
    ideal = np.zeros(spec.M, dtype=complex)
    for k, s in enumerate(sides):
        ideal[n_real + k] = 1j * _string_side_param(p, s)
    if len(sides) == 2 and ideal[-1] == ideal[-2]:
        raise DomainError("left and right strings coincide at chi = 0")
    z = np.concatenate([np.asarray(real_seed, dtype=complex), np.zeros(len(sides), complex)])
    # the offset of an exactly ideal string is zero; start it from the bulk estimate
    for k in range(n_real, spec.M):
        z[k] = _string_offset_guess(ideal[k], k, z, kinds, spec.N, a, ideal, I)

    res, jac, mu = _complex_system(z, kinds, spec.N, a, ideal, I)
    norm = _refine_norm(res, z, kinds)
    it = 0
    converged = False
    while it < max_iter:
        it += 1
        try:
            dz = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian("singular Jacobian") from exc
        step = 1.0
        for _ in range(NEWTON_MAX_HALVINGS + 1):
            trial = z + step * dz
            tres, tjac, tmu = _complex_system(trial, kinds, spec.N, a, ideal, I)
            tnorm = _refine_norm(tres, trial, kinds)
            if tnorm <= norm or step < 1e-5:
                break
            step *= 0.5
        small_step = _step_small(step * dz, trial, kinds)
        z, res, jac, mu, norm = trial, tres, tjac, tmu, tnorm
        if not (np.all(np.isfinite(z)) and np.isfinite(norm)):
            break
        if norm < tol and small_step:
            converged = True
            break

    offsets = {s: complex(z[n_real + k]) for k, s in enumerate(sides)}
    roots = make_roots(spec, fields, mu, kinds, quantum_numbers=I)
    return SolveReport(converged, it, float(norm), roots, offsets)


def refine_boundary_string(spec: ChainSpec, fields: BoundaryFields, I=None, side: str = "L",
                           **kwargs) -> SolveReport:
    return refine_boundary_strings(spec, fields, I, (side,), **kwargs)


def _string_offset_guess(center, k, z, kinds, N, a, ideal, I):
    trial = z.copy()
    trial[k] = 0
    res, _, _ = _complex_system(trial, kinds, N, a, ideal, I)
    # at delta = 0 the residual is -(mu + i a) Y, so delta ~ -res
    return -res[k]


def _refine_norm(res, z, kinds) -> float:
    out = 0.0
    for r, zz, kind in zip(res, z, kinds):
        if kind == RootKind.REAL:
            out = max(out, abs(r))
        else:
            out = max(out, abs(r) / max(abs(zz), 1e-300))
    return out


def _step_small(dz, z, kinds) -> bool:
    for d, zz, kind in zip(dz, z, kinds):
        scale = 1.0 if kind == RootKind.REAL else max(abs(zz), 1e-300)
        if abs(d) > 1e-9 * scale:
            return False
    return True


# --------------------------------------------------------------------------- T-Q relation


def _lambda_roots(roots: BetheRoots) -> np.ndarray:
    return 1j * roots.mu - 0.5


def _Q(lam, lroots) -> complex:
    return complex(np.prod((lam - lroots) * (lam + lroots + 1)))


def tq_eigenvalue(lam: complex, roots: BetheRoots) -> complex:
    """Transfer-matrix eigenvalue from the T-Q relation, ``lambda_l = i mu_l - 1/2``.

    All-down roots use the spin-flipped parameters, whose transfer matrix
    is similar to the original one.
    """
    lam = complex(lam)
    pm, pp = roots.p
    N = roots.N
    lr = _lambda_roots(roots)
    q = _Q(lam, lr)
    if q == 0 or 2 * lam + 1 == 0:
        raise ZeroDivisionError("T-Q pole")
    t1 = 2 * (lam + 1) ** (2 * N + 1) / (2 * lam + 1) * (lam + pm) * (lam + pp) * _Q(lam - 1, lr)
    t2 = 2 * lam ** (2 * N + 1) / (2 * lam + 1) * (lam + 1 - pm) * (lam + 1 - pp) * _Q(lam + 1, lr)
    return (t1 + t2) / q


def _circle(center, radius, n=64):
    theta = 2 * np.pi * np.arange(n) / n
    return center + radius * np.exp(1j * theta), np.exp(1j * theta)


def tq_regularity_check(roots: BetheRoots, n_points: int = 64) -> float:
    """Max over Q-zeros of |residue of Lambda| / (r * mean |Lambda| on the contour)."""
    if roots.spec.M == 0:
        return 0.0
    lr = _lambda_roots(roots)
    zeros = np.concatenate([lr, -lr - 1])
    others = np.concatenate([zeros, [-0.5]])
    worst = 0.0
    for z0 in zeros:
        dist = np.abs(others - z0)
        dist = dist[dist > 0]
        r = min(1e-2, 0.25 * dist.min())
        pts, phase = _circle(z0, r, n_points)
        vals = np.array([tq_eigenvalue(lam, roots) for lam in pts])
        residue = np.mean(vals * r * phase)
        scale = r * np.mean(np.abs(vals))
        worst = max(worst, abs(residue) / scale)
    return float(worst)


def tq_energy(roots: BetheRoots, radius: float = 0.1, n_points: int = 64) -> complex:
    """``d ln Lambda / d lambda`` at 0 minus N, with the derivative from a Cauchy integral."""
    pts, phase = _circle(0.0, radius, n_points)
    vals = np.array([tq_eigenvalue(lam, roots) for lam in pts])
    deriv = np.mean(vals / phase) / radius
    return complex(deriv / tq_eigenvalue(0.0, roots) - roots.N)
