"""Exact diagonalization of the open chain in fixed-magnetization sectors.

Basis states are bitstrings with bit ``i`` set when site ``i + 1`` is down,
ordered by ascending integer value.  The Hamiltonian is

    H = sum_j sigma_j . sigma_{j+1} + h1 sigma^z_1 + hN sigma^z_N

so a bond contributes +1 (aligned) or -1 (anti-aligned) on the diagonal and
an amplitude 2 for exchanging an anti-aligned pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .core import BoundaryFields, DomainError

MAX_SITES = 14
PAIR_TOL = 1e-9


@dataclass(frozen=True)
class SectorMatrix:
    N: int
    n_down: int
    basis: np.ndarray
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class PairingReport:
    pairs: list            # (i, j) index pairs with eig[j] ~ conj(eig[i])
    real: list             # indices classified as real
    unpaired: list         # complex eigenvalues without a partner
    max_pair_defect: float

    @property
    def ok(self) -> bool:
        return not self.unpaired


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    sector: tuple
    pairing: PairingReport
    backward_error: float = 0.0

    @property
    def max_pair_defect(self) -> float:
        return self.pairing.max_pair_defect


@dataclass
class MatchReport:
    pairs: list = field(default_factory=list)
    max_mismatch: float = 0.0
    cardinality_mismatch: bool = False


def sector_basis(N: int, n_down: int) -> np.ndarray:
    states = [sum(1 << i for i in c) for c in combinations(range(N), n_down)]
    return np.array(sorted(states), dtype=np.int64)


def build_sector(N: int, n_down: int, fields: BoundaryFields) -> SectorMatrix:
    if not 2 <= N <= MAX_SITES:
        raise DomainError(f"sector too large: N = {N} outside 2..{MAX_SITES}")
    if not 0 <= n_down <= N:
        raise DomainError("need 0 <= n_down <= N")
    h1, hN = complex(fields.h1), complex(fields.hN)
    basis = sector_basis(N, n_down)
    index = {int(s): k for k, s in enumerate(basis)}
    dim = len(basis)
    H = np.zeros((dim, dim), dtype=complex)

    # sigma^z = +1 for up (bit clear), -1 for down
    spins = 1 - 2 * ((basis[:, None] >> np.arange(N)) & 1)
    diag = np.sum(spins[:, :-1] * spins[:, 1:], axis=1) + h1 * spins[:, 0] + hN * spins[:, -1]
    H[np.arange(dim), np.arange(dim)] = diag

    for k, s in enumerate(basis):
        s = int(s)
        for j in range(N - 1):
            pair = (s >> j) & 3
            if pair in (1, 2):
                H[index[s ^ (3 << j)], k] = 2.0
    return SectorMatrix(N, n_down, basis, H)


def _sort_key(eigs: np.ndarray) -> np.ndarray:
    # round away last-bit noise so the (Re, Im) order is reproducible
    return np.lexsort((np.round(eigs.imag, 10), np.round(eigs.real, 10)))


def pt_pairing_report(eigs, tol: float = PAIR_TOL) -> PairingReport:
    """Greedy nearest-conjugate matching of a spectrum."""
    eigs = np.asarray(eigs, dtype=complex)
    real = [i for i, e in enumerate(eigs) if abs(e.imag) <= tol]
    upper = [i for i, e in enumerate(eigs) if e.imag > tol]
    lower = [i for i, e in enumerate(eigs) if e.imag < -tol]
    pairs, unpaired = [], []
    free = set(lower)
    defect = 0.0
    for i in sorted(upper, key=lambda k: (eigs[k].real, eigs[k].imag)):
        if not free:
            unpaired.append(i)
            continue
        target = eigs[i].conjugate()
        j = min(free, key=lambda k: abs(eigs[k] - target))
        d = abs(eigs[j] - target)
        if d > tol * max(1.0, abs(eigs[i])):
            unpaired.append(i)
            continue
        free.discard(j)
        pairs.append((i, j))
        defect = max(defect, d)
    unpaired.extend(sorted(free))
    return PairingReport(pairs, real, sorted(unpaired), defect)


def _eigvals_2x2(H: np.ndarray) -> np.ndarray:
    # closed form; exact at an exceptional point, where an iterative
    # eigensolver splits the defective pair by ~sqrt(machine epsilon)
    half_tr = (H[0, 0] + H[1, 1]) / 2
    root = np.sqrt(((H[0, 0] - H[1, 1]) / 2) ** 2 + H[0, 1] * H[1, 0])
    return np.array([half_tr + root, half_tr - root])


def sector_spectrum(matrix: SectorMatrix, tol: float = PAIR_TOL) -> SpectrumReport:
    H = matrix.entries
    try:
        eigs = _eigvals_2x2(H) if matrix.dim == 2 else np.linalg.eigvals(H)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"eigensolver failed for sector (N={matrix.N}, n_down={matrix.n_down}), "
            f"dim {matrix.dim}, |H|_F = {np.linalg.norm(H):.3g}") from exc
    eigs = eigs[_sort_key(eigs)]
    scale = max(np.linalg.norm(H, 2), 1.0)
    # trace defect is a cheap a-posteriori check of the eigenvalue sum
    backward = abs(np.sum(eigs) - np.trace(H)) / (scale * max(matrix.dim, 1))
    return SpectrumReport(eigs, (matrix.N, matrix.n_down), pt_pairing_report(eigs, tol), backward)


def full_spectrum(N: int, fields: BoundaryFields, tol: float = PAIR_TOL) -> list[SpectrumReport]:
    return [sector_spectrum(build_sector(N, n, fields), tol) for n in range(N + 1)]


def match_bethe_to_ed(bethe, ed, tol: float = 1e-8) -> MatchReport:
    """One-to-one assignment of Bethe energies to ED eigenvalues.

    Both lists are sorted by (Re, Im) and paired greedily; a verification pass
    then re-pairs each Bethe value with its nearest unused ED value when that
    is closer, so near-degenerate orderings do not inflate the mismatch.
    """
    bethe = np.asarray(bethe, dtype=complex)
    ed = np.asarray(ed, dtype=complex)
    report = MatchReport(cardinality_mismatch=len(bethe) != len(ed))
    if not len(bethe) or not len(ed):
        return report
    unused = set(range(len(ed)))
    order = _sort_key(bethe)
    for i in order:
        j = min(unused, key=lambda k: abs(ed[k] - bethe[i]))
        unused.discard(j)
        report.pairs.append((int(i), int(j)))
        if not unused:
            break
    report.max_mismatch = float(max(abs(bethe[i] - ed[j]) for i, j in report.pairs))
    if report.max_mismatch > tol:
        # global fallback: optimal assignment on the distance matrix
        from scipy.optimize import linear_sum_assignment
        cost = np.abs(bethe[:, None] - ed[None, :])
        rows, cols = linear_sum_assignment(cost)
        alt = float(cost[rows, cols].max())
        if alt < report.max_mismatch:
            report.pairs = [(int(i), int(j)) for i, j in zip(rows, cols)]
            report.max_mismatch = alt
    return report
