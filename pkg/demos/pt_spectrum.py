"""PT symmetry of the finite chain: conjugate pairs and the two-site exceptional point.

Run:  python3 demos/pt_spectrum.py
"""

import math

import numpy as np

from ptbethe import ed
from ptbethe.core import fields_from_h, pt_fields

# --- Two sites, h1 = -i gamma, hN = +i gamma: eigenvalues -1 +/- 2 sqrt(1 - gamma^2) in S^z = 0.
print("two sites, S^z = 0 sector")
print(" gamma    eigenvalues")
for gamma in (0.25, 0.5, 0.9, 1.0, 1.1, 2.0):
    eigs = ed.sector_spectrum(ed.build_sector(2, 1, fields_from_h(-1j * gamma, 1j * gamma))).eigenvalues
    print(f"{gamma:6.2f}    " + "   ".join(f"{e.real:+.6f}{e.imag:+.6f}i" for e in eigs))
print("the pair meets at gamma = 1 (exceptional point) and turns complex beyond it")

# --- Eight sites at xi = 1/4, chi = 0.3: every complex eigenvalue has its conjugate.
N, fields = 8, pt_fields(0.25, 0.3)
print(f"\nN = {N}, xi = 0.25, chi = 0.3")
print("n_down  dim  real  complex pairs  unpaired  max defect")
for rep in ed.full_spectrum(N, fields):
    p = rep.pairing
    print(f"{rep.sector[1]:6d} {len(rep.eigenvalues):4d} {len(p.real):5d} {len(p.pairs):14d} "
          f"{len(p.unpaired):9d}  {p.max_pair_defect:.1e}")

# --- How much of the spectrum is complex as chi grows.
print("\nfraction of complex eigenvalues, N = 8, xi = 0.25")
for chi in (0.0, 0.1, 0.3, 0.6, 1.0, 2.0):
    eigs = np.concatenate([r.eigenvalues for r in ed.full_spectrum(N, pt_fields(0.25, chi))])
    frac = np.mean(np.abs(eigs.imag) > 1e-9)
    print(f"chi = {chi:4.1f}: {frac:6.3f}")

# --- The exact two-site formula checked against the sector solver.
worst = max(
    abs(np.sort_complex(ed.sector_spectrum(ed.build_sector(2, 1, fields_from_h(-1j * g, 1j * g))).eigenvalues)
        - np.sort_complex([-1 - 2 * np.sqrt(complex(1 - g * g)), -1 + 2 * np.sqrt(complex(1 - g * g))])).max()
    for g in np.linspace(0.1, 3, 30))
print(f"\nmax deviation from -1 +/- 2 sqrt(1 - gamma^2) over gamma in [0.1, 3]: {worst:.1e}")
assert worst < 1e-12 and math.isfinite(worst)
