"""Elementary excitations: the closed-form catalog against finite chains.

Run:  python3 demos/state_catalog.py
"""

import numpy as np

from ptbethe import bae, ed, thermo
from ptbethe.core import ChainSpec, PhaseLabel, Reference, pt_fields

fields = pt_fields(0.25, 0.2)
theta = 1.0

# --- The A1 catalog for odd and even N, energies relative to E0.
for parity, N in ((thermo.Parity.ODD, 101), (thermo.Parity.EVEN, 100)):
    print(f"\nA1, {parity.value} N (N = {N}), theta = {theta}")
    print(f"{'state':22s} {'key':12s} {'S^z':>5s} {'M':>4s}  {'E - E0':>22s}  sector")
    E0 = thermo.ground_energy(fields, N)
    for st in thermo.enumerate_states(PhaseLabel.A1, parity, theta):
        E = thermo.state_energy(st, fields, N) - E0
        print(f"{st.label:22s} {st.key:12s} {str(thermo.sz_of(st, N, fields)):>5s} "
              f"{str(thermo.count_roots(st, N, fields)):>4s}  {E.real:10.6f}{E.imag:+.6f}i  "
              f"{thermo.pt_sector(st, fields)}")

# --- Finite-size approach of the ground state to E0: the gap halves when N doubles.
print("\nground state |-1/2>: Bethe roots vs E0(N)")
for N in (41, 81, 161, 321):
    rep = bae.solve_real_roots(ChainSpec(N, (N - 1) // 2, Reference.ALL_DOWN), fields)
    gap = bae.energy_from_roots(rep.roots) - thermo.e0(fields, N)
    print(f"N = {N:4d}: E_Bethe - E0 = {gap.real:+.6e}")

# --- The broken state |0>_L: real roots plus the left string, against ED and E0 + m.
print("\n|0>_L (all-down sea + left string): E_Bethe - (E0 + m)")
m = thermo.bound_energy("L", fields)
for N in (8, 12, 50, 200, 800):
    rep = bae.refine_boundary_string(ChainSpec(N, N // 2, Reference.ALL_DOWN), fields, side="L")
    E = bae.energy_from_roots(rep.roots)
    line = f"N = {N:4d}: {E - thermo.ground_energy(fields, N) - m:.6e}"
    if N <= 12:
        eigs = ed.sector_spectrum(ed.build_sector(N, N - N // 2, fields)).eigenvalues
        line += f"   (distance to nearest ED eigenvalue {np.min(np.abs(eigs - E)):.1e})"
    print(line)
print(f"m = 2 pi / sin(pi (xi + i chi)) = {m:.8f}")
