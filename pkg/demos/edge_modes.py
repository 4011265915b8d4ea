"""Edge modes of the one-magnon sector and their broadening with chi.

Run:  python3 demos/edge_modes.py
"""

import numpy as np

from ptbethe import ed, magnon
from ptbethe.core import pt_fields

N = 20

# --- Left and right bound modes at xi = 1/4 for increasing chi.
print("probability |F(x)|^2 of the left mode (first 8 sites), N = 20, xi = 0.25")
print(" chi   length   " + " ".join(f"x={x:<5d}" for x in range(1, 9)))
for chi in (0.0, 0.25, 0.5, 0.75, 1.0):
    f = pt_fields(0.25, chi)
    p = magnon.bound_mode_wavefunction("L", f, N).probability
    length = magnon.localization_length("L", f)
    print(f"{chi:4.2f}  {length:7.4f}   " + " ".join(f"{v:.5f}" for v in p[:8]))
print("the profile spreads into the bulk as chi grows")

f = pt_fields(0.25, 0.0)
F = magnon.bound_mode_wavefunction("L", f, 10).amplitude
print(f"\nchi = 0: successive amplitude ratios {np.abs(F[1:4] / F[:3])} (1/3 per site)")

# The right mode mirrors the left one.
pl = magnon.bound_mode_wavefunction("L", pt_fields(0.25, 0.4), N).probability
pr = magnon.bound_mode_wavefunction("R", pt_fields(0.25, 0.4), N).probability
print(f"|p_R(x) - p_L(N + 1 - x)| max: {np.abs(pr - pl[::-1]).max():.1e}")

# --- The exact magnon with rapidity nearest the ideal string i(1/2 - xi_-) is that mode.
# (N = 14 so the exact one-down-spin Hamiltonian can be built for the check below.)
N = 14
f = pt_fields(0.25, 0.3)
roots = magnon.one_magnon_roots(N, f)
target = 1j * (0.5 - f.xi_minus)
mu = min(roots, key=lambda m: abs(m - target))
exact = magnon.magnon_wavefunction(mu, f, N)
approx = magnon.bound_mode_wavefunction("L", f, N)
E = magnon.magnon_energy(mu, N, f)
print(f"\nN = {N}: string root {mu:.12f} (ideal {target:.12f})")
print(f"max |p_exact - p_bound| = {np.abs(exact.probability - approx.probability).max():.1e}")

# It is an eigenvector of the exact one-down-spin Hamiltonian.
H = ed.build_sector(N, 1, f).entries
resid = np.linalg.norm(H @ exact.amplitude - E * exact.amplitude) / np.linalg.norm(exact.amplitude)
print(f"E = {E:.8f}, ||H F - E F|| / ||F|| = {resid:.1e}")

# --- In phase B there is no bound mode.
try:
    magnon.bound_mode_wavefunction("L", pt_fields(0.75, 0.0), N)
except ValueError as exc:
    print(f"\nxi = 0.75: {exc}")
