"""Root distribution of a large chain, and why exact half filling has none.

Run:  python3 demos/fig3_root_distribution.py
"""

import numpy as np

from ptbethe import bae, thermo
from ptbethe.core import ChainSpec, Reference, classify_phase, fields_from_xi

# Boundary parameters xi_- = 1/4 + i/3, xi_+ = 1/4 - i/3: PT-symmetric, phase A1.
fields = fields_from_xi(0.25 + 1j / 3, 0.25 - 1j / 3)
phase = classify_phase(fields)
print(f"xi = {fields.xi}, chi = {fields.chi:.4f}, phase {phase.value}")

# --- Ground state of an odd chain: N = 601, M = (N - 1)/2 = 300 real roots on the all-down sea.
N, M = 601, 300
rep = bae.solve_real_roots(ChainSpec(N, M, Reference.ALL_DOWN), fields)
mu = rep.roots.mu.real
E = bae.energy_from_roots(rep.roots)
print(f"\nN = {N}, M = {M}: converged={rep.converged} in {rep.iterations} iterations, "
      f"residual {rep.final_residual_norm:.1e}")
print(f"all roots real; smallest {mu[0]:.6f}, largest {mu[-1]:.4f}")
print(f"E = {E.real:.10f}{E.imag:+.1e}i  vs  E0 = {thermo.e0(fields, N):.10f}")

# The spacing of the positive roots samples twice the thermodynamic density rho(mu)
# (roots come in +/- pairs and rho is normalized over the whole line).
state = thermo.find_state("down", phase, thermo.Parity.of(N))
mid = 0.5 * (mu[1:] + mu[:-1])
spacing_density = 1 / np.diff(mu)
sample = mid[::25]
rho = thermo.density_realspace(state, fields, N, sample).rho.real
print("\n      mu    1/(mu_j+1 - mu_j)    2 rho(mu)")
for m, sd, r in zip(sample, spacing_density[::25], rho):
    print(f"{m:8.4f}  {sd:18.4f}  {2 * r:12.4f}")

# --- Even chain one root short of half filling: N = 600, M = 299 (the spinon sits at the band top).
rep = bae.solve_real_roots(ChainSpec(600, 299, Reference.ALL_DOWN), fields)
print(f"\nN = 600, M = 299: converged={rep.converged}, residual {rep.final_residual_norm:.1e}, "
      f"max root {rep.roots.mu.real.max():.4f}")

# --- Exact half filling, N = 600, M = 300, on either sea.
# The counting function of a single large root tends to (N - M - 1/2) pi, so the
# quantum numbers 1..300 leave the top root no finite position: Newton walks it off
# to infinity and the solver reports failure instead of a spurious solution.
for ref in (Reference.ALL_DOWN, Reference.ALL_UP):
    rep = bae.solve_real_roots(ChainSpec(600, 300, ref), fields)
    print(f"N = 600, M = 300, {ref.name}: converged={rep.converged}, "
          f"top root {rep.roots.mu.real.max():.3g}")
