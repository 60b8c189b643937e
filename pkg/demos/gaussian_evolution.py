"""Evolving a squeezed state through a small optical circuit.

The Mobius law updates the state parameters (u, v) directly.  The same
evolution is then checked against brute-force quadrature of the position
kernel, and the Wigner function is recovered from grid data.
"""

import numpy as np

from spkit import core, gaussian, kernels

psi = gaussian.GaussianPureState([[2.5]], [[0.4]])

lens = core.embed_lens([[0.7]])
free = core.embed_free_propagation([[1.2]])
rot = core.embed_unitary([[np.exp(-0.5j)]])
S = rot @ free @ lens  # lens first, rotation last

out = gaussian.mobius_transform(psi, S)
print("u', v' =", out.u[0, 0], out.v[0, 0])
print("variance after:", gaussian.variance_of_state(out).V.round(6).tolist())

# brute-force check on a grid
grid = kernels.grid_for([psi, out])
f = gaussian.wavefunction_eval(psi, grid[:, None])
g = kernels.apply_kernel(S, f, grid)
c, res = kernels.fit_phase(gaussian.wavefunction_eval(out, grid[:, None]), g)
print(f"quadrature vs Mobius: residual {res:.2e}, global phase {np.angle(c):+.4f} rad")
print("norm after quadrature:", kernels.norm_squared(g, grid))

# Wigner covariance from the propagated samples
p = np.linspace(-10, 10, 401) * np.sqrt(gaussian.variance_of_state(out).V[1, 1])
q_sub, W = kernels.wigner_on_grid(g, grid, p, stride=8)
G_grid = 0.5 * np.linalg.inv(kernels.wigner_moments(q_sub, p, W))
print("G from grid:\n", G_grid.round(8))
print("G predicted:\n", gaussian.wigner_of_state(out).G.round(8))
