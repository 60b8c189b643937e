"""Squeezing that does not show on the diagonal.

The one-mode variance matrix below has both diagonal entries above 1/2, so a
naive look at <dq^2> and <dp^2> suggests no squeezing.  Its smallest
eigenvalue is 0.35, and a passive rotation brings that onto the diagonal.
"""

import numpy as np

from spkit import core, variance

V = np.array([[0.6, 0.25], [0.25, 0.6]])

rep = variance.squeezing_report(V)
print("diagonal:", np.diag(V))
print(f"manifest={rep.manifest}  squeezed={rep.squeezed}  l={rep.l:.6f}")
print("symplectic eigenvalues:", variance.williamson(V).kappa)
print("physical:", variance.is_physical(V)[0])

# scan the phase-shifter angle and watch the q-variance dip below 1/2
for theta in np.linspace(0, np.pi, 9):
    R = core.embed_unitary([[np.exp(-1j * theta)]])
    print(f"theta={theta:5.3f}  Vqq={variance.transform(V, R).V[0, 0]:.4f}")

# minimum over a dense set of rotations reproduces l
thetas = np.linspace(0, np.pi, 2001)
print("min over rotations:", variance.min_diagonal_over_rotations(V, np.exp(1j * thetas)[:, None, None]))
