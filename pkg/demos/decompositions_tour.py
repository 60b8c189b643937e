"""Four factorizations of one random two-mode symplectic matrix."""

import numpy as np

from spkit import core, decompositions as dec
from spkit import random as sprandom

S = sprandom.random_symplectic(2, sprandom.rng(7), scale=1.5)
print("is symplectic:", core.is_symplectic(S.matrix))

f = dec.polar_decompose(S)
print("\npolar  S = K P")
print("  K compact:", core.in_compact(f.compact.matrix), " P positive:", core.in_positive(f.positive.matrix))

f = dec.euler_decompose(S)
print("\nEuler  S = K1 D(kappa) K2   kappa =", np.round(f.kappa, 6))

f = dec.pre_iwasawa_decompose(S)
print("\npre-Iwasawa  S = lens * diag(A0, A0^-1) * K")
print("  A0 =\n", np.round(f.A0, 6))

f = dec.iwasawa_decompose(S)
print("\nIwasawa  S = N D(kappa) K")
print("  N has lower-triangular A block:", np.allclose(np.triu(f.nilpotent.A, 1), 0))
print("  kappa =", np.round(f.kappa, 6))
print("  reconstruction error:", f.residual)

# one mode: the closed-form parameters
S1 = sprandom.random_symplectic(1, sprandom.rng(3))
xi, eta, phi = dec.iwasawa_parameters_n1(S1)
print(f"\nn=1 Iwasawa parameters  xi={xi:.6f}  eta={eta:.6f}  phi={phi:.6f}")
