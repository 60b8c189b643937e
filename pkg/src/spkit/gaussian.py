"""Centred Gaussian pure states and Gaussian Wigner functions.

A state is labelled by real symmetric ``(u, v)`` with ``u`` positive definite::

    psi(q) = pi^{-n/4} (det u)^{1/4} exp(-q^T (u + i v) q / 2)

Phases are never tracked: metaplectic operators act on ``(u, v)`` only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from ._linalg import psd_sqrt, sym
from .core import SymplecticMatrix, as_symplectic, beta
from .errors import DimensionError, DomainError, MobiusSingularityError, ValidationError
from .variance import PSD_TOL, VarianceMatrix, williamson

SYMMETRY_TOL = 1e-12
MOBIUS_COND_LIMIT = 1e12


def _sym_checked(M, name: str) -> np.ndarray:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be a square matrix")
    if not np.all(np.isfinite(M)):
        raise ValidationError(f"{name} has non-finite entries")
    if np.linalg.norm(M - M.T) > SYMMETRY_TOL * max(1.0, np.linalg.norm(M)):
        raise ValidationError(f"{name} is not symmetric")
    return sym(M)


@dataclass(frozen=True, eq=False)
class GaussianPureState:
    """The pair ``(u, v)``; ``u`` symmetric positive definite, ``v`` symmetric."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = _sym_checked(self.u, "u")
        v = _sym_checked(self.v, "v")
        if u.shape != v.shape:
            raise DimensionError("u and v must have the same shape")
        if np.linalg.eigvalsh(u)[0] <= 0:
            raise DomainError("u must be positive definite")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def vacuum(cls, n: int) -> "GaussianPureState":
        return cls(np.eye(n), np.zeros((n, n)))

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @property
    def tau(self) -> np.ndarray:
        """``i u - v``, the inverse of the Mobius parameter."""
        return 1j * self.u - self.v

    @property
    def Lambda(self) -> np.ndarray:
        return np.linalg.inv(self.tau)

    def close_to(self, other: "GaussianPureState", tol: float = 1e-10) -> bool:
        return bool(np.abs(self.u - other.u).max() + np.abs(self.v - other.v).max() <= tol)

    def __repr__(self):
        return f"GaussianPureState(n={self.n})"


def wavefunction_eval(psi: GaussianPureState, q) -> complex | np.ndarray:
    """``psi(q)``; ``q`` may carry leading batch axes, the last axis has length n."""
    q = np.asarray(q, dtype=float)
    if q.ndim == 0:
        q = q[None]
    if q.shape[-1] != psi.n:
        raise DimensionError(f"q must have trailing length {psi.n}")
    norm = np.pi ** (-psi.n / 4.0) * np.linalg.det(psi.u) ** 0.25
    quad = np.einsum("...i,ij,...j->...", q, psi.u + 1j * psi.v, q)
    out = norm * np.exp(-0.5 * quad)
    return complex(out) if out.ndim == 0 else out


class GaussianWigner:
    """``W_G(xi) = pi^{-n} (det G)^{1/2} exp(-xi^T G xi)`` for symmetric positive-definite G."""

    __slots__ = ("G", "n")

    def __init__(self, G):
        G = _sym_checked(G, "G")
        self.n = core._mode_count(G)
        if np.linalg.eigvalsh(G)[0] <= 0:
            raise DomainError("G must be positive definite")
        G.setflags(write=False)
        self.G = G

    @property
    def norm(self) -> float:
        return float(np.pi ** (-self.n) * np.sqrt(np.linalg.det(self.G)))

    def __call__(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return self.norm * np.exp(-np.einsum("...i,ij,...j->...", xi, self.G, xi))

    def variance(self) -> VarianceMatrix:
        return VarianceMatrix(0.5 * np.linalg.inv(self.G))

    def __repr__(self):
        return f"GaussianWigner(n={self.n})"


def state_symplectic(psi: GaussianPureState) -> SymplecticMatrix:
    """``S(u, v) = [[u^{-1/2}, 0], [-v u^{-1/2}, u^{1/2}]]``."""
    r, ri = psd_sqrt(psi.u, inverse=True)
    Z = np.zeros_like(r)
    return SymplecticMatrix(core.block(ri, Z, -psi.v @ ri, r), tol=1e-8)


def transitive_orbit_factor(psi: GaussianPureState) -> SymplecticMatrix:
    """The group element carrying the vacuum to ``psi`` (up to phase)."""
    return state_symplectic(psi)


def wigner_of_state(psi: GaussianPureState) -> GaussianWigner:
    """``G = [[u + v u^{-1} v, v u^{-1}], [u^{-1} v, u^{-1}]]``."""
    u, v = psi.u, psi.v
    ui = np.linalg.inv(u)
    G = np.block([[u + v @ ui @ v, v @ ui], [ui @ v, ui]])
    return GaussianWigner(sym(G))


def variance_of_state(psi: GaussianPureState) -> VarianceMatrix:
    """``V = G^{-1}/2 = S(u, v) S(u, v)^T / 2`` (closed form, no inversion of G)."""
    u, v = psi.u, psi.v
    ui = np.linalg.inv(u)
    V = np.block([[ui, -ui @ v], [-v @ ui, u + v @ ui @ v]])
    return VarianceMatrix(0.5 * sym(V))


def mobius_transform(psi: GaussianPureState, S) -> GaussianPureState:
    """Action of the metaplectic operator for ``S`` on ``(u, v)``.

    With ``Lambda = (iu - v)^{-1}`` the law is
    ``Lambda' = (A Lambda + B)(C Lambda + D)^{-1}``.  It is evaluated in the
    inverted variable ``tau = iu - v`` as ``tau' = (C + D tau)(A + B tau)^{-1}``,
    then ``u' = Im tau'`` and ``v' = -Re tau'``.

    Raises:
        MobiusSingularityError: if ``C Lambda + D`` or ``A Lambda + B`` is
            numerically singular (condition number above 1e12).
    """
    S = as_symplectic(S)
    if S.n != psi.n:
        raise DimensionError(f"mode counts differ: state n={psi.n}, S n={S.n}")
    tau = psi.tau
    num = S.C + S.D @ tau
    den = S.A + S.B @ tau
    for name, M in (("C Lambda + D", num), ("A Lambda + B", den)):
        c = np.linalg.cond(M)
        if not np.isfinite(c) or c > MOBIUS_COND_LIMIT:
            raise MobiusSingularityError(f"{name} is singular (cond {c:.3g}); the transformed state leaves the chart")
    tau2 = np.linalg.solve(den.T, num.T).T
    tau2 = 0.5 * (tau2 + tau2.T)
    u2, v2 = tau2.imag, -tau2.real
    if np.linalg.eigvalsh(u2)[0] <= 0:
        raise MobiusSingularityError("transformed u lost positive definiteness")
    return GaussianPureState(u2, v2)


def state_from_positive(P, tol: float = 1e-9) -> GaussianPureState:
    """Solve ``P = S(u, v) S(u, v)^T`` for ``(u, v)`` given ``P`` in Pi(n)."""
    P = np.asarray(P, dtype=float)
    n = core._mode_count(P)
    if not core.in_positive(P, tol):
        raise ValidationError("matrix is not symmetric positive-definite symplectic")
    u = np.linalg.inv(P[:n, :n])
    v = -u @ P[:n, n:]
    return GaussianPureState(sym(u), sym(v))


def is_admissible_wigner(W: GaussianWigner, tol: float = PSD_TOL) -> tuple[bool, np.ndarray]:
    """``G^{-1} + i beta`` positive semidefinite; also returns Williamson ``kappa`` of ``G^{-1}/2``."""
    if not isinstance(W, GaussianWigner):
        W = GaussianWigner(W)
    Gi = np.linalg.inv(W.G)
    m = np.linalg.eigvalsh(Gi + 1j * beta(W.n))[0]
    kappa = williamson(0.5 * sym(Gi)).kappa
    return bool(m >= -tol), kappa
