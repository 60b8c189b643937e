"""Variance (noise) matrices of centred n-mode states.

A variance matrix ``V`` is real symmetric positive definite with blocks
``V1 = <qq>``, ``V2 = <qp>``, ``V3 = <pp>``.  Under ``S`` it transforms as
``V -> S V S^T``.  The complex form uses

    A = (V1 + V3 + i(V2^T - V2)) / 2      (hermitian)
    B = (V1 - V3 + i(V2^T + V2)) / 2      (symmetric)
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import core
from ._linalg import cluster_slices, complex_blocks, herm, k_diagonalizer, pivoted_gram_schmidt, psd_sqrt
from .core import SymplecticMatrix, as_symplectic, beta
from .errors import DimensionError, DomainError, UnphysicalWarning, ValidationError

PSD_TOL = 1e-10
SQUEEZE_TOL = 1e-12
FAMILY_TOL = 1e-9
SYMMETRY_TOL = 1e-12


class VarianceMatrix:
    """Validated symmetric positive-definite ``2n x 2n`` variance matrix."""

    __slots__ = ("V", "n")

    def __init__(self, V):
        if isinstance(V, VarianceMatrix):
            V = V.V
        V = np.array(V, dtype=float)
        n = core._mode_count(V)
        if not np.all(np.isfinite(V)):
            raise ValidationError("variance matrix has non-finite entries")
        if np.linalg.norm(V - V.T) > SYMMETRY_TOL * max(1.0, np.linalg.norm(V)):
            raise ValidationError("variance matrix is not symmetric")
        V = 0.5 * (V + V.T)
        if np.linalg.eigvalsh(V)[0] <= 0:
            raise DomainError("variance matrix is not positive definite")
        V.setflags(write=False)
        self.V = V
        self.n = n

    def __array__(self, dtype=None, copy=None):
        return self.V if dtype is None else self.V.astype(dtype)

    @property
    def V1(self):
        return self.V[: self.n, : self.n]

    @property
    def V2(self):
        return self.V[: self.n, self.n :]

    @property
    def V3(self):
        return self.V[self.n :, self.n :]

    def __repr__(self):
        return f"VarianceMatrix(n={self.n})"


def as_variance(V) -> VarianceMatrix:
    return V if isinstance(V, VarianceMatrix) else VarianceMatrix(V)


@dataclass(frozen=True)
class ComplexVariance:
    A: np.ndarray
    B: np.ndarray

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def matrix(self) -> np.ndarray:
        """``[[A, B], [B*, A*]]``, equal to ``Omega V Omega^dagger``."""
        return np.block([[self.A, self.B], [self.B.conj(), self.A.conj()]])


def to_complex(V) -> ComplexVariance:
    A, B = complex_blocks(as_variance(V).V)
    return ComplexVariance(A, B)


def from_complex(cv: ComplexVariance) -> VarianceMatrix:
    A, B = np.asarray(cv.A, dtype=complex), np.asarray(cv.B, dtype=complex)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError("A and B must be square and of equal shape")
    scale = max(1.0, np.linalg.norm(A), np.linalg.norm(B))
    if np.linalg.norm(A - A.conj().T) > SYMMETRY_TOL * scale:
        raise ValidationError("A must be hermitian")
    if np.linalg.norm(B - B.T) > SYMMETRY_TOL * scale:
        raise ValidationError("B must be symmetric")
    V1 = (A + B).real
    V3 = (A - B).real
    # Im A = (V2^T - V2)/2 and Im B = (V2^T + V2)/2
    V2 = (B.imag - A.imag)
    return VarianceMatrix(np.block([[V1, V2], [V2.T, V3]]))


def transform(V, S) -> VarianceMatrix:
    """``S V S^T``."""
    V = as_variance(V)
    S = as_symplectic(S)
    if S.n != V.n:
        raise DimensionError(f"mode counts differ: V has n={V.n}, S has n={S.n}")
    M = S.matrix
    return VarianceMatrix(M @ V.V @ M.T)


@dataclass(frozen=True)
class WilliamsonResult:
    kappa: np.ndarray
    S: SymplecticMatrix
    residual: float

    def normal_form(self) -> np.ndarray:
        return np.diag(np.concatenate([self.kappa, self.kappa]))


def williamson(V, cluster_rtol: float = 1e-10) -> WilliamsonResult:
    """Williamson normal form ``S V S^T = diag(kappa, kappa)`` with ``kappa`` ascending.

    With ``M = V^{1/2}``, the antisymmetric ``K = M beta M`` is brought to
    canonical form through the hermitian eigenproblem of ``iK``; eigenvectors
    of the eigenvalue ``+kappa`` give ``O`` and ``S = diag(kappa, kappa)^{1/2} O^T M^{-1}``.
    Inside each (numerically) degenerate cluster the eigenbasis is fixed by
    Gram-Schmidt on projected unit vectors ``e_{n+1..2n}, e_{1..n}``, so that
    e.g. the vacuum returns ``S = I``.
    """
    Vm = as_variance(V)
    n, V = Vm.n, Vm.V
    M, Mi = psd_sqrt(V, inverse=True)
    K = M @ beta(n) @ M
    w, E = np.linalg.eigh(herm(1j * K))
    kappa = w[n:].copy()
    Ep = E[:, n:]
    order = list(range(n, 2 * n)) + list(range(n))
    unit = np.eye(2 * n)[:, order]
    cols = []
    for sl in cluster_slices(kappa, cluster_rtol):
        Eb = Ep[:, sl]
        cand = Eb @ (Eb.conj().T @ unit)
        cols.append(pivoted_gram_schmidt(cand, Eb.shape[1]))
    Wp = np.column_stack(cols)
    O = np.sqrt(2.0) * np.column_stack([Wp.imag, Wp.real])
    d = np.sqrt(np.concatenate([kappa, kappa]))
    S = (d[:, None] * O.T) @ Mi
    D = np.diag(np.concatenate([kappa, kappa]))
    res = float(np.linalg.norm(S @ V @ S.T - D) / np.linalg.norm(D))
    Sf = SymplecticMatrix._trusted(S)
    Sf.residual = core.symplectic_residual(S)
    return WilliamsonResult(kappa, Sf, res)


def is_physical(V, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Uncertainty condition: ``V + (i/2) beta`` positive semidefinite.

    Returns ``(ok, margin)`` with ``margin`` the smallest eigenvalue.
    """
    Vm = as_variance(V)
    margin = float(np.linalg.eigvalsh(Vm.V + 0.5j * beta(Vm.n))[0])
    return bool(margin >= -tol), margin


@dataclass(frozen=True)
class SqueezingReport:
    manifest: bool
    l: float
    squeezed: bool


def squeezing_report(V, tol: float = SQUEEZE_TOL) -> SqueezingReport:
    """U(n)-invariant squeezing test.

    ``manifest``: some diagonal entry is below 1/2.  ``squeezed``: the smallest
    eigenvalue ``l`` of ``V`` is below 1/2.  Both comparisons use a margin of
    ``tol`` so that states sitting exactly at 1/2 (the vacuum) are not flagged.
    """
    Vm = as_variance(V)
    if not is_physical(Vm)[0]:
        warnings.warn("squeezing report requested for an unphysical variance matrix", UnphysicalWarning, stacklevel=2)
    l = float(np.linalg.eigvalsh(Vm.V)[0])
    manifest = bool(np.min(np.diag(Vm.V)) < 0.5 - tol)
    return SqueezingReport(manifest, l, bool(l < 0.5 - tol))


def min_diagonal_over_rotations(V, unitaries) -> float:
    """Smallest diagonal entry of ``R V R^T`` over ``R = S(X, Y)`` built from ``unitaries``.

    ``unitaries`` is an iterable of ``n x n`` unitaries or a stacked
    ``(N, n, n)`` array; the stacked form is evaluated in one batch.
    """
    Vm = as_variance(V)
    if isinstance(unitaries, np.ndarray) and unitaries.ndim == 3:
        U = unitaries.astype(complex)
        if U.shape[1:] != (Vm.n, Vm.n):
            raise DimensionError(f"unitaries must be {Vm.n}x{Vm.n}")
        dev = np.linalg.norm(np.swapaxes(U.conj(), 1, 2) @ U - np.eye(Vm.n), axis=(1, 2))
        if np.any(dev > 1e-8 * np.sqrt(Vm.n)):
            raise ValidationError("some U is not unitary")
        X, Y = U.real, -U.imag
        R = np.concatenate([np.concatenate([X, Y], 2), np.concatenate([-Y, X], 2)], 1)
        return float(np.min(np.einsum("nij,jk,nik->ni", R, Vm.V, R)))
    best = np.inf
    for U in unitaries:
        R = core.embed_unitary(U, tol=1e-8).matrix
        best = min(best, float(np.min(np.einsum("ij,jk,ik->i", R, Vm.V, R))))
    return best


@dataclass(frozen=True)
class FamilyFlags:
    S_K: bool
    S_H: bool
    S_G: bool

    def names(self) -> list[str]:
        return [k for k in ("S_K", "S_H", "S_G") if getattr(self, k)]


def family_membership(V, tol: float = FAMILY_TOL) -> FamilyFlags:
    """Membership in the K(n)-diagonalizable, hermitian and Gaussian families."""
    Vm = as_variance(V)
    A, B = complex_blocks(Vm.V)
    AB = A @ B
    in_k = np.linalg.norm(AB - AB.T) <= tol * max(1.0, np.linalg.norm(A) * np.linalg.norm(B))
    in_h = (np.linalg.norm(B) <= tol * max(1.0, np.linalg.norm(Vm.V))
            and np.linalg.eigvalsh(herm(A))[0] - 0.5 >= -tol)
    in_g = core.is_symplectic(2.0 * Vm.V, tol)[0]
    return FamilyFlags(bool(in_k), bool(in_h), bool(in_g))


def diagonalizable_in_Kn(V, tol: float = 1e-8) -> tuple[bool, SymplecticMatrix | None]:
    """Find ``R = S(X, Y)`` with ``R V R^T`` diagonal, if one exists."""
    Vm = as_variance(V)
    off = Vm.V - np.diag(np.diag(Vm.V))
    if np.linalg.norm(off) <= tol * np.linalg.norm(Vm.V):
        return True, SymplecticMatrix(np.eye(2 * Vm.n))
    R = core.embed_unitary(k_diagonalizer(Vm.V), tol=1e-8)
    D = R.matrix @ Vm.V @ R.matrix.T
    off = D - np.diag(np.diag(D))
    if np.linalg.norm(off) <= tol * np.linalg.norm(Vm.V):
        return True, R
    return False, None


def variance_report(V) -> dict:
    """Everything the command-line ``squeeze``/``families`` verbs print."""
    Vm = as_variance(V)
    phys, margin = is_physical(Vm)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnphysicalWarning)
        sq = squeezing_report(Vm)
    return {
        "physical": phys,
        "margin": margin,
        "kappa": [float(k) for k in williamson(Vm).kappa],
        "manifest": sq.manifest,
        "l": sq.l,
        "squeezed": sq.squeezed,
        "families": family_membership(Vm).names(),
    }
