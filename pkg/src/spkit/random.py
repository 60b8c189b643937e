"""Seeded generators for test fixtures and the ``generate`` command.

All functions take a ``numpy.random.Generator``; :func:`rng` builds the
documented default (PCG64 seeded with an integer), so other ports can
reproduce fixtures bit for bit given the same algorithm.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from . import core, lie
from .core import SymplecticMatrix
from .errors import DomainError
from .variance import is_physical, squeezing_report

VARIANCE_PRESETS = ("physical", "unphysical", "squeezed")


def rng(seed: int | None = None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_algebra_element(n: int, gen: np.random.Generator, scale: float = 1.0) -> lie.LieAlgebraElement:
    """Hamiltonian ``beta M`` with ``M`` a symmetric Gaussian matrix of spectral norm about ``scale``."""
    M = gen.normal(size=(2 * n, 2 * n)) * (scale / (2.0 * np.sqrt(2 * n)))
    return lie.LieAlgebraElement.from_hamiltonian(core.beta(n) @ (M + M.T))


def random_symplectic(n: int, gen: np.random.Generator, scale: float = 1.0) -> SymplecticMatrix:
    """``exp`` of a random algebra element; ``scale`` controls the typical log-norm."""
    return lie.exponentiate(random_algebra_element(n, gen, scale))


def random_unitary(n: int, gen: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``U(n)`` element."""
    if n == 1:
        return np.array([[np.exp(1j * gen.uniform(0, 2 * np.pi))]])
    return unitary_group.rvs(n, random_state=gen)


def random_orthogonal(n: int, gen: np.random.Generator) -> np.ndarray:
    Q, R = np.linalg.qr(gen.normal(size=(n, n)))
    return Q * np.sign(np.diag(R))


def random_compact(n: int, gen: np.random.Generator) -> SymplecticMatrix:
    return core.embed_unitary(random_unitary(n, gen), tol=1e-8)


def random_positive(n: int, gen: np.random.Generator, scale: float = 1.0) -> SymplecticMatrix:
    """Element of Pi(n): exponential of a random symmetric Hamiltonian matrix."""
    J = random_algebra_element(n, gen, scale)
    _, noncompact = lie.compact_noncompact_split(J)
    return lie.exponentiate(noncompact)


def random_spd(n: int, gen: np.random.Generator, lo: float = 0.2, hi: float = 3.0) -> np.ndarray:
    Q = random_orthogonal(n, gen)
    w = gen.uniform(lo, hi, size=n)
    M = (Q * w) @ Q.T
    return 0.5 * (M + M.T)


def random_symmetric(n: int, gen: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    M = gen.normal(size=(n, n)) * scale
    return 0.5 * (M + M.T)


def random_variance(n: int, gen: np.random.Generator, preset: str = "physical", max_tries: int = 1000) -> np.ndarray:
    """Random variance matrix drawn by rejection against the uncertainty test.

    ``physical``: all symplectic eigenvalues at least 1/2.  ``unphysical``:
    positive definite with some symplectic eigenvalue below 1/2.
    ``squeezed``: physical with smallest eigenvalue below 1/2.
    """
    if preset not in VARIANCE_PRESETS:
        raise DomainError(f"unknown preset {preset!r}; expected one of {VARIANCE_PRESETS}")
    for _ in range(max_tries):
        S = random_symplectic(n, gen, scale=gen.uniform(0.2, 1.5)).matrix
        if preset == "unphysical":
            kappa = gen.uniform(0.1, 0.9, size=n)
            kappa[gen.integers(n)] = gen.uniform(0.1, 0.45)
        else:
            kappa = 0.5 + gen.exponential(0.4, size=n)
        D = np.diag(np.concatenate([kappa, kappa]))
        V = S @ D @ S.T
        V = 0.5 * (V + V.T)
        phys = is_physical(V)[0]
        if preset == "unphysical" and not phys:
            return V
        if preset == "physical" and phys:
            return V
        if preset == "squeezed" and phys and squeezing_report(V).squeezed:
            return V
    raise DomainError(f"rejection sampling for preset {preset!r} did not converge")


def random_subspace_basis(n: int, k: int, gen: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random ``2n x k`` basis; with ``rank`` given, the subspace has that symplectic rank.

    A canonical basis with ``rank/2`` full pairs plus isotropic directions is
    moved by a random symplectic map and mixed by a random ``GL(k)`` element,
    so non-generic ranks are actually sampled.
    """
    if rank is None:
        return gen.normal(size=(2 * n, k))
    pairs = rank // 2
    iso = k - rank
    if rank % 2 or pairs + iso > n or rank > k:
        raise DomainError(f"no subspace of dimension {k} and symplectic rank {rank} for n={n}")
    cols = [r for r in range(pairs)] + [n + r for r in range(pairs)] + [pairs + j for j in range(iso)]
    W0 = np.eye(2 * n)[:, cols]
    S = random_symplectic(n, gen).matrix
    G = gen.normal(size=(k, k)) + 2.0 * np.eye(k)
    return S @ W0 @ G


def random_state_params(n: int, gen: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    return random_spd(n, gen), random_symmetric(n, gen)
