"""Metaplectic kernels evaluated numerically at hbar = 1.

The position-space (Huyghens) kernel for ``det B != 0`` is

    <q|U(S)|q'> = e^{-i n pi/4} h^{-n/2} |det B|^{-1/2}
                  exp[(i/2)(q^T D B^{-1} q - 2 q'^T B^{-1} q + q'^T B^{-1} A q')]

with ``h = 2 pi``.  Everything here is defined up to a global phase: the
metaplectic sign and the dropped phases of the Mobius law make absolute
phases untestable, and comparisons go through :func:`fit_phase`.

Quadrature uses uniform tensor grids with the trapezoid rule, which is
spectrally accurate for the Gaussian-times-chirp integrands involved.  The
dominant error is aliasing; it is estimated from the Fourier transform of a
Gaussian, ``|exp(-(2 pi/h - k)^2 / (4 alpha))|``, and a
:class:`~spkit.errors.PrecisionWarning` is raised when it exceeds the
requested tolerance.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import SymplecticMatrix, as_symplectic, embed_free_propagation, embed_gl, embed_lens, embed_scaling
from .errors import DegenerateKernelError, DimensionError, DomainError, PrecisionWarning
from .gaussian import GaussianPureState, mobius_transform, wavefunction_eval

HBAR = 1.0
H_PLANCK = 2.0 * np.pi
DET_B_FLOOR = 1e-10
ALIAS_TOL = 1e-10
TILE = 256

PANEL = (
    (1.0, 0.0),
    (2.0, 0.5),
    (0.5, -0.3),
    (1.5, 1.0),
    (0.7, -0.8),
)


def state_panel() -> list[GaussianPureState]:
    """Five fixed one-mode Gaussian states used for composition checks."""
    return [GaussianPureState([[u]], [[v]]) for u, v in PANEL]


# -- position-space kernel -----------------------------------------------------


@dataclass(frozen=True)
class HuyghensKernel:
    """Precomputed pieces of the kernel for one group element."""

    S: SymplecticMatrix
    Binv: np.ndarray
    DBinv: np.ndarray
    BinvA: np.ndarray
    prefactor: complex

    @property
    def n(self) -> int:
        return self.S.n

    def __call__(self, q, q_prime):
        return huyghens_eval(self, q, q_prime)


def huyghens_kernel(S, det_floor: float = DET_B_FLOOR) -> HuyghensKernel:
    """Validate ``det B != 0`` and cache the kernel's quadratic forms.

    Raises:
        DegenerateKernelError: if ``|det B|`` is below ``det_floor``.
    """
    S = as_symplectic(S)
    n = S.n
    B = S.B
    detB = np.linalg.det(B)
    if abs(detB) < det_floor:
        raise DegenerateKernelError(f"|det B| = {abs(detB):.3e}: the kernel is distribution valued")
    Binv = np.linalg.inv(B)
    DBinv = S.D @ Binv
    BinvA = Binv @ S.A
    pref = np.exp(-1j * n * np.pi / 4) * H_PLANCK ** (-n / 2) / np.sqrt(abs(detB))
    return HuyghensKernel(S, Binv, 0.5 * (DBinv + DBinv.T), 0.5 * (BinvA + BinvA.T), pref)


def huyghens_eval(kernel, q, q_prime):
    """``<q|U(S)|q'>``; ``kernel`` is a :class:`HuyghensKernel` or a symplectic matrix."""
    K = kernel if isinstance(kernel, HuyghensKernel) else huyghens_kernel(kernel)
    q = np.asarray(q, dtype=float)
    qp = np.asarray(q_prime, dtype=float)
    if q.ndim == 0:
        q = q[None]
    if qp.ndim == 0:
        qp = qp[None]
    if q.shape[-1] != K.n or qp.shape[-1] != K.n:
        raise DimensionError(f"points must have trailing length {K.n}")
    phase = (np.einsum("...i,ij,...j->...", q, K.DBinv, q)
             - 2.0 * np.einsum("...i,ij,...j->...", qp, K.Binv, q)
             + np.einsum("...i,ij,...j->...", qp, K.BinvA, qp))
    out = K.prefactor * np.exp(0.5j * phase)
    return complex(out) if out.ndim == 0 else out


# -- grids ---------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureSpec:
    range_sigmas: float = 8.0
    points: int = 2001

    def __post_init__(self):
        if self.range_sigmas <= 0 or self.points < 3:
            raise DomainError("quadrature needs a positive range and at least 3 points")


DEFAULT_SPEC = QuadratureSpec()
SPEC_2D = QuadratureSpec(points=301)


def default_spec(n: int) -> QuadratureSpec:
    if n == 1:
        return DEFAULT_SPEC
    if n == 2:
        return SPEC_2D
    raise DomainError("quadrature is only provided for n <= 2")


def state_sigma(psi: GaussianPureState) -> np.ndarray:
    """Per-axis standard deviation of ``|psi|^2``."""
    return np.sqrt(0.5 * np.diag(np.linalg.inv(psi.u)))


def uniform_grid(half_width: float, points: int) -> np.ndarray:
    return np.linspace(-half_width, half_width, points)


def grid_for(states, spec: QuadratureSpec = DEFAULT_SPEC, offset: float = 0.0) -> np.ndarray:
    """Symmetric 1-D grid covering ``range_sigmas`` deviations of every state.

    ``offset`` widens the grid for displaced wavefunctions (coherent states).
    """
    sig = max(float(np.max(state_sigma(s))) for s in states)
    return uniform_grid(spec.range_sigmas * sig + offset, spec.points)


def spacing(grid: np.ndarray) -> float:
    return float(grid[1] - grid[0])


def aliasing_estimate(alpha: complex, kmax: float, h: float) -> float:
    """Relative trapezoid error for ``exp(-alpha x^2 + i k x)`` with ``|k| <= kmax`` at spacing ``h``."""
    gap = 2.0 * np.pi / h - kmax
    if gap <= 0 or alpha.real <= 0:
        return 1.0
    return float(np.exp(-gap**2 * (1.0 / (4.0 * alpha)).real))


def _warn_if_coarse(err: float, tol: float, what: str):
    if err > tol:
        warnings.warn(f"{what}: estimated aliasing error {err:.1e} exceeds {tol:.1e}; refine the grid",
                      PrecisionWarning, stacklevel=3)


def gaussian_alpha(psi: GaussianPureState) -> complex:
    """Scalar ``alpha`` of ``exp(-alpha q^2)`` for a one-mode state."""
    return 0.5 * complex(psi.u[0, 0], psi.v[0, 0])


# -- one-mode kernel application ---------------------------------------------------


def apply_kernel(S, values: np.ndarray, grid_in: np.ndarray, grid_out: np.ndarray | None = None,
                 alpha_in: complex | None = None, tol: float = ALIAS_TOL) -> np.ndarray:
    """``(U(S) f)(q) = int <q|U(S)|q'> f(q') dq'`` for one mode, on ``grid_out``.

    ``values`` has shape ``(N,)`` or ``(N, m)`` (``m`` functions sharing the
    grid).  The sum over ``grid_in`` is evaluated in fixed row tiles so
    results do not depend on how the work is split.  ``alpha_in`` (the
    Gaussian coefficient of ``f``, if known) enables the aliasing estimate.
    """
    K = huyghens_kernel(S)
    if K.n != 1:
        raise DimensionError("apply_kernel handles one mode; use gaussian_matrix_element for n = 2")
    grid_out = grid_in if grid_out is None else grid_out
    values = np.asarray(values, dtype=complex)
    if values.shape[0] != grid_in.size:
        raise DimensionError("values must have one row per grid point")
    h = spacing(grid_in)
    b_inv, dbi, bia = K.Binv[0, 0], K.DBinv[0, 0], K.BinvA[0, 0]
    if alpha_in is not None:
        alpha = alpha_in - 0.5j * bia
        kmax = float(np.max(np.abs(grid_out))) * abs(b_inv)
        _warn_if_coarse(aliasing_estimate(alpha, kmax, h), tol, "kernel application")
    chirp_in = np.exp(0.5j * bia * grid_in**2)
    chirp_out = K.prefactor * h * np.exp(0.5j * dbi * grid_out**2)
    if values.ndim == 2:
        chirp_in, chirp_out = chirp_in[:, None], chirp_out[:, None]
    g = values * chirp_in
    out = np.empty((grid_out.size,) + values.shape[1:], dtype=complex)
    for start in range(0, grid_out.size, TILE):
        qo = grid_out[start : start + TILE]
        E = np.exp(-1j * b_inv * np.outer(qo, grid_in))
        out[start : start + TILE] = E @ g
    return chirp_out * out


def inner(f: np.ndarray, g: np.ndarray, grid: np.ndarray):
    """``<f|g>`` by the trapezoid rule; 2-D inputs give the matrix of column overlaps."""
    w = np.full(grid.size, spacing(grid))
    w[0] = w[-1] = 0.5 * w[0]
    f, g = np.asarray(f, dtype=complex), np.asarray(g, dtype=complex)
    if f.ndim == 1 and g.ndim == 1:
        return complex(np.sum(np.conj(f) * g * w))
    F = f if f.ndim == 2 else f[:, None]
    G = g if g.ndim == 2 else g[:, None]
    return F.conj().T @ (w[:, None] * G)


def norm_squared(f: np.ndarray, grid: np.ndarray) -> float:
    return inner(f, f, grid).real


def fit_phase(reference: np.ndarray, trial: np.ndarray) -> tuple[complex, float]:
    """Best unit-modulus ``c`` with ``trial ~ c * reference``, and the relative residual."""
    reference = np.asarray(reference, dtype=complex).ravel()
    trial = np.asarray(trial, dtype=complex).ravel()
    s = np.vdot(reference, trial)
    c = s / abs(s) if abs(s) > 0 else 1.0 + 0j
    res = float(np.linalg.norm(trial - c * reference) / np.linalg.norm(reference))
    return complex(c), res


# -- matrix elements (n <= 2) -------------------------------------------------------


def _tensor_eval(fn, axes: list[np.ndarray]) -> np.ndarray:
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    return fn(mesh)


def matrix_element(S, f_out, f_in, axes_in: list[np.ndarray], axes_w: list[np.ndarray]) -> complex:
    """``<f_out|U(S)|f_in>`` by quadrature over ``q'`` and ``w = B^{-1} q``.

    Substituting ``q = B w`` turns the cross term into ``exp(-i q'.w)``, so the
    inner integral factorizes over axes and the cost stays cubic in the
    number of points per axis.  ``f_out``/``f_in`` map arrays of points
    (trailing axis n) to amplitudes.
    """
    K = huyghens_kernel(S)
    n = K.n
    if len(axes_in) != n or len(axes_w) != n:
        raise DimensionError("one grid axis per mode is required")
    if n > 2:
        raise DomainError("quadrature is only provided for n <= 2")
    B = K.S.B
    qp = np.stack(np.meshgrid(*axes_in, indexing="ij"), axis=-1)
    g = f_in(qp) * np.exp(0.5j * np.einsum("...i,ij,...j->...", qp, K.BinvA, qp))
    for ax in range(n):
        h = spacing(axes_in[ax])
        E = np.exp(-1j * np.outer(axes_w[ax], axes_in[ax])) * h
        g = np.moveaxis(np.tensordot(E, g, axes=([1], [ax])), 0, ax)
    w = np.stack(np.meshgrid(*axes_w, indexing="ij"), axis=-1)
    q = w @ B.T
    # q^T D B^{-1} q = w^T B^T D w
    BtD = B.T @ K.S.D
    outer = np.conj(f_out(q)) * np.exp(0.5j * np.einsum("...i,ij,...j->...", w, 0.5 * (BtD + BtD.T), w))
    hw = np.prod([spacing(a) for a in axes_w])
    return complex(K.prefactor * abs(np.linalg.det(B)) * hw * np.sum(outer * g))


def gaussian_matrix_element(psi_out: GaussianPureState, S, psi_in: GaussianPureState,
                            spec: QuadratureSpec | None = None, tol: float = ALIAS_TOL) -> complex:
    """``<psi_out|U(S)|psi_in>`` by double quadrature (``n <= 2``, ``det B != 0``).

    The ``q'`` grid covers ``range_sigmas`` deviations of ``psi_in``; the
    ``w`` grid covers the same number of deviations of both ``psi_out`` and
    the transformed input, expressed in ``w = B^{-1} q``.
    """
    S = as_symplectic(S)
    n = psi_in.n
    if psi_out.n != n or S.n != n:
        raise DimensionError("state and group element mode counts differ")
    spec = spec or default_spec(n)
    K = huyghens_kernel(S)
    pred = mobius_transform(psi_in, S)
    sig_in = state_sigma(psi_in)
    axes_in = [uniform_grid(spec.range_sigmas * s, spec.points) for s in sig_in]
    Binv = K.Binv
    cov = [0.5 * np.linalg.inv(p.u) for p in (psi_out, pred)]
    sig_w = np.max([np.sqrt(np.diag(Binv @ c @ Binv.T)) for c in cov], axis=0)
    axes_w = [uniform_grid(spec.range_sigmas * s, spec.points) for s in sig_w]
    # inner integral: Gaussian in q' with coefficient (u + iv)/2 - i B^{-1}A/2, frequencies up to |w|
    for ax in range(n):
        alpha = 0.5 * complex(psi_in.u[ax, ax], psi_in.v[ax, ax]) - 0.5j * K.BinvA[ax, ax]
        err = aliasing_estimate(alpha, float(axes_w[ax][-1]), spacing(axes_in[ax]))
        _warn_if_coarse(err, tol, "matrix element (inner integral)")
        Bc = K.S.B
        a_w = 0.5 * (Bc.T @ (psi_out.u - 1j * psi_out.v + pred.u + 1j * pred.v) @ Bc)
        err = aliasing_estimate(complex(a_w[ax, ax]), 0.0, spacing(axes_w[ax]))
        _warn_if_coarse(err, tol, "matrix element (outer integral)")
    return matrix_element(S, lambda x: wavefunction_eval(psi_out, x), lambda x: wavefunction_eval(psi_in, x),
                          axes_in, axes_w)


def panel_matrix(S, states_out, states_in=None, spec: QuadratureSpec = DEFAULT_SPEC,
                 tol: float = ALIAS_TOL) -> np.ndarray:
    """All one-mode matrix elements ``M[i, j] = <out_i|U(S)|in_j>`` at once.

    Same quadrature as :func:`matrix_element` (substitution ``q = B w``), with
    the oscillatory factor shared by every pair.
    """
    S = as_symplectic(S)
    states_in = states_out if states_in is None else states_in
    if S.n != 1 or any(p.n != 1 for p in list(states_out) + list(states_in)):
        raise DimensionError("panel_matrix handles one mode")
    K = huyghens_kernel(S)
    b = K.S.B[0, 0]
    sig_in = max(float(state_sigma(p)[0]) for p in states_in)
    preds = [mobius_transform(p, S) for p in states_in]
    sig_w = max(float(state_sigma(p)[0]) for p in list(states_out) + preds) / abs(b)
    q_in = uniform_grid(spec.range_sigmas * sig_in, spec.points)
    w = uniform_grid(spec.range_sigmas * sig_w, spec.points)
    for p in states_in:
        alpha = gaussian_alpha(p) - 0.5j * K.BinvA[0, 0]
        _warn_if_coarse(aliasing_estimate(alpha, float(w[-1]), spacing(q_in)), tol, "panel matrix")
    F_in = np.column_stack([wavefunction_eval(p, q_in[:, None]) for p in states_in])
    G = (F_in * np.exp(0.5j * K.BinvA[0, 0] * q_in**2)[:, None])
    inner_w = np.empty((w.size, len(states_in)), dtype=complex)
    for start in range(0, w.size, TILE):
        E = np.exp(-1j * np.outer(w[start : start + TILE], q_in))
        inner_w[start : start + TILE] = E @ G
    inner_w *= spacing(q_in)
    q = b * w
    F_out = np.column_stack([wavefunction_eval(p, q[:, None]) for p in states_out])
    chirp = np.exp(0.5j * b * S.D[0, 0] * w**2)
    return K.prefactor * abs(b) * spacing(w) * (np.conj(F_out).T @ (chirp[:, None] * inner_w))


# -- coherent states -------------------------------------------------------------------


def coherent_wavefunction(z, q) -> np.ndarray:
    """``<q|z>`` for ``a = (q + ip)/sqrt(2)``; ``q`` has trailing axis n (or is 1-D for n = 1)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    q = np.asarray(q, dtype=float)
    if q.ndim == 0 or (z.size == 1 and q.shape[-1:] != (1,)):
        q = q[..., None]
    expo = (-0.5 * q**2 + np.sqrt(2.0) * z * q - 0.5 * z**2 - 0.5 * np.abs(z) ** 2).sum(axis=-1)
    return np.pi ** (-z.size / 4.0) * np.exp(expo)


def coherent_overlap(z1, z2) -> complex:
    """``<z1|z2> = exp(-|z1|^2/2 - |z2|^2/2 + z1^dagger z2)``."""
    z1 = np.atleast_1d(np.asarray(z1, dtype=complex))
    z2 = np.atleast_1d(np.asarray(z2, dtype=complex))
    if z1.shape != z2.shape:
        raise DimensionError("coherent points must have the same number of modes")
    if not (np.all(np.isfinite(z1)) and np.all(np.isfinite(z2))):
        raise DomainError("coherent points must be finite")
    return complex(np.exp(-0.5 * np.vdot(z1, z1).real - 0.5 * np.vdot(z2, z2).real + np.vdot(z1, z2)))


def _sqrt_pos(x: complex) -> complex:
    r = np.sqrt(complex(x))
    return -r if r.real < 0 else r


def su11_parameters(S) -> tuple[complex, complex]:
    """``lambda = (a + d + ic - ib)/2`` and ``mu = (a - d + ib + ic)/2``."""
    S = as_symplectic(S)
    if S.n != 1:
        raise DimensionError("the coherent-state kernel is provided for n = 1")
    (a, b), (c, d) = S.matrix
    return 0.5 * complex(a + d, c - b), 0.5 * complex(a - d, b + c)


def sp2_coherent_kernel(S, z: complex, z_prime: complex, branch_tol: float = 1e-12) -> complex:
    """``<z'|U(S)|z>`` for a single mode.

    The exponent is
    ``-|z|^2/2 - |z'|^2/2 + (2 z z'^* + mu z'^{*2} - mu^* z^2) / (2 lambda^*)``.
    The prefactor depends on ``Im(mu - lambda) = b``:

    * ``b != 0``: ``(2|b|)^{-1/2} sqrt(1 - (lambda + mu^*)/(lambda^* + mu)) sqrt(1 + mu/lambda^*)``
    * ``b == 0``: ``sqrt(2|R| / (1 + (lambda + mu) R))`` with ``R = Re(lambda + mu)``

    Each square root takes the branch with positive real part.  Both prefactors
    have modulus ``|lambda|^{-1/2}``.  The overall phase (metaplectic sheet) is
    not fixed.
    """
    lam, mu = su11_parameters(S)
    z, zp = complex(z), complex(z_prime)
    if not (np.isfinite(z) and np.isfinite(zp)):
        raise DomainError("coherent points must be finite")
    lc = lam.conjugate()
    gap = (mu - lam).imag
    if abs(gap) > branch_tol:
        pref = (_sqrt_pos(1.0 - (lam + mu.conjugate()) / (lc + mu)) * _sqrt_pos(1.0 + mu / lc)
                / np.sqrt(2.0 * abs(gap)))
    else:
        R = (lam + mu).real
        pref = _sqrt_pos(2.0 * abs(R) / (1.0 + (lam + mu) * R))
    zpc = zp.conjugate()
    expo = (-0.5 * abs(z) ** 2 - 0.5 * abs(zp) ** 2
            + (2.0 * z * zpc + mu * zpc**2 - mu.conjugate() * z**2) / (2.0 * lc))
    return complex(pref * np.exp(expo))


# -- grid diagnostics (one mode) ----------------------------------------------------------


def wigner_on_grid(values: np.ndarray, grid: np.ndarray, p: np.ndarray, stride: int = 10) -> tuple[np.ndarray, np.ndarray]:
    """Wigner function ``(2 pi)^{-1} int psi(q + y/2) psi^*(q - y/2) e^{-ipy} dy`` on a grid.

    Returns ``(q_sub, W)`` where ``q_sub = grid[::stride]`` and ``W`` has
    shape ``(len(q_sub), len(p))``.  The ``y`` integral uses grid-aligned
    steps ``y = 2 k h``.
    """
    values = np.asarray(values, dtype=complex)
    h = spacing(grid)
    N = grid.size
    idx = np.arange(0, N, stride)
    W = np.empty((idx.size, p.size))
    for row, j in enumerate(idx):
        kmax = min(j, N - 1 - j)
        k = np.arange(-kmax, kmax + 1)
        c = values[j + k] * np.conj(values[j - k])
        W[row] = (np.exp(-2j * np.outer(p, k * h)) @ c).real
    return grid[idx], W * (2.0 * h) / (2.0 * np.pi)


def wigner_moments(q: np.ndarray, p: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Second-moment matrix ``[[<q^2>, <qp>], [<qp>, <p^2>]]`` of a gridded Wigner function."""
    dq, dp = spacing(q), spacing(p)
    norm = W.sum() * dq * dp
    Q, P = np.meshgrid(q, p, indexing="ij")
    m = lambda F: float((F * W).sum() * dq * dp / norm)
    qq, qp, pp = m(Q * Q), m(Q * P), m(P * P)
    return np.array([[qq, qp], [qp, pp]])


def grid_moments(values: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Variance matrix of a one-mode wavefunction on a grid (``p`` via spectral derivative)."""
    values = np.asarray(values, dtype=complex)
    h = spacing(grid)
    k = 2.0 * np.pi * np.fft.fftfreq(grid.size, d=h)
    dpsi = np.fft.ifft(1j * k * np.fft.fft(values))
    nrm = np.sum(np.abs(values) ** 2) * h
    qq = np.sum(grid**2 * np.abs(values) ** 2) * h / nrm
    pp = np.sum(np.abs(dpsi) ** 2) * h / nrm
    # symmetrized <(qp + pq)/2> = Re <psi| q (-i d/dq) |psi>
    qp = (np.sum(np.conj(values) * grid * (-1j) * dpsi) * h).real / nrm
    return np.array([[qq, qp], [qp, pp]])


def mean_photon_number(values: np.ndarray, grid: np.ndarray) -> float:
    """``<N> = (<q^2> + <p^2> - 1)/2`` for a centred one-mode state."""
    V = grid_moments(values, grid)
    return 0.5 * (V[0, 0] + V[1, 1] - 1.0)


# -- closed-form actions of special elements ------------------------------------------------


def basis_action_check(kind: str, params, psi: GaussianPureState | None = None, b: float = 0.25,
                       spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Compare the kernel action of ``X F(b)`` with the closed-form action of ``X``.

    ``X`` is ``GL`` (``params`` = A), ``scaling`` (kappa) or ``lens`` (g, with
    ``L(g) = [[1, 0], [-g, 1]]``); ``F(b)`` is a free propagation keeping
    ``det B != 0``.  The closed forms are

    * GL:      ``(U f)(q) = |det A|^{-1/2} f(A^{-1} q)``
    * scaling: ``(U f)(q) = kappa^{-1/2} f(q / kappa)``
    * lens:    ``(U f)(q) = exp(-(i/2) g q^2) f(q)``

    Output grids are chosen so that ``A^{-1} q`` lands on grid nodes, which
    avoids interpolation.  Returns the phase-fitted relative residual.
    """
    psi = psi or GaussianPureState.vacuum(1)
    val = np.atleast_2d(np.asarray(params, dtype=float))
    if val.shape != (1, 1):
        raise DimensionError("basis_action_check works with one mode")
    x = float(val[0, 0])
    if kind == "GL":
        X = embed_gl(val)
        factor = x
    elif kind == "scaling":
        X = embed_scaling([x])
        factor = x
    elif kind == "lens":
        X = embed_lens(-val)
        factor = None
    else:
        raise DomainError(f"unknown kind {kind!r}; expected GL, scaling or lens")
    F = embed_free_propagation([[b]])
    mid = mobius_transform(psi, F)
    end = mobius_transform(psi, X @ F)
    # for GL/scaling the output grid is factor * grid, which covers the result
    grid = grid_for([psi, mid] if factor is not None else [psi, mid, end], spec)
    f0 = wavefunction_eval(psi, grid[:, None])
    phi = apply_kernel(F, f0, grid, alpha_in=gaussian_alpha(psi))
    if factor is None:
        expected = np.exp(-0.5j * x * grid**2) * phi
        grid_out = grid
    else:
        grid_out = factor * grid
        expected = abs(factor) ** -0.5 * phi
    direct = apply_kernel(X @ F, f0, grid, grid_out, alpha_in=gaussian_alpha(psi))
    return fit_phase(expected, direct)[1]
