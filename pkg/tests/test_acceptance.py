"""Acceptance criteria, one test (and one PASS/FAIL line) per criterion."""

import itertools
import time

import numpy as np
from scipy.stats import unitary_group

from spkit import core, decompositions as dec, gaussian, geometry, kernels, lie, variance
from spkit import random as sprandom
from spkit.geometry import Subspace
from spkit.gaussian import GaussianPureState

from conftest import rel_fro
from test_decompositions import planted_nilpotent
from test_kernels import POINTS, coherent_quadrature, composed_panel, nondegenerate_symplectic


def _haar(n, size, gen):
    if n == 1:
        return np.exp(1j * gen.uniform(0, 2 * np.pi, size=size))[:, None, None]
    return unitary_group.rvs(n, size=size, random_state=gen)


def test_c01_symplectic_closure(record):
    t0 = time.perf_counter()
    gen = sprandom.rng(101)
    worst = dict(exp=0.0, prod=0.0, inv=0.0, det=0.0)
    for n in (1, 2, 3, 5, 10):
        prev = None
        for _ in range(1000):
            S = lie.exponentiate(sprandom.random_algebra_element(n, gen))
            worst["exp"] = max(worst["exp"], core.is_symplectic(S.matrix)[1])
            worst["inv"] = max(worst["inv"], core.is_symplectic(S.inv().matrix)[1])
            worst["det"] = max(worst["det"], abs(np.linalg.det(S.matrix) - 1.0))
            if prev is not None:
                P = prev.matrix @ S.matrix
                worst["prod"] = max(worst["prod"], core.is_symplectic(P)[1], abs(np.linalg.det(P) - 1.0))
            prev = S
    ok = all(v < 1e-10 for v in worst.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    record("C1 symplectic closure (5x1000, n in 1,2,3,5,10)", ok, f"max {detail} < 1e-10 [{time.perf_counter() - t0:.1f}s]")
    assert ok


def _planted_errors(gen):
    """Largest factor-recovery errors over planted products, n = 1..5."""
    err = dict(polar=0.0, euler=0.0, pre_iwasawa=0.0, iwasawa=0.0)
    for i in range(250):
        n = 1 + i % 5
        K = core.embed_unitary(sprandom.random_unitary(n, gen)).matrix
        P = sprandom.random_positive(n, gen).matrix
        f = dec.polar_decompose(K @ P)
        err["polar"] = max(err["polar"], rel_fro(f.compact.matrix, K), rel_fro(f.positive.matrix, P))
        # Euler factors are unique only up to per-mode phases; kappa is unique
        k = np.sort(np.exp(gen.uniform(0.05, 1.5, size=n)))[::-1]
        L, R = sprandom.random_compact(n, gen).matrix, sprandom.random_compact(n, gen).matrix
        f = dec.euler_decompose(L @ np.diag(np.concatenate([k, 1 / k])) @ R)
        err["euler"] = max(err["euler"], np.abs(f.kappa - k).max() / k.max())
        Lm = core.embed_lens(sprandom.random_symmetric(n, gen)).matrix
        A0 = sprandom.random_spd(n, gen)
        M = core.block(A0, np.zeros((n, n)), np.zeros((n, n)), np.linalg.inv(A0))
        f = dec.pre_iwasawa_decompose(Lm @ M @ K)
        err["pre_iwasawa"] = max(err["pre_iwasawa"], rel_fro(f.lens.matrix, Lm), rel_fro(f.A0, A0), rel_fro(f.compact.matrix, K))
        N = planted_nilpotent(n, gen)
        kk = np.exp(gen.normal(size=n) * 0.5)
        f = dec.iwasawa_decompose(N @ np.diag(np.concatenate([kk, 1 / kk])) @ K)
        err["iwasawa"] = max(err["iwasawa"], rel_fro(f.nilpotent.matrix, N), np.abs(f.kappa / kk - 1).max(),
                             rel_fro(f.compact.matrix, K))
    return err


def test_c02_decomposition_round_trips(record):
    t0 = time.perf_counter()
    gen = sprandom.rng(202)
    recon = {}
    for kind in sorted(dec.DECOMPOSERS):
        worst = 0.0
        for i in range(1000):
            S = sprandom.random_symplectic(1 + i % 5, gen, scale=1.5)
            worst = max(worst, rel_fro(dec.decompose(S, kind).product(), S.matrix))
        recon[kind] = worst
    planted = _planted_errors(gen)
    # closed forms for n = 1, written out independently of the library
    closed = 0.0
    for _ in range(1000):
        S = sprandom.random_symplectic(1, gen).matrix
        (a, b), (c, d) = S
        xi, eta, phi = (a * c + b * d) / (a * a + b * b), np.log(a * a + b * b), 2 * np.angle(a - 1j * b)
        rot = np.array([[np.cos(phi / 2), -np.sin(phi / 2)], [np.sin(phi / 2), np.cos(phi / 2)]])
        f = dec.iwasawa_decompose(S)
        closed = max(closed, abs(f.nilpotent.C[0, 0] - xi), abs(f.kappa[0] - np.exp(eta / 2)),
                     np.abs(f.compact.matrix - rot).max())
    ok = max(recon.values()) < 1e-9 and max(planted.values()) < 1e-9 and closed < 1e-12
    detail = (", ".join(f"{k} {v:.1e}" for k, v in recon.items())
              + "; planted " + ", ".join(f"{k} {v:.1e}" for k, v in planted.items())
              + f"; n=1 closed forms {closed:.1e}")
    record("C2 decomposition round-trips (4x1000, n<=5)", ok, f"{detail} [{time.perf_counter() - t0:.1f}s]")
    assert ok


def _split_deviation(n):
    d = lambda a, b: float(a == b)
    m = lambda J: J.matrix
    V, W, Z, comm = lie.V, lie.W, lie.Z, lie.commutator
    dev = 0.0
    for r, s, u, v in itertools.product(range(n), repeat=4):
        pairs = [
            (comm(m(W(n, r, s)), m(W(n, u, v))), 1j * (d(r, v) * m(W(n, u, s)) - d(u, s) * m(W(n, r, v)))),
            (comm(m(W(n, r, s)), m(V(n, u, v))), -1j * (d(u, s) * m(V(n, r, v)) + d(v, s) * m(V(n, r, u)))),
            (comm(m(W(n, r, s)), m(Z(n, u, v))), 1j * (d(r, u) * m(Z(n, s, v)) + d(r, v) * m(Z(n, s, u)))),
            (comm(m(V(n, r, s)), m(Z(n, u, v))), 1j * (d(r, u) * m(W(n, s, v)) + d(s, u) * m(W(n, r, v))
                                                     + d(r, v) * m(W(n, s, u)) + d(s, v) * m(W(n, r, u)))),
            (comm(m(V(n, r, s)), m(V(n, u, v))), 0.0),
            (comm(m(Z(n, r, s)), m(Z(n, u, v))), 0.0),
        ]
        dev = max(dev, max(np.abs(lhs - rhs).max() for lhs, rhs in pairs))
    return dev


def test_c03_lie_algebra(record):
    t0 = time.perf_counter()
    gen = sprandom.rng(303)
    dev = max(max(lie.commutator_check(n), _split_deviation(n)) for n in (1, 2, 3))
    card = all(len(lie.basis(n)) == n * (2 * n + 1) for n in range(1, 7))
    misses = []
    for name, n in itertools.product(lie.SUBGROUPS, (1, 2, 3)):
        member = lie.MEMBERSHIP[name]
        gens = lie.subgroup_generators(name, n)
        for J in gens:
            if not member(lie.exponentiate(J, gen.uniform(-1, 1)).matrix):
                misses.append((name, n))
        if gens:
            combo = lie.LieAlgebraElement.zero(n)
            for J in gens:
                combo = combo + gen.normal() * J
            if not member(lie.exponentiate(combo, 0.5).matrix):
                misses.append((name, n, "combo"))
    ok = dev < 1e-13 and card and not misses
    record("C3 Lie algebra structure", ok,
           f"max bracket deviation {dev:.1e} < 1e-13, cardinality n(2n+1) {card}, "
           f"block-pattern misses {len(misses)} over {len(lie.SUBGROUPS)} subgroups [{time.perf_counter() - t0:.1f}s]")
    assert ok


def test_c04_williamson(record):
    t0 = time.perf_counter()
    gen = sprandom.rng(404)
    worst_k, worst_res, cases = 0.0, 0.0, 0
    for n in (1, 2, 3, 4):
        plants = [np.sort(0.5 + gen.exponential(0.6, size=n)) for _ in range(4)]
        plants += [np.full(n, 0.5), np.full(n, 1.3)]
        if n > 1:
            plants += [np.sort(np.r_[np.full(n - 1, 0.8), 2.0]), np.sort(np.r_[0.6, np.full(n - 1, 1.7)])]
        for kappa in plants:
            S = sprandom.random_symplectic(n, gen).matrix
            V = S.T @ np.diag(np.r_[kappa, kappa]) @ S
            V = 0.5 * (V + V.T)
            for i in range(101):
                Vc = V
                if i:
                    T = sprandom.random_symplectic(n, gen).matrix
                    Vc = T @ V @ T.T
                    Vc = 0.5 * (Vc + Vc.T)
                w = variance.williamson(Vc)
                worst_k = max(worst_k, np.abs(w.kappa - kappa).max() / kappa.max())
                worst_res = max(worst_res, w.residual)
                cases += 1
    ok = worst_k < 1e-8 and worst_res < 1e-9
    record("C4 Williamson normal form", ok,
           f"{cases} matrices (planted + 100 congruences each, n<=4, degenerate included): "
           f"kappa error {worst_k:.1e} < 1e-8, residual {worst_res:.1e} < 1e-9 [{time.perf_counter() - t0:.1f}s]")
    assert ok


def test_c05_uncertainty_equivalence(record):
    t0 = time.perf_counter()
    gen = sprandom.rng(505)
    disagree, banded, sides = 0, 0, [0, 0]
    for i in range(2000):
        n = 1 + i % 3
        kappa = 0.5 + gen.exponential(0.5, size=n)
        delta = gen.choice([-1.0, 1.0]) * 10.0 ** gen.uniform(-11, -1)
        kappa[gen.integers(n)] = 0.5 + delta
        S = sprandom.random_symplectic(n, gen, scale=0.7).matrix
        V = S @ np.diag(np.r_[kappa, kappa]) @ S.T
        V = 0.5 * (V + V.T)
        if abs(kappa.min() - 0.5) < 1e-9:
            banded += 1
            continue
        psd = variance.is_physical(V)[0]
        by_kappa = bool(variance.williamson(V).kappa.min() >= 0.5)
        sides[psd] += 1
        disagree += psd != by_kappa
    ok = disagree == 0 and min(sides) > 0
    record("C5 uncertainty PSD vs kappa >= 1/2", ok,
           f"2000 straddling matrices, {banded} inside the 1e-9 band, {sides[1]} physical / {sides[0]} not, "
           f"{disagree} disagreements [{time.perf_counter() - t0:.1f}s]")
    assert ok


def test_c06_squeezing_criterion(record):
    t0 = time.perf_counter()
    gen = sprandom.rng(606)
    fixture = variance.squeezing_report([[0.6, 0.25], [0.25, 0.6]])
    fixture_ok = (not fixture.manifest) and fixture.squeezed and abs(fixture.l - 0.35) <= 1e-12
    mc_disagree, flips, counts = 0, 0, [0, 0]
    for n in (1, 2):
        pool = _haar(n, 50000, gen)
        drawn = 0
        while drawn < 100:
            V = sprandom.random_variance(n, gen)
            rep = variance.squeezing_report(V)
            if abs(rep.l - 0.5) < 0.05:
                # Monte-Carlo cannot resolve l arbitrarily close to 1/2
                continue
            drawn += 1
            counts[rep.squeezed] += 1
            mc = variance.min_diagonal_over_rotations(V, pool)
            mc_disagree += (mc < 0.5) != rep.squeezed
            for _ in range(20):
                R = sprandom.random_compact(n, gen)
                flips += variance.squeezing_report(variance.transform(V, R)).squeezed != rep.squeezed
    ok = fixture_ok and mc_disagree == 0 and flips == 0 and min(counts) > 0
    record("C6 squeezing criterion", ok,
           f"fixture manifest={fixture.manifest} squeezed={fixture.squeezed} l={fixture.l:.15f}; "
           f"Monte-Carlo disagreements {mc_disagree}/200 ({counts[1]} squeezed, {counts[0]} not); "
           f"U(n) flag flips {flips}/4000 [{time.perf_counter() - t0:.1f}s]")
    assert ok


def test_c07_family_laws(record):
    t0 = time.perf_counter()
    gen = sprandom.rng(707)
    bad_g, bad_h, nest, inter = 0, 0, 0, 0
    for i in range(200):
        n = 1 + i % 3
        S = sprandom.random_symplectic(n, gen).matrix
        Vg = 0.5 * S @ S.T
        fg = variance.family_membership(Vg)
        bad_g += not (fg.S_G and variance.squeezing_report(Vg).squeezed)
        R = sprandom.random_compact(n, gen).matrix
        k = 0.5 + gen.exponential(0.5, size=n)
        if i % 4 == 0:
            k[0] = 0.5
        Vh = R @ np.diag(np.r_[k, k]) @ R.T
        Vh = 0.5 * (Vh + Vh.T)
        fh = variance.family_membership(Vh)
        bad_h += not fh.S_H or variance.squeezing_report(Vh).squeezed
        nest += not (fg.S_K and fh.S_K)
        for V, f in ((Vg, fg), (Vh, fh)):
            inter += f.S_H and f.S_G and not np.allclose(V, 0.5 * np.eye(2 * n), atol=1e-12)
    vac = [variance.family_membership(0.5 * np.eye(2 * n)) for n in (1, 2, 3)]
    vac_ok = all(f.S_K and f.S_H and f.S_G for f in vac)
    ok = bad_g == 0 and bad_h == 0 and nest == 0 and inter == 0 and vac_ok
    record("C7 family laws", ok,
           f"S_G not squeezed {bad_g}/200, S_H squeezed {bad_h}/200, nesting failures {nest}, "
           f"S_H and S_G members other than I/2 {inter}, I/2 in all three {vac_ok} [{time.perf_counter() - t0:.1f}s]")
    assert ok


def test_c08_gaussian_triangle(record):
    t0 = time.perf_counter()
    gen = sprandom.rng(808)
    tri, assoc = 0.0, 0.0
    for i in range(500):
        n = 1 + i % 3
        psi = GaussianPureState(*sprandom.random_state_params(n, gen))
        S1, S2 = sprandom.random_symplectic(n, gen), sprandom.random_symplectic(n, gen)
        lhs = gaussian.variance_of_state(gaussian.mobius_transform(psi, S1)).V
        rhs = variance.transform(gaussian.variance_of_state(psi), S1).V
        tri = max(tri, np.linalg.norm(lhs - rhs) / max(1.0, np.linalg.norm(rhs)))
        a = gaussian.mobius_transform(gaussian.mobius_transform(psi, S1), S2)
        b = gaussian.mobius_transform(psi, S2 @ S1)
        scale = max(1.0, np.abs(b.u).max(), np.abs(b.v).max())
        assoc = max(assoc, (np.abs(a.u - b.u).max() + np.abs(a.v - b.v).max()) / scale)
    ok = tri < 1e-9 and assoc < 1e-9
    record("C8 Gaussian consistency triangle", ok,
           f"500 (state, S) pairs n<=3: triangle {tri:.1e} < 1e-9, group action {assoc:.1e} < 1e-9 "
           f"[{time.perf_counter() - t0:.1f}s]")
    assert ok


def test_c09_kernels(record):
    t0 = time.perf_counter()
    gen = sprandom.rng(909)
    panel = kernels.state_panel()
    unit = 0.0
    for _ in range(10):
        S = nondegenerate_symplectic(gen)
        for psi in panel:
            grid = kernels.grid_for([psi, gaussian.mobius_transform(psi, S)])
            out = kernels.apply_kernel(S, gaussian.wavefunction_eval(psi, grid[:, None]), grid,
                                       alpha_in=kernels.gaussian_alpha(psi))
            unit = max(unit, abs(kernels.norm_squared(out, grid) - 1))
    comp = 0.0
    for _ in range(50):
        S1, S2 = nondegenerate_symplectic(gen), nondegenerate_symplectic(gen)
        direct = kernels.panel_matrix(S1 @ S2, panel)
        c, res = kernels.fit_phase(direct, composed_panel(S1, S2, panel))
        comp = max(comp, res, abs(abs(c) - 1))
    coh = 0.0
    for _ in range(4):
        S = nondegenerate_symplectic(gen)
        ker = np.array([kernels.sp2_coherent_kernel(S, z, zp) for z, zp in POINTS])
        coh = max(coh, kernels.fit_phase(coherent_quadrature(S, POINTS), ker)[1])
    F, Finv = np.array([[1.0, 0.6], [0.0, 1.0]]), np.array([[1.0, -0.6], [0.0, 1.0]])
    for a, cc in [(1.6, 0.7), (0.5, -1.2), (-1.3, 0.4)]:
        S = np.array([[a, 0.0], [cc, 1 / a]])
        ker = np.array([kernels.sp2_coherent_kernel(S, z, zp) for z, zp in POINTS])
        coh = max(coh, kernels.fit_phase(coherent_quadrature(S, POINTS, factors=[S @ Finv, F]), ker)[1])
    wig = 0.0
    for psi in (panel[1], panel[2], panel[4]):
        S = nondegenerate_symplectic(gen)
        pred = gaussian.mobius_transform(psi, S)
        grid = kernels.grid_for([psi, pred], kernels.QuadratureSpec(10.0, 2001))
        out = kernels.apply_kernel(S, gaussian.wavefunction_eval(psi, grid[:, None]), grid)
        p = np.linspace(-10, 10, 401) * np.sqrt(gaussian.variance_of_state(pred).V[1, 1])
        q_sub, W = kernels.wigner_on_grid(out, grid, p, stride=8)
        G_grid = 0.5 * np.linalg.inv(kernels.wigner_moments(q_sub, p, W))
        Si = np.linalg.inv(S.matrix)
        wig = max(wig, np.abs(G_grid - Si.T @ gaussian.wigner_of_state(psi).G @ Si).max())
    ok = unit < 1e-6 and comp < 1e-5 and coh < 1e-5 and wig < 1e-6
    record("C9 kernel verification (n=1)", ok,
           f"unitarity {unit:.1e} < 1e-6, composition up to phase {comp:.1e} < 1e-5 (50 pairs, 5-state panel), "
           f"coherent kernel {coh:.1e} < 1e-5 (both branches), Wigner G' {wig:.1e} < 1e-6 "
           f"[{time.perf_counter() - t0:.1f}s]")
    assert ok


def test_c10_geometry(record):
    t0 = time.perf_counter()
    gen = sprandom.rng(1010)
    checked, bad_identity, bad_dim, bad_plant, bad_inv = 0, 0, 0, 0, 0
    for n in (1, 2, 3, 4):
        for k in range(2 * n + 1):
            lo, hi = geometry.rank_bounds(n, k)
            targets = [None, None] + [r for r in range(lo, hi + 1, 2) for _ in range(2)]
            for r in targets:
                if k == 0:
                    W = Subspace.zero(n)
                else:
                    W = Subspace(sprandom.random_subspace_basis(n, k, gen, rank=r), n=n)
                rank = geometry.symplectic_rank(W)
                comp = geometry.symplectic_complement(W)
                bad_plant += r is not None and rank != r
                bad_dim += comp.k != 2 * n - k
                bad_identity += geometry.symplectic_rank(comp) != 2 * (n - k) + rank
                for _ in range(100):
                    bad_inv += geometry.symplectic_rank(W.transformed(sprandom.random_symplectic(n, gen))) != rank
                checked += 1
    ok = bad_identity == 0 and bad_dim == 0 and bad_plant == 0 and bad_inv == 0
    record("C10 geometry", ok,
           f"{checked} subspaces over n<=4 and all k: complement-rank identity failures {bad_identity}, "
           f"dimension law failures {bad_dim}, planted-rank misses {bad_plant}, "
           f"rank changes under 100 actions each {bad_inv} [{time.perf_counter() - t0:.1f}s]")
    assert ok
