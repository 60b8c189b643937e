"""Command-line front end: JSON in, JSON out.

Exit codes are 0 on success, 2 when the input fails validation (diagnostic
as JSON on stderr) and 1 on an internal error.  The default tolerance can be
overridden with the ``SPKIT_TOL`` environment variable.

Circuits are ordered lists of element descriptors read in temporal order: the
first element acts first, so the total transformation is ``S_k ... S_2 S_1``.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings

import numpy as np

from . import core, decompositions, gaussian, geometry, io, kernels, variance
from . import random as sprandom
from .errors import SymplecticError, ValidationError

TOL_ENV = "SPKIT_TOL"
DECOMPOSITION_TYPES = ("polar", "euler", "pre-iwasawa", "iwasawa")
GENERATE_KINDS = ("random-symplectic", "random-variance", "named")
NAMED = ("beta", "identity", "vacuum", "hidden-squeezing")
HIDDEN_SQUEEZING = [[0.6, 0.25], [0.25, 0.6]]


def default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return core.DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise ValidationError(f"{TOL_ENV}={raw!r} is not a number") from None
    if not tol > 0:
        raise ValidationError(f"{TOL_ENV} must be positive")
    return tol


# -- circuits -----------------------------------------------------------------


def _scalar_or_vector(obj, n: int) -> np.ndarray:
    v = io.vector_from_json(obj).real
    if v.size == 1 and n > 1:
        v = np.full(n, v[0])
    if v.size != n:
        raise ValidationError(f"expected {n} values, got {v.size}")
    return v


def circuit_element(desc, n: int, tol: float) -> core.SymplecticMatrix:
    """One circuit element as a symplectic matrix."""
    if not isinstance(desc, dict) or "type" not in desc:
        raise ValidationError("circuit element needs a 'type'")
    kind = desc["type"]
    if kind == "unitary":
        return core.embed_unitary(io.small_matrix_from_json(desc["U"], n), tol)
    if kind == "squeeze":
        return core.embed_scaling(np.exp(-_scalar_or_vector(desc["r"], n)), tol)
    if kind == "scaling":
        return core.embed_scaling(_scalar_or_vector(desc["kappa"], n), tol)
    if kind == "lens":
        return core.embed_lens(io.small_matrix_from_json(desc["C"], n), tol)
    if kind == "free":
        return core.embed_free_propagation(io.small_matrix_from_json(desc["B"], n), tol)
    if kind == "matrix":
        M = io.matrix_from_json(desc)
        if M.shape[0] != 2 * n:
            raise ValidationError(f"matrix element has {M.shape[0]} rows, expected {2 * n}")
        return core.SymplecticMatrix(M.real, tol)
    raise ValidationError(f"unknown circuit element type {kind!r}")


def circuit_matrix(circuit, n: int, tol: float) -> core.SymplecticMatrix:
    """Total ``S_k ... S_1`` of a circuit (a list, or ``{"elements": [...]}``)."""
    if isinstance(circuit, dict):
        circuit = circuit.get("elements")
    if not isinstance(circuit, list):
        raise ValidationError("circuit must be a list of elements")
    total = core.SymplecticMatrix(np.eye(2 * n), tol)
    for desc in circuit:
        try:
            total = circuit_element(desc, n, tol) @ total
        except KeyError as exc:
            raise ValidationError(f"circuit element is missing field {exc.args[0]!r}") from None
    return total


# -- verbs ---------------------------------------------------------------------------


def _symplectic_input(path: str, tol: float) -> core.SymplecticMatrix:
    M = io.matrix_from_json(io.load(path))
    if np.iscomplexobj(M):
        raise ValidationError("symplectic matrices must be real")
    return core.SymplecticMatrix(M, tol)


def _variance_input(path: str) -> variance.VarianceMatrix:
    M = io.matrix_from_json(io.load(path))
    if np.iscomplexobj(M):
        raise ValidationError("variance matrices must be real")
    return variance.VarianceMatrix(M)


def cmd_check(args, tol):
    M = io.matrix_from_json(io.load(args.input))
    ok, res = core.is_symplectic(M, tol)
    det = np.linalg.det(M)
    det = float(det.real) if np.isrealobj(M) or ok else complex(det)
    return {"symplectic": ok, "residual": res, "det": det}


def cmd_decompose(args, tol):
    S = _symplectic_input(args.input, tol)
    kind = args.type.replace("-", "_")
    f = decompositions.decompose(S, kind)
    names = {"polar": ["compact", "positive"], "euler": ["left", "scaling", "right"],
             "pre_iwasawa": ["lens", "scale", "compact"], "iwasawa": ["nilpotent", "scaling", "compact"]}[kind]
    out = {"type": kind, "n": S.n, "factors": [io.matrix_to_json(F) for F in f.factors], "names": names,
           "residual": f.residual}
    if kind in ("euler", "iwasawa"):
        out["kappa"] = f.kappa
    if kind == "iwasawa" and S.n == 1:
        xi, eta, phi = decompositions.iwasawa_parameters_n1(S)
        out["parameters"] = {"xi": xi, "eta": eta, "phi": phi}
    return out


def cmd_williamson(args, tol):
    w = variance.williamson(_variance_input(args.input))
    return {"kappa": w.kappa, "S": io.matrix_to_json(w.S), "residual": w.residual}


def cmd_squeeze(args, tol):
    return variance.variance_report(_variance_input(args.input))


def cmd_families(args, tol):
    V = _variance_input(args.input)
    flags = variance.family_membership(V, tol)
    ok, R = variance.diagonalizable_in_Kn(V)
    return {"families": flags.names(), "S_K": flags.S_K, "S_H": flags.S_H, "S_G": flags.S_G,
            "diagonalizer": io.matrix_to_json(R) if ok else None}


def cmd_evolve(args, tol):
    psi = io.state_from_json(io.load(args.state))
    S = circuit_matrix(io.load(args.circuit), psi.n, tol)
    out = gaussian.mobius_transform(psi, S)
    V = gaussian.variance_of_state(out)
    return {"n": out.n, "u": io.array_to_rows(out.u), "v": io.array_to_rows(out.v),
            "V": io.matrix_to_json(V.V), "S": io.matrix_to_json(S)}


def cmd_wigner(args, tol):
    if args.state:
        W = gaussian.wigner_of_state(io.state_from_json(io.load(args.state)))
    elif args.input:
        W = gaussian.GaussianWigner(io.matrix_from_json(io.load(args.input)).real)
    else:
        raise ValidationError("wigner needs --state or --input")
    ok, kappa = gaussian.is_admissible_wigner(W)
    return {"G": io.matrix_to_json(W.G), "norm": W.norm, "admissible": ok, "kappa": kappa,
            "V": io.matrix_to_json(W.variance().V)}


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ValidationError(f"cannot parse complex number {text!r}") from None


def _point_arg(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise ValidationError(f"cannot parse point {text!r}") from None


def cmd_kernel(args, tol):
    S = _symplectic_input(args.input, tol)
    if args.mode == "huyghens":
        if args.q is None or args.q_prime is None:
            raise ValidationError("huyghens mode needs --q and --q-prime")
        K = kernels.huyghens_kernel(S)
        val = kernels.huyghens_eval(K, _point_arg(args.q), _point_arg(args.q_prime))
        return {"re": val.real, "im": val.imag, "mode": "huyghens", "prefactor": K.prefactor}
    if args.mode == "coherent":
        if args.z is None or args.z_prime is None:
            raise ValidationError("coherent mode needs --z and --z-prime")
        lam, mu = kernels.su11_parameters(S)
        val = kernels.sp2_coherent_kernel(S, _complex_arg(args.z), _complex_arg(args.z_prime))
        return {"re": val.real, "im": val.imag, "mode": "coherent", "lambda": lam, "mu": mu}
    if not (args.state_in and args.state_out):
        raise ValidationError("matrix-element mode needs --state-in and --state-out")
    spec = io.quadrature_from_json(io.load(args.quadrature)) if args.quadrature else None
    psi_in = io.state_from_json(io.load(args.state_in))
    psi_out = io.state_from_json(io.load(args.state_out))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        val = kernels.gaussian_matrix_element(psi_out, S, psi_in, spec)
    return {"re": val.real, "im": val.imag, "mode": "matrix-element", "warnings": [str(w.message) for w in caught]}


def cmd_subspace(args, tol):
    W = io.subspace_from_json(io.load(args.input))
    if args.transform:
        S = _symplectic_input(args.transform, tol)
        if S.n != W.n:
            raise ValidationError(f"transform has n={S.n}, subspace has n={W.n}")
        W = W.transformed(S)
    c = geometry.classify(W)
    comp = geometry.symplectic_complement(W)
    lo, hi = geometry.rank_bounds(W.n, W.k)
    return {"n": W.n, "k": c.k, "symplectic_rank": c.symp_rank, "kind": c.kind,
            "complement": io.subspace_to_json(comp), "complement_rank": geometry.symplectic_rank(comp),
            "rank_bounds": [lo, hi]}


def cmd_generate(args, tol):
    if args.kind == "named":
        return _named(args.name, args.n)
    gen = sprandom.rng(args.seed)
    if args.kind == "random-symplectic":
        S = sprandom.random_symplectic(args.n, gen, args.scale)
        return io.matrix_to_json(S)
    return io.matrix_to_json(sprandom.random_variance(args.n, gen, args.preset))


def _named(name: str | None, n: int):
    if name == "beta":
        return io.matrix_to_json(core.beta(n))
    if name == "identity":
        return io.matrix_to_json(np.eye(2 * n))
    if name == "vacuum":
        return io.state_to_json(gaussian.GaussianPureState.vacuum(n))
    if name == "hidden-squeezing":
        return io.matrix_to_json(np.array(HIDDEN_SQUEEZING), 1)
    raise ValidationError(f"unknown name {name!r}; expected one of {NAMED}")


COMMANDS = {
    "check": cmd_check,
    "decompose": cmd_decompose,
    "williamson": cmd_williamson,
    "squeeze": cmd_squeeze,
    "families": cmd_families,
    "evolve": cmd_evolve,
    "wigner": cmd_wigner,
    "kernel": cmd_kernel,
    "subspace": cmd_subspace,
    "generate": cmd_generate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help=f"tolerance (default: ${TOL_ENV} or {core.DEFAULT_TOL:g})")
    common.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")

    p = argparse.ArgumentParser(prog="spkit", description="Symplectic-group toolkit with JSON input and output.")
    sub = p.add_subparsers(dest="verb", required=True)

    for verb, helptext in (("check", "test membership in Sp(2n, R)"),
                           ("williamson", "Williamson normal form of a variance matrix"),
                           ("squeeze", "physicality and squeezing report"),
                           ("families", "family membership of a variance matrix")):
        s = sub.add_parser(verb, parents=[common], help=helptext)
        s.add_argument("--input", "-i", required=True)

    s = sub.add_parser("decompose", parents=[common], help="factor a symplectic matrix")
    s.add_argument("--input", "-i", required=True)
    s.add_argument("--type", "-t", choices=DECOMPOSITION_TYPES, default="polar")

    s = sub.add_parser("evolve", parents=[common], help="evolve a Gaussian pure state through a circuit")
    s.add_argument("--state", required=True)
    s.add_argument("--circuit", required=True)

    s = sub.add_parser("wigner", parents=[common], help="Wigner function of a state or a G matrix")
    s.add_argument("--state")
    s.add_argument("--input", "-i")

    s = sub.add_parser("kernel", parents=[common], help="evaluate integral kernels")
    s.add_argument("--input", "-i", required=True, help="symplectic matrix")
    s.add_argument("--mode", choices=("huyghens", "coherent", "matrix-element"), default="huyghens")
    s.add_argument("--q", help="comma-separated output point")
    s.add_argument("--q-prime", help="comma-separated input point")
    s.add_argument("--z", help="coherent label, e.g. 0.3+0.1j")
    s.add_argument("--z-prime")
    s.add_argument("--state-in")
    s.add_argument("--state-out")
    s.add_argument("--quadrature", help="quadrature spec JSON")

    s = sub.add_parser("subspace", parents=[common], help="classify a subspace")
    s.add_argument("--input", "-i", required=True)
    s.add_argument("--transform", help="symplectic matrix applied first")

    s = sub.add_parser("generate", parents=[common], help="generate fixtures")
    s.add_argument("--kind", choices=GENERATE_KINDS, required=True)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--scale", type=float, default=1.0)
    s.add_argument("--preset", choices=sprandom.VARIANCE_PRESETS, default="physical")
    s.add_argument("--name", choices=NAMED)
    return p


def _emit(text: str, path: str):
    if path == "-":
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _diagnostic(kind: str, exc: BaseException, **extra) -> str:
    d = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    d.update(extra)
    return io.dumps(d)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = args.tol if args.tol is not None else default_tol()
        if args.verb == "generate" and args.n < 1:
            raise ValidationError("--n must be at least 1")
        report = COMMANDS[args.verb](args, tol)
        text = io.dumps(report)
    except io.ParseError as exc:
        sys.stderr.write(_diagnostic("parse", exc, line=exc.line, column=exc.column) + "\n")
        return 2
    except (SymplecticError, OSError) as exc:
        sys.stderr.write(_diagnostic("validation", exc) + "\n")
        return 2
    except Exception as exc:
        sys.stderr.write(_diagnostic("internal", exc) + "\n")
        return 1
    _emit(text, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
