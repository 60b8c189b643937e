import json
import subprocess
import sys

import numpy as np
import pytest

from spkit import cli, core, decompositions, gaussian, io, variance
from spkit import random as sprandom


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)
    return write


def test_check_beta(capsys, files):
    path = files("beta2.json", io.matrix_to_json(core.beta(2)))
    code, out, _ = run(capsys, "check", "--input", path)
    assert code == 0
    assert json.loads(out) == {"symplectic": True, "residual": 0.0, "det": 1.0}


def test_check_non_symplectic(capsys, files):
    code, out, _ = run(capsys, "check", "-i", files("m.json", {"n": 1, "rows": [[2, 0], [0, 2]]}))
    assert code == 0 and json.loads(out)["symplectic"] is False


def test_squeeze_hidden(capsys, files):
    code, out, _ = run(capsys, "squeeze", "--input", files("v_hidden.json", {"n": 1, "rows": [[0.6, 0.25], [0.25, 0.6]]}))
    rep = json.loads(out)
    assert code == 0
    assert rep["manifest"] is False and rep["squeezed"] is True
    assert abs(rep["l"] - 0.35) <= 1e-12


def test_evolve_matches_library(capsys, files):
    state = files("vacuum.json", io.state_to_json(gaussian.GaussianPureState.vacuum(2)))
    th = 0.3
    U = [[{"re": np.cos(th), "im": -np.sin(th)}, 0.0], [0.0, 1.0]]
    circuit = files("squeeze_then_rotate.json", [{"type": "squeeze", "r": [0.5, -0.2]}, {"type": "unitary", "U": U}])
    code, out, _ = run(capsys, "evolve", "--state", state, "--circuit", circuit)
    assert code == 0
    # same composition through direct library calls
    S1 = core.embed_scaling(np.exp(-np.array([0.5, -0.2])))
    S2 = core.embed_unitary(np.array([[np.cos(th) - 1j * np.sin(th), 0], [0, 1]]))
    S = S2 @ (S1 @ core.SymplecticMatrix(np.eye(4)))
    psi = gaussian.mobius_transform(gaussian.GaussianPureState.vacuum(2), S)
    V = gaussian.variance_of_state(psi)
    expected = {"n": 2, "u": io.array_to_rows(psi.u), "v": io.array_to_rows(psi.v),
                "V": io.matrix_to_json(V.V), "S": io.matrix_to_json(S)}
    assert out.strip() == io.dumps(expected)
    rep = json.loads(out)
    assert np.allclose(variance.transform(0.5 * np.eye(4), S).V, io.matrix_from_json(rep["V"]), atol=1e-14)


def test_evolve_temporal_order(capsys, files):
    state = files("vac.json", io.state_to_json(gaussian.GaussianPureState.vacuum(1)))
    circuit = files("c.json", {"elements": [{"type": "free", "B": 1.0}, {"type": "lens", "C": 2.0}]})
    code, out, _ = run(capsys, "evolve", "--state", state, "--circuit", circuit)
    S = io.matrix_from_json(json.loads(out)["S"])
    assert np.allclose(S, np.array([[1, 0], [2, 1]]) @ np.array([[1, 1], [0, 1]]))


@pytest.mark.parametrize("kind", ["polar", "euler", "pre-iwasawa", "iwasawa"])
def test_decompose(capsys, files, kind):
    S = sprandom.random_symplectic(2, sprandom.rng(3))
    code, out, _ = run(capsys, "decompose", "-i", files("s.json", io.matrix_to_json(S)), "--type", kind)
    assert code == 0
    rep = json.loads(out)
    lib = decompositions.decompose(S, kind.replace("-", "_"))
    assert rep["residual"] == lib.residual
    assert rep["type"] == kind.replace("-", "_") and len(rep["names"]) == len(rep["factors"])
    mats = [io.matrix_from_json(F) for F in rep["factors"]]
    assert all(np.array_equal(M, F.matrix) for M, F in zip(mats, lib.factors))
    assert np.allclose(np.linalg.multi_dot(mats), S.matrix, atol=1e-12)


def test_decompose_rejects_non_symplectic(capsys, files):
    code, out, err = run(capsys, "decompose", "-i", files("m.json", {"n": 1, "rows": [[1, 2], [3, 4]]}))
    assert code == 2 and out == ""
    diag = json.loads(err)
    assert diag["error"] == "validation" and diag["type"] == "NotSymplecticError"


def test_parse_error(capsys, files):
    code, _, err = run(capsys, "check", "-i", files("bad.json", '{"n": 1,\n  "rows": [[1, 0], [0, 1]\n'))
    diag = json.loads(err)
    assert code == 2 and diag["error"] == "parse" and diag["line"] >= 2 and diag["column"] >= 1


def test_dimension_mismatch(capsys, files):
    code, _, err = run(capsys, "williamson", "-i", files("v.json", {"n": 2, "rows": [[1, 0], [0, 1]]}))
    assert code == 2 and json.loads(err)["type"] == "DimensionError"


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", "-i", str(tmp_path / "nope.json"))
    assert code == 2


def test_tolerance_env(capsys, files, monkeypatch):
    M = core.beta(1) @ np.diag([1.0 + 1e-7, 1.0, 1.0, 1.0])[:2, :2]
    path = files("m.json", io.matrix_to_json(M))
    assert json.loads(run(capsys, "check", "-i", path)[1])["symplectic"] is False
    monkeypatch.setenv("SPKIT_TOL", "1e-5")
    assert json.loads(run(capsys, "check", "-i", path)[1])["symplectic"] is True
    assert json.loads(run(capsys, "check", "-i", path, "--tol", "1e-9")[1])["symplectic"] is False
    monkeypatch.setenv("SPKIT_TOL", "abc")
    assert run(capsys, "check", "-i", path)[0] == 2


def test_output_file(capsys, files, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "generate", "--kind", "named", "--name", "identity", "--n", "1", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text()) == {"n": 1, "rows": [[1.0, 0.0], [0.0, 1.0]]}


def test_generate_named_beta(capsys):
    code, out, _ = run(capsys, "generate", "--kind", "named", "--name", "beta", "--n", "2")
    assert np.array_equal(io.matrix_from_json(json.loads(out)), core.beta(2))


def test_generate_random_symplectic_deterministic(capsys, files):
    a = run(capsys, "generate", "--kind", "random-symplectic", "--seed", "42", "--n", "3")[1]
    b = run(capsys, "generate", "--kind", "random-symplectic", "--seed", "42", "--n", "3")[1]
    assert a == b
    assert a != run(capsys, "generate", "--kind", "random-symplectic", "--seed", "43", "--n", "3")[1]
    code, out, _ = run(capsys, "check", "-i", files("s.json", a))
    assert json.loads(out)["symplectic"] is True


def test_generate_random_variance_physical(capsys):
    for seed in range(1000):
        out = run(capsys, "generate", "--kind", "random-variance", "--preset", "physical",
                  "--seed", str(seed), "--n", str(1 + seed % 3))[1]
        assert variance.is_physical(io.matrix_from_json(json.loads(out)))[0]


@pytest.mark.parametrize("preset", ["unphysical", "squeezed"])
def test_generate_random_variance_presets(capsys, preset):
    for seed in range(20):
        V = io.matrix_from_json(json.loads(run(capsys, "generate", "--kind", "random-variance",
                                               "--preset", preset, "--seed", str(seed), "--n", "2")[1]))
        phys = variance.is_physical(V)[0]
        assert phys is (preset == "squeezed")
        if preset == "squeezed":
            assert variance.squeezing_report(V).squeezed


def test_unknown_kind_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["generate", "--kind", "fancy"])
    assert exc.value.code == 2


def test_other_verbs(capsys, files):
    vac = files("vac.json", io.state_to_json(gaussian.GaussianPureState.vacuum(1)))
    code, out, _ = run(capsys, "wigner", "--state", vac)
    rep = json.loads(out)
    assert code == 0 and rep["admissible"] is True and np.allclose(rep["kappa"], 0.5)
    code, out, _ = run(capsys, "families", "-i", files("v.json", {"n": 1, "rows": [[0.5, 0], [0, 0.5]]}))
    assert json.loads(out)["families"] == ["S_K", "S_H", "S_G"]
    code, out, _ = run(capsys, "williamson", "-i", files("w.json", {"n": 1, "rows": [[2, 0], [0, 0.125]]}))
    assert json.loads(out)["kappa"] == pytest.approx([0.5], rel=1e-15)
    b = files("b.json", io.matrix_to_json(core.beta(1)))
    rep = json.loads(run(capsys, "kernel", "-i", b, "--q", "0.5", "--q-prime", "1.0")[1])
    expected = np.exp(-0.25j * np.pi) / np.sqrt(2 * np.pi) * np.exp(-0.5j)
    assert complex(rep["re"], rep["im"]) == pytest.approx(expected, rel=1e-14)
    rep = json.loads(run(capsys, "kernel", "-i", b, "--mode", "matrix-element", "--state-in", vac, "--state-out", vac)[1])
    assert abs(complex(rep["re"], rep["im"])) == pytest.approx(1.0, abs=1e-6)
    rep = json.loads(run(capsys, "kernel", "-i", b, "--mode", "coherent", "--z", "0.2+0.1j", "--z-prime", "0.3")[1])
    assert {"re", "im", "lambda", "mu"} <= set(rep)
    W = files("w2.json", {"n": 2, "columns": [[1, 0, 0, 0], [0, 0, 1, 0]]})
    rep = json.loads(run(capsys, "subspace", "-i", W)[1])
    assert rep["kind"] == "symplectic" and rep["symplectic_rank"] == 2 and rep["complement_rank"] == 2


def test_module_entry_point_byte_identical(tmp_path):
    cmd = [sys.executable, "-m", "spkit", "generate", "--kind", "random-symplectic", "--seed", "42", "--n", "2"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["n"] == 2
