import json

import numpy as np
import pytest

from sepspace import io
from sepspace.basis import make_basis, phase_point_basis
from sepspace.cli import run
from sepspace.decomposition import maxent_decomposition
from sepspace.duality import pauli_family
from sepspace.errors import InputError
from sepspace.lhv import lhv_from_decomposition


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("SEPSPACE_SEED", raising=False)
    return tmp_path


def cli(*argv):
    return run(list(argv))


def test_basis_roundtrip_is_bit_identical(workdir, rng):
    for kind in ("gell-mann", "unit-trace", "positive-trace", "matrix-unit"):
        B = make_basis(kind, 3, 17)
        io.write_json("b.json", io.basis_to_json(B))
        C = io.basis_from_json(io.read_json("b.json"))
        assert np.array_equal(B.operators, C.operators)
        assert (B.kind, B.hermitian) == (C.kind, C.hermitian)
    X = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert np.array_equal(io.operator_from_json(json.loads(json.dumps(io.operator_to_json(X)))), X)


def test_operator_json_layout():
    obj = io.operator_to_json(np.array([[1, 2j], [3, 4 - 1j]]))
    assert obj == {"dim": 2, "entries": [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [4.0, -1.0]]}
    with pytest.raises(InputError):
        io.operator_from_json({"dim": 2, "entries": [[1, 0]]})


def test_decomposition_and_model_roundtrip(workdir, fig1):
    io.write_json("d.json", io.decomposition_to_json(fig1))
    obj = io.read_json("d.json")
    assert set(obj) == {"dimA", "dimB", "weights", "a_ops", "b_ops"}
    D = io.decomposition_from_json(obj)
    assert np.array_equal(D.a_ops, fig1.a_ops) and np.array_equal(D.weights, fig1.weights)
    m = lhv_from_decomposition(fig1, pauli_family(), pauli_family())
    m2 = io.model_from_json(json.loads(json.dumps(io.model_to_json(m))))
    assert all(np.array_equal(a, b) for a, b in zip(m.responses_a, m2.responses_a))
    F = io.family_from_json(json.loads(json.dumps(io.family_to_json(pauli_family()))))
    assert np.array_equal(F[1].elements, pauli_family()[1].elements)


def test_phase_point_pipeline(workdir):
    assert cli("basis", "gen", "--dim", "3", "--kind", "phase-point", "--out", "b.json")[0] == 0
    assert cli("basis", "verify", "b.json")[0] == 0
    code, rep = cli("decompose", "maxent", "--basis", "b.json", "--out", "d.json")
    assert code == 0
    code, rep = cli("verify", "--decomposition", "d.json", "--target", "maxent:3")
    assert code == 0
    assert rep.metrics["reconstruction_error"] <= 1e-10
    code, rep = cli("diagnostics", "--decomposition", "d.json", "--basis", "b.json")
    assert code == 0 and rep.metrics["match_residual"] <= 1e-10


def test_corrupted_weights_fail(workdir):
    D = maxent_decomposition(phase_point_basis(2))
    obj = io.decomposition_to_json(D)
    obj["weights"] = [0.5, 0.25, 0.125, 0.125]
    io.write_json("bad.json", obj)
    assert cli("verify", "--decomposition", "bad.json", "--target", "maxent:2")[0] == 1


def test_input_errors_exit_2(workdir, capsys):
    assert cli("frobnicate")[0] == 2
    assert cli("verify", "--decomposition", "missing.json", "--target", "maxent:2")[0] == 2
    (workdir / "junk.json").write_text("{not json")
    assert cli("basis", "verify", "junk.json")[0] == 2
    assert cli("basis", "gen", "--dim", "4", "--kind", "phase-point")[0] == 2
    assert cli("decompose", "pure", "--state", "schmidt:0.5,0.4")[0] == 2
    assert "error:" in capsys.readouterr().err


def test_pure_and_crossnorm(workdir):
    code, rep = cli("decompose", "pure", "--state", "schmidt:0.9,0.1", "--out", "p.json")
    assert code == 0
    assert rep.metrics["max_norm_product"] == pytest.approx(1.6, abs=1e-10)
    code, rep = cli("crossnorm", "--state", "schmidt:0.9,0.1", "--decomposition", "p.json")
    assert code == 0
    assert rep.metrics["gamma2_pure"] == pytest.approx(rep.metrics["cross_bound_sum"], abs=1e-10)
    assert cli("verify", "--decomposition", "p.json", "--target", "schmidt:0.9,0.1")[0] == 0
    assert cli("verify", "--decomposition", "p.json", "--target", "maxent:2")[0] == 1


def test_seed_env_fallback(workdir, monkeypatch):
    cli("basis", "gen", "--dim", "3", "--kind", "unit-trace", "--seed", "5", "--out", "a.json")
    monkeypatch.setenv("SEPSPACE_SEED", "5")
    cli("basis", "gen", "--dim", "3", "--kind", "unit-trace", "--out", "b.json")
    assert (workdir / "a.json").read_text() == (workdir / "b.json").read_text()
    monkeypatch.setenv("SEPSPACE_SEED", "6")
    cli("basis", "gen", "--dim", "3", "--kind", "unit-trace", "--out", "c.json")
    assert (workdir / "a.json").read_text() != (workdir / "c.json").read_text()


def test_dual_and_cone_commands(workdir):
    cli("basis", "gen", "--dim", "2", "--kind", "phase-point", "--out", "t.json")
    assert cli("dual", "check", "--operator", "bloch:1,1,1", "--family", "pauli")[0] == 0
    assert cli("dual", "check", "--operator", "bloch:2,0,0", "--family", "pauli")[0] == 1
    code, rep = cli("dual", "region", "--basis", "t.json", "--grid", "12", "--out", "region.json")
    assert code == 0 and rep.metrics["disagreements"] == 0
    assert cli("cone", "member", "--basis", "t.json", "--operator", "bloch:0,0,-1")[0] == 0
    assert cli("cone", "member", "--basis", "t.json", "--operator", "bloch:0,0,-1.5")[0] == 1
    code, rep = cli("cone", "probe", "--basis", "t.json", "--trials", "400", "--seed", "2")
    assert code == 0 and rep.metrics["max_norm_sq"] <= 2 * (1 - 1e-3)


def test_lhv_commands(workdir):
    cli("basis", "gen", "--dim", "2", "--kind", "phase-point", "--out", "t.json")
    cli("decompose", "maxent", "--basis", "t.json", "--out", "d.json")
    code, rep = cli("lhv", "build", "--decomposition", "d.json", "--family-a", "pauli", "--transpose-b",
                    "--target", "maxent:2", "--out", "m.json")
    assert code == 0 and rep.metrics["max_deviation_from_quantum"] <= 1e-12
    code, _ = cli("lhv", "table", "--model", "m.json", "--a-setting", "1", "--b-setting", "1", "--out", "tab.json")
    assert code == 0
    tab = io.read_json("tab.json")
    assert tab["settings"] == [1, 1]
    # B measures Y^T = -Y, which swaps the anticorrelated Y outcomes back onto the diagonal
    assert np.allclose(tab["probs"], [[0.5, 0], [0, 0.5]])
    code, _ = cli("lhv", "sample", "--model", "m.json", "--a-setting", "2", "--b-setting", "2",
                  "--shots", "1000", "--seed", "3", "--out", "s.json")
    first = (workdir / "s.json").read_text()
    cli("lhv", "sample", "--model", "m.json", "--a-setting", "2", "--b-setting", "2",
        "--shots", "1000", "--seed", "3", "--out", "s.json")
    assert code == 0 and first == (workdir / "s.json").read_text()
    # Gell-Mann decomposition has traceless local operators: not a valid model input
    cli("basis", "gen", "--dim", "2", "--kind", "gell-mann", "--out", "g.json")
    cli("decompose", "maxent", "--basis", "g.json", "--out", "gd.json")
    assert cli("lhv", "build", "--decomposition", "gd.json", "--family-a", "pauli", "--transpose-b")[0] == 2


def test_module_entry_point(workdir):
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "sepspace", "basis", "gen", "--dim", "2"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "result: PASS" in out.stdout
