import json

import numpy as np
import pytest
from click.testing import CliRunner

from wolfqk import lie
from wolfqk.cli import main
from wolfqk.io import load_canonical_fixtures, matrix_to_json
from wolfqk.orbits import FamilyLabel, canonical_representative
from wolfqk.signature import COMPACT, SPLIT


@pytest.fixture
def run():
    runner = CliRunner()

    def _run(*args, stdin=None):
        result = runner.invoke(main, list(args), input=stdin)
        return result.exit_code, result.stdout, result.stderr

    return _run


def _fixture(name):
    return next(r for r in load_canonical_fixtures()["representatives"] if r["family"] == name)


def test_classify_fixture(run, tmp_path):
    path = tmp_path / "iv4.json"
    path.write_text(json.dumps(_fixture("IV_4")))
    code, out, _ = run("classify", "--in", str(path))
    assert code == 0
    doc = json.loads(out)
    assert doc["family"] == "IV_4"
    assert np.allclose(doc["params"], [1, 2, 3])
    assert doc["properness_verdict"]["verdict"] == "proper"
    assert doc["properness_verdict"]["irregular_free"] is True
    assert doc["height"] == 0 and doc["tol"] == 1e-8


def test_classify_timelike_ax(run):
    x = np.zeros(7)
    x[0] = 1.0
    A = lie.canonical_vector_field(x, SPLIT)
    code, out, _ = run("classify", "--in", json.dumps(matrix_to_json(A, SPLIT)))
    assert code == 0
    assert json.loads(out)["type_sum"] == "Δ₀⁺(0) ⊕ Δ₀⁺(i,-i) ⊕ 2Δ₀⁻(i,-i)"


def test_classify_zero_matrix_is_input_error(run):
    code, out, err = run("classify", "--in", json.dumps(matrix_to_json(np.zeros((7, 7)), SPLIT)))
    assert code == 1 and out == ""
    assert "nonzero" in json.loads(err)["error"]


@pytest.mark.parametrize(
    "text",
    ["not json", '{"rows": [[1, 2]]}', '{"sig": "3,4"}', '{"sig": "9,9", "rows": []}'],
)
def test_classify_parse_failures(run, text):
    code, _, err = run("classify", "--in", text)
    assert code == 1
    assert "error" in json.loads(err)


def test_classify_not_skew_adjoint(run):
    code, _, _ = run("classify", "--in", json.dumps(matrix_to_json(np.eye(7), SPLIT)))
    assert code == 1


def test_classify_ill_conditioned(run):
    A = canonical_representative(FamilyLabel("IV_5", (1.0, 1.0 + 1e-7, 2.0)))
    code, out, err = run("classify", "--in", json.dumps(matrix_to_json(A, SPLIT)))
    assert code == 2 and out == ""
    assert json.loads(err)["gap"] > 0


def test_classify_round_trips_every_fixture(run):
    for rep in load_canonical_fixtures()["representatives"]:
        code, out, _ = run("classify", "--in", json.dumps(rep))
        doc = json.loads(out)
        assert code == 0 and doc["family"] == rep["family"]
        assert np.allclose(doc["params"], rep["params"])
        assert doc["summands"] == rep["summands"] or doc["type_sum"] == rep["type_sum"]


def test_classify_compact(run):
    X = lie.random_algebra_element(COMPACT, np.random.default_rng(0))
    code, out, _ = run("classify", "--sig", "7,0", "--in", json.dumps({"rows": X.tolist()}))
    doc = json.loads(out)
    assert code == 0 and doc["family"] is None and len(doc["params"]) == 3


def test_moment_identity_on_m(run):
    v = lie.project_m(lie.random_algebra_element(SPLIT, np.random.default_rng(1)))
    code, out, _ = run("moment", "--in", json.dumps({"sig": "3,4", "v": v.tolist()}))
    doc = json.loads(out)
    assert code == 0
    assert doc["moment"] == [0.0, 0.0, 0.0]
    assert doc["in_zero_locus"] and doc["tol"] == 1e-9


def test_moment_rejects_non_group_g(run):
    v = lie.random_algebra_element(SPLIT, np.random.default_rng(1))
    code, _, _ = run("moment", "--in", json.dumps({"v": v.tolist(), "g": (2 * np.eye(7)).tolist()}))
    assert code == 1


def test_zero_locus_compact(run):
    code, out, _ = run("zero-locus", "--in", '{"sig": "7,0", "x": [1, 0, 0, 0, 0, 0, 0]}', "--n", "100", "--seed", "5")
    doc = json.loads(out)
    assert code == 0
    assert len(doc["points"]) == 100 and doc["max_residual"] <= 1e-9
    assert doc["seed"] == 5 and doc["causal"] == "timelike"


def test_zero_locus_lightlike_note(run):
    code, out, _ = run("zero-locus", "--in", '{"x": [1, 0, 0, 1, 0, 0, 0]}', "--n", "3")
    doc = json.loads(out)
    assert code == 0 and doc["causal"] == "lightlike" and "note" in doc


def test_zero_locus_bad_x(run):
    code, _, _ = run("zero-locus", "--in", '{"x": [2, 0, 0, 0, 0, 0, 0]}')
    assert code == 1


def test_seed_range(run):
    code, _, _ = run("zero-locus", "--in", '{"x": [1, 0, 0, 0, 0, 0, 0]}', "--n", "1", "--seed", str(2**64 - 1))
    assert code == 0
    code, _, _ = run("zero-locus", "--in", '{"x": [1, 0, 0, 0, 0, 0, 0]}', "--seed", str(2**64))
    assert code == 2  # click usage error


def _flow_input():
    v = lie.random_algebra_element(COMPACT, np.random.default_rng(2))
    return json.dumps({"sig": "7,0", "v": v.tolist()})


def test_flow_converges_and_is_deterministic(run):
    code, out, _ = run("flow", "--in", _flow_input(), "--seed", "9", "--record-every", "10")
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "converged"
    E = [s["energy"] for s in doc["trajectory"]]
    assert all(b <= a for a, b in zip(E, E[1:]))
    assert run("flow", "--in", _flow_input(), "--seed", "9", "--record-every", "10")[1] == out


def test_flow_non_convergence_exit_code(run):
    code, out, _ = run("flow", "--in", _flow_input(), "--seed", "9", "--n", "2")
    assert code == 3
    assert json.loads(out)["status"] == "max_steps"


def test_g2_check_identity(run):
    code, out, _ = run("g2-check", "--in", json.dumps(matrix_to_json(np.eye(7), SPLIT)))
    doc = json.loads(out)
    assert code == 0 and doc["group"]["is_member"] is True


def test_tables(run, tmp_path):
    path = tmp_path / "tables.json"
    code, out, _ = run("tables", "--out", str(path))
    assert code == 0 and out == ""
    doc = json.loads(path.read_text())
    assert len(doc["families"]) == 24
    assert set(doc["multiplication"]) == {"O", "Osplit"}
    assert doc["multiplication"]["O"]["table"][1][1] == {"sign": -1, "basis": 0}


def test_stdin_input(run):
    code, out, _ = run("g2-check", "--in", "-", stdin=json.dumps(matrix_to_json(np.eye(7), COMPACT)))
    assert code == 0 and json.loads(out)["sig"] == "7,0"


def test_missing_input(run):
    code, _, err = run("classify")
    assert code == 1 and "--in" in err


def test_bad_tolerance(run):
    code, _, _ = run("g2-check", "--tol", "-1", "--in", json.dumps(matrix_to_json(np.eye(7), SPLIT)))
    assert code == 1
