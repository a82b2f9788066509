import json
from pathlib import Path

import pytest

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def sample(name):
    return str(SAMPLES / name)


def test_space_u2_torus(run_cli_json):
    r = run_cli_json("space", "--G", "U(2)", "--K", "T2", "--coeff", "Q", "--maxdeg", "4")
    res = r["result"]
    assert res["poincare"] == [1, 0, 1, 0, 0]
    assert res["presentation"]["generators"] == [["x2", 2]]
    assert res["presentation"]["relations"] == ["x2^2"]
    assert r["checks"]["d_squared"] and r["checks"]["duality"]["ok"]
    assert r["manifest"]["schema_version"] == 1


def test_space_char2_counterexample_warns(run_cli_json):
    r = run_cli_json("space", "--G", "U(2)", "--K", "diag-circle", "--coeff", "F2",
                     "--maxdeg", "4")
    assert r["result"]["poincare"] == [1, 1, 1, 1, 0]
    assert r["result"]["presentation"] is None
    assert any("F2[x1]/(x1^4)" in w for w in r["warnings"])


def test_space_su4_circle(run_cli_json):
    r = run_cli_json("space", "--G", "SU(4)", "--K", "circle:-3,1,1,1", "--coeff", "Q",
                     "--maxdeg", "15")
    # (1 + t^2)(1 + t^5)(1 + t^7)
    assert r["result"]["poincare"] == [1, 0, 1, 0, 0, 1, 0, 2, 0, 1, 0, 0, 1, 0, 1, 0]


def test_space_over_integers_is_additive(run_cli_json):
    r = run_cli_json("space", "--G", "SU(4)", "--K", "circle:-3,1,1,1", "--coeff", "Z")
    assert r["result"]["groups"][4]["torsion"] == [6]
    assert any("2 is not invertible" in w for w in r["warnings"])


def test_space_text_output(run_cli):
    code, out, _ = run_cli("space", "--G", "U(3)", "--K", "T3")
    assert code == 0
    assert "1 + 2t^2 + 2t^4 + t^6" in out


def test_bar_sample(run_cli_json):
    r = run_cli_json("bar", "--dga", sample("lambda-z3.json"), "--maxdeg", "12", "--check-counit")
    assert r["result"]["H_bar"] == [1 if n % 2 == 0 else 0 for n in range(13)]
    assert r["checks"]["counit"]["ok"] and r["checks"]["bar_d_squared"]


def test_bar_truncated_polynomial(run_cli_json):
    r = run_cli_json("bar", "--dga", sample("q-x2-trunc6.json"), "--maxdeg", "8",
                     "--check-counit")
    assert r["checks"]["counit"]["ok"]


def test_tor_sample(run_cli_json):
    r = run_cli_json("tor", "--span", sample("span.json"), "--method", "both")
    assert r["checks"]["methods_agree"]
    assert r["result"]["regular_sequence"]["regular"]
    tor = r["result"]["tor"]
    assert tor["koszul"]["total_dims"] == tor["bar"]["total_dims"]


def test_cochain_sample(run_cli_json):
    r = run_cli_json("cochain", "--sset", sample("rp2.json"), "--op", "cup:1", "--coeff", "F2",
                     "--a", "x", "--b", "x")
    assert r["result"]["value"] == {"degree": 1, "values": {"a": "1"}}
    assert r["checks"]["equals_input_up_to_coboundary"]["a"]


def test_cochain_relation(run_cli_json):
    r = run_cli_json("cochain", "--sset", "boundary:3", "--op", "relation:2", "--coeff", "Z",
                     "--trials", "50")
    assert r["checks"]["steenrod_relation"] == {"i": 2, "message": "", "ok": True, "trials": 50}


def test_invalid_group_exits_2(run_cli):
    code, _, err = run_cli("space", "--G", "Foo(3)", "--K", "T2")
    assert code == 2 and "error" in err


def test_char2_ring_request_exits_3(run_cli):
    code, _, err = run_cli("space", "--G", "U(2)", "--K", "diag-circle", "--coeff", "F2", "--ring")
    assert code == 3 and "refusing" in err


def test_orthogonal_char2_exits_2(run_cli):
    code, _, err = run_cli("space", "--G", "SO(5)", "--K", "SO(2)xSO(3)", "--coeff", "F2")
    assert code == 2 and "char" in err


def test_schema_violation_exits_2(run_cli, tmp_path):
    bad = tmp_path / "span.json"
    bad.write_text(json.dumps({"coeff": "Q", "maxdeg": 4}))
    code, _, err = run_cli("tor", "--span", str(bad))
    assert code == 2 and "schema" in err


def test_non_associative_dga_exits_4(run_cli, tmp_path):
    dga = {"ring": "Q", "cap": 6, "complete": True, "unit": "1",
           "basis": [["1", 0], ["a", 2], ["b", 4], ["c", 6]],
           "products": [["a", "a", "b", "1"], ["a", "b", "c", "1"]],
           "differential": []}
    path = tmp_path / "dga.json"
    path.write_text(json.dumps(dga))
    code, _, err = run_cli("bar", "--dga", str(path), "--maxdeg", "4")
    assert code == 4 and "not a DGA" in err


def test_replay_is_byte_identical(run_cli, tmp_path):
    manifest = tmp_path / "run.json"
    code, first, _ = run_cli("space", "--G", "SU(3)", "--H", "rc", "--K", "rc", "--maxdeg", "8",
                             "--format", "json", "--manifest-out", str(manifest))
    assert code == 0
    m = json.loads(manifest.read_text())
    assert "wall_time" in m and m["command"] == "space"
    code, second, _ = run_cli("--replay", str(manifest))
    assert code == 0 and second == first
    report = tmp_path / "report.json"
    report.write_text(first)
    code, third, _ = run_cli("--replay", str(report))
    assert code == 0 and third == first


def test_replay_rejects_garbage(run_cli, tmp_path):
    path = tmp_path / "m.json"
    path.write_text("{}")
    code, _, _ = run_cli("--replay", str(path))
    assert code == 2


def test_no_command_exits_2(run_cli):
    code, _, _ = run_cli()
    assert code == 2


@pytest.mark.parametrize("name", ["span", "dga", "sset", "manifest", "report"])
def test_schemas_ship_with_the_package(name):
    from importlib.resources import files
    text = files("homspace").joinpath("schema", f"{name}.schema.json").read_text()
    assert json.loads(text)["$schema"]
