import json

import pytest

import oracles
from chromstack import cli, penrose
from chromstack.surface import dualize, preset, random_sphere, write_tri


def run(capsys, *argv):
    code = cli.main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_index_both_octahedron(capsys):
    code, data = run_json(capsys, "index", "--preset", "octahedron", "--both")
    assert code == 0
    assert data["K"] == 24
    assert data["oracle"]["K"] == 24 and data["engine"]["K"] == 24
    assert data["oracle"]["mod4_violations"] == 0 and data["oracle"]["n_edges"] == 12
    assert all(data["checks"].values())


def test_index_tetrahedron_default(capsys):
    code, out, _ = run(capsys, "index", "--preset", "tetrahedron")
    assert code == 0
    assert "K = 6" in out


def test_index_icosahedron_engine(capsys):
    code, data = run_json(capsys, "index", "--preset", "icosahedron", "--engine")
    assert code == 0 and data["K"] == 60


def test_index_literal(capsys):
    code, data = run_json(capsys, "index", "--preset", "tetrahedron", "--literal")
    assert code == 0 and data["K"] == 6


@pytest.mark.parametrize("name, total", [("octahedron", 96), ("icosahedron", 240), ("tetrahedron", 24)])
def test_colourings(capsys, name, total):
    assert oracles.face_colourings(dualize(preset(name)).faces) == total
    code, data = run_json(capsys, "colourings", "--preset", name)
    assert code == 0 and data["colourings"] == total


def test_colourings_list(capsys):
    code, data = run_json(capsys, "colourings", "--preset", "octahedron", "--list")
    assert code == 0
    assert len(data["listed"]) == 96 == len(set(data["listed"]))
    assert all(data["checks"].values())


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--preset", "tetrahedron")
    assert code == 0
    assert out.count("a-b=") == 6


def test_calibrate_json_deterministic(capsys):
    code1, out1, _ = run(capsys, "calibrate", "--json")
    code2, out2, _ = run(capsys, "calibrate", "--json")
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["checks"]


def test_plan_then_holonomy(capsys, tmp_path):
    plan_file = tmp_path / "plan.json"
    code, _, _ = run(capsys, "plan", "--preset", "icosahedron", "--out", str(plan_file))
    assert code == 0 and plan_file.exists()
    code, data = run_json(capsys, "holonomy", "--preset", "icosahedron", "--plan", str(plan_file))
    assert code == 0 and data["K"] == 60


def test_holonomy_trace_states(capsys):
    code, out, _ = run(capsys, "holonomy", "--preset", "octahedron", "--plan", "reference", "--trace-states")
    assert code == 0
    assert "step 1: i(23 - 32)" in out
    assert "step 8: i^8(1 + 1 + 1 + 1 + 1 + 1 + 1 + 1)" in out


def test_audit_octahedron(capsys):
    code, out, _ = run(capsys, "audit", "--preset", "octahedron", "--plan", "reference")
    assert code == 0
    assert "zeta_ae = Ft o (Ft x I)" in out
    assert "zeta0_ab = 8 Ft" in out


def test_audit_tetrahedron_and_random(capsys):
    code, data = run_json(capsys, "audit", "--preset", "tetrahedron")
    assert code == 0 and all(data["checks"].values())
    code, data = run_json(capsys, "audit", "--random", "30", "--seed", "3")
    assert code == 0 and data["K"] > 0 and all(data["checks"].values())


def test_audit_export(capsys, tmp_path):
    target = tmp_path / "section.json"
    code, _, _ = run(capsys, "audit", "--preset", "octahedron", "--plan", "reference", "--export", str(target))
    assert code == 0
    assert json.loads(target.read_text())["powers"]["c"] == 3


def test_audit_zero_edge_is_consistent(capsys):
    code, out, _ = run(capsys, "audit", "--preset", "octahedron", "--plan", "reference", "--zero-edge", "d,e")
    assert code == 0
    assert "c = 0" in out
    assert "[ok] injected zero forces a zero boundary (predicted K = 0)" in out


def test_input_file(capsys, tmp_path):
    f = tmp_path / "s.tri"
    f.write_text(write_tri(random_sphere(12, seed=2)))
    code, data = run_json(capsys, "index", "--input", str(f), "--both")
    assert code == 0 and data["K"] == penrose.chromatic_index(random_sphere(12, seed=2))


def test_bad_input_exit_2(capsys, tmp_path):
    f = tmp_path / "bad.tri"
    f.write_text("tri v=3 f=1\na b c\n")
    code, _, err = run(capsys, "index", "--input", str(f))
    assert code == 2 and "edge" in err
    code, _, _ = run(capsys, "index", "--preset", "cube")
    assert code == 2
    code, _, err = run(capsys, "index")
    assert code == 2 and "exactly one" in err


def test_budget_exhaustion_exit_1(capsys):
    code, _, err = run(capsys, "index", "--preset", "icosahedron", "--budget", "10")
    assert code == 1 and "budget" in err.lower()


def test_oracle_engine_mismatch_exit_1(capsys, monkeypatch):
    real = penrose.oracle_report

    def wrong(tri, budget=penrose.DEFAULT_BUDGET):
        res = real(tri, budget)
        res.K += 1
        return res

    monkeypatch.setattr(penrose, "oracle_report", wrong)
    code, out, _ = run(capsys, "index", "--preset", "octahedron", "--both")
    assert code == 1
    assert "FAIL" in out and "25" in out and "24" in out


def test_bench(capsys):
    code, data = run_json(capsys, "bench", "octahedron", "random(16)")
    assert code == 0
