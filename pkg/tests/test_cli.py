import io
import json
import shutil

import pytest

from cohomkit import cli, lie_model, modelfile


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name,needle", [
    ("torus4", "HLC: true, Δ̃ = (0,0,0,0,0)"),
    ("g41", "Δ̃² = 2, HLC: false"),
    ("iwasawa", "∂∂̄-lemma: false, Δ = (0,2,6,8,6,2,0)"),
])
def test_verdict_lines(name, needle):
    code, out, _ = run("analyze", name, "--jobs", "1")
    assert code == 0
    assert needle in out


def test_text_report_sections():
    code, out, _ = run("analyze", "kt", "--jobs", "1")
    assert code == 0
    assert "Bott-Chern" in out and "checks:" in out and "FAILED" not in out


@pytest.mark.parametrize("flag,name", [("--complex", "g41"), ("--symplectic", "iwasawa")])
def test_missing_structure_is_input_error(flag, name):
    code, _, err = run("analyze", name, flag, "--jobs", "1")
    assert code == 2 and "error" in err


def test_unknown_model_and_bad_flags():
    assert run("analyze", "nonexistent", "--jobs", "1")[0] == 2
    assert run("analyze", "kt", "--window", "0")[0] == 2
    assert run("analyze", "kt", "--format", "xml")[0] == 2
    assert run("frobnicate")[0] == 2


def test_json_is_deterministic_and_exact():
    first = run("analyze", "kt", "--format", "json", "--jobs", "1")
    second = run("analyze", "kt", "--format", "json", "--jobs", "1")
    assert first == second and first[0] == 0
    doc = json.loads(first[1])
    assert doc["model"] == "kt"
    assert doc["symplectic"]["delta_tilde"][2] == 1

    def floats(x):
        if isinstance(x, float):
            return True
        if isinstance(x, dict):
            return any(floats(v) for v in x.values())
        if isinstance(x, list):
            return any(floats(v) for v in x)
        return False

    assert not floats(doc)


def test_json_multiple_models_form_a_list():
    code, out, _ = run("analyze", "torus2", "kt", "--format", "json", "--jobs", "1")
    assert code == 0
    docs = json.loads(out)
    assert [d["model"] for d in docs] == ["torus2", "kt"]


def test_symplectic_only_flag_skips_complex_part():
    code, out, _ = run("analyze", "kt", "--symplectic", "--format", "json", "--jobs", "1")
    doc = json.loads(out)
    assert code == 0 and "symplectic" in doc and "complex" not in doc


def test_model_file_path(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(modelfile.serialize(modelfile.parse_shorthand("(0,0,0,12,13)", "f5")))
    code, out, _ = run("analyze", str(p), "--jobs", "1")
    assert code == 0 and "f5" in out


def test_models_command():
    code, out, _ = run("models")
    assert code == 0
    assert out.split() == modelfile.bundled_names()


def test_selftest_small(tmp_path):
    code, out, _ = run("selftest", "--count", "2", "--complex-count", "1", "--jobs", "1",
                       "--failures", str(tmp_path / "f"))
    assert code == 0 and "models passed" in out
    assert not (tmp_path / "f").exists()


def test_mutated_lambda_sign_trips_a_trap(monkeypatch, tmp_path):
    original = lie_model.lambda_operator
    monkeypatch.setattr(lie_model, "lambda_operator", lambda w, k: original(w, k).scale(-1))
    fail_dir = tmp_path / "failures"
    code, out, _ = run("selftest", "--count", "2", "--complex-count", "0", "--jobs", "1",
                       "--failures", str(fail_dir))
    assert code == 3
    assert "FAIL" in out
    dumped = sorted(p.name for p in fail_dir.iterdir())
    assert any(n.endswith(".failure.txt") for n in dumped)
    model_files = [fail_dir / n for n in dumped if n.endswith(".json")]
    assert model_files
    # a dumped model is a valid model file again
    modelfile.parse_model(model_files[0])


def test_corrupted_bundled_model_is_input_error(monkeypatch, tmp_path):
    root = tmp_path / "models"
    shutil.copytree(modelfile.models_root(), root)
    (root / "kt.json").write_text('{"schema_version": 1, "name": ')
    monkeypatch.setattr(modelfile, "models_root", lambda: root)
    code, _, err = run("selftest", "--count", "0", "--complex-count", "0", "--jobs", "1")
    assert code == 2 and "kt" in err
