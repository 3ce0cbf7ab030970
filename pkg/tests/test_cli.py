"""End-to-end CLI behaviour: outputs, artifacts, exit codes."""
import json

import pytest

from madic.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_section(capsys):
    code, out, _ = run(
        capsys, "section", "--m", "2", "--s", "2", "--word", "[[0,1]]", "--vertex", "1"
    )
    assert code == 0
    assert out.strip() == "a_1"


def test_project_pinned_example(capsys):
    code, out, _ = run(
        capsys, "project", "--m", "2", "--s", "2", "--word", "[[1,1],[0,1]]", "--j", "1"
    )
    assert code == 0
    assert out.strip() == "a_0 a_1"


def test_wordlen_identity(capsys):
    code, out, _ = run(
        capsys, "wordlen", "--m", "2", "--s", "2", "--word", "[]", "--cap", "3"
    )
    assert code == 0
    assert out.strip() == "0"


def test_structured_output(capsys):
    code, out, _ = run(
        capsys,
        "section", "--m", "2", "--s", "2", "--word", "[[0,1]]",
        "--vertex", "1", "--format", "structured",
    )
    assert code == 0
    assert json.loads(out) == {"word": [[1, 1]]}


def test_word_record_file(tmp_path, capsys):
    rec = tmp_path / "w.json"
    rec.write_text(json.dumps({"m": 2, "s": 2, "word": [[0, 1]]}))
    code, out, _ = run(
        capsys, "section", "--m", "2", "--s", "2", "--word", str(rec), "--vertex", "1"
    )
    assert code == 0
    assert out.strip() == "a_1"


def test_word_record_parameter_mismatch(tmp_path, capsys):
    rec = tmp_path / "w.json"
    rec.write_text(json.dumps({"m": 3, "s": 2, "word": [[0, 1]]}))
    code, _, err = run(
        capsys, "section", "--m", "2", "--s", "2", "--word", str(rec), "--vertex", "1"
    )
    assert code == 2
    assert "word record" in err


def test_verify_lengths_all_green(tmp_path, capsys):
    out_stem = tmp_path / "report"
    code, out, _ = run(
        capsys,
        "verify", "--m", "2", "--s", "2", "--suite", "lengths",
        "--radius", "4", "--out", str(out_stem),
    )
    assert code == 0
    assert "0 unverified, ok" in out
    assert (tmp_path / "report.csv").exists()
    assert (tmp_path / "report.png").exists()
    header = (tmp_path / "report.csv").read_text().splitlines()[0]
    assert header == "lemma,instances_checked,violations,unverified"


def test_verify_recursions(capsys):
    code, out, _ = run(
        capsys, "verify", "--m", "3", "--s", "3", "--suite", "recursions", "--radius", "1"
    )
    assert code == 0


def test_portrait_artifacts(tmp_path, capsys):
    out_stem = tmp_path / "p"
    code, _, _ = run(
        capsys,
        "portrait", "--m", "2", "--s", "2", "--word", "[[0,1]]",
        "--depth", "3", "--out", str(out_stem),
    )
    assert code == 0
    dot = (tmp_path / "p.dot").read_text()
    assert dot.startswith("digraph portrait")
    assert '":1"' in dot or ':1"' in dot  # root label carries exponent 1
    assert (tmp_path / "p.png").stat().st_size > 0


def test_portrait_stdout(capsys):
    code, out, _ = run(
        capsys, "portrait", "--m", "2", "--s", "2", "--word", "[[0,1]]", "--depth", "2"
    )
    assert code == 0
    assert out.startswith("digraph portrait")


def test_normalize(capsys):
    code, out, _ = run(
        capsys,
        "normalize", "--m", "2", "--s", "2", "--word", "[[1,1],[0,1]]",
        "--format", "structured",
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["vertex"] == ""
    assert sorted(obj["pi"]) == [0, 1]


def test_split_and_replay(tmp_path, capsys):
    tr_file = tmp_path / "t.json"
    code, out, _ = run(
        capsys, "split", "--m", "2", "--s", "2", "--out", str(tr_file)
    )
    assert code == 0
    assert "succeeded: True" in out
    code, out, _ = run(capsys, "replay", "--m", "2", "--s", "2", str(tr_file))
    assert code == 0
    assert "all moves verified" in out


def test_replay_rejects_tampering(tmp_path, capsys):
    tr_file = tmp_path / "t.json"
    run(capsys, "split", "--m", "2", "--s", "2", "--out", str(tr_file))
    obj = json.loads(tr_file.read_text())
    for mv in obj["moves"]:
        if mv["kind"] == "split":
            mv["tilde"] = [[1, -1]]
            break
    tr_file.write_text(json.dumps(obj))
    code, _, err = run(capsys, "replay", "--m", "2", "--s", "2", str(tr_file))
    assert code == 1


def test_split_with_noise(capsys):
    noise = json.dumps([[[0, -1], [1, -1], [0, 1], [1, 1]], [], []])
    code, out, _ = run(
        capsys, "split", "--m", "2", "--s", "2", "--seed-noise", noise
    )
    assert code == 0
    assert "a_0" in out and "a_1" in out


def test_usage_error_on_malformed_word(capsys):
    code, _, err = run(
        capsys, "section", "--m", "2", "--s", "2", "--word", "[[0,7]]", "--vertex", "1"
    )
    assert code == 2


def test_resource_exit_code(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MADIC_BALL_CAP", "5")
    code, _, err = run(
        capsys, "wordlen", "--m", "2", "--s", "2", "--word", "[[0,1]]", "--cap", "4"
    )
    assert code == 3
    assert "cap" in err
