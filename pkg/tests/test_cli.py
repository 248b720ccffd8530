import json

import pytest

from edenca.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def doc_of(out):
    return json.loads(out)


def test_group_ball_radius0(capsys):
    code, out, _ = run(capsys, "group", "ball", "--group", "F2", "--radius", "0")
    assert code == 0
    assert doc_of(out)["result"]["elements"] == ["e"]


def test_field_verify_exit0(capsys):
    code, out, _ = run(capsys, "field", "verify", "--group", "F2", "--radius", "6")
    assert code == 0
    assert doc_of(out)["result"]["violations"] == []


def test_field_on_amenable_group_is_usage_error(capsys):
    code, _, err = run(capsys, "field", "build", "--group", "Z2", "--radius", "2")
    assert code == 1
    assert "error" in err


def test_corr_build_infeasible_exit2(capsys):
    code, out, _ = run(capsys, "corr", "build", "--group", "Z2", "--m", "2", "--n", "1", "--radius", "4")
    assert code == 2
    assert doc_of(out)["result"]["deficiency"] > 0


def test_budget_exit3(capsys):
    code, out, _ = run(capsys, "oracle", "goe", "--rule", "xor", "--width", "8", "--budget", "10")
    assert code == 3
    assert doc_of(out)["status"] == "budget"


def test_bad_flag_exit1(capsys):
    code, _, _ = run(capsys, "group", "ball", "--radius", "x")
    assert code == 1
    code, _, _ = run(capsys, "group", "ball", "--group", "nope", "--radius", "1")
    assert code == 1


def test_report_embeds_config(capsys):
    _, out, _ = run(capsys, "moore", "roundtrip", "--group", "F2", "--radius", "2", "--trials", "3", "--seed", "9")
    doc = doc_of(out)
    assert doc["config"]["seed"] == 9
    assert doc["config"]["params"]["trials"] == 3
    assert doc["result"]["passed"] == 3


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"group": "F2", "radius": 1}))
    _, out, _ = run(capsys, "group", "ball", "--config", str(cfg))
    assert len(doc_of(out)["result"]["elements"]) == 5
    _, out, _ = run(capsys, "group", "ball", "--config", str(cfg), "--radius", "2")
    assert len(doc_of(out)["result"]["elements"]) == 17


def test_config_replay_from_report(tmp_path, capsys):
    _, out, _ = run(capsys, "moore", "preimage", "--group", "F2", "--radius", "1", "--seed", "4")
    first = doc_of(out)
    cfg = tmp_path / "replay.json"
    cfg.write_text(json.dumps(first["config"]))
    _, out2, _ = run(capsys, "moore", "preimage", "--config", str(cfg))
    assert doc_of(out2)["result"] == first["result"]


@pytest.mark.parametrize("argv", [
    ["corr", "build", "--group", "F2", "--m", "2", "--n", "1", "--radius", "3"],
    ["moore", "mep-witness", "--group", "F2", "--y", "a.b", "--seed", "2"],
    ["moore-gen", "roundtrip", "--group", "F2", "--factor", "2", "--radius", "1", "--trials", "2"],
    ["linca", "kernel-scan", "--preset", "muller", "--radius", "2"],
    ["oracle", "sweep", "--max-width", "4"],
])
def test_byte_determinism(capsys, argv):
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_pattern_files_shared(tmp_path, capsys):
    psi = tmp_path / "psi.json"
    code, _, _ = run(capsys, "moore", "preimage", "--group", "F2", "--radius", "1", "--psi-out", str(psi))
    assert code == 0
    # the preimage itself is a pattern; feed it back as a target
    code, out, _ = run(capsys, "moore", "preimage", "--group", "F2", "--pattern", str(psi))
    assert code == 0 and doc_of(out)["result"]["roundtrip"]
    code, out, _ = run(capsys, "moore", "mep-witness", "--group", "F2", "--y", "e", "--pattern", str(psi),
                       "--witness-out", str(tmp_path / "w.json"))
    assert code == 0 and doc_of(out)["result"]["certificate"]
    assert len(doc_of(out)["result"]["differing_cells"]) == 1


def test_corr_export_feeds_general_rule(tmp_path, capsys):
    corr = tmp_path / "corr.json"
    code, _, _ = run(capsys, "corr", "build", "--group", "F2", "--m", "3", "--n", "1", "--radius", "4",
                     "--export", str(corr))
    assert code == 0
    code, out, _ = run(capsys, "moore-gen", "roundtrip", "--corr", str(corr), "--radius", "2", "--trials", "3")
    assert code == 0
    assert doc_of(out)["result"]["passed"] == 3


def test_malformed_pattern_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "moore", "preimage", "--group", "F2", "--pattern", str(bad))
    assert code == 1


def test_export_dot(tmp_path, capsys):
    dot = tmp_path / "f.dot"
    code, _, _ = run(capsys, "field", "export-dot", "--group", "C2*C2*C2", "--radius", "2", "--dot", str(dot))
    assert code == 0
    assert dot.read_text().startswith("digraph")


def test_out_flag(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "linca", "goe-witness", "--preset", "muller", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["result"]["bruteforce_goe"] is True
