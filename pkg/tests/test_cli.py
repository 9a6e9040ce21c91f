import json

from coassure.cli import main
from coassure.links import spec_from_doc
from conftest import write_json


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_seed_files(seed_files, capsys):
    catalog_path, links_path = seed_files
    code, out, _ = run(capsys, "validate", catalog_path, links_path)
    assert code == 0
    assert out == ""


def test_validate_duplicate_id(seed_files, tmp_path, capsys):
    catalog_path, links_path = seed_files
    doc = json.loads(catalog_path.read_text())
    doc["requirements"].append(dict(doc["requirements"][0]))
    bad = write_json(tmp_path / "bad_catalog.json", doc)
    code, out, _ = run(capsys, "validate", bad, links_path)
    assert code == 1
    lines = [l for l in out.splitlines() if l.startswith("error")]
    assert len(lines) == 1
    assert "A2.6" in lines[0]


def test_validate_missing_file(seed_files, tmp_path, capsys):
    _, links_path = seed_files
    code, _, err = run(capsys, "validate", tmp_path / "nope.json", links_path)
    assert code == 2


def test_validate_malformed_json(seed_files, tmp_path, capsys):
    _, links_path = seed_files
    bad = tmp_path / "broken.json"
    bad.write_text("{not json", "utf-8")
    code, _, _ = run(capsys, "validate", bad, links_path)
    assert code == 2


def test_compile_emits_deterministic_spec(seed_files, capsys):
    catalog_path, links_path = seed_files
    code, out1, _ = run(capsys, "compile", catalog_path, links_path)
    assert code == 0
    code, out2, _ = run(capsys, "compile", catalog_path, links_path)
    assert out1 == out2
    spec = spec_from_doc(json.loads(out1))
    assert spec.node_ids("indicator") == ("S1-indicator",)


def test_infer_empty_scenario(seed_files, tmp_path, capsys):
    catalog_path, links_path = seed_files
    scenario = write_json(tmp_path / "scenario.json", {"evidence": {}})
    code, out, _ = run(capsys, "infer", catalog_path, links_path, scenario)
    assert code == 0
    doc = json.loads(out)
    assert doc["current_machine_state"] == "S0"
    assert doc["violated_classes"] == []


def test_infer_with_oracle(seed_files, tmp_path, capsys):
    catalog_path, links_path = seed_files
    scenario = write_json(tmp_path / "scenario.json",
                          {"evidence": {"FPT_STM": "violated"}})
    code, out, _ = run(capsys, "infer", catalog_path, links_path, scenario, "--oracle")
    assert code == 0
    doc = json.loads(out)
    assert doc["state_probabilities"]["S1"] > doc["state_probabilities"]["S2"]


def test_infer_unknown_class(seed_files, tmp_path, capsys):
    catalog_path, links_path = seed_files
    scenario = write_json(tmp_path / "scenario.json",
                          {"evidence": {"FXX_YYY": "violated"}})
    code, _, err = run(capsys, "infer", catalog_path, links_path, scenario)
    assert code == 1
    assert "FXX_YYY" in err


def test_simulate_round_trip(seed_files, tmp_path, capsys):
    catalog_path, links_path = seed_files
    scenario = write_json(tmp_path / "scenario.json", {"events": [
        {"kind": "Violation", "requirement_id": "A2.13a"},
        {"kind": "Resolution", "requirement_id": "A2.13a"},
    ]})
    code, out, _ = run(capsys, "simulate", catalog_path, links_path, scenario)
    assert code == 0
    lines = [json.loads(l) for l in out.splitlines()]
    assert [l["state"] for l in lines] == ["S1", "S0"]
    assert [l["seq"] for l in lines] == [0, 1]


def test_simulate_empty_events(seed_files, tmp_path, capsys):
    catalog_path, links_path = seed_files
    scenario = write_json(tmp_path / "scenario.json", {"events": []})
    code, out, _ = run(capsys, "simulate", catalog_path, links_path, scenario)
    assert code == 0
    assert out == ""


def test_simulate_resolution_before_violation(seed_files, tmp_path, capsys):
    catalog_path, links_path = seed_files
    scenario = write_json(tmp_path / "scenario.json", {"events": [
        {"kind": "Resolution", "requirement_id": "A2.13a"},
    ]})
    code, _, err = run(capsys, "simulate", catalog_path, links_path, scenario)
    assert code == 1
    assert "0" in err  # offending sequence number


def test_scenario_unknown_keys_rejected(seed_files, tmp_path, capsys):
    catalog_path, links_path = seed_files
    scenario = write_json(tmp_path / "scenario.json", {"what": 1})
    code, _, _ = run(capsys, "infer", catalog_path, links_path, scenario)
    assert code == 2


def test_report_text_and_files(seed_files, tmp_path, capsys):
    catalog_path, links_path = seed_files
    scenario = write_json(tmp_path / "scenario.json",
                          {"evidence": {"FPT_STM": "violated"}})
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "report", catalog_path, links_path, scenario,
                       "--out-dir", out_dir)
    assert code == 0
    assert "Machine state: S0" in out
    assert (out_dir / "report.json").exists()
    assert (out_dir / "state_probabilities.png").read_bytes()[:4] == b"\x89PNG"
    csv_lines = (out_dir / "report.csv").read_text().strip().splitlines()
    assert csv_lines[0] == "state,p_violated,affected_safety_requirements"
    assert len(csv_lines) == 4


def test_report_whatif_outputs(seed_files, tmp_path, capsys):
    catalog_path, links_path = seed_files
    overlay = write_json(tmp_path / "overlay.json",
                         {"evidence": {"FRU_RSA": "violated"}})
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "report", catalog_path, links_path,
                       "--whatif", overlay, "--out-dir", out_dir)
    assert code == 0
    assert (out_dir / "whatif_deltas.png").exists()
    diff = json.loads((out_dir / "whatif.json").read_text())
    assert diff["state_deltas"]["S1"] > 0
