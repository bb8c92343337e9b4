import json
import shutil
import subprocess
import xml.etree.ElementTree as ET

import pytest

from dichotomy.cli import main

SVG = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_image_ex2_json_and_svg(capsys, tmp_path):
    svg = tmp_path / "ex2.svg"
    code, out, _ = run(capsys, "image", "--map", "ex2", "--svg", str(svg))
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "dichotomy.report/1" and doc["verdict"] == "decided"
    statuses = sorted(c["status"] for c in doc["results"]["components"])
    assert statuses == ["Excluded", "Filled"]
    root = ET.parse(svg).getroot()
    assert root.get("version") == "1.1"
    comps = root.findall(f".//{SVG}path[@class='component']")
    curves = root.findall(f".//{SVG}g[@class='curve']")
    assert len(comps) == len(doc["results"]["components"])
    assert len(curves) == len(doc["results"]["curves"])
    assert {c.get("data-status") for c in comps} == {"Excluded", "Filled"}


def test_reports_are_byte_identical(capsys, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        svg = tmp_path / f"r{k}.svg"
        assert run(capsys, "image", "--expr", "z^2 - 0.5", "--domain", "disk:1", "--out", str(path), "--svg", str(svg))[0] == 0
        outs.append((path.read_bytes(), svg.read_bytes()))
    assert outs[0] == outs[1]


def test_timing_is_opt_in(capsys):
    code, out, _ = run(capsys, "counterexamples", "--timing")
    assert code == 0 and "timing" in json.loads(out)
    code, out, _ = run(capsys, "counterexamples")
    assert "timing" not in json.loads(out)


def test_identity_on_disk(capsys):
    code, out, _ = run(capsys, "image", "--expr", "z", "--domain", "disk:1")
    comps = json.loads(out)["results"]["components"]
    assert code == 0
    outer = [c for c in comps if c["touches_viewport_edge"]]
    assert outer and all(c["status"] == "Excluded" and c["forced_by_infinity"] for c in outer)


def test_haagerup_image_runs_lenient(capsys):
    code, out, _ = run(capsys, "image", "--map", "haagerup", "--resolution", "128")
    doc = json.loads(out)
    assert code == 0 and doc["config"]["thick_bands"] == "skip" and doc["results"]["low_confidence"]
    code, _, err = run(capsys, "image", "--map", "haagerup", "--resolution", "128", "--thick-bands", "error")
    assert code == 1 and "too coarse" in err


def test_verify_acp(capsys):
    code, out, _ = run(capsys, "verify-acp", "--p", "1.9", "--grid", "8,8", "--star-grid", "4")
    assert code == 0 and json.loads(out)["verdict"] == "certified"


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-acp", "--p", "2.5"],
        ["counterexamples", "--bits", "106"],
        ["modulus", "--fta", "z^2+1", "--R", "0.5"],
        ["modulus", "--fta", "1/z", "--R", "2"],
        ["modulus", "--finmax", "1/(z-0.5)"],
        ["image", "--expr", "z +"],
        ["image", "--map", "ex2", "--domain", "disk:1"],
        ["image", "--expr", "z", "--viewport", "1,1,0,0"],
        ["nonsense"],
    ],
)
def test_config_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_modulus_commands(capsys):
    code, out, _ = run(capsys, "modulus", "--fta", "z^2+1", "--R", "2")
    assert code == 0 and json.loads(out)["results"]["zero_status"] == "Filled"
    code, out, _ = run(capsys, "modulus", "--minmp", "identity", "--domain", "disk:1")
    assert code == 0 and json.loads(out)["verdict"] == "fill"
    code, out, _ = run(capsys, "modulus", "--minmp", "identity", "--domain", "disk-complement:1")
    assert code == 0 and json.loads(out)["verdict"] == "containment"
    code, out, _ = run(capsys, "modulus", "--finmax", "z^3 - z", "--samples", "500")
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"expr": "z", "domain": "disk:1", "resolution": 64, "witnesses": 500}))
    code, out, _ = run(capsys, "image", "--config", str(cfg))
    doc = json.loads(out)
    assert code == 0 and doc["config"]["resolution"] == 64 and doc["config"]["witnesses"] == 500
    code, out, _ = run(capsys, "image", "--config", str(cfg), "--resolution", "96")
    assert json.loads(out)["config"]["resolution"] == 96
    cfg.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "image", "--config", str(cfg))[0] == 2
    cfg.write_text("[1, 2]")
    assert run(capsys, "image", "--config", str(cfg))[0] == 2


def test_bits_env(capsys, monkeypatch):
    monkeypatch.setenv("DICHOTOMY_BITS", "106")
    code, out, _ = run(capsys, "modulus", "--finmax", "z^2", "--samples", "100")
    assert code == 0 and json.loads(out)["config"]["mantissa_bits"] == 106
    code, out, _ = run(capsys, "modulus", "--finmax", "z^2", "--samples", "100", "--bits", "53")
    assert json.loads(out)["config"]["mantissa_bits"] == 53
    # counterexamples honour the variable too, and refuse too few bits
    assert run(capsys, "counterexamples")[0] == 2
    monkeypatch.setenv("DICHOTOMY_BITS", "424")
    code, out, _ = run(capsys, "counterexamples")
    assert code == 0 and json.loads(out)["config"]["mantissa_bits"] == 424
    monkeypatch.setenv("DICHOTOMY_BITS", "many")
    assert run(capsys, "modulus", "--finmax", "z", "--samples", "100")[0] == 2


@pytest.mark.skipif(shutil.which("dichotomy") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["dichotomy", "counterexamples"], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "reproduced"
