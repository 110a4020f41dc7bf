import json
import re
import shutil
import subprocess
import sys

import pytest

from sbdc import cli
from sbdc.core import NumericalBreakdown
from sbdc.fixtures import FIXTURES
from sbdc.io import save_matrix_set


@pytest.fixture
def docs(tmp_path):
    paths = {}
    for name, fx in FIXTURES.items():
        p = tmp_path / f"{name}.json"
        save_matrix_set(fx.matrix_set(), p)
        paths[name] = str(p)
    return paths


def _run(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def _decompose_json(args, capsys):
    code, out, _ = _run(["decompose", *args], capsys)
    return code, json.loads(out)


def test_orthogonal_block(docs, capsys):
    code, doc = _decompose_json(["--input", docs["orthogonal_block"], "--mode", "orthogonal"], capsys)
    assert code == 0 and doc["block_sizes_sorted"] == [1, 2]


def test_field_widening(docs, capsys):
    path = docs["field_dependent"]
    _, real = _decompose_json(["--input", path, "--field", "real"], capsys)
    _, cplx = _decompose_json(["--input", path, "--field", "complex"], capsys)
    assert real["block_sizes_sorted"] == [1, 2]
    assert cplx["block_sizes_sorted"] == [1, 1, 1]
    assert cplx["field"] == "complex"


def test_field_cannot_narrow(docs, capsys):
    code, _, err = _run(["decompose", "--input", docs["nilpotent_center"], "--field", "real"], capsys)
    assert code == 2 and "sbdc: ERROR" in err


def test_orthogonal_on_complex_document(docs, capsys):
    code, _, err = _run(["decompose", "--input", docs["nilpotent_center"], "--mode", "orthogonal"],
                        capsys)
    assert code == 2 and err


def test_missing_input_file(tmp_path, capsys):
    code, _, _ = _run(["decompose", "--input", str(tmp_path / "nope.json")], capsys)
    assert code == 2


def test_no_input_given(capsys):
    assert _run(["center"], capsys)[0] == 2


def test_numerical_failure_exit_code(docs, capsys, monkeypatch):
    def boom(*a, **k):
        raise NumericalBreakdown("svd did not converge")
    monkeypatch.setattr(cli, "sbdc", boom)
    code, _, err = _run(["decompose", "--input", docs["real_pair"]], capsys)
    assert code == 3 and "svd did not converge" in err


def test_quadratic_input(tmp_path, capsys):
    q = tmp_path / "forms.txt"
    q.write_text("x1^2 - x2^2\n2*x1*x2\n")
    code, doc = _decompose_json(["--quadratic", str(q)], capsys)
    assert code == 0 and doc["block_sizes_sorted"] == [2]


def test_quadratic_parse_error(tmp_path, capsys):
    q = tmp_path / "forms.txt"
    q.write_text("x1^3\n")
    assert _run(["decompose", "--quadratic", str(q)], capsys)[0] == 2


def test_output_file_and_verify(docs, tmp_path, capsys):
    out = tmp_path / "report.json"
    code, stdout, _ = _run(["decompose", "--input", docs["unitary_block"], "--mode", "unitary",
                            "--output", str(out)], capsys)
    assert code == 0 and stdout == ""
    code, stdout, _ = _run(["verify", "--input", docs["unitary_block"], "--report", str(out)], capsys)
    assert code == 0 and "PASS orthogonality" in stdout and "FAIL" not in stdout


def test_verify_detects_tampering(docs, tmp_path, capsys):
    out = tmp_path / "report.json"
    _run(["decompose", "--input", docs["real_pair"], "--output", str(out)], capsys)
    doc = json.loads(out.read_text())
    doc["P"][0][1] += 0.5
    out.write_text(json.dumps(doc))
    code, stdout, _ = _run(["verify", "--input", docs["real_pair"], "--report", str(out)], capsys)
    assert code == 4 and "FAIL off_block" in stdout


def test_verify_complex_widened_report(docs, tmp_path, capsys):
    out = tmp_path / "report.json"
    _run(["decompose", "--input", docs["field_dependent"], "--field", "complex",
          "--output", str(out)], capsys)
    code, _, _ = _run(["verify", "--input", docs["field_dependent"], "--report", str(out)], capsys)
    assert code == 0


def test_center_command(docs, capsys):
    code, out, _ = _run(["center", "--input", docs["real_pair"]], capsys)
    assert code == 0 and out.startswith("center dimension: 5 (over real)")
    assert out.count("X") == 5


def test_commute_command(docs, capsys):
    code, out, _ = _run(["commute", "--input", docs["hermitian_diagonal"]], capsys)
    assert code == 0 and "commute: false" in out and "worst pair" in out


def test_text_and_json_agree(docs, capsys):
    args = ["--input", docs["hermitian_block"], "--mode", "star"]
    _, doc = _decompose_json(args, capsys)
    code, text, _ = _run(["decompose", *args, "--format", "text"], capsys)
    assert code == 0
    for key, value in doc["residuals"].items():
        m = re.search(rf"^  {key}: (\S+)$", text, re.M)
        assert m and float(m.group(1)) == pytest.approx(value, rel=1e-6, abs=0)
    assert f"block sizes (sorted): {doc['block_sizes_sorted']}" in text
    assert f"certified finest: {str(doc['certified_finest']).lower()}" in text
    # P entries at printed precision
    p_lines = text.split("P:\n", 1)[1].splitlines()[:len(doc["P"])]
    for line, row in zip(p_lines, doc["P"]):
        printed = [complex(s.strip().replace("+-", "-")) for s in line.strip()[1:-1].split(",")]
        for got, (re_, im_) in zip(printed, row):
            assert abs(got - complex(re_, im_)) <= 1e-5 * max(1.0, abs(complex(re_, im_)))


def test_identical_invocations_are_byte_identical(docs, tmp_path, capsys):
    outs = []
    for k in range(3):
        out = tmp_path / f"r{k}.json"
        _run(["decompose", "--input", docs["field_dependent"], "--seed", "9",
              "--output", str(out)], capsys)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_timing_flag_adds_wall_time(docs, capsys):
    _, doc = _decompose_json(["--input", docs["real_pair"], "--timing"], capsys)
    assert doc["wall_time"] >= 0


def test_log_level_from_environment(docs, capsys, monkeypatch):
    monkeypatch.setenv("SBDC_LOG", "debug")
    _run(["decompose", "--input", docs["real_pair"]], capsys)
    import logging
    assert logging.getLogger("sbdc").level == logging.DEBUG
    monkeypatch.setenv("SBDC_LOG", "error")
    _run(["decompose", "--input", docs["real_pair"]], capsys)
    assert logging.getLogger("sbdc").level == logging.ERROR


def test_console_script(docs):
    exe = shutil.which("sbdc")
    cmd = [exe] if exe else [sys.executable, "-m", "sbdc.cli"]
    proc = subprocess.run([*cmd, "decompose", "--input", docs["hermitian_diagonal"],
                           "--mode", "star"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["block_sizes_sorted"] == [1, 1]
