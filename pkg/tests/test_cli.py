import io
import json
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

from hypchroma import cli, rotations

SRC = str(Path(__file__).resolve().parent.parent / "src")


def run_cli(*argv):
    out = io.StringIO()
    err = io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            code = cli.main(list(argv))
        except SystemExit as exc:  # argparse errors
            code = exc.code
    return code, out.getvalue(), err.getvalue()


def test_bounds_distance():
    code, out, _ = run_cli("bounds", "--d", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["upper_colors"] == 138


def test_bounds_genus_with_distance():
    code, out, _ = run_cli("bounds", "--genus", "2", "--d", "8")
    assert code == 0
    assert json.loads(out)["upper_colors"] == 31


def test_bounds_genus_lower():
    code, out, _ = run_cli("bounds", "--genus", "28")
    assert code == 0
    payload = json.loads(out)
    assert payload["lower_clique"] == 12
    assert payload["min_genus"] == 28


def test_bounds_usage_error():
    code, _, err = run_cli("bounds")
    assert code == 2


def test_construct_ideal():
    code, out, _ = run_cli("construct", "ideal", "--n", "3")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["polygons"]) == 4
    assert payload["clique"]["vertices"] == 4
    assert payload["clique"]["margin"] > 0
    assert payload["clique"]["edge_length"] == pytest.approx(1.0986122886681098, abs=1e-9)


def test_construct_truncated_from_distance():
    code, out, _ = run_cli("construct", "truncated", "--n", "5", "--d", "3.0")
    assert code == 0
    payload = json.loads(out)
    assert payload["clique"]["edge_length"] == pytest.approx(3.0, abs=1e-9)
    assert payload["derived"]["orientable"]
    assert all(b["funnel"] for b in payload["boundaries"])


def test_construct_chain(tmp_path):
    k4 = tmp_path / "k4.rot"
    k7 = tmp_path / "k7.rot"
    k4.write_text(rotations.dumps(rotations.load_bundled("k4")))
    k7.write_text(rotations.dumps(rotations.load_bundled("k7")))
    code, out, _ = run_cli("construct", "chain", "--blocks", f"k4:{k4},k7:{k7}")
    assert code == 0
    payload = json.loads(out)
    assert payload["chromatic_lower_bound"] == 7


def test_construct_triangle_holed(tmp_path):
    rs_path = tmp_path / "k12.rot"
    rs_path.write_text(rotations.dumps(rotations.load_bundled("k12")))
    code, out, _ = run_cli("construct", "triangle", "--rs", str(rs_path), "--mode", "holed")
    assert code == 0
    payload = json.loads(out)
    assert payload["derived"]["genus"] == 6
    assert payload["derived"]["boundaries"] == 44


def test_construct_triangle_flat_blueprint_fails(tmp_path):
    # K7 triangles force flat geometry: domain failure, exit 1
    rs_path = tmp_path / "k7.rot"
    rs_path.write_text(rotations.dumps(rotations.load_bundled("k7")))
    code, _, err = run_cli("construct", "triangle", "--rs", str(rs_path))
    assert code == 1
    assert "hyperbolic" in err or "error" in err


def test_bounds_fit_constants():
    code, out, _ = run_cli("bounds", "--d", "3", "--fit-constants")
    assert code == 0
    payload = json.loads(out)
    assert set(payload["fitted_constants"]) == {"C1", "C2", "C3", "C4"}
    assert all(v["provenance"] == "fitted" for v in payload["fitted_constants"].values())


def test_construct_chain_missing_file(tmp_path):
    code, _, err = run_cli("construct", "chain", "--blocks", f"k4:{tmp_path}/nope.rot")
    assert code == 1 or code == 2  # missing blueprint is a failure, not a crash


def test_construct_usage_error():
    code, _, _ = run_cli("construct", "ideal")
    assert code == 2


def test_net_experiment_and_validator():
    code, out, _ = run_cli(
        "net", "--d", "1", "--radius", "2.5", "--seed", "7", "--trials", "5000"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["violations"] == 0
    assert payload["phi_plus_one"] == 138
    assert payload["max_degree"] <= payload["degree_bound"]


def test_net_byte_identical_repeats():
    args = ("net", "--d", "1", "--radius", "2.5", "--seed", "7", "--trials", "5000")
    _, out1, _ = run_cli(*args)
    _, out2, _ = run_cli(*args)
    assert out1.encode() == out2.encode()


def test_net_r0_usage_error():
    code, _, err = run_cli("net", "--d", "1", "--r0", "0.5", "--radius", "2.5")
    assert code == 2
    assert "r0" in err


def test_net_svg_output(tmp_path):
    svg_path = tmp_path / "disk.svg"
    code, out, _ = run_cli(
        "net", "--d", "1", "--radius", "2.0", "--seed", "1", "--trials", "100",
        "--svg", str(svg_path),
    )
    assert code == 0
    assert svg_path.read_text().startswith("<svg")


def test_verify_formulas_passes():
    code, out, _ = run_cli("verify", "formulas")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] and payload["failures"] == []


def test_verify_rotations_passes():
    code, out, _ = run_cli("verify", "rotations")
    assert code == 0


def test_verify_all_passes():
    code, out, _ = run_cli("verify", "all")
    assert code == 0
    assert json.loads(out)["passed"]


def test_verify_corrupted_rotation_fails(tmp_path):
    from hypchroma import verifysuite

    text = rotations.dumps(rotations.load_bundled("k7"))
    lines = text.splitlines()
    # swap two neighbors in vertex 0's rotation: genus jumps to 2
    head, tail = lines[0].split(":")
    toks = tail.split()
    toks[0], toks[1] = toks[1], toks[0]
    lines[0] = f"{head}: {' '.join(toks)}"
    bad = tmp_path / "k7.rot"
    bad.write_text("\n".join(lines) + "\n")
    checks = verifysuite.verify_rotations(files={"k7": str(bad)})
    assert not checks[0]["passed"]
    assert "genus" in checks[0]["detail"] or "False" in str(checks[0])


def test_output_file_option(tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run_cli("bounds", "--d", "2", "--output", str(target))
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["upper_colors"] >= 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hypchroma", "bounds", "--d", "1"],
        capture_output=True,
        text=True,
        env={"PYTHONPATH": SRC, "PATH": "/usr/bin:/bin", "HYPCHROMA_BACKEND": "numpy"},
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["upper_colors"] == 138


def test_threads_flag_accepted():
    code, out, _ = run_cli("--threads", "1", "bounds", "--d", "1")
    assert code == 0
    assert json.loads(out)["upper_colors"] == 138
