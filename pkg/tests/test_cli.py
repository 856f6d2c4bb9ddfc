import csv
import io
import json
import subprocess
import sys

import pytest

from geomatch import cli
from geomatch.generate import GeneratorSpec, Instance, generate, save_instance
from geomatch.geometry import Disk


def run_main(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_triangle_blossom(tmp_path, capsys):
    path = tmp_path / "tri.json"
    save_instance(Instance([Disk(0, 0, 1), Disk(1, 0, 1), Disk(0.5, 0.8, 1)]), path)
    code, out, _ = run_main(["--mode", "blossom", "--instance", str(path), "--verify"], capsys)
    rep = json.loads(out)[0]
    assert code == 0
    assert rep["matching_size"] == 1 and rep["valid"] and rep["match"]


def test_algebraic_verify(capsys):
    code, out, _ = run_main(["--mode", "algebraic", "--n", "100", "--seed", "4", "--verify"], capsys)
    rep = json.loads(out)[0]
    assert code == 0 and rep["matching_size"] == rep["oracle_size"]


def test_sparsify_pipeline_reports_depth(capsys):
    code, out, _ = run_main(["--mode", "sparsify-then-algebraic", "--generator", "disk-ratio", "--psi", "2",
                             "--n", "300", "--seed", "2", "--verify"], capsys)
    rep = json.loads(out)[0]
    assert code == 0 and rep["match"]
    assert rep["depth_kept"] <= rep["depth_constant"] * 2 ** 8


def test_csv_columns_and_sorting(capsys):
    code, out, _ = run_main(["--mode", "sparsify-then-blossom", "--count", "3", "--format", "csv",
                             "--no-timings", "--structure", "unitdisk"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == cli.CSV_COLUMNS
    assert [r[0] for r in rows[1:]] == ["0", "1", "2"]


def test_byte_identical_reports(capsys):
    args = ["--mode", "algebraic", "--n", "60", "--seed", "9", "--no-timings", "--verify"]
    _, a, _ = run_main(args, capsys)
    _, b, _ = run_main(args, capsys)
    assert a == b


def test_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, printed, _ = run_main(["--mode", "blossom", "--n", "20", "--out", str(out)], capsys)
    assert code == 0 and printed == ""
    assert json.loads(out.read_text())[0]["n"] == 20


def test_mismatch_is_an_error_exit(monkeypatch, capsys):
    monkeypatch.setattr(cli, "algebraic_maximum_matching", lambda objs, seed, graph=None: [])
    code, _, err = run_main(["--mode", "algebraic", "--n", "40", "--verify"], capsys)
    assert code == 1 and "mismatch" in err


def test_errors_name_the_stage(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"psi": 1, "objects": [{"kind": "disk", "cx": 0.5, "cy": 0.5, "r": 0.4},
                                                      {"kind": "disk", "cx": 0.6, "cy": 0.5, "r": 0.4}]}))
    code, _, err = run_main(["--mode", "sparsify-then-blossom", "--instance", str(path)], capsys)
    assert code == 3 and "sparsify:" in err and "unit square" in err


def test_unitdisk_structure_needs_unit_disks(capsys):
    code, _, err = run_main(["--mode", "sparsify-then-blossom", "--generator", "box", "--psi", "2",
                             "--structure", "unitdisk"], capsys)
    assert code == 3 and "sparsify" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "geomatch", "--mode", "blossom", "--n", "10",
                          "--format", "csv", "--no-timings"], capture_output=True, text=True, check=True)
    assert out.stdout.splitlines()[0].startswith("instance_id,mode,n")
