import csv
import json
import shutil

from conftest import benchmark_paths
from tabumap.cli import CSV_HEADER, EXIT_PARSE, EXIT_ROUTING, EXIT_TIMEOUT, run
from tabumap.pipeline import scale_of


def bench(name):
    return next(p for p in benchmark_paths() if p.stem == name)


def test_single_file_defaults(tmp_path, capsys):
    src = tmp_path / "c.qasm"
    shutil.copy(bench("4gt5_75"), src)
    assert run(["--device", "q20", "--eval", "num", str(src)]) == 0
    report = json.loads((tmp_path / "c.report.json").read_text())
    assert report["evaluator"] == "num"
    assert report["delta"] == 0.5 and report["l_a"] == 2
    assert report["device"] == "q20" and report["verified"] == "yes"
    for key in ("tenure", "added_gates", "swaps", "depth_in", "depth_out", "wall_ms", "scale"):
        assert key in report
    assert (tmp_path / "c.routed.qasm").exists()
    assert json.loads(capsys.readouterr().out)["name"] == "c"


def test_cca_flags(tmp_path):
    src = tmp_path / "c.qasm"
    shutil.copy(bench("alu-v0_27"), src)
    assert run(["--eval", "cca", "--rho", "0.3", "--threshold", "50", "--tenure", "3", str(src)]) == 0
    report = json.loads((tmp_path / "c.report.json").read_text())
    assert report["evaluator"] == "cca" and report["tenure"] == 3


def test_directory_run_writes_csv_and_figure(tmp_path):
    for name in ("4mod5-v1_22", "alu-v0_27", "rd32-v0_66"):
        shutil.copy(bench(name), tmp_path / f"{name}.qasm")
    out = tmp_path / "out"
    assert run([str(tmp_path), "--out", str(out), "--jobs", "2"]) == 0
    with open(out / "report.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 5 and rows[-1][0] == "TOTAL"
    assert int(rows[-1][3]) == sum(int(r[3]) for r in rows[1:-1])
    assert (out / "report.png").stat().st_size > 0


def test_reports_are_deterministic(tmp_path):
    src = tmp_path / "c.qasm"
    shutil.copy(bench("rd53_138"), src)
    keep = ("added_gates", "swaps", "depth_out", "verified")
    run([str(src), "--seed", "7"])
    first = json.loads((tmp_path / "c.report.json").read_text())
    run([str(src), "--seed", "7"])
    second = json.loads((tmp_path / "c.report.json").read_text())
    assert {k: first[k] for k in keep} == {k: second[k] for k in keep}
    assert (tmp_path / "c.routed.qasm").read_text()


def test_parse_failure_exit_code(tmp_path):
    src = tmp_path / "bad.qasm"
    src.write_text("qreg q[1]; cx q[0],q[0];")
    assert run([str(src)]) == EXIT_PARSE


def test_routing_failure_exit_code(tmp_path):
    src = tmp_path / "big.qasm"
    src.write_text("qreg q[8];" + "".join(f"cx q[{i}],q[{i + 1}];" for i in range(7)))
    assert run(["--device", "qx2", str(src)]) == EXIT_ROUTING


def test_timeout_exit_code(tmp_path):
    src = tmp_path / "c.qasm"
    shutil.copy(bench("radd_250"), src)
    assert run(["--timeout-s", "0.001", str(src)]) == EXIT_TIMEOUT


def test_scale_buckets():
    assert scale_of(100) == "small"
    assert scale_of(101) == "medium"
    assert scale_of(1000) == "medium"
    assert scale_of(1001) == "large"


def test_verification_failure_exit_code(tmp_path, monkeypatch):
    import tabumap.cli as cli
    from tabumap.verify import CheckReport

    monkeypatch.setattr(cli, "structural_check", lambda *a: CheckReport(False, 0, "forced"))
    src = tmp_path / "c.qasm"
    shutil.copy(bench("4gt5_75"), src)
    assert run([str(src)]) == cli.EXIT_VERIFY
