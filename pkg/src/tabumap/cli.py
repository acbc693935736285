"""Command-line front end: route one QASM file or a directory of them."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import signal
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from tabumap.coupling import DeviceError, load_device
from tabumap.initial import DeviceTooSmall
from tabumap.pipeline import transform
from tabumap.qasm import QasmError, read_qasm_file, write_qasm
from tabumap.router import EVALUATORS, RouterConfig, RoutingError
from tabumap.verify import MAX_SIM_QUBITS, assert_equivalence, structural_check

logger = logging.getLogger("tabumap")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_ROUTING = 4
EXIT_VERIFY = 5
EXIT_TIMEOUT = 6

CSV_HEADER = ["name", "n_qubits", "g_in", "added", "swaps", "depth_in", "depth_out", "ms", "verified"]


class CircuitTimeout(Exception):
    pass


@dataclass
class Outcome:
    name: str
    status: int
    message: str = ""
    report: dict = field(default_factory=dict)
    row: dict = field(default_factory=dict)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tabumap", description="Route OpenQASM circuits onto a coupling graph with tabu search.")
    p.add_argument("input", help="a .qasm file or a directory of .qasm files")
    p.add_argument("--device", default="q20", help="q20, qx2, qx3, qx4, qx5 or a device file (default: q20)")
    p.add_argument("--eval", dest="evaluator", choices=EVALUATORS, default="num", help="evaluation function (default: num)")
    p.add_argument("--delta", type=float, default=0.5, help="look-ahead attenuation factor (default: 0.5)")
    p.add_argument("--lookahead", type=int, default=2, help="number of look-ahead layers (default: 2)")
    p.add_argument("--tenure", type=int, default=5, help="tabu tenure in iterations (default: 5)")
    p.add_argument("--max-iters", type=int, default=None, help="per-layer iteration bound (default: 2 x device edges)")
    p.add_argument("--rho", type=float, default=0.5, help="weight smoothing factor for cca (default: 0.5)")
    p.add_argument("--threshold", type=float, default=None, help="weight threshold for cca (default: 10 x device edges)")
    p.add_argument("--seed", type=int, default=0, help="seed for the random states of the equivalence check (default: 0)")
    p.add_argument("--timeout-s", type=float, default=3600.0, help="wall-clock limit per circuit (default: 3600)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for directory runs (default: 1)")
    p.add_argument("--out", default=None, help="output directory (default: next to each input)")
    p.add_argument("--no-verify", action="store_true", help="skip the structural and statevector checks")
    p.add_argument("--no-plot", action="store_true", help="do not draw report.png for directory runs")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _config(args) -> RouterConfig:
    return RouterConfig(
        evaluator=args.evaluator,
        delta=args.delta,
        lookahead=args.lookahead,
        tenure=args.tenure,
        max_iters=args.max_iters,
        rho=args.rho,
        threshold=args.threshold,
    )


def _on_alarm(signum, frame):
    raise CircuitTimeout()


def _out_dir(path: Path, args) -> Path:
    d = Path(args.out) if args.out else path.parent
    d.mkdir(parents=True, exist_ok=True)
    return d


def run_one(path: Path, args) -> Outcome:
    """Parse, route, verify and write artifacts for a single circuit."""
    name = path.stem
    use_alarm = args.timeout_s and args.timeout_s > 0 and hasattr(signal, "setitimer")
    if use_alarm:
        old = signal.signal(signal.SIGALRM, _on_alarm)
        signal.setitimer(signal.ITIMER_REAL, args.timeout_s)
    try:
        try:
            prog = read_qasm_file(path)
        except (QasmError, OSError) as exc:
            return Outcome(name, EXIT_PARSE, f"{path}: {exc}")
        cg = load_device(args.device)
        try:
            res = transform(prog, cg, _config(args))
        except (RoutingError, DeviceTooSmall, ValueError) as exc:
            return Outcome(name, EXIT_ROUTING, f"{path}: {exc}")

        verified = "skipped"
        if not args.no_verify:
            check = structural_check(prog, res.program, res.result, cg)
            if check and len(prog.active_qubits()) <= MAX_SIM_QUBITS:
                check = assert_equivalence(prog, res.program, res.result, seed=args.seed)
            verified = "yes" if check else "no"
            if not check:
                logger.error("%s: verification failed at gate %d: %s", name, check.index, check.reason)
    except CircuitTimeout:
        return Outcome(name, EXIT_TIMEOUT, f"{path}: exceeded {args.timeout_s} s")
    finally:
        if use_alarm:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, old)

    st = res.stats
    out_dir = _out_dir(path, args)
    (out_dir / f"{name}.routed.qasm").write_text(write_qasm(res.program))
    report = {
        "name": name,
        "device": cg.name,
        "evaluator": args.evaluator,
        "delta": args.delta,
        "l_a": args.lookahead,
        "tenure": args.tenure,
        "added_gates": st["added_gates"],
        "added_cx": st["added_cx"],
        "added_h": st["added_h"],
        "swaps": st["swaps"],
        "depth_in": st["depth_in"],
        "depth_out": st["depth_out"],
        "wall_ms": st["wall_ms"],
        "verified": verified,
        "scale": st["scale"],
    }
    (out_dir / f"{name}.report.json").write_text(json.dumps(report, indent=2) + "\n")
    row = {
        "name": name,
        "n_qubits": len(prog.active_qubits()),
        "g_in": len(prog.gates),
        "added": st["added_gates"],
        "swaps": st["swaps"],
        "depth_in": st["depth_in"],
        "depth_out": st["depth_out"],
        "ms": round(st["wall_ms"], 1),
        "verified": verified,
    }
    status = EXIT_VERIFY if verified == "no" else EXIT_OK
    return Outcome(name, status, "" if status == EXIT_OK else f"{path}: verification failed", report, row)


def _worker(job):
    path, args = job
    return run_one(path, args)


def write_csv(rows: list[dict], path: Path) -> None:
    totals = {k: sum(r[k] for r in rows) for k in ("g_in", "added", "swaps", "depth_in", "depth_out", "ms")}
    totals.update(name="TOTAL", n_qubits="", verified=sum(1 for r in rows if r["verified"] == "yes"))
    totals["ms"] = round(totals["ms"], 1)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_HEADER)
        w.writeheader()
        w.writerows(rows)
        w.writerow(totals)


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    src = Path(args.input)
    try:
        load_device(args.device)
        _config(args)
    except (DeviceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if src.is_dir():
        files = sorted(f for f in src.glob("*.qasm") if not f.name.endswith(".routed.qasm"))
        if not files:
            print(f"error: no .qasm files in {src}", file=sys.stderr)
            return EXIT_USAGE
    elif src.is_file():
        files = [src]
    else:
        print(f"error: {src} does not exist", file=sys.stderr)
        return EXIT_USAGE

    jobs = [(f, args) for f in files]
    if args.jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_worker, jobs))
    else:
        outcomes = [_worker(j) for j in jobs]

    status = EXIT_OK
    for o in outcomes:
        if o.status != EXIT_OK:
            print(f"error: {o.message}", file=sys.stderr)
            status = status or o.status
        elif not src.is_dir():
            print(json.dumps(o.report))

    if src.is_dir():
        rows = [o.row for o in outcomes if o.row]
        out_dir = Path(args.out) if args.out else src
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / "report.csv"
        write_csv(rows, csv_path)
        print(f"wrote {csv_path} ({len(rows)} circuits)")
        if rows and not args.no_plot:
            from tabumap.plotting import plot_report

            png = plot_report(rows, out_dir / "report.png", title=f"{args.device}, evaluator {args.evaluator}")
            print(f"wrote {png}")
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
