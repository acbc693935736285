"""One test per acceptance criterion, each at its stated tolerance."""

import random
import time

import pytest

from bfs_oracle import min_swaps
from conftest import NINE_CX_PAIRS, benchmark_paths, cx_program
from tabumap.circuit import build_interaction_graph, compact_lifetime, layer_asap
from tabumap.coupling import CouplingGraph, load_device, path_cost
from tabumap.initial import complete_mapping
from tabumap.mapping import Mapping
from tabumap.pipeline import place, transform
from tabumap.qasm import Gate, read_qasm_file
from tabumap.router import Router, RouterConfig, candidate_set, evaluate_num
from tabumap.verify import MAX_SIM_QUBITS, assert_equivalence, structural_check

TAU0 = [10, 0, 6, 5, 11]


@pytest.fixture(scope="module")
def suite():
    """Every shipped benchmark routed on q20 with the default evaluator."""
    cg = load_device("q20")
    t0 = time.perf_counter()
    rows = {}
    for path in benchmark_paths():
        prog = read_qasm_file(path)
        m0 = place(prog, cg)
        rows[path.stem] = (prog, m0, transform(prog, cg, RouterConfig(evaluator="num"), initial=m0))
    return cg, rows, time.perf_counter() - t0


def test_criterion_1_coupling_validity(suite):
    cg, rows, elapsed = suite
    widths = [len(prog.active_qubits()) for prog, _, _ in rows.values()]
    assert len(rows) >= 20
    assert min(widths) <= 4 and max(widths) >= 16
    for name, (prog, _, res) in rows.items():
        report = structural_check(prog, res.program, res.result, cg)
        assert report, f"{name}: gate {report.index}: {report.reason}"
    assert elapsed < 300


def test_criterion_2_semantic_equivalence(suite):
    _, rows, _ = suite
    checked = 0
    for name, (prog, _, res) in rows.items():
        if len(prog.active_qubits()) > MAX_SIM_QUBITS:
            continue
        report = assert_equivalence(prog, res.program, res.result, tol=1e-9)
        assert report, f"{name}: {report.reason}"
        checked += 1
    assert checked >= 10


def test_criterion_3_zero_overhead_embeddings(suite):
    _, rows, _ = suite
    for name in ("4mod5-v1_22", "mod5mils_65", "decod24-v2_43", "ising_model_16"):
        assert rows[name][2].stats["added_gates"] == 0, name
    added = rows["4gt13_92"][2].stats["added_gates"]
    print(f"4gt13_92: {added} added gates (target 0, gap {added})")
    assert added <= 21


def test_criterion_4_path_costs():
    qx5 = load_device("qx5")
    g = Gate("cx", (1, 2))
    tau = [-1, 6, 13]
    costs = [path_cost(p, qx5, g, tau) for p in [(6, 5, 4, 13), (6, 5, 12, 13), (6, 11, 12, 13)]]
    assert costs == [18, 14, 14]


def test_criterion_5_completion(nine_cx):
    q20 = load_device("q20")
    full = complete_mapping(Mapping.from_list([10, -1, 6, 5, 11], 20), build_interaction_graph(nine_cx), q20)
    assert full.tau[1] == 0


def test_criterion_6_candidate_set(nine_cx):
    q20 = load_device("q20")
    lc = compact_lifetime(layer_asap(nine_cx))
    m = Mapping.from_list(TAU0, 20)
    ctx = Router(q20).context(lc, 1, m)
    cands = candidate_set(lc.layer_gates(1), m, q20.distances, q20, lambda a, e: evaluate_num(a.tau, ctx))
    edges = [c.swap_edge for c in cands]
    assert len(edges) == 4
    assert set(edges) == {(6, 1), (1, 0), (6, 5), (5, 0)}


def test_criterion_7_first_swap_selection(nine_cx):
    q20 = load_device("q20")
    lc = compact_lifetime(layer_asap(nine_cx))
    after, swaps = Router(q20, RouterConfig(delta=0.5, lookahead=2)).route_layer(Mapping.from_list(TAU0, 20), 1, lc)
    assert swaps[0] == (6, 1)
    one = Mapping.from_list(TAU0, 20).swapped(6, 1)
    g0 = Gate("cx", NINE_CX_PAIRS[0])
    assert q20.adjacent(one.tau[g0.control], one.tau[g0.target])


def test_criterion_8_quality_against_exhaustive_oracle():
    cg = CouplingGraph("path4", 4, frozenset({(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2)}), True)
    rng = random.Random(0)
    worst = []
    for _ in range(50):
        pairs = [tuple(rng.sample(range(4), 2)) for _ in range(rng.randint(1, 10))]
        res = transform(cx_program(pairs, 4), cg)
        t0 = time.perf_counter()
        opt = min_swaps(pairs, res.result.initial_mapping.tau, cg.skeleton_edges)
        assert time.perf_counter() - t0 < 1.0
        tsa = res.stats["swaps"]
        if tsa > 1.5 * opt:
            worst.append((pairs, tsa, opt))
    assert not worst, worst


def test_criterion_9_scalability():
    cg = load_device("q20")
    rng = random.Random(2024)
    prog = cx_program([tuple(rng.sample(range(16), 2)) for _ in range(5000)], 16)
    t0 = time.perf_counter()
    res = transform(prog, cg, RouterConfig(evaluator="num"))
    elapsed = time.perf_counter() - t0
    print(f"5000 CNOTs, 16 qubits: {elapsed:.2f} s, {res.stats['added_gates']} added gates")
    assert elapsed < 60


def test_criterion_10_evaluator_direction(suite):
    cg, rows, _ = suite
    totals = {"num": 0, "dep": 0, "cca": 0}
    for prog, m0, res in rows.values():
        totals["num"] += res.stats["added_gates"]
        for ev in ("dep", "cca"):
            totals[ev] += transform(prog, cg, RouterConfig(evaluator=ev), initial=m0).stats["added_gates"]
    print(f"total added gates: {totals}")
    assert totals["num"] <= totals["cca"]
    assert totals["num"] <= totals["dep"]
