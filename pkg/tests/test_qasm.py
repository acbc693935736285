import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tabumap.qasm import Gate, QasmError, parse_qasm, read_qasm_file, write_qasm

from conftest import NINE_CX_PAIRS, benchmark_paths, cx_program


def test_minimal_program():
    prog = parse_qasm("qreg q[2]; cx q[0],q[1];")
    assert prog.qreg_sizes == {"q": 2}
    assert [(g.name, g.qubits) for g in prog.gates] == [("cx", (0, 1))]


def test_nine_cnot_circuit_gate_order(nine_cx):
    assert len(nine_cx.gates) == 9
    assert [g.qubits for g in nine_cx.gates] == NINE_CX_PAIRS
    assert [g.id for g in nine_cx.gates] == list(range(9))


def test_duplicate_operands_rejected():
    with pytest.raises(QasmError, match="duplicate"):
        parse_qasm("qreg q[1]; cx q[0],q[0];")


def test_error_reports_line_and_column():
    with pytest.raises(QasmError) as info:
        parse_qasm("OPENQASM 2.0;\nqreg q[2];\n  cx q[0],q[7];\n")
    assert info.value.line == 3
    assert info.value.column == 3


def test_second_register_rejected():
    with pytest.raises(QasmError, match="single quantum register"):
        parse_qasm("qreg a[2]; qreg b[2]; cx a[0],a[1];")


def test_three_operand_gate_rejected():
    with pytest.raises(QasmError, match="3-operand"):
        parse_qasm("qreg q[3]; ccx q[0],q[1],q[2];")


def test_gate_definitions_rejected():
    with pytest.raises(QasmError, match="unsupported"):
        parse_qasm("qreg q[2]; gate foo a { x a; } foo q[0];")


def test_missing_semicolon():
    with pytest.raises(QasmError, match="terminated"):
        parse_qasm("qreg q[2]; cx q[0],q[1]")


def test_barrier_dropped_and_measure_kept():
    prog = parse_qasm("qreg q[2]; creg c[2]; h q[0]; barrier q[0],q[1]; cx q[0],q[1]; measure q[1] -> c[1];")
    assert [g.name for g in prog.gates] == ["h", "cx"]
    assert prog.cregs == ["creg c[2];"]
    assert prog.measures == ["measure q[1] -> c[1];"]


def test_parameter_text_kept_verbatim():
    prog = parse_qasm("qreg q[1]; u3(pi/2,0.1,-3*pi/4) q[0]; rz(0.785398163397448) q[0];")
    assert prog.gates[0].params == "pi/2,0.1,-3*pi/4"
    text = write_qasm(prog)
    assert "u3(pi/2,0.1,-3*pi/4) q[0];" in text
    assert "rz(0.785398163397448) q[0];" in text


def test_comments_ignored():
    prog = parse_qasm("qreg q[2]; // register\ncx q[0],q[1]; // gate\n")
    assert len(prog.gates) == 1


def test_out_of_range_operand():
    with pytest.raises(QasmError, match="out of range"):
        parse_qasm("qreg q[2]; h q[2];")


@pytest.mark.parametrize("path", benchmark_paths()[:8], ids=lambda p: p.stem)
def test_benchmark_round_trip(path):
    prog = read_qasm_file(path)
    again = parse_qasm(write_qasm(prog))
    assert again.structurally_equal(prog)
    assert write_qasm(again) == write_qasm(prog)


ONE_Q = st.sampled_from(["h", "x", "t", "tdg", "s", "z"])


@st.composite
def programs(draw):
    n = draw(st.integers(2, 6))
    gates = []
    for _ in range(draw(st.integers(0, 25))):
        if draw(st.booleans()):
            a, b = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
            gates.append(f"cx q[{a}],q[{b}];")
        elif draw(st.booleans()):
            angle = draw(st.floats(-10, 10, allow_nan=False)).__repr__()
            gates.append(f"rz({angle}) q[{draw(st.integers(0, n - 1))}];")
        else:
            gates.append(f"{draw(ONE_Q)} q[{draw(st.integers(0, n - 1))}];")
    return f"OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{n}];\n" + "".join(g + "\n" for g in gates)


@settings(max_examples=80, deadline=None)
@given(programs())
def test_round_trip_property(text):
    prog = parse_qasm(text)
    assert write_qasm(prog) == text
    assert all(q < prog.n_qubits for g in prog.gates for q in g.qubits)


def test_gate_helpers():
    g = Gate("cx", (3, 1), None, 4)
    assert g.is_two_qubit and g.control == 3 and g.target == 1
    assert g.to_qasm() == "cx q[3],q[1];"
    assert g.same_op(Gate("cx", (3, 1)))


def test_active_qubits_include_measured():
    prog = cx_program([(0, 1)], 4, extra="creg c[4];\n")
    prog.measures.append("measure q[3] -> c[3];")
    assert prog.active_qubits() == [0, 1, 3]
