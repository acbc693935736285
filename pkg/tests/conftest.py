from importlib import resources
from pathlib import Path

import pytest

from tabumap.coupling import load_device
from tabumap.qasm import parse_qasm

NINE_CX_PAIRS = [(2, 1), (3, 4), (3, 0), (1, 3), (0, 4), (3, 1), (4, 0), (2, 0), (4, 2)]


def cx_program(pairs, n=None, extra=""):
    n = n if n is not None else max(max(p) for p in pairs) + 1
    body = "".join(f"cx q[{a}],q[{b}];\n" for a, b in pairs)
    return parse_qasm(f'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[{n}];\n{extra}{body}')


def benchmark_paths():
    root = resources.files("tabumap") / "benchmarks"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".qasm"))


@pytest.fixture(scope="session")
def q20():
    return load_device("q20")


@pytest.fixture(scope="session")
def qx5():
    return load_device("qx5")


@pytest.fixture
def nine_cx():
    return cx_program(NINE_CX_PAIRS, 5)
