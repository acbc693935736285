"""Qubit mapping and SWAP routing for OpenQASM circuits on fixed coupling graphs."""

from tabumap.coupling import CouplingGraph, load_device
from tabumap.mapping import Mapping
from tabumap.pipeline import transform
from tabumap.qasm import parse_qasm, write_qasm
from tabumap.router import RouterConfig

__all__ = ["CouplingGraph", "Mapping", "RouterConfig", "load_device", "parse_qasm", "transform", "write_qasm"]
__version__ = "0.1.0"
