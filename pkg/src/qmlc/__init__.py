"""A compiler for the quantum functional language QML."""

from pathlib import Path

from .circuit import FqcMorphism, compose, identity, inverse, optimize, tensor
from .compiler import compile_program, compile_source
from .denote import run_i, run_m, run_s, run_tc
from .parser import lex, parse, parse_source
from .terms import render
from .typecheck import check

PROGRAMS = Path(__file__).parent / "programs"
TELEPORT = PROGRAMS / "teleport.qml"

__all__ = [
    "PROGRAMS",
    "TELEPORT",
    "FqcMorphism",
    "check",
    "compile_program",
    "compile_source",
    "compose",
    "identity",
    "inverse",
    "lex",
    "optimize",
    "parse",
    "parse_source",
    "render",
    "run_i",
    "run_m",
    "run_s",
    "run_tc",
    "tensor",
]
