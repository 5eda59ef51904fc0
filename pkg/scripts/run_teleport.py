"""Compile the teleportation program and report each function's shape and channel."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

import numpy as np

import qmlc
from qmlc.circuit import render_text
from qmlc.compiler import compile_program
from qmlc.denote import run_s
from qmlc.parser import parse_source
from qmlc.typecheck import check


@dataclass
class TeleportConfig:
    source: Path = qmlc.TELEPORT
    show_circuit: bool = False


def run(cfg: TeleportConfig) -> float:
    program = parse_source(cfg.source.read_text())
    typed = check(program)
    morphisms = compile_program(program, typed)
    print(f"{'function':8} {'strict':9} in out heap garbage gates")
    for name, m in morphisms.items():
        print(
            f"{name:8} {typed[name].strictness.name.lower():9} "
            f"{m.input_size:2} {m.output_size:3} {m.heap:4} {m.garbage:7} {len(m.body.gates):5}"
        )
    tele = morphisms["Tele"]
    if cfg.show_circuit:
        print(render_text(tele))
    err = float(np.max(np.abs(run_s(tele).matrix - np.eye(4))))
    print(f"Tele channel vs identity: max error {err:.2e}")
    return err


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--source", type=Path, default=TeleportConfig.source)
    p.add_argument("--show-circuit", action="store_true")
    a = p.parse_args()
    run(TeleportConfig(a.source, a.show_circuit))


if __name__ == "__main__":
    main()
