"""Measure how much the peephole optimizer shrinks random circuits, and check it is exact."""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from qmlc.circuit import optimize
from qmlc.denote import circuit_to_unitary
from qmlc.sampling import random_circuit


@dataclass
class OptimizerConfig:
    circuits: int = 500
    seed: int = 0
    max_width: int = 4
    max_gates: int = 16


def run(cfg: OptimizerConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    before = after = 0
    worst = 0.0
    for _ in range(cfg.circuits):
        width = int(rng.integers(1, cfg.max_width + 1))
        c = random_circuit(rng, width, int(rng.integers(1, cfg.max_gates + 1)), depth=2)
        o = optimize(c)
        before += len(c.gates)
        after += len(o.gates)
        worst = max(worst, float(np.max(np.abs(circuit_to_unitary(o) - circuit_to_unitary(c)))))
    print(f"gates: {before} -> {after} ({100 * (1 - after / before):.1f}% removed)")
    print(f"max unitary error: {worst:.2e}")
    return {"before": before, "after": after, "worst": worst}


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--circuits", type=int, default=OptimizerConfig.circuits)
    p.add_argument("--seed", type=int, default=OptimizerConfig.seed)
    p.add_argument("--max-width", type=int, default=OptimizerConfig.max_width)
    p.add_argument("--max-gates", type=int, default=OptimizerConfig.max_gates)
    a = p.parse_args()
    run(OptimizerConfig(a.circuits, a.seed, a.max_width, a.max_gates))


if __name__ == "__main__":
    main()
