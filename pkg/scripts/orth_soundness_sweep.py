"""Sample random branch pairs, derive orthogonality and check each proof numerically."""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass

import numpy as np

from qmlc import errors, orth
from qmlc.sampling import TermConfig, random_pair
from qmlc.typecheck import check_term


@dataclass
class SweepConfig:
    samples: int = 2000
    seed: int = 0
    max_depth: int = 3


def _count_rules(d: orth.OrthDerivation, counts: Counter) -> None:
    counts[d.rule] += 1
    for p in d.premises:
        _count_rules(p, counts)


def run(cfg: SweepConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    tcfg = TermConfig(max_depth=cfg.max_depth)
    rules: Counter = Counter()
    stats = Counter()
    worst = 0.0
    for _ in range(cfg.samples):
        t, u = random_pair(rng, tcfg)
        try:
            et, eu = check_term(t).term, check_term(u).term
        except errors.QMLError:
            stats["ill-typed"] += 1
            continue
        d = orth.derive(et, eu)
        if d is None:
            stats["no derivation"] += 1
            continue
        stats["derived"] += 1
        _count_rules(d, rules)
        worst = max(worst, abs(orth.inner_product_oracle(t, u)))
    print(", ".join(f"{k}: {v}" for k, v in sorted(stats.items())))
    print("rule uses: " + ", ".join(f"{r}={rules[r]}" for r in orth.RULES))
    print(f"max |<t|u>| over derived pairs: {worst:.2e}")
    return {"stats": dict(stats), "rules": dict(rules), "worst": worst}


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--samples", type=int, default=SweepConfig.samples)
    p.add_argument("--seed", type=int, default=SweepConfig.seed)
    p.add_argument("--max-depth", type=int, default=SweepConfig.max_depth)
    a = p.parse_args()
    run(SweepConfig(a.samples, a.seed, a.max_depth))


if __name__ == "__main__":
    main()
