"""Sweep random apolar modules and check resolution duality M <-> M^vee."""

import argparse
import random
import sys
from collections import Counter
from dataclasses import dataclass

from quotlab.admodules import perp_of_dual_gens
from quotlab.field import QQ
from quotlab.poly import DualElement, _monomials
from quotlab.resolution import duality_report


@dataclass
class Sweep:
    count: int = 100
    seed: int = 0
    max_n: int = 3
    max_r: int = 3
    max_degree: int = 8


def sample(rng, cfg):
    n, r = rng.randint(1, cfg.max_n), rng.randint(1, cfg.max_r)
    sigmas = []
    for _ in range(rng.randint(1, 3)):
        k = rng.randint(0, 3)
        keys = [(g, m) for g in range(r) for m in _monomials(n, k)]
        picked = rng.sample(keys, min(len(keys), rng.randint(1, 4)))
        sigmas.append(DualElement.make(n, r, {key: QQ(rng.choice([-2, -1, 1, 2])) for key in picked}))
    return perp_of_dual_gens(sigmas, n, r)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = Sweep(args.count, args.seed)
    rng = random.Random(cfg.seed)
    done, fails, sizes = 0, [], Counter()
    while done < cfg.count:
        pres = sample(rng, cfg)
        if not 1 <= pres.degree <= cfg.max_degree:
            continue
        if not duality_report(pres).ok:
            fails.append(done)
        sizes[(pres.n, pres.degree)] += 1
        done += 1
    print(f"{done} modules, failures: {fails or 'none'}")
    print("by (n, degree):", dict(sorted(sizes.items())))
    return 1 if fails else 0


if __name__ == "__main__":
    sys.exit(main())
