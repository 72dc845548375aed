"""Compare erosion and interleaving distances on random one-parameter modules.

    python scripts/stability_experiment.py --cases 500 --seed 1

Prints one line per pair where the two distances differ, then a summary.
"""

import argparse
import random
from dataclasses import dataclass

from erodist.category import F2
from erodist.erosion import erosion_distance_family
from erodist.onedim import ConstructibleModule, interleaving_distance_1d
from erodist.poset import INF, SuperlinearFamily


@dataclass
class Config:
    cases: int = 200
    seed: int = 0
    max_bars: int = 3
    span: int = 8
    max_length: int = 5
    p_infinite: float = 0.1


def jitter(rng, bar):
    b, d = bar
    b2 = b + rng.randint(-1, 1)
    return b2, d if d == INF else max(b2 + 1, d + rng.randint(-1, 1))


def nearby_pair(rng, cfg: Config):
    bars = []
    for _ in range(rng.randint(1, cfg.max_bars)):
        b = rng.randint(0, cfg.span)
        bars.append((b, INF if rng.random() < cfg.p_infinite else b + rng.randint(1, cfg.max_length)))
    other = [jitter(rng, x) for x in bars] + [jitter(rng, x) for x in bars if rng.random() < 0.5]
    return bars, other


def run(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    fam = SuperlinearFamily.linear(1)
    counts = {"strict": 0, "equal": 0, "violations": 0}
    for i in range(cfg.cases):
        a, b = nearby_pair(rng, cfg)
        F, G = ConstructibleModule.from_bars(a, F2), ConstructibleModule.from_bars(b, F2)
        d_e = erosion_distance_family(F.rank_invariant, G.rank_invariant, fam).distance
        d_i = interleaving_distance_1d(F, G)
        if d_e < d_i:
            counts["strict"] += 1
            print(f"{i}\t{a}\t{b}\terosion={d_e}\tinterleaving={d_i}")
        elif d_e == d_i:
            counts["equal"] += 1
        else:
            counts["violations"] += 1
            print(f"{i}\tVIOLATION\t{a}\t{b}\terosion={d_e}\tinterleaving={d_i}")
    return counts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", type=int, default=Config.cases)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--max-bars", type=int, default=Config.max_bars)
    args = ap.parse_args()
    counts = run(Config(cases=args.cases, seed=args.seed, max_bars=args.max_bars))
    print("\t".join(f"{k}={v}" for k, v in counts.items()))


if __name__ == "__main__":
    main()
