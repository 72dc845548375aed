"""Erosion distance of H0 sublevel modules against the natural pseudo-distance.

    python scripts/npd_lower_bound.py --cases 200 --points 5 --top 4

Size pairs live on finite discrete spaces with values in {0..top}^dim. For each
pair the script reports the gap between the two distances and checks that the
restricted and full erosion distances agree.
"""

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from erodist.category import F2, ZZ
from erodist.filtration import SimplicialComplex, SizePair, npd_bruteforce, size_pair_erosion_distance


@dataclass
class Config:
    cases: int = 200
    seed: int = 0
    points: int = 5
    top: int = 4
    dim: int = 2
    coefficients: str = "z"


def random_pair(rng, cfg: Config):
    n = rng.randint(1, cfg.points)
    X = SimplicialComplex.discrete(range(n))
    return tuple(SizePair(X, {x: tuple(rng.randint(0, cfg.top) for _ in range(cfg.dim)) for x in range(n)})
                 for _ in range(2))


def run(cfg: Config) -> Counter:
    rng = random.Random(cfg.seed)
    coeff = ZZ if cfg.coefficients == "z" else F2
    gaps = Counter()
    for _ in range(cfg.cases):
        S1, S2 = random_pair(rng, cfg)
        d_e = size_pair_erosion_distance(S1, S2, 0, coeff)
        d_r = size_pair_erosion_distance(S1, S2, 0, coeff, restricted=True)
        npd = npd_bruteforce(S1, S2)
        if d_e > npd or d_r != d_e:
            gaps["failures"] += 1
        gaps[npd - d_e] += 1
    return gaps


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Config()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=type(default), default=default)
    cfg = Config(**vars(ap.parse_args()))
    gaps = run(cfg)
    failures = gaps.pop("failures", 0)
    for gap, n in sorted(gaps.items()):
        print(f"npd - erosion = {gap}\t{n}")
    print(f"failures\t{failures}")


if __name__ == "__main__":
    main()
