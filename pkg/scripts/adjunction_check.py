"""Family erosion distance against the projection distance of the adjoint projection.

    python scripts/adjunction_check.py --family floor --cases 50 --shape 2,2

Also checks the adjunction inequality between the family and its derived
projection on a grid of translations.
"""

import argparse
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from erodist.category import F2, ZZ
from erodist.erosion import erosion_distance_family, erosion_distance_projection
from erodist.module import RankInvariant
from erodist.oracles import enumerate_small_modules
from erodist.poset import SuperlinearFamily, Translation, adjunction_violations, derive_adjoint_projection


@dataclass
class Config:
    family: str = "linear"
    cases: int = 50
    seed: int = 0
    shape: tuple = field(default=(4,))
    coefficients: str = "f2"


def run(cfg: Config):
    rng = random.Random(cfg.seed)
    fam = SuperlinearFamily(cfg.family, len(cfg.shape))
    proj = derive_adjoint_projection(fam)
    coeff = ZZ if cfg.coefficients == "z" else F2
    lattice = cfg.family == "floor"
    levels = [Fraction(k, 2) for k in range(9)]
    shifts = [Translation(t) for t in product(levels, repeat=fam.dim)]
    violations = adjunction_violations(proj, fam, [(t, eps) for t in shifts for eps in levels])
    mismatches = []
    for i in range(cfg.cases):
        f, g = (RankInvariant(enumerate_small_modules(rng.random(), cfg.shape, coeff, vanish_at_top=True),
                              lattice=lattice) for _ in range(2))
        a = erosion_distance_family(f, g, fam).distance
        b = erosion_distance_projection(f, g, proj).distance
        if a != b:
            mismatches.append((i, a, b))
    return violations, mismatches


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", choices=["linear", "floor"], default="linear")
    ap.add_argument("--cases", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--shape", default="4", help="comma-separated grid shape")
    ap.add_argument("--coefficients", choices=["f2", "z"], default="f2")
    args = ap.parse_args()
    cfg = Config(args.family, args.cases, args.seed, tuple(int(x) for x in args.shape.split(",")), args.coefficients)
    start = time.perf_counter()
    violations, mismatches = run(cfg)
    for i, a, b in mismatches:
        print(f"case {i}: family {a}, projection {b}")
    print(f"adjunction violations\t{len(violations)}")
    print(f"distance mismatches\t{len(mismatches)} of {cfg.cases}")
    print(f"seconds\t{time.perf_counter() - start:.1f}")


if __name__ == "__main__":
    main()
