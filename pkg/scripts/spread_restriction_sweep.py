"""Random subfamilies of T_n: spread-restriction subset sizes against the bound."""

from __future__ import annotations

import argparse
import math
import random
from collections import Counter
from fractions import Fraction

from treespread.family import spanning_tree_family
from treespread.spread import find_spread_restriction


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--r-prime", type=Fraction, default=Fraction(3, 2))
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    u = spanning_tree_family(args.n)
    r = Fraction(args.n, 2)
    rng = random.Random(args.seed)
    members = list(u.members)
    sizes: Counter[int] = Counter()
    slack = []
    for _ in range(args.trials):
        a = u.with_members(rng.sample(members, rng.randint(1, len(members))))
        res = find_spread_restriction(a, u, r, args.r_prime)
        sizes[len(res.subset)] += 1
        slack.append(res.size_bound - len(res.subset))
        if not (res.size_bound_holds and res.quotient_report.holds):
            print(f"violation on a family of size {len(a)}")
    print(f"n={args.n} r={r} r'={args.r_prime} trials={args.trials}")
    print(f"subset sizes: {dict(sorted(sizes.items()))}")
    print(f"min slack to log bound: {min(slack):.3f}, mean {math.fsum(slack) / len(slack):.3f}")


if __name__ == "__main__":
    main()
