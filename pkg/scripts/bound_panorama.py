"""Table of exact maxima, constructions and 2^t n^(n-t-2) for small (n, t)."""

from __future__ import annotations

import argparse

from treespread.errors import ResourceLimit
from treespread.extremal import verify_main_bound

DEFAULT_CASES = "4:0,4:1,4:2,4:3,5:1,5:2,5:3,6:2,6:3,6:4,6:5"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cases", default=DEFAULT_CASES, help="comma-separated n:t pairs")
    ap.add_argument("--budget", type=int, default=20_000_000)
    args = ap.parse_args()
    print(f"{'n':>3} {'t':>3} {'max':>6} {'exact':>6} {'constr':>7} {'bound':>8} {'within':>7}")
    for case in args.cases.split(","):
        n, t = map(int, case.split(":"))
        try:
            rep = verify_main_bound(n, t, budget=args.budget)
        except ResourceLimit as exc:
            print(f"{n:>3} {t:>3}  skipped ({exc})")
            continue
        print(
            f"{n:>3} {t:>3} {rep.exact_max:>6} {str(rep.exact):>6} {rep.construction_size:>7} "
            f"{str(rep.paper_bound):>8} {str(rep.within_bound):>7}"
        )


if __name__ == "__main__":
    main()
