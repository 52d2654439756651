"""Smallest n with (1 - 4/n)^(n/6) >= 1/2, found with exact integers."""

from __future__ import annotations

import argparse

from treespread.lll import degree_condition_holds


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--limit", type=int, default=1000)
    args = ap.parse_args()
    holds = [n for n in range(5, args.limit + 1) if degree_condition_holds(n)]
    if not holds:
        print(f"no n in [5, {args.limit}] satisfies the condition")
        return
    first = holds[0]
    gaps = [n for n in range(first, args.limit + 1) if not degree_condition_holds(n)]
    print(f"first n: {first}")
    print(f"fails for 5..{first - 1}")
    print(f"failures at or above {first} up to {args.limit}: {gaps or 'none'}")


if __name__ == "__main__":
    main()
