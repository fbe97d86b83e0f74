"""Lift proper colourings of C(q) to [3]^n and look for monochromatic q-fold lines.

Records the outcome only; nothing is promised at such small n.

    python scripts/lift_search.py -q 2 --nmax 8
"""
from __future__ import annotations

import argparse

from hjlab.coloring import lift_colouring, linear_colouring, linear_colouring_search
from hjlab.lines import find_monochromatic_line


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-q", type=int, default=2)
    ap.add_argument("--nmin", type=int, default=2)
    ap.add_argument("--nmax", type=int, default=7)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    funcs = linear_colouring_search(args.q)
    if not funcs:
        print(f"q={args.q}: no linear proper colouring of C(q)")
        return
    for c in funcs:
        f = linear_colouring(c, args.q)
        for n in range(args.nmin, args.nmax + 1):
            for fold in range(1, args.q + 1):
                ell = find_monochromatic_line(lift_colouring(f, n, args.q), 3, n, fold, threads=args.threads)
                print(f"c={c} n={n} q-fold={fold}: {ell or 'none'}")


if __name__ == "__main__":
    main()
