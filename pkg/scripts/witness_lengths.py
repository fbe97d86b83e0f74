"""Lengths of the C(q) edge witnesses against k0 = 10q + 6.

Three constructions: the block witness with lifted fillers, the compact one
(shortest exponents for the bare counts) and the buffered one (shortest
exponents for the counts after wrapping as 1.ell.buffer).

    python scripts/witness_lengths.py --qmax 4
"""
from __future__ import annotations

import argparse

from hjlab.hypergraphs import buffered_witness, gen_C_edges, k0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qmax", type=int, default=4)
    args = ap.parse_args()
    print(f"{'q':>2} {'k0':>3} {'specs':>6} {'block max':>9} {'over k0':>7} {'compact max':>11} {'buffered max':>12}")
    for q in range(1, args.qmax + 1):
        block = [len(ell) for _, ell in gen_C_edges(q)]
        compact = [len(ell) for _, ell in gen_C_edges(q, compact=True)]
        buffered = [len(buffered_witness(s.base, s.offsets, q)) for s, _ in gen_C_edges(q, compact=True)]
        over = sum(n > k0(q) for n in block)
        print(f"{q:>2} {k0(q):>3} {len(block):>6} {max(block):>9} {over:>7} {max(compact):>11} {max(buffered):>12}")


if __name__ == "__main__":
    main()
