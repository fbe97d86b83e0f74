"""Exact (q+1)-colourability of C(q) for a range of q, with SAT cross-checks.

    python scripts/parity_dichotomy.py --qmax 4
"""
from __future__ import annotations

import argparse
import time

from hjlab.coloring import COLOURABLE, dimacs_clauses, exact_colourability, linear_colouring_search
from hjlab.hypergraphs import build_C


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qmax", type=int, default=4)
    ap.add_argument("--sat", action="store_true", help="also ask CaDiCaL (python-sat)")
    args = ap.parse_args()

    print(f"{'q':>2} {'|V|':>4} {'|E|':>6} {'verdict':>15} {'nodes':>7} {'secs':>6} {'linear':>6} sat")
    for q in range(1, args.qmax + 1):
        H = build_C(q)
        t = time.perf_counter()
        cert = exact_colourability(H, q + 1)
        dt = time.perf_counter() - t
        lin = linear_colouring_search(q, H)
        sat = ""
        if args.sat:
            from pysat.solvers import Cadical153
            with Cadical153(bootstrap_with=dimacs_clauses(H, q + 1)) as s:
                sat = "SAT" if s.solve() else "UNSAT"
            assert (sat == "SAT") == (cert.verdict == COLOURABLE)
        print(f"{q:>2} {len(H.vertices):>4} {len(H.edges):>6} {cert.verdict:>15} {cert.nodes:>7} "
              f"{dt:>6.2f} {len(lin):>6} {sat}")


if __name__ == "__main__":
    main()
