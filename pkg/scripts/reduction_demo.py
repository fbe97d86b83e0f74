"""Run the canonical reduction on random cores and tabulate the terminals.

    python scripts/reduction_demo.py -q 2 --samples 500 --seed 1
"""
from __future__ import annotations

import argparse
import random
from collections import defaultdict

from hjlab.hypergraphs import eligible_core, k0
from hjlab.moves import canonical_reduction, check_trace_steps, terminal_form, trace_is_diverse
from hjlab.words import reduced_count


def random_core(rng: random.Random, q: int) -> str:
    while True:
        x = [rng.choice("23")]
        for _ in range(rng.randint(0, k0(q) - 1)):
            x.append(rng.choice([a for a in "123" if a != x[-1]]))
        s = "".join(x)
        if eligible_core(s, q):
            return s


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-q", type=int, default=1)
    ap.add_argument("--samples", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--show", help="print the full trace of this core and exit")
    args = ap.parse_args()

    if args.show:
        print(canonical_reduction(args.show, args.q).dump(), end="")
        return

    rng = random.Random(args.seed)
    terminals = defaultdict(set)
    steps = []
    problems = 0
    for _ in range(args.samples):
        x = random_core(rng, args.q)
        tr = canonical_reduction(x, args.q)
        rc = reduced_count(x, args.q + 1)
        terminals[rc].add(tr.terminal)
        steps.append((len(tr.b), len(tr.c)))
        problems += bool(check_trace_steps(tr)) or not trace_is_diverse(tr)
        problems += tr.terminal != terminal_form(rc, args.q)
    print(f"q={args.q}: {args.samples} cores, {len(terminals)} reduced counts seen, "
          f"{sum(len(v) > 1 for v in terminals.values())} with several terminals, {problems} problems")
    print(f"alteration steps: max {max(s[0] for s in steps)}, deletion steps: max {max(s[1] for s in steps)}")


if __name__ == "__main__":
    main()
