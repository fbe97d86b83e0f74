"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v`; the summary lines are printed
even when output capture is on.
"""
from __future__ import annotations

import random
import re
import subprocess
import sys
import time
from collections import defaultdict

import numpy as np
import pytest

from hjlab.coloring import (COLOURABLE, NOT_COLOURABLE, check_colour_move, dimacs_clauses,
                            exact_colourability, export_dimacs, is_proper, latin_violations,
                            linear_colouring, linear_colouring_search)
from hjlab.hypergraphs import (build_C, build_H, contract_hypergraph, eligible_core, gen_C_edges, k0,
                               latin_cliques)
from hjlab.lines import enumerate_star_patterns, star_pattern_to_edge, write_colouring
from hjlab.moves import (apply_alteration, apply_insertion, canonical_reduction, is_diverse,
                         terminal_form)
from hjlab.words import breakpoints, contract, expand, reduced_count


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
                  + (f" ({detail})" if detail else ""))
    return emit


def _witnesses(q: int, C) -> list[np.ndarray]:
    wits = [linear_colouring(c, q) for c in linear_colouring_search(q, C)]
    cert = exact_colourability(C, q + 1)
    if cert.verdict == COLOURABLE:
        wits.append(np.array(cert.witness.colours))
    return wits


def test_parity_dichotomy(report):
    details, ok = [], True

    t = time.perf_counter()
    c1 = exact_colourability(build_C(1), 2)
    dt = time.perf_counter() - t
    ok &= c1.verdict == NOT_COLOURABLE and dt < 1
    details.append(f"q=1 {c1.verdict} {dt:.2f}s")

    t = time.perf_counter()
    C3 = build_C(3)
    c3 = exact_colourability(C3, 4)
    dt = time.perf_counter() - t
    ok &= c3.verdict == NOT_COLOURABLE and dt < 600
    sat_solvers = pytest.importorskip("pysat.solvers")
    cnf = export_dimacs(C3, 4)
    clauses = [[int(t) for t in ln.split()[:-1]] for ln in cnf.splitlines() if ln and ln[0] not in "cp"]
    assert clauses == dimacs_clauses(C3, 4)
    with sat_solvers.Cadical153(bootstrap_with=clauses) as s:
        sat3 = s.solve()
    ok &= not sat3
    details.append(f"q=3 {c3.verdict} {dt:.2f}s, CNF {'SAT' if sat3 else 'UNSAT'}")

    t = time.perf_counter()
    C2 = build_C(2)
    c2 = exact_colourability(C2, 3)
    dt = time.perf_counter() - t
    ok &= c2.verdict == COLOURABLE and is_proper(C2, c2.witness)[0] and dt < 1
    details.append(f"q=2 {c2.verdict} {dt:.2f}s")

    t = time.perf_counter()
    C4 = build_C(4)
    lin = linear_colouring_search(4, C4)
    dt = time.perf_counter() - t
    ok &= bool(lin) and all(is_proper(C4, linear_colouring(c, 4))[0] for c in lin) and dt < 60
    details.append(f"q=4 {len(lin)} linear witnesses {dt:.2f}s")

    report(1, "parity dichotomy on C(q), q = 1..4", ok, "; ".join(details))
    assert ok


def test_edge_oracle_equivalence(report):
    t = time.perf_counter()
    bad = []
    for n in range(3, 9):
        for q in (1, 2, 3):
            brute = contract_hypergraph(build_H(3, n, q)).edge_labels()
            stars = set()
            for ell in enumerate_star_patterns(3, n, q):
                e = star_pattern_to_edge(ell, n, q)
                if e is not None:
                    stars.add(e.patterns)
            if stars != brute:
                bad.append((n, q))
    dt = time.perf_counter() - t
    ok = not bad and dt < 300
    report(2, "star-pattern edges equal contracted H edges, n = 3..8, q = 1..3", ok,
           f"mismatches {bad}, {dt:.1f}s")
    assert ok


def test_generator_soundness(report):
    def counts(word):
        w = re.sub(r"(.)\1+", r"\1", word)
        return tuple(w.count(a) for a in "123")

    total = failed = 0
    for q in (1, 2, 3, 4):
        mod = q + 1
        for spec, ell in gen_C_edges(q):
            total += 1
            for i, pt in enumerate(spec.points(q)):
                got = tuple(c % mod for c in counts(ell.replace("*", "123"[i])))
                if got != pt:
                    failed += 1
                    break
    ok = total > 0 and failed == 0
    report(3, "generator witnesses hit x + a_i e_i, q = 1..4", ok, f"{total - failed}/{total} pass")
    assert ok


def test_latin_cube(report):
    checked = violations = 0
    for q in (2, 4):
        C = build_C(q)
        for w in _witnesses(q, C):
            assert is_proper(C, w)[0]
            checked += 1
            violations += len(latin_violations(w, q))
    cliques = sum(1 for q in (2, 4) for _ in latin_cliques(q))
    ok = checked > 0 and violations == 0
    report(4, "axis cliques rainbow in every proper (q+1)-colouring, q = 2, 4", ok,
           f"{checked} witnesses over {cliques} cliques, {violations} violations")
    assert ok


def _random_core(rng: random.Random, q: int) -> str:
    while True:
        length = rng.randint(1, k0(q))
        x = [rng.choice("23")]
        while len(x) < length:
            x.append(rng.choice([a for a in "123" if a != x[-1]]))
        s = "".join(x)
        if eligible_core(s, q):
            return s


def test_canonical_reduction_invariance(report):
    rng = random.Random(20241015)
    t = time.perf_counter()
    pairs_done, bad = {}, []
    for q in (1, 2, 3):
        buckets: dict = defaultdict(list)
        pairs: set = set()
        while len(pairs) < 1000:
            x = _random_core(rng, q)
            rc = reduced_count(x, q + 1)
            partners = [y for y in buckets[rc] if y != x]
            if partners:
                pairs.add(tuple(sorted((rng.choice(partners), x))))
            if x not in buckets[rc]:
                buckets[rc].append(x)
        pairs = sorted(pairs)
        traces = {}
        for pair in pairs:
            for x in pair:
                if x not in traces:
                    traces[x] = canonical_reduction(x, q)
            t1, t2 = traces[pair[0]].terminal, traces[pair[1]].terminal
            want = terminal_form(reduced_count(pair[0], q + 1), q)
            if not (t1 == t2 == want):
                bad.append((q, pair))
        n = k0(q) * 13 + 4 + q
        for x, tr in traces.items():
            if not all(is_diverse(p, a, q, n) for p in tr.entries() for a in "123"):
                bad.append((q, x, "diversity"))
        pairs_done[q] = len(pairs)
    dt = time.perf_counter() - t
    ok = not bad and dt < 120
    report(5, "canonical reduction terminal depends only on the reduced count", ok,
           f"pairs {pairs_done}, failures {len(bad)}, {dt:.1f}s")
    assert ok


def test_colour_move_conformance(report):
    violations = witnesses = controls = caught = 0
    for q in (2, 4):
        C = build_C(q)
        wits = _witnesses(q, C)
        for w in wits:
            witnesses += 1
            violations += check_colour_move(w, q, C).violation_count
        base = wits[0]
        for v in range(len(C.vertices)):
            for shift in range(1, q + 1):
                bad = base.copy()
                bad[v] = (bad[v] + shift) % (q + 1)
                rep = check_colour_move(bad, q, C)
                controls += 1
                caught += (not rep.proper) or rep.violation_count > 0
    ok = witnesses > 0 and violations == 0 and caught == controls
    report(6, "colour-propagation rule holds on proper colourings; corrupted ones are caught", ok,
           f"{witnesses} witnesses, {violations} violations, controls caught {caught}/{controls}")
    assert ok


def test_worked_examples(report):
    checks = {
        "contract(11233322)": contract("11233322") == "1232",
        "T(13323)": breakpoints("13323") == {1, 3, 4},
        "expand(13323,{2,3,5,6},8)": expand("13323", {2, 3, 5, 6}, 8) == "11333233",
        "insertion 1212->13212": apply_insertion("1212", 1, 3) == "13212",
        "alteration 12312->13212": apply_alteration("12312", 3, 1) == "13212",
        "edge {12,132} from 1*2": star_pattern_to_edge("1*2", 3, 1).patterns == {"12", "132"},
        "121 3-diverse for q<=2, n>=5": all(is_diverse("121", 3, q, n) for q in (1, 2) for n in range(5, 12))
        and not is_diverse("121", 3, 3, 20),
    }
    failed = [k for k, v in checks.items() if not v]
    report(7, "worked examples", not failed, f"{len(checks) - len(failed)}/{len(checks)} exact")
    assert not failed


def test_cli_determinism(report, tmp_path):
    col = tmp_path / "col.txt"
    col.write_text(write_colouring(np.random.default_rng(5).integers(0, 2, 3**6), 3, 6, 2))
    graph = tmp_path / "c2.json"
    graph.write_text(build_C(2).to_json())
    commands = [
        ["enumerate", "--kind", "lines", "-m", "3", "-n", "4", "-q", "2"],
        ["build", "--kind", "C", "-q", "3"],
        ["build", "--kind", "P", "-n", "5", "-q", "2"],
        ["certify", "-q", "3", "-r", "4"],
        ["certify", str(graph), "-r", "3"],
        ["search", str(col), "-q", "2"],
        ["reduce", "2131", "-q", "2"],
        ["export", "-q", "2", "-r", "3"],
        ["linear", "-q", "4"],
        ["lift", "-q", "2", "-n", "5", "--functional", "1", "1", "1"],
        ["check", "-q", "2", "--functional", "1", "1", "1"],
    ]
    differing = []
    for cmd in commands:
        outs = set()
        for threads in ("1", "4", "1", "4"):
            proc = subprocess.run([sys.executable, "-m", "hjlab", *cmd, "--threads", threads],
                                  capture_output=True, check=False)
            outs.add((proc.returncode, proc.stdout))
        if len(outs) != 1:
            differing.append(cmd[0])
    ok = not differing
    report(8, "CLI output byte-identical across runs and --threads 1/4", ok,
           f"{len(commands)} invocations, differing: {differing}")
    assert ok
