"""Proper colourings of hypergraphs and the checkers for C(q) colourings.

Colours are 0-based.  A colouring of a hypergraph is an int array indexed
like its vertex tuple; colourings of C(q) use the `c_index` order.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import permutations, product
from math import gcd

import numpy as np

from .hypergraphs import SCHEMA_VERSION, Hypergraph, build_C, c_index, c_vertices, latin_cliques

NOT_COLOURABLE = "not-colourable"
COLOURABLE = "colourable"
INCONCLUSIVE = "inconclusive"
DEFAULT_MAX_VERTICES = 216
DEFAULT_MAX_NODES = 20_000_000


class PartialColouring(ValueError):
    pass


@dataclass
class Colouring:
    colours: tuple[int, ...]
    r: int

    def __post_init__(self):
        self.colours = tuple(int(c) for c in self.colours)
        bad = [c for c in self.colours if not 0 <= c < self.r]
        if bad:
            raise ValueError(f"colours {sorted(set(bad))} outside 0..{self.r - 1}")

    def __getitem__(self, v: int) -> int:
        return self.colours[v]

    def __len__(self) -> int:
        return len(self.colours)


@dataclass
class ColourCertificate:
    verdict: str
    r: int
    digest: str
    witness: Colouring | None = None
    nodes: int = 0
    seed_clique: tuple[int, ...] = ()
    wall_time: float = 0.0
    note: str = ""

    def to_dict(self, timing: bool = False) -> dict:
        # wall time changes run to run, so it is opt-in
        d = {"schema_version": SCHEMA_VERSION, "verdict": self.verdict, "r": self.r,
             "digest": self.digest, "nodes": self.nodes, "seed_clique": list(self.seed_clique),
             "witness": list(self.witness.colours) if self.witness else None}
        if self.note:
            d["note"] = self.note
        if timing:
            d["wall_time"] = round(self.wall_time, 6)
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), separators=(",", ":"))


def _as_colours(H: Hypergraph, colouring) -> np.ndarray:
    col = np.asarray(getattr(colouring, "colours", colouring), dtype=np.int64).reshape(-1)
    if col.size != len(H.vertices):
        raise PartialColouring(f"colouring has {col.size} entries for {len(H.vertices)} vertices")
    if (col < 0).any():
        raise PartialColouring("colouring leaves some vertex uncoloured")
    return col


def is_proper(H: Hypergraph, colouring) -> tuple[bool, tuple[int, ...] | None]:
    """(True, None) or (False, first monochromatic edge in edge order)."""
    col = _as_colours(H, colouring)
    for e in H.edges:
        c = col[e[0]]
        if all(col[v] == c for v in e[1:]):
            return False, e
    return True, None


# -- exact search ------------------------------------------------------------------

def _greedy_clique(H: Hypergraph) -> tuple[int, ...]:
    adj = [set() for _ in H.vertices]
    for e in H.edges:
        if len(e) == 2:
            adj[e[0]].add(e[1])
            adj[e[1]].add(e[0])
    if not any(adj):
        return ()
    start = max(range(len(adj)), key=lambda v: (len(adj[v]), -v))
    clique = [start]
    cand = set(adj[start])
    while cand:
        v = max(sorted(cand), key=lambda u: len(adj[u] & cand))
        clique.append(v)
        cand &= adj[v]
    return tuple(clique)


def _is_clique(H: Hypergraph, clique) -> bool:
    es = set(H.edges)
    return all((min(u, v), max(u, v)) in es for i, u in enumerate(clique) for v in clique[i + 1:])


def seed_clique(H: Hypergraph) -> tuple[int, ...]:
    """A clique of order-2 edges used for the lower bound and symmetry breaking.

    For C(q) this is the axis line through the origin along e_1; it is still
    checked against the edge set rather than assumed.
    """
    if H.kind == "C":
        clique = next(latin_cliques(H.q))
        if _is_clique(H, clique):
            return clique
    return _greedy_clique(H)


class _Search:
    """Backtracking with forward checking over bitmask domains.

    Vertex choice is smallest domain first, ties to larger degree then lower
    index.  A colour not yet used anywhere is only tried once (the lowest
    such), which is complete because unused colours are interchangeable.
    """

    def __init__(self, H: Hypergraph, r: int, max_nodes: int):
        self.H = H
        self.r = r
        self.max_nodes = max_nodes
        self.nv = len(H.vertices)
        self.edges = H.edges
        self.inc = H.incidence
        self.degree = [len(x) for x in self.inc]
        self.full = (1 << r) - 1
        self.dom = [self.full] * self.nv
        self.col = [-1] * self.nv
        self.used = [0] * r
        self.nodes = 0
        self.trail: list[tuple[int, int]] = []

    def _restrict(self, v: int, mask: int) -> bool:
        new = self.dom[v] & mask
        if new == self.dom[v]:
            return True
        self.trail.append((v, self.dom[v]))
        self.dom[v] = new
        return new != 0

    def assign(self, v: int, c: int) -> bool:
        """Colour v with c and prune; False on a wipe-out."""
        self.col[v] = c
        self.used[c] += 1
        if not self._restrict(v, 1 << c):
            return False
        bit = ~(1 << c)
        for ei in self.inc[v]:
            free = -1
            ok = True
            for u in self.edges[ei]:
                cu = self.col[u]
                if cu == -1:
                    if free != -1:
                        ok = False
                        break
                    free = u
                elif cu != c:
                    ok = False
                    break
            if not ok:
                continue
            if free == -1:
                return False
            if not self._restrict(free, bit):
                return False
        return True

    def undo(self, v: int, mark: int) -> None:
        while len(self.trail) > mark:
            u, d = self.trail.pop()
            self.dom[u] = d
        self.used[self.col[v]] -= 1
        self.col[v] = -1

    def pick(self) -> int:
        best, key = -1, None
        for v in range(self.nv):
            if self.col[v] == -1:
                k = (bin(self.dom[v]).count("1"), -self.degree[v], v)
                if key is None or k < key:
                    best, key = v, k
        return best

    def run(self) -> bool | None:
        v = self.pick()
        if v == -1:
            return True
        self.nodes += 1
        if self.nodes > self.max_nodes:
            return None
        fresh_tried = False
        d = self.dom[v]
        for c in range(self.r):
            if not d >> c & 1:
                continue
            if self.used[c] == 0:
                if fresh_tried:
                    continue
                fresh_tried = True
            mark = len(self.trail)
            if self.assign(v, c):
                res = self.run()
                if res is None or res:
                    if res is None:
                        self.undo(v, mark)
                    return res
            self.undo(v, mark)
        return False


def exact_colourability(H: Hypergraph, r: int, max_nodes: int = DEFAULT_MAX_NODES,
                        max_vertices: int = DEFAULT_MAX_VERTICES) -> ColourCertificate:
    """Decide whether H has a proper r-colouring.

    A clique of order-2 edges bigger than r settles the question at once;
    otherwise the clique is pre-coloured 0, 1, ... (any proper colouring can
    be permuted to agree with that) and the search runs from there.  Running
    out of nodes yields an inconclusive certificate, never a false verdict.
    """
    if r < 1:
        raise ValueError("r must be positive")
    nv = len(H.vertices)
    if nv > max_vertices:
        raise ValueError(f"{nv} vertices exceeds the search limit of {max_vertices}")
    t0 = time.perf_counter()
    digest = H.digest()
    clique = seed_clique(H)
    if len(clique) > r:
        return ColourCertificate(NOT_COLOURABLE, r, digest, nodes=0, seed_clique=clique,
                                 wall_time=time.perf_counter() - t0,
                                 note=f"clique of order {len(clique)} > r")
    if any(len(e) == 1 for e in H.edges):
        return ColourCertificate(NOT_COLOURABLE, r, digest, seed_clique=clique)
    s = _Search(H, r, max_nodes)
    ok = True
    for c, v in enumerate(clique):
        ok = s.assign(v, c)
        if not ok:
            break
    res = s.run() if ok else False
    dt = time.perf_counter() - t0
    if res is None:
        return ColourCertificate(INCONCLUSIVE, r, digest, nodes=s.nodes, seed_clique=clique,
                                 wall_time=dt, note=f"node budget {max_nodes} exhausted")
    if not res:
        return ColourCertificate(NOT_COLOURABLE, r, digest, nodes=s.nodes, seed_clique=clique, wall_time=dt)
    witness = Colouring(s.col, r)
    proper, bad = is_proper(H, witness)
    if not proper:
        raise AssertionError(f"search produced an improper colouring (edge {bad})")
    return ColourCertificate(COLOURABLE, r, digest, witness, s.nodes, clique, dt)


# -- linear colourings of C(q) ----------------------------------------------------

def linear_colouring(c, q: int) -> np.ndarray:
    """x -> c.x mod q+1 over Z_{q+1}^3 in vertex order."""
    verts = np.array(c_vertices(q), dtype=np.int64)
    return (verts @ np.asarray(c, dtype=np.int64)) % (q + 1)


def _edge_arrays(H: Hypergraph) -> list[np.ndarray]:
    by_size: dict[int, list] = {}
    for e in H.edges:
        by_size.setdefault(len(e), []).append(e)
    return [np.array(v, dtype=np.int64) for _, v in sorted(by_size.items())]


def linear_colouring_search(q: int, H: Hypergraph | None = None) -> list[tuple[int, int, int]]:
    """All c in Z_{q+1}^3 whose linear colouring is proper on C(q)."""
    H = build_C(q) if H is None else H
    arrays = _edge_arrays(H)
    found = []
    for c in product(range(q + 1), repeat=3):
        col = linear_colouring(c, q)
        mono = False
        for E in arrays:
            cols = col[E]
            if (cols == cols[:, :1]).all(axis=1).any():
                mono = True
                break
        if not mono:
            found.append(c)
    return found


# -- lifting to words ----------------------------------------------------------------

def word_counts(m: int, n: int, q: int) -> np.ndarray:
    """Reduced count of contract(w) for every w in [m]^n, in word order."""
    idx = np.arange(m**n, dtype=np.int64)
    digits = np.empty((m**n, n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        idx, digits[:, j] = np.divmod(idx, m)
    starts = np.ones_like(digits, dtype=bool)
    starts[:, 1:] = digits[:, 1:] != digits[:, :-1]
    counts = np.stack([((digits == a) & starts).sum(axis=1) for a in range(m)], axis=1)
    return counts % (q + 1)


def lift_colouring(f, n: int, q: int, m: int = 3, budget: int = 3**14) -> np.ndarray:
    """w -> f(reduced count of contract(w)), as a colouring of [m]^n in word order.

    `f` is indexed by the c_index order of Z_{q+1}^3 (m = 3 only).
    """
    if m != 3:
        raise ValueError("lifting is defined through Z_{q+1}^3, so m must be 3")
    if m**n > budget:
        raise ValueError(f"[3]^{n} has {m**n} words, over the budget of {budget}")
    f = np.asarray(getattr(f, "colours", f), dtype=np.int64)
    if f.size != (q + 1) ** 3:
        raise ValueError(f"f must have (q+1)^3 = {(q + 1) ** 3} entries")
    rc = word_counts(m, n, q)
    mod = q + 1
    return f[rc[:, 0] * mod * mod + rc[:, 1] * mod + rc[:, 2]]


# -- certificate checkers for C(q) colourings -------------------------------------

def move_lattice(x, a: int, b: int, axes, q: int) -> list[tuple[int, int, int]]:
    """p(s0,s1) = x + s0(-(a+b)e_i0 - b e_ib) + s1(-a e_ia + b e_ib) for s0,s1 in 0..q."""
    ia, ib, i0 = axes
    mod = q + 1
    pts = []
    for s0 in range(mod):
        for s1 in range(mod):
            p = list(x)
            p[i0] -= s0 * (a + b)
            p[ib] += -s0 * b + s1 * b
            p[ia] -= s1 * a
            pts.append(tuple(v % mod for v in p))
    return pts


def colour_move_params(q: int):
    for b in range(q + 1):
        for a in range(-b, b + 1):
            if max(b, a + b) <= q:
                yield a, b


@dataclass
class MoveReport:
    proper: bool
    bad_edge: tuple[int, ...] | None = None
    premises: int = 0
    violations: list = field(default_factory=list)
    violation_count: int = 0

    @property
    def ok(self) -> bool:
        return self.proper and self.violation_count == 0


def check_colour_move(colouring, q: int, H: Hypergraph | None = None, keep: int = 20) -> MoveReport:
    """Test the colour-propagation rule on every (x, a, b, axes) whose premise holds.

    If chi(x) = chi(x - a e_ia + b e_ib) then every lattice point p(s0,s1)
    must share that colour.  An improper input is reported, not checked.
    """
    H = build_C(q) if H is None else H
    proper, bad = is_proper(H, colouring)
    if not proper:
        return MoveReport(False, bad)
    col = _as_colours(H, colouring)
    mod = q + 1
    rep = MoveReport(True)
    for x in c_vertices(q):
        cx = col[c_index(x, q)]
        for axes in permutations(range(3)):
            ia, ib, _ = axes
            for a, b in colour_move_params(q):
                y = list(x)
                y[ia] -= a
                y[ib] += b
                if col[c_index([v % mod for v in y], q)] != cx:
                    continue
                rep.premises += 1
                for p in move_lattice(x, a, b, axes, q):
                    if col[c_index(p, q)] != cx:
                        rep.violation_count += 1
                        if len(rep.violations) < keep:
                            rep.violations.append({"x": x, "a": a, "b": b,
                                                   "axes": tuple(i + 1 for i in axes), "point": p})
                        break
    return rep


@dataclass
class GcdReport:
    proper: bool
    j0_candidates: tuple[int, ...] = ()
    j0: int | None = None
    lattice_monochromatic: bool = False
    sizes: tuple[int, int, int] = (0, 0, 0)
    gcds: tuple[int, int] = (0, 0)
    formulas: dict = field(default_factory=dict)

    @property
    def sizes_equal(self) -> bool:
        return len(set(self.sizes)) == 1

    @property
    def ok(self) -> bool:
        return (self.proper and self.j0 is not None and self.j0 != 0 and self.lattice_monochromatic
                and self.sizes_equal and self.gcds == (1, 1))


def check_gcd_obstruction(colouring, q: int, H: Hypergraph | None = None) -> GcdReport:
    """Locate j0 with chi(j0 e_2) = chi(-e_1) and measure the move lattice it spans.

    Uses a = -1, b = j0, axes (1, 2, 3), x = -e_1.  The sizes of the three
    coordinate projections of the lattice are compared with each other, and
    the size along the third axis with both (q+1)/gcd(j0-1,q+1) and
    (q-1)/gcd(j0-1,q+1).
    """
    H = build_C(q) if H is None else H
    proper, _ = is_proper(H, colouring)
    if not proper:
        return GcdReport(False)
    col = _as_colours(H, colouring)
    mod = q + 1
    x = (q, 0, 0)  # -e_1
    target = col[c_index(x, q)]
    cands = tuple(j for j in range(mod) if col[c_index((0, j, 0), q)] == target)
    rep = GcdReport(True, cands)
    if len(cands) != 1:
        return rep
    j0 = rep.j0 = cands[0]
    if j0 == 0:
        return rep
    pts = move_lattice(x, -1, j0, (0, 1, 2), q)
    rep.lattice_monochromatic = all(col[c_index(p, q)] == target for p in pts)
    rep.sizes = tuple(len({p[i] for p in pts}) for i in range(3))
    rep.gcds = (gcd(j0, mod), gcd(j0 - 1, mod))
    g0 = gcd(j0 - 1, mod)
    rep.formulas = {
        "A_a=q+1": rep.sizes[0] == mod,
        "A_b=(q+1)/gcd(j0,q+1)": rep.sizes[1] == mod // rep.gcds[0],
        "A_0=(q+1)/gcd(j0-1,q+1)": rep.sizes[2] == mod // g0,
        "A_0=(q-1)/gcd(j0-1,q+1)": (q - 1) % g0 == 0 and rep.sizes[2] == (q - 1) // g0,
    }
    return rep


def latin_violations(colouring, q: int) -> list[tuple[int, ...]]:
    """Axis cliques of C(q) whose colours are not pairwise distinct."""
    col = np.asarray(getattr(colouring, "colours", colouring), dtype=np.int64)
    return [cl for cl in latin_cliques(q) if len(set(col[list(cl)].tolist())) != len(cl)]


# -- CNF export ------------------------------------------------------------------------

def dimacs_clauses(H: Hypergraph, r: int) -> list[list[int]]:
    """Variable v*r + c + 1 means vertex v has colour c."""
    def var(v, c):
        return v * r + c + 1

    clauses = []
    for v in range(len(H.vertices)):
        clauses.append([var(v, c) for c in range(r)])
        for c1 in range(r):
            for c2 in range(c1 + 1, r):
                clauses.append([-var(v, c1), -var(v, c2)])
    for e in H.edges:
        for c in range(r):
            clauses.append([-var(v, c) for v in e])
    return clauses


def export_dimacs(H: Hypergraph, r: int) -> str:
    clauses = dimacs_clauses(H, r)
    nvars = len(H.vertices) * r
    out = [f"c hypergraph {H.kind} q {H.q} vertices {len(H.vertices)} edges {len(H.edges)}",
           f"c digest {H.digest()}",
           f"c colours {r}; variable v*{r}+c+1 means vertex v gets colour c",
           f"p cnf {nvars} {len(clauses)}"]
    out += [" ".join(map(str, cl)) + " 0" for cl in clauses]
    return "\n".join(out) + "\n"


def decode_model(model, nvertices: int, r: int) -> Colouring:
    """Turn a satisfying assignment back into a colouring."""
    pos = {lit for lit in model if lit > 0}
    cols = []
    for v in range(nvertices):
        cs = [c for c in range(r) if v * r + c + 1 in pos]
        if len(cs) != 1:
            raise ValueError(f"model gives vertex {v} colours {cs}")
        cols.append(cs[0])
    return Colouring(cols, r)
