"""The hypergraphs H(m,n,q), P(m,n,q) and C(q), plus buffered patterns.

C(q) lives on Z_{q+1}^3.  It is built from explicit edge witnesses (one
star pattern per offset triple) rather than by contracting P(3,n,q) at
n ~ 13*k0, which is far beyond exhaustive reach.
"""
from __future__ import annotations

import hashlib
import json
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product

from .lines import STAR, enumerate_lines, enumerate_star_patterns, line_image, star_pattern_to_edge
from .words import contract, enumerate_patterns, reduced_count, word_index, words

SCHEMA_VERSION = 1
DEFAULT_H_BUDGET = 3**14
DEFAULT_C_BUDGET = 7**3  # q <= 6


class BudgetExceeded(ValueError):
    pass


def k0(q: int) -> int:
    return 10 * q + 6


def max_buffered_length(q: int) -> int:
    """Longest buffered pattern 1.x.(23)^2k0(13)^2k0(21)^2k0.231 with |x| <= k0."""
    return 13 * k0(q) + 4


def ambient_length(q: int) -> int:
    return max_buffered_length(q) + q


@dataclass(frozen=True)
class Hypergraph:
    kind: str
    vertices: tuple
    edges: tuple[tuple[int, ...], ...]
    q: int
    m: int | None = None
    n: int | None = None

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def incidence(self) -> list[list[int]]:
        inc: list[list[int]] = [[] for _ in self.vertices]
        for e_idx, e in enumerate(self.edges):
            for v in e:
                inc[v].append(e_idx)
        return inc

    def edge_labels(self) -> frozenset[frozenset]:
        return frozenset(frozenset(self.vertices[v] for v in e) for e in self.edges)

    def has_edge(self, labels: Iterable) -> bool:
        key = tuple(sorted(self.index[v] for v in set(labels)))
        return key in self._edge_set

    @cached_property
    def _edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def to_dict(self) -> dict:
        d = {"schema_version": SCHEMA_VERSION, "kind": self.kind}
        if self.m is not None:
            d["m"] = self.m
        if self.n is not None:
            d["n"] = self.n
        d["q"] = self.q
        d["vertices"] = [list(v) if isinstance(v, tuple) else v for v in self.vertices]
        d["edges"] = [list(e) for e in self.edges]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    def to_text(self) -> str:
        """DIMACS-style edge listing with 1-based vertex numbers."""
        out = [f"c kind {self.kind} q {self.q} digest {self.digest()}",
               f"p edge {len(self.vertices)} {len(self.edges)}"]
        out += ["e " + " ".join(str(v + 1) for v in e) for e in self.edges]
        return "\n".join(out) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> Hypergraph:
        verts = tuple(tuple(v) if isinstance(v, list) else v for v in d["vertices"])
        return make_hypergraph(d["kind"], verts, (tuple(e) for e in d["edges"]),
                               q=d["q"], m=d.get("m"), n=d.get("n"))

    @classmethod
    def from_json(cls, text: str) -> Hypergraph:
        return cls.from_dict(json.loads(text))


def make_hypergraph(kind, vertices, edges, q, m=None, n=None) -> Hypergraph:
    """Canonicalise: dedup edges, drop edges with fewer than two vertices, sort."""
    nv = len(vertices)
    canon = set()
    for e in edges:
        s = tuple(sorted(set(e)))
        if len(s) < 2:
            continue
        if s[0] < 0 or s[-1] >= nv:
            raise ValueError(f"edge {s} refers to a vertex outside 0..{nv - 1}")
        canon.add(s)
    ordered = tuple(sorted(canon, key=lambda e: (len(e), e)))
    return Hypergraph(kind, tuple(vertices), ordered, q, m, n)


def _check_budget(size: int, budget: int | None, default: int, what: str) -> None:
    limit = default if budget is None else budget
    if size > limit:
        raise BudgetExceeded(f"{what} has {size} vertices, over the budget of {limit}")


# -- H and P --------------------------------------------------------------------

def build_H(m: int, n: int, q: int, budget: int | None = None) -> Hypergraph:
    _check_budget(m**n, budget, DEFAULT_H_BUDGET, f"H({m},{n},{q})")
    verts = tuple(words(m, n))
    letters = [str(a) for a in range(1, m + 1)]
    edges = (tuple(word_index(ell.replace(STAR, a), m) for a in letters)
             for ell in enumerate_lines(m, n, q))
    return make_hypergraph("H", verts, edges, q, m, n)


def build_P(m: int, n: int, q: int, method: str = "lines", budget: int | None = None) -> Hypergraph:
    """P(m,n,q): H with words identified by contraction.

    method="lines" contracts every q-fold line of [m]^n; method="stars" walks
    the star patterns of length <= n directly, which is much cheaper.
    """
    _check_budget(m**n, budget, DEFAULT_H_BUDGET, f"P({m},{n},{q})")
    verts = tuple(enumerate_patterns(m, n))
    idx = {p: i for i, p in enumerate(verts)}
    if method == "lines":
        images = {line_image(ell, m) for ell in enumerate_lines(m, n, q)}
    elif method == "stars":
        images = set()
        for ell in enumerate_star_patterns(m, n, q):
            e = star_pattern_to_edge(ell, n, q, m)
            if e is not None:
                images.add(e.patterns)
    else:
        raise ValueError(f"unknown method {method!r}")
    edges = (tuple(idx[p] for p in img) for img in images)
    return make_hypergraph("P", verts, edges, q, m, n)


def contract_hypergraph(H: Hypergraph) -> Hypergraph:
    """Image of a word hypergraph under contraction (P built from an explicit H)."""
    if H.kind != "H":
        raise ValueError("expected a hypergraph of kind H")
    verts = tuple(enumerate_patterns(H.m, H.n))
    idx = {p: i for i, p in enumerate(verts)}
    edges = (tuple(idx[contract(H.vertices[v])] for v in e) for e in H.edges)
    return make_hypergraph("P", verts, edges, H.q, H.m, H.n)


# -- buffered patterns ------------------------------------------------------------

def buffer_tail(q: int) -> str:
    k = k0(q)
    return "23" * (2 * k) + "13" * (2 * k) + "21" * (2 * k) + "231"


@dataclass(frozen=True)
class BufferedPattern:
    core: str
    q: int
    full: str = field(repr=False)

    @property
    def k0(self) -> int:
        return k0(self.q)


def eligible_core(x: str, q: int, rule: str = "junction") -> bool:
    """Can `x` be wrapped as 1.x.buffer?

    rule="junction" demands x_1 != 1 and x_last != 2, which is exactly what
    keeps the wrapped word a pattern.  rule="swapped" is the alternative
    condition x_1 != 2 and x_last != 1; it is offered for comparison only.
    """
    if not x or len(x) > k0(q) or set(x) - set("123"):
        return False
    if any(a == b for a, b in zip(x, x[1:])):
        return False
    if rule == "junction":
        return x[0] != "1" and x[-1] != "2"
    if rule == "swapped":
        return x[0] != "2" and x[-1] != "1"
    raise ValueError(f"unknown rule {rule!r}")


def make_buffered(x: str, q: int) -> BufferedPattern:
    if not x or set(x) - set("123") or any(a == b for a, b in zip(x, x[1:])):
        raise ValueError(f"core {x!r} is not a pattern over 1..3")
    if len(x) > k0(q):
        raise ValueError(f"core {x!r} is longer than k0 = {k0(q)}")
    if x[0] == "1" or x[-1] == "2":
        raise ValueError(f"core {x!r} must not start with 1 or end with 2 "
                         "(the wrapped word would repeat a letter)")
    full = "1" + x + buffer_tail(q)
    assert all(a != b for a, b in zip(full, full[1:]))
    return BufferedPattern(x, q, full)


# -- C(q) -----------------------------------------------------------------------------

AXES = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


@dataclass(frozen=True)
class CEdgeSpec:
    base: tuple[int, int, int]
    offsets: tuple[int, int, int]

    def points(self, q: int) -> tuple[tuple[int, int, int], ...]:
        mod = q + 1
        return tuple(
            tuple((self.base[j] + (self.offsets[i] if i == j else 0)) % mod for j in range(3))
            for i in range(3))


def admissible_offsets(q: int) -> Iterator[tuple[int, int, int]]:
    """(a1,a2,a3) with 0 < a1+a2+a3 <= q and every pairwise sum >= 0."""
    rng = range(-q, q + 1)
    for a in product(rng, repeat=3):
        if 0 < sum(a) <= q and a[0] + a[1] >= 0 and a[0] + a[2] >= 0 and a[1] + a[2] >= 0:
            yield a


def _fill(e: int, q: int) -> int:
    # filler exponents only matter mod q+1; lift negatives
    while e < 0:
        e += q + 1
    return e


def c_edge_witness(x: tuple[int, int, int], a: tuple[int, int, int], q: int) -> str:
    """A star pattern whose three substitutions have reduced counts x + a_i e_i.

    With all offsets non-negative, group i is (s_i)^{a_i} (b_i)^{x_i}
    (f_i)^{q+1-x_i-a_i} for the star block s = 2*3, 1*3, 2*1, letter block
    b = 213, 123, 231 and filler f = 23, 13, 21.  A negative offset a_i = -k
    becomes a run (i*i)^k, with k-1 extra letter blocks taken out of that
    group's filler so the count of letter i comes out right.
    """
    mod = q + 1
    star_blk = ("2*3", "1*3", "2*1")
    letter_blk = ("213", "123", "231")
    filler = ("23", "13", "21")
    neg = [i for i in range(3) if a[i] < 0]
    if len(neg) > 1:
        raise ValueError(f"offsets {a} have two negative entries")
    groups = []
    if not neg:
        for i in range(3):
            groups.append(star_blk[i] * a[i] + letter_blk[i] * x[i]
                          + filler[i] * _fill(mod - x[i] - a[i], q))
    else:
        i0 = neg[0]
        k = -a[i0]
        if any(a[j] < k for j in range(3) if j != i0):
            raise ValueError(f"offsets {a} violate the pairwise-sum condition")
        run = f"{i0 + 1}*{i0 + 1}" * k
        for i in range(3):
            if i == i0:
                body = letter_blk[i] * (x[i] + k - 1) + filler[i] * (q + 2 - x[i])
                # placement keeps every junction between distinct letters
                groups.append(body + run if i == 2 else run + body)
            else:
                groups.append(star_blk[i] * (a[i] - k) + letter_blk[i] * x[i]
                              + filler[i] * _fill(mod - x[i] - a[i], q))
    return contract("".join(groups))


class WitnessError(AssertionError):
    pass


def witness_counts(ell: str, q: int) -> tuple[tuple[int, ...], ...]:
    return tuple(reduced_count(contract(ell.replace(STAR, a)), q + 1) for a in "123")


@lru_cache(maxsize=None)
def _exponent_table(q: int) -> dict:
    """Residue d -> (T, f1, f2, f3) choices, shortest first.

    T letter blocks add (1,1,1) each; filler i adds (1,1,1) - e_i.  A choice
    realises d when T + sum_{i != j} f_i = d_j (mod q+1) for every j.
    """
    mod = q + 1
    table: dict = {}
    for T in range(mod):
        for f in product(range(mod), repeat=3):
            d = tuple((T + sum(f) - f[j]) % mod for j in range(3))
            table.setdefault(d, []).append((3 * T + 2 * sum(f), T, f))
    return {d: [(T, f) for _, T, f in sorted(v)] for d, v in table.items()}


def compact_witness(x: tuple[int, int, int], a: tuple[int, int, int], q: int) -> str:
    """Same block grammar as `c_edge_witness`, exponents chosen to be short.

    Only the residues of the exponents matter, so the letter/filler counts
    are the shortest solution of the count congruences.  Candidates are
    tried in length order until one passes the substitution check.
    """
    mod = q + 1
    star_blk = ("2*3", "1*3", "2*1")
    letter_blk = ("213", "123", "231")
    filler = ("23", "13", "21")
    neg = [i for i in range(3) if a[i] < 0]
    i0 = neg[0] if neg else None
    k = -a[i0] if neg else 0
    sigma = [0 if i == i0 else a[i] - k for i in range(3)]
    run = f"{i0 + 1}*{i0 + 1}" * k if neg else ""
    fixed = [contract(star_blk[i].replace(STAR, "1")) for i in range(3)]
    run_one = reduced_count(contract(run.replace(STAR, "1")), mod) if run else (0, 0, 0)
    want = CEdgeSpec(x, a).points(q)
    d = tuple((want[0][j] - run_one[j] - sum(sigma[i] * reduced_count(fixed[i], mod)[j]
                                             for i in range(3))) % mod for j in range(3))
    for T, f in _exponent_table(q)[d]:
        groups = []
        for i in range(3):
            body = star_blk[i] * sigma[i] + letter_blk[i] * (T if i == 0 else 0) + filler[i] * f[i]
            if i == i0:
                body = body + run if i == 2 else run + body
            groups.append(body)
        ell = contract("".join(groups))
        if witness_counts(ell, q) == want and _buffers_cleanly(ell, a, q):
            return ell
    raise WitnessError(f"no compact witness for x={x}, a={a}")


@lru_cache(maxsize=None)
def _buffered_witnesses(a: tuple[int, int, int], q: int) -> dict:
    """Base -> shortest block-grammar witness whose buffered points are base + a_i e_i."""
    mod = q + 1
    star_blk = ("2*3", "1*3", "2*1")
    letter_blk = ("213", "123", "231")
    filler = ("23", "13", "21")
    neg = [i for i in range(3) if a[i] < 0]
    i0 = neg[0] if neg else None
    k = -a[i0] if neg else 0
    sigma = [0 if i == i0 else a[i] - k for i in range(3)]
    run = f"{i0 + 1}*{i0 + 1}" * k if neg else ""
    cands = []
    for T in range(mod):
        for f in product(range(mod), repeat=3):
            groups = []
            for i in range(3):
                body = star_blk[i] * sigma[i] + letter_blk[i] * (T if i == 0 else 0) + filler[i] * f[i]
                if i == i0:
                    body = body + run if i == 2 else run + body
                groups.append(body)
            ell = contract("".join(groups))
            cands.append((len(ell), ell))
    found: dict = {}
    for _, ell in sorted(cands):
        cores = [buffered_core(ell.replace(STAR, c)) for c in "123"]
        if not all(0 < len(y) <= k0(q) for y in cores):
            continue
        labels = [reduced_count(y, mod) for y in cores]
        base = tuple((labels[0][j] - (a[0] if j == 0 else 0)) % mod for j in range(3))
        if tuple(labels) == CEdgeSpec(base, a).points(q):
            found.setdefault(base, ell)
    return found


def buffered_witness(x: tuple[int, int, int], a: tuple[int, int, int], q: int) -> str:
    """A witness ell, |ell| <= k0, such that 1.ell.buffer realises the edge (x, a) itself.

    `compact_witness` matches counts of the bare substitutions; here the
    counts are read off the buffered cores, which is what an edge of C needs.
    """
    found = _buffered_witnesses(tuple(a), q)
    key = tuple(v % (q + 1) for v in x)
    if key not in found:
        raise WitnessError(f"no buffered witness for x={x}, a={a}")
    return found[key]


def buffered_core(s: str) -> str:
    """Core of contract(1.s.buffer); the buffer starts with 2, and contraction is local."""
    return contract("1" + s + "2")[1:-1]


def _buffers_cleanly(ell: str, a, q: int) -> bool:
    cores = [buffered_core(ell.replace(STAR, c)) for c in "123"]
    if not all(0 < len(y) <= k0(q) for y in cores):
        return False
    labels = [reduced_count(y, q + 1) for y in cores]
    base = tuple((labels[0][j] - (a[0] if j == 0 else 0)) % (q + 1) for j in range(3))
    return tuple(labels) == CEdgeSpec(base, tuple(a)).points(q)


def gen_C_edges(q: int, compact: bool = False) -> Iterator[tuple[CEdgeSpec, str]]:
    """Every (base, offsets) spec with its witness, each one self-checked."""
    offsets = list(admissible_offsets(q))
    build = compact_witness if compact else c_edge_witness
    for x in product(range(q + 1), repeat=3):
        for a in offsets:
            spec = CEdgeSpec(x, a)
            ell = build(x, a, q)
            want = spec.points(q)
            got = witness_counts(ell, q)
            for i in range(3):
                if got[i] != want[i]:
                    raise WitnessError(f"witness {ell} for x={x}, a={a}: substitution {i + 1} "
                                       f"has reduced count {got[i]}, expected {want[i]}")
            if ell.count(STAR) > sum(a):
                raise WitnessError(f"witness {ell} has more than {sum(a)} stars")
            yield spec, ell


def c_vertices(q: int) -> tuple[tuple[int, int, int], ...]:
    return tuple(product(range(q + 1), repeat=3))


def c_index(label, q: int) -> int:
    mod = q + 1
    return (label[0] % mod) * mod * mod + (label[1] % mod) * mod + label[2] % mod


def build_C(q: int, budget: int | None = None) -> Hypergraph:
    if q < 1:
        raise ValueError("q must be positive")
    _check_budget((q + 1) ** 3, budget, DEFAULT_C_BUDGET, f"C({q})")
    edges = (tuple(c_index(p, q) for p in spec.points(q)) for spec, _ in gen_C_edges(q))
    return make_hypergraph("C", c_vertices(q), edges, q)


def latin_cliques(q: int) -> Iterator[tuple[int, ...]]:
    """Each axis line {x, x+e_i, ..., x+q e_i} once, as vertex indices."""
    mod = q + 1
    for i in range(3):
        for rest in product(range(mod), repeat=2):
            base = list(rest)
            base.insert(i, 0)
            yield tuple(c_index([base[j] + (t if j == i else 0) for j in range(3)], q)
                        for t in range(mod))


@dataclass(frozen=True)
class Realization:
    labels: tuple[tuple[int, int, int], ...]
    core_lengths: tuple[int, ...]
    line_length: int


def realize_in_C(ell: str, q: int) -> Realization:
    """Wrap a witness as 1.ell.buffer and read off the C-labels of its points.

    Each substitution must contract to 1.y.buffer for some core y; the label
    is the reduced count of y.  Core lengths are returned so callers can
    compare them with k0.
    """
    tail = buffer_tail(q)
    full = "1" + ell + tail
    labels, lengths = [], []
    for a in "123":
        w = contract(full.replace(STAR, a))
        if not (w.startswith("1") and w.endswith(tail)) or len(w) <= len(tail) + 1:
            raise WitnessError(f"substitution {a} of {full[:40]}... is not buffered")
        core = w[1:len(w) - len(tail)]
        labels.append(reduced_count(core, q + 1))
        lengths.append(len(core))
    return Realization(tuple(labels), tuple(lengths), len(full))
