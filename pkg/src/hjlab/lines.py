"""Combinatorial lines in [m]^n and their images on patterns.

A line is a string over "1".."m" plus STAR ("*") containing at least one
star.  Lines are enumerated lexicographically with the star ordered after m.
"""
from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import groupby, product

import numpy as np

from .words import alphabet, contract, is_pattern, word_index

STAR = "*"


def check_line(ell: str, m: int) -> str:
    if not isinstance(ell, str) or STAR not in ell:
        raise ValueError(f"{ell!r} is not a line: it needs at least one {STAR}")
    bad = set(ell) - set(alphabet(m)) - {STAR}
    if bad:
        raise ValueError(f"line {ell!r} has symbols outside 1..{m} and {STAR}: {sorted(bad)}")
    return ell


def substitute(ell: str, alpha: str | int, m: int | None = None) -> str:
    """ell[alpha]: every star replaced by the letter alpha."""
    a = str(alpha)
    if len(a) != 1 or not a.isdigit() or a == "0" or (m is not None and int(a) > m):
        raise ValueError(f"letter {alpha!r} is not in the alphabet")
    return ell.replace(STAR, a)


def active_intervals(ell: str) -> int:
    """Number of maximal runs of active (starred) coordinates."""
    return sum(1 for k, _ in groupby(ell) if k == STAR)


def is_q_fold(ell: str, q: int) -> bool:
    if q < 1:
        raise ValueError("q must be positive")
    return active_intervals(ell) <= q


def enumerate_lines(m: int, n: int, q: int) -> Iterator[str]:
    """All q-fold lines of [m]^n, lexicographic with STAR after m."""
    symbols = alphabet(m) + STAR
    for t in product(symbols, repeat=n):
        ell = "".join(t)
        if STAR in ell and active_intervals(ell) <= q:
            yield ell


def contract_star(ell: str) -> str:
    """Run contraction that treats the star as one more letter."""
    return contract(ell)


def enumerate_star_patterns(m: int, n: int, q: int) -> Iterator[str]:
    """Star patterns of length <= n with between 1 and q stars.

    In a star pattern every star is its own run, so the star count is the
    number of active intervals of any line it comes from.
    """
    symbols = alphabet(m) + STAR

    def extend(prefix: str, stars: int, k: int) -> Iterator[str]:
        if len(prefix) == k:
            if stars:
                yield prefix
            return
        for s in symbols:
            if prefix and s == prefix[-1]:
                continue
            st = stars + (s == STAR)
            if st <= q:
                yield from extend(prefix + s, st, k)

    for k in range(1, n + 1):
        yield from extend("", 0, k)


@dataclass(frozen=True)
class PEdge:
    patterns: frozenset[str]
    witness: str

    @property
    def order(self) -> int:
        return len(self.patterns)


def line_image(ell: str, m: int) -> frozenset[str]:
    """{contract(ell[1]), ..., contract(ell[m])}."""
    return frozenset(contract(ell.replace(STAR, a)) for a in alphabet(m))


def star_pattern_to_edge(ell: str, n: int, q: int, m: int = 3) -> PEdge | None:
    """The edge of P(m, n, q) carried by the star pattern `ell`.

    Returns None when all substitutions contract to one pattern (a degenerate
    edge, which happens for m = 2, e.g. 1*2).
    """
    check_line(ell, m)
    if not is_pattern(ell):
        raise ValueError(f"{ell!r} is not a star pattern (equal adjacent symbols)")
    if len(ell) > n:
        raise ValueError(f"star pattern {ell!r} longer than the ambient length {n}")
    runs = active_intervals(ell)
    if runs > q:
        raise ValueError(f"star pattern {ell!r} has {runs} active runs, more than q={q}")
    image = line_image(ell, m)
    if len(image) < 2:
        return None
    return PEdge(image, ell)


def pad_line(ell: str, n: int) -> str:
    """Extend a star pattern to a line of length n by repeating its last symbol."""
    if len(ell) > n:
        raise ValueError("cannot pad to a shorter length")
    return ell + ell[-1] * (n - len(ell))


# -- monochromatic line search -------------------------------------------------

def dense_colouring(colouring, m: int, n: int) -> np.ndarray:
    """Normalise a colouring of [m]^n to a dense int array in word order.

    Accepts an array-like of length m**n or a mapping word -> colour; a
    mapping that misses any word is rejected.
    """
    size = m**n
    if isinstance(colouring, Mapping):
        arr = np.full(size, -1, dtype=np.int64)
        for w, c in colouring.items():
            arr[word_index(w, m)] = c
    else:
        arr = np.asarray(colouring, dtype=np.int64).reshape(-1)
        if arr.size != size:
            raise ValueError(f"colouring has {arr.size} entries, expected {size} = {m}^{n}")
    if (arr < 0).any():
        missing = int(np.flatnonzero(arr < 0)[0])
        raise ValueError(f"colouring is not total: word index {missing} has no colour")
    return arr


def _star_masks(n: int, q: int) -> list[tuple[int, ...]]:
    masks = []
    for bits in product((0, 1), repeat=n):
        if any(bits):
            runs = sum(1 for k, _ in groupby(bits) if k == 1)
            if runs <= q:
                masks.append(bits)
    return masks


def _first_in_mask(col: np.ndarray, m: int, n: int, mask: Sequence[int]) -> tuple[int, str] | None:
    free = [i for i in range(n) if not mask[i]]
    delta = sum(m ** (n - 1 - i) for i in range(n) if mask[i])
    base = np.zeros(1, dtype=np.int64)
    for i in free:
        base = (base[:, None] + np.arange(m, dtype=np.int64) * m ** (n - 1 - i)).reshape(-1)
    ref = col[base]
    mono = np.ones(base.size, dtype=bool)
    for a in range(1, m):
        mono &= col[base + a * delta] == ref
    hits = np.flatnonzero(mono)
    if hits.size == 0:
        return None
    j = int(hits[0])
    digits = []
    for _ in free:
        j, d = divmod(j, m)
        digits.append(d)
    digits.reverse()
    symbols = []
    it = iter(digits)
    for i in range(n):
        symbols.append(STAR if mask[i] else str(next(it) + 1))
    ell = "".join(symbols)
    return line_rank(ell, m), ell


def line_rank(ell: str, m: int) -> int:
    """Position of `ell` in lexicographic order over 1 < ... < m < STAR."""
    r = 0
    for s in ell:
        r = r * (m + 1) + (m if s == STAR else int(s) - 1)
    return r


def find_monochromatic_line(colouring, m: int, n: int, q: int, threads: int = 1) -> str | None:
    """First q-fold line (in enumeration order) whose m points share a colour.

    The scan is exhaustive; with several threads the star masks are split
    between workers and the minimal rank wins, so the answer never depends
    on the thread count.
    """
    col = dense_colouring(colouring, m, n)
    masks = _star_masks(n, q)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            found = list(pool.map(lambda mk: _first_in_mask(col, m, n, mk), masks))
    else:
        found = [_first_in_mask(col, m, n, mk) for mk in masks]
    hits = [f for f in found if f is not None]
    return min(hits)[1] if hits else None


def read_colouring(text: str | bytes, binary: bool = False) -> tuple[int, int, int, np.ndarray]:
    """Parse the colouring file: header `m n r` then m^n colours in word order.

    The binary variant has the same text header line followed by one byte
    per word.
    """
    if binary:
        data = text if isinstance(text, bytes) else text.encode()
        header, _, body = data.partition(b"\n")
        m, n, r = (int(t) for t in header.split())
        arr = np.frombuffer(body, dtype=np.uint8).astype(np.int64)
    else:
        if isinstance(text, bytes):
            text = text.decode()
        lines = [ln.split("#", 1)[0] for ln in text.splitlines()]
        tokens = " ".join(lines).split()
        if len(tokens) < 3:
            raise ValueError("colouring file needs a header `m n r`")
        m, n, r = (int(t) for t in tokens[:3])
        arr = np.array([int(t) for t in tokens[3:]], dtype=np.int64)
    if arr.size != m**n:
        raise ValueError(f"colouring file has {arr.size} colours, expected {m}^{n} = {m**n}")
    if arr.size and (arr.min() < 0 or arr.max() >= r):
        raise ValueError(f"colours must lie in 0..{r - 1}")
    return m, n, r, arr


def write_colouring(col, m: int, n: int, r: int, binary: bool = False) -> str | bytes:
    arr = dense_colouring(col, m, n)
    header = f"{m} {n} {r}\n"
    if binary:
        if r > 256:
            raise ValueError("binary colouring files hold at most 256 colours")
        return header.encode() + arr.astype(np.uint8).tobytes()
    body = []
    for start in range(0, arr.size, m):
        body.append(" ".join(str(int(c)) for c in arr[start:start + m]))
    return header + "\n".join(body) + "\n"

