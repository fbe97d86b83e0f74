"""Words over [m] = {1..m}, their contractions, counts and breakpoints.

Words are plain digit strings ("11233322"), so m is limited to 9.  Every
function here is pure and works on immutable strings.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from itertools import groupby, product

MAX_ALPHABET = 9


def alphabet(m: int) -> str:
    if not 2 <= m <= MAX_ALPHABET:
        raise ValueError(f"alphabet size must be in 2..{MAX_ALPHABET}, got {m}")
    return "".join(str(i) for i in range(1, m + 1))


def check_word(w: str, m: int) -> str:
    """Return `w` unchanged if it is a non-empty word over [m], else raise."""
    letters = alphabet(m)
    if not isinstance(w, str) or not w:
        raise ValueError(f"not a non-empty word: {w!r}")
    bad = set(w) - set(letters)
    if bad:
        raise ValueError(f"word {w!r} has letters outside 1..{m}: {sorted(bad)}")
    return w


def is_pattern(w: str) -> bool:
    return bool(w) and all(a != b for a, b in zip(w, w[1:]))


def check_pattern(p: str, m: int) -> str:
    check_word(p, m)
    if not is_pattern(p):
        raise ValueError(f"{p!r} has equal adjacent letters, not a pattern")
    return p


def contract(w: str) -> str:
    """Collapse every maximal constant run of `w` to a single letter."""
    return "".join(k for k, _ in groupby(w))


def count(p: str, m: int) -> tuple[int, ...]:
    """Letter multiplicities of `p` as a length-m vector."""
    return tuple(p.count(str(i)) for i in range(1, m + 1))


def reduced_count(p: str, modulus: int, m: int = 3) -> tuple[int, ...]:
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    return tuple(c % modulus for c in count(p, m))


def breakpoints(w: str) -> frozenset[int]:
    """1-based positions i < n with w_i != w_{i+1}."""
    return frozenset(i + 1 for i in range(len(w) - 1) if w[i] != w[i + 1])


def expand(w: str, A: Iterable[int], N: int) -> str:
    """Stretch `w` to length N so that its i-th letter fills (a_{i-1}, a_i].

    `A` must hold exactly len(w)-1 distinct indices from 1..N-1.
    """
    cuts = sorted(A)
    n = len(w)
    if not w:
        raise ValueError("cannot expand the empty word")
    if N < n:
        raise ValueError(f"target length {N} is shorter than the word ({n})")
    if len(cuts) != n - 1 or len(set(cuts)) != len(cuts):
        raise ValueError(f"need {n - 1} distinct cut points, got {cuts}")
    if cuts and (cuts[0] < 1 or cuts[-1] > N - 1):
        raise ValueError(f"cut points must lie in 1..{N - 1}")
    bounds = [0, *cuts, N]
    return "".join(w[i] * (bounds[i + 1] - bounds[i]) for i in range(n))


def words(m: int, n: int) -> Iterator[str]:
    """All of [m]^n in lexicographic (= base-m index) order."""
    for t in product(alphabet(m), repeat=n):
        yield "".join(t)


def word_index(w: str, m: int) -> int:
    """Position of `w` in `words(m, len(w))`."""
    idx = 0
    for ch in w:
        idx = idx * m + (ord(ch) - 49)
    return idx


def index_word(idx: int, m: int, n: int) -> str:
    digits = []
    for _ in range(n):
        idx, d = divmod(idx, m)
        digits.append(chr(49 + d))
    return "".join(reversed(digits))


def patterns_of_length(m: int, k: int) -> Iterator[str]:
    """Patterns of length exactly k, lexicographic."""
    letters = alphabet(m)

    def extend(prefix: str) -> Iterator[str]:
        if len(prefix) == k:
            yield prefix
            return
        for a in letters:
            if a != prefix[-1]:
                yield from extend(prefix + a)

    for a in letters:
        yield from extend(a)


def enumerate_patterns(m: int, n: int) -> Iterator[str]:
    """Every pattern of length 1..n, ordered by length then lexicographically."""
    if n < 1:
        raise ValueError("n must be at least 1")
    for k in range(1, n + 1):
        yield from patterns_of_length(m, k)


def parse_words(lines: Iterable[str], m: int) -> list[str]:
    """Read the one-word-per-line text format; `#` starts a comment."""
    out = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(check_word(line, m))
    return out


def format_words(ws: Sequence[str]) -> str:
    return "".join(w + "\n" for w in ws)
