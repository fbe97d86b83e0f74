"""Insertions, alterations and the canonical reduction of buffered patterns.

Patterns here are over {1,2,3}.  Positions are 1-based; "gap i" is the
space between letters i and i+1, so a pattern of length k has gaps 1..k-1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .hypergraphs import BufferedPattern, ambient_length, k0, make_buffered
from .lines import STAR
from .words import contract, count, reduced_count

LETTERS = "123"


class MoveError(ValueError):
    pass


class ReductionError(RuntimeError):
    def __init__(self, step: int, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step


def others(alpha: str) -> set[str]:
    alpha = str(alpha)
    if alpha not in LETTERS:
        raise MoveError(f"letter {alpha!r} not in 1..3")
    return set(LETTERS) - {alpha}


def apply_insertion(p: str, gap: int, alpha: str | int) -> str:
    """Insert alpha into gap `gap` of p; its new neighbours must be the two other letters."""
    alpha = str(alpha)
    if not 1 <= gap <= len(p) - 1:
        raise MoveError(f"gap {gap} of {p!r} is not between two letters")
    if {p[gap - 1], p[gap]} != others(alpha):
        raise MoveError(f"gap {gap} of {p!r} is flanked by {p[gap - 1]}{p[gap]}, "
                        f"not by the letters other than {alpha}")
    return p[:gap] + alpha + p[gap:]


def movable_letters(p: str) -> frozenset[int]:
    """Positions whose two neighbours are the two other letters."""
    return frozenset(i + 1 for i in range(1, len(p) - 1)
                     if p[i - 1] != p[i + 1] and p[i] not in (p[i - 1], p[i + 1]))


def remove_letter(p: str, source: int) -> str:
    """Delete a movable letter; the result is the common parent of an alteration."""
    if source not in movable_letters(p):
        raise MoveError(f"letter {source} of {p!r} is not movable")
    return p[:source - 1] + p[source:]


def apply_alteration(p: str, source: int, gap: int) -> str:
    """Move letter `source` into `gap`, where gap indexes the pattern with the letter removed."""
    alpha = p[source - 1] if 1 <= source <= len(p) else ""
    return apply_insertion(remove_letter(p, source), gap, alpha)


def single_insertion_letter(parent: str, child: str) -> str | None:
    """The letter alpha if `child` is one alpha-insertion away from `parent`."""
    if len(child) != len(parent) + 1:
        return None
    for i in range(1, len(child) - 1):
        if child[:i] + child[i + 1:] == parent and {child[i - 1], child[i + 1]} == others(child[i]):
            return child[i]
    return None


def admissible_gaps(p: str, alpha: str | int) -> list[int]:
    pair = others(str(alpha))
    return [i for i in range(1, len(p)) if {p[i - 1], p[i]} == pair]


def is_diverse(p: str, alpha: str | int, q: int, n: int) -> bool:
    """Length <= n - q and at least q adjacencies made of the two other letters.

    Adjacencies of both orders are counted together: each one is a site for
    an alpha-insertion, which is what diversity has to guarantee.
    """
    a1, a2 = sorted(others(str(alpha)))
    return len(p) <= n - q and p.count(a1 + a2) + p.count(a2 + a1) >= q


def insertion_chain(p: str, alpha: str | int, length: int) -> list[str]:
    """p = b_1, ..., b_length, each step inserting alpha into the leftmost admissible gap."""
    chain = [p]
    for _ in range(length - 1):
        gaps = admissible_gaps(chain[-1], alpha)
        if not gaps:
            raise MoveError(f"no admissible gap for {alpha} in {chain[-1]!r}")
        chain.append(apply_insertion(chain[-1], gaps[0], alpha))
    return chain


def insertion_witness(child: str, inserted: list[int]) -> str:
    """Star pattern joining a pattern and the result of inserting letters at `inserted`.

    `inserted` are the 1-based positions, in `child`, of the inserted copies
    of one letter alpha; replacing them by stars gives a line whose alpha
    substitution is `child` and whose other substitutions contract to the
    parent.
    """
    if not inserted:
        raise MoveError("no inserted positions")
    alpha = child[inserted[0] - 1]
    if any(child[i - 1] != alpha for i in inserted):
        raise MoveError("inserted letters must all be the same letter")
    s = list(child)
    for i in inserted:
        s[i - 1] = STAR
    return "".join(s)


# -- canonical reduction -------------------------------------------------------

@dataclass
class ReductionTrace:
    core: str
    q: int
    b: list[str] = field(default_factory=list)
    c: list[str] = field(default_factory=list)

    @property
    def terminal(self) -> str:
        return self.c[-1]

    def entries(self) -> list[str]:
        return self.b + self.c[1:]

    def dump(self) -> str:
        lines = [f"# core {self.core} q {self.q} reduced_count "
                 + " ".join(map(str, reduced_count(self.core, self.q + 1)))]
        lines += [f"b: {p}" for p in self.b]
        lines += [f"c: {p}" for p in self.c]
        return "\n".join(lines) + "\n"


# slot type per letter: letter 1 goes between 2 and 3, and so on
_SLOT_GROUP = {"1": 0, "2": 1, "3": 2}


class _Reducer:
    def __init__(self, bp: BufferedPattern):
        self.q = bp.q
        k = k0(bp.q)
        self.prefix = "1"
        self.core = bp.core
        self.buf = bp.full[1 + len(bp.core):]
        # insertion points (buffer-relative) of the unused slots of each type
        self.slots = {a: [4 * k * g + 2 * j + 1 for j in range(2 * k)] for a, g in _SLOT_GROUP.items()}
        self.filled: dict[str, list[int]] = {a: [] for a in LETTERS}
        self.step = 0

    @property
    def word(self) -> str:
        return self.prefix + self.core + self.buf

    def fail(self, msg: str):
        raise ReductionError(self.step, msg)

    def _shift(self, pos: int, delta: int) -> None:
        for table in (self.slots, self.filled):
            for a, lst in table.items():
                table[a] = [p + delta if p >= pos else p for p in lst]

    def _buffer_insert(self, letter: str, pos: int) -> None:
        if not (0 < pos < len(self.buf)) or {self.buf[pos - 1], self.buf[pos]} != others(letter):
            self.fail(f"cannot place {letter} at buffer position {pos}")
        self._shift(pos, +1)
        self.buf = self.buf[:pos] + letter + self.buf[pos:]

    def _buffer_delete(self, pos: int) -> str:
        letter = self.buf[pos]
        if not (0 < pos < len(self.buf) - 1) or {self.buf[pos - 1], self.buf[pos + 1]} != others(letter):
            self.fail(f"letter at buffer position {pos} is not removable")
        self.buf = self.buf[:pos] + self.buf[pos + 1:]
        self._shift(pos + 1, -1)
        return letter

    def leftmost_movable(self) -> int | None:
        for i, letter in enumerate(self.core):
            left = self.core[i - 1] if i else self.prefix[-1]
            right = self.core[i + 1] if i + 1 < len(self.core) else self.buf[0]
            if left != right:
                return i
        return None

    def move_core_letter(self, i: int) -> None:
        letter = self.core[i]
        if not self.slots[letter]:
            self.fail(f"no free slot left for letter {letter}")
        self.core = self.core[:i] + self.core[i + 1:]
        pos = self.slots[letter].pop(0)
        self._buffer_insert(letter, pos)
        self.filled[letter].append(pos)

    def drain_core(self, out: list[str]) -> None:
        while (i := self.leftmost_movable()) is not None:
            self.step += 1
            self.move_core_letter(i)
            out.append(self.word)


def canonical_reduction(bp: BufferedPattern | str, q: int | None = None) -> ReductionTrace:
    """Reduce a buffered pattern to the closed form fixed by its reduced count.

    Alteration phase: repeatedly move the leftmost movable core letter into
    the leftmost free slot of its type.  A core stuck as 2121..21 is unlocked
    by parking the buffer's last 3 in front of it, and the 3 goes back at
    the end.  Deletion phase: strip q+1 copies at a time of 1s, then 2s, then
    3s from the rightmost filled slots.
    """
    if isinstance(bp, str):
        if q is None:
            raise TypeError("q is required when passing a core string")
        bp = make_buffered(bp, q)
    elif q is not None and q != bp.q:
        raise ValueError(f"buffered pattern was built for q={bp.q}, not {q}")
    r = _Reducer(bp)
    trace = ReductionTrace(bp.core, bp.q, b=[r.word])

    r.drain_core(trace.b)
    if r.core:
        if r.core != "21" * (len(r.core) // 2):
            r.fail(f"core {r.core!r} has no movable letter but is not of the form 2121..21")
        t = len(r.buf) - 2
        if r.buf[t] != "3" or any(p > t for lst in r.filled.values() for p in lst):
            r.fail("buffer does not end in a free ...231")
        r.step += 1
        r.buf = r.buf[:t] + r.buf[t + 1:]
        r.prefix = "13"
        trace.b.append(r.word)
        r.drain_core(trace.b)
        if r.core:
            r.fail(f"core {r.core!r} did not empty after parking the 3")
        r.step += 1
        r.prefix = "1"
        r._buffer_insert("3", len(r.buf) - 1)
        trace.b.append(r.word)

    trace.c.append(r.word)
    chunk = bp.q + 1
    for letter in LETTERS:
        while len(r.filled[letter]) >= chunk:
            r.step += 1
            for _ in range(chunk):
                if r._buffer_delete(r.filled[letter].pop()) != letter:
                    r.fail(f"filled slot did not hold a {letter}")
            trace.c.append(r.word)
    return trace


def terminal_form(rc, q: int) -> str:
    """Closed form of the end of the reduction for reduced count rc."""
    k = k0(q)
    r1, r2, r3 = (int(v) % (q + 1) for v in rc)
    return ("1" + "213" * r1 + "23" * (2 * k - r1) + "123" * r2 + "13" * (2 * k - r2)
            + "231" * r3 + "21" * (2 * k - r3) + "231")


def trace_is_diverse(trace: ReductionTrace) -> bool:
    n = ambient_length(trace.q)
    return all(is_diverse(p, a, trace.q, n) for p in trace.entries() for a in LETTERS)


def check_trace_steps(trace: ReductionTrace) -> list[str]:
    """Problems with the step structure of a trace (empty when it is sound)."""
    problems = []
    for i, (p1, p2) in enumerate(zip(trace.b, trace.b[1:]), start=1):
        if len(p1) != len(p2) or count(p1, 3) != count(p2, 3):
            problems.append(f"b{i}->b{i + 1} changes the count")
            continue
        # an alteration has a common parent one insertion below both sides
        parents = {p1[:j] + p1[j + 1:] for j in range(1, len(p1) - 1) if p1[j - 1] != p1[j + 1]}
        if not any(single_insertion_letter(par, p2) for par in parents):
            problems.append(f"b{i}->b{i + 1} is not an alteration")
    for i, (big, small) in enumerate(zip(trace.c, trace.c[1:]), start=1):
        cur = small
        diff = len(big) - len(small)
        if diff != trace.q + 1:
            problems.append(f"c{i}->c{i + 1} removes {diff} letters, not {trace.q + 1}")
            continue
        # greedily re-insert to confirm q+1 insertions of one letter lead back
        letters = {a for a in LETTERS if count(big, 3)[int(a) - 1] - count(small, 3)[int(a) - 1] == diff}
        if len(letters) != 1:
            problems.append(f"c{i}->c{i + 1} does not remove a single letter")
            continue
        if not _reachable_by_insertions(cur, big, letters.pop()):
            problems.append(f"c{i}->c{i + 1} is not q+1 insertions")
    return problems


def _reachable_by_insertions(small: str, big: str, alpha: str) -> bool:
    # big must be small with some isolated alphas added, each flanked by the other two letters
    i = j = 0
    while j < len(big):
        if i < len(small) and big[j] == small[i]:
            i += 1
            j += 1
        elif big[j] == alpha and 0 < j < len(big) - 1 and {big[j - 1], big[j + 1]} == others(alpha):
            j += 1
        else:
            return False
    return i == len(small) and contract(big) == big
