from __future__ import annotations

import re

import pytest
from hypothesis import strategies as st

from hjlab.hypergraphs import build_C


def contract_oracle(w: str) -> str:
    return re.sub(r"(.)\1+", r"\1", w)


@st.composite
def patterns(draw, m=3, min_size=1, max_size=12):
    k = draw(st.integers(min_size, max_size))
    letters = [str(a) for a in range(1, m + 1)]
    p = [draw(st.sampled_from(letters))]
    while len(p) < k:
        p.append(draw(st.sampled_from([a for a in letters if a != p[-1]])))
    return "".join(p)


@st.composite
def eligible_cores(draw, q=1, max_size=None):
    """Patterns over 1..3 that may be wrapped as 1.x.buffer."""
    from hjlab.hypergraphs import k0

    top = k0(q) if max_size is None else max_size
    x = draw(patterns(min_size=1, max_size=top).filter(lambda s: s[0] != "1" and s[-1] != "2"))
    return x


@pytest.fixture(scope="session")
def c_graphs():
    return {q: build_C(q) for q in (1, 2, 3, 4)}
