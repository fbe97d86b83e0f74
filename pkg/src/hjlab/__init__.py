"""Contraction, q-fold lines, the pattern hypergraphs and their colourings."""
from __future__ import annotations

__version__ = "0.1.0"
