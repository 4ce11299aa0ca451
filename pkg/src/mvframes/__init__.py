"""Exact computations on MV-frames: products of finite MV-chains and the
rational unit interval, their frame-theoretic properties, nuclei, ideal
lattices of finite Lukasiewicz rings and the bridge to lattice-ordered
groups with strong unit."""

from .core import (
    INF, Block, Element, FiniteChain, Signature, UnitInterval, join, leq, meet, neg, oplus,
)
from .errors import MVFrameError

__all__ = [
    "INF", "Block", "Element", "FiniteChain", "MVFrameError", "Signature", "UnitInterval",
    "join", "leq", "meet", "neg", "oplus",
]
__version__ = "0.1.0"
