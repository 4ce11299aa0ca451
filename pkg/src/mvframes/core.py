"""Exact products of MV-chains and unit intervals.

A :class:`Signature` is an ordered list of blocks; each block is one factor
kind (a finite chain ``L_n`` or the rational unit interval ``U``) repeated
a finite or countably infinite number of times.  An :class:`Element`
assigns a value to every coordinate ``(block, index)``.  Infinite blocks are
stored as a default value plus a finite map of exceptions; finite blocks
are stored the same way with the default pinned to ``0`` so that equal
elements always have equal representations.

All values are :class:`fractions.Fraction` in ``[0, 1]``.
"""
from __future__ import annotations

import itertools
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterator, Mapping, Sequence, Union

from .errors import CarrierTooLarge, InfiniteCarrier, SignatureMismatch, MalformedInput

INF = math.inf
DEFAULT_BOUND = 10**6

ZERO = Fraction(0)
ONE = Fraction(1)

Coord = tuple  # (block, index)


def frac(v) -> Fraction:
    """Coerce ints, Fractions and strings such as ``"2/3"`` to a Fraction."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool) or isinstance(v, float):
        raise MalformedInput(f"refusing inexact value {v!r}")
    try:
        return Fraction(v)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise MalformedInput(f"not a rational value: {v!r}") from exc


# ---------------------------------------------------------------------------
# Factor kinds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteChain:
    """The n-element Lukasiewicz chain {0, 1/(n-1), ..., 1}."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 2:
            raise MalformedInput(f"finite chain needs an integer n >= 2, got {self.n!r}")

    is_finite = True

    @property
    def label(self) -> str:
        return f"L{self.n}"

    @property
    def size(self) -> int:
        return self.n

    def contains(self, v: Fraction) -> bool:
        return 0 <= v <= 1 and (v * (self.n - 1)).denominator == 1

    def carrier(self) -> list[Fraction]:
        return [Fraction(k, self.n - 1) for k in range(self.n)]

    def successor(self, v: Fraction):
        """Upper cover of ``v`` in the chain, or None at the top."""
        if v == ONE:
            return None
        return v + Fraction(1, self.n - 1)


@dataclass(frozen=True)
class UnitInterval:
    """The standard MV-algebra [0, 1], restricted to rational points."""

    is_finite = False

    @property
    def label(self) -> str:
        return "U"

    @property
    def size(self):
        return None

    def contains(self, v: Fraction) -> bool:
        return 0 <= v <= 1

    def carrier(self):
        raise InfiniteCarrier("the unit interval has no finite carrier")


FactorKind = Union[FiniteChain, UnitInterval]


@dataclass(frozen=True)
class Block:
    kind: FactorKind
    mult: Union[int, float] = 1

    def __post_init__(self):
        if self.mult != INF and (not isinstance(self.mult, int) or self.mult < 1):
            raise MalformedInput(f"block multiplicity must be a positive int or INF, got {self.mult!r}")

    @property
    def is_infinite(self) -> bool:
        return self.mult == INF

    def __str__(self):
        if self.mult == 1:
            return self.kind.label
        return f"{self.kind.label}^{'w' if self.is_infinite else self.mult}"


_BLOCK_RE = re.compile(r"^(?:L(\d+)|U)(?:\^(\d+|w|inf|ω))?$")


@dataclass(frozen=True)
class Signature:
    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise MalformedInput("a signature needs at least one block")

    @classmethod
    def of(cls, *blocks: Block) -> "Signature":
        return cls(tuple(blocks))

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse the short notation ``"L3^2 x L4^w x U"``."""
        blocks = []
        for token in re.split(r"\s*[x*×]\s*", text.strip()):
            m = _BLOCK_RE.match(token)
            if not m:
                raise MalformedInput(f"cannot parse block {token!r}")
            kind = FiniteChain(int(m.group(1))) if m.group(1) else UnitInterval()
            exp = m.group(2)
            mult = 1 if exp is None else (INF if exp in ("w", "inf", "ω") else int(exp))
            blocks.append(Block(kind, mult))
        return cls(tuple(blocks))

    def __str__(self):
        return " x ".join(str(b) for b in self.blocks)

    @property
    def index_set_finite(self) -> bool:
        return all(not b.is_infinite for b in self.blocks)

    @property
    def is_fully_finite(self) -> bool:
        return self.index_set_finite and all(b.kind.is_finite for b in self.blocks)

    @property
    def has_unit_interval(self) -> bool:
        return any(not b.kind.is_finite for b in self.blocks)

    def carrier_size(self):
        """Number of elements, or None when the carrier is infinite."""
        if not self.is_fully_finite:
            return None
        return math.prod(b.kind.n ** b.mult for b in self.blocks)

    def coordinates(self) -> list:
        if not self.index_set_finite:
            raise InfiniteCarrier(f"{self} has an infinite index set")
        return [(b, i) for b, blk in enumerate(self.blocks) for i in range(blk.mult)]

    def kind_at(self, b: int) -> FactorKind:
        return self.blocks[b].kind

    def check_coord(self, b: int, i: int) -> None:
        if not (0 <= b < len(self.blocks)):
            raise MalformedInput(f"no block {b} in {self}")
        blk = self.blocks[b]
        if i < 0 or (not blk.is_infinite and i >= blk.mult):
            raise MalformedInput(f"index {i} out of range for block {b} ({blk})")


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

def _changed(idx, vals, default) -> tuple:
    """(index, value) pairs in index order, dropping values equal to ``default``."""
    return tuple((i, v) for i, v in zip(idx, vals) if v != default)


@dataclass(frozen=True)
class Element:
    """A finitely described element of a product signature.

    ``parts[b]`` is ``(default, exceptions)`` with exceptions a sorted tuple
    of ``(index, value)`` pairs, none equal to the default.  For blocks of
    finite multiplicity the default is always 0.
    """

    sig: Signature
    parts: tuple

    # -- construction ------------------------------------------------------

    @classmethod
    def _canonical(cls, sig: Signature, data) -> "Element":
        parts = []
        for blk, (default, exc) in zip(sig.blocks, data):
            if not blk.is_infinite and default != 0:
                exc = {i: exc.get(i, default) for i in range(blk.mult)}
                default = ZERO
            parts.append((default, tuple(sorted((i, v) for i, v in exc.items() if v != default))))
        return cls(sig, tuple(parts))

    @classmethod
    def build(cls, sig: Signature, defaults=None, exceptions: Mapping = None) -> "Element":
        """Validated constructor.

        ``defaults`` is one value per block (missing means 0); ``exceptions``
        maps ``(block, index)`` to a value.
        """
        if defaults is None:
            defaults = [ZERO] * len(sig.blocks)
        if len(defaults) != len(sig.blocks):
            raise MalformedInput(f"expected {len(sig.blocks)} defaults, got {len(defaults)}")
        data = [(frac(d), {}) for d in defaults]
        for (b, i), v in (exceptions or {}).items():
            sig.check_coord(b, i)
            data[b][1][i] = frac(v)
        for b, (d, exc) in enumerate(data):
            kind = sig.blocks[b].kind
            for v in (d, *exc.values()):
                if not kind.contains(v):
                    raise MalformedInput(f"value {v} is not in {kind.label}")
        return cls._canonical(sig, data)

    @classmethod
    def const(cls, sig: Signature, v) -> "Element":
        return cls.build(sig, [v] * len(sig.blocks))

    @classmethod
    def zero(cls, sig: Signature) -> "Element":
        return cls(sig, tuple((ZERO, ()) for _ in sig.blocks))

    @classmethod
    def one(cls, sig: Signature) -> "Element":
        return cls._canonical(sig, [(ONE, {}) for _ in sig.blocks])

    @classmethod
    def from_values(cls, sig: Signature, values: Sequence) -> "Element":
        """Element of an index-finite signature from its flat coordinate list."""
        coords = sig.coordinates()
        if len(values) != len(coords):
            raise MalformedInput(f"{sig} has {len(coords)} coordinates, got {len(values)} values")
        return cls.build(sig, exceptions=dict(zip(coords, values)))

    @classmethod
    def indicator(cls, sig: Signature, coords, value=ONE) -> "Element":
        """``chi_F``: ``value`` on the finite coordinate set ``coords``, 0 elsewhere."""
        return cls.build(sig, exceptions={c: value for c in coords})

    # -- access ------------------------------------------------------------

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.sig, self.parts))
            object.__setattr__(self, "_hash", h)
        return h

    @cached_property
    def _exc(self) -> tuple:
        return tuple(dict(exc) for _, exc in self.parts)

    def value(self, b: int, i: int) -> Fraction:
        return self._exc[b].get(i, self.parts[b][0])

    def __getitem__(self, coord) -> Fraction:
        return self.value(*coord)

    def default(self, b: int) -> Fraction:
        return self.parts[b][0]

    def exceptions(self, b: int) -> dict:
        return dict(self._exc[b])

    def values(self) -> tuple:
        """Flat coordinate values (index-finite signatures only)."""
        return tuple(self.value(b, i) for b, i in self.sig.coordinates())

    def mentioned(self, b: int):
        """Indices of block b whose value is not the block default."""
        return tuple(i for i, _ in self.parts[b][1])

    def support_finite(self) -> bool:
        return all(d == 0 for blk, (d, _) in zip(self.sig.blocks, self.parts) if blk.is_infinite)

    def support(self) -> list:
        """Nonzero coordinates; requires finite support."""
        if not self.support_finite():
            raise InfiniteCarrier("element has infinite support")
        return [(b, i) for b, (_, exc) in enumerate(self.parts) for i, v in exc if v != 0]

    def all_values(self) -> set:
        """Set of values taken somewhere (default of an infinite block included)."""
        out = set()
        for blk, (d, exc) in zip(self.sig.blocks, self.parts):
            if blk.is_infinite or len(exc) < blk.mult:
                out.add(d)
            out.update(v for _, v in exc)
        return out

    # -- pointwise machinery ------------------------------------------------

    def map_blocks(self, fn: Callable[[int, Fraction], Fraction], sig: Signature = None) -> "Element":
        """Apply ``fn(block, value)`` at every coordinate."""
        parts = []
        for b, (blk, (d, _), exd) in enumerate(zip(self.sig.blocks, self.parts, self._exc)):
            idx = sorted(exd) if blk.is_infinite else range(blk.mult)
            vals = (fn(b, exd.get(i, d)) for i in idx)
            # a finite block keeps default 0 and lists every coordinate
            nd = fn(b, d) if blk.is_infinite else ZERO
            parts.append((nd, _changed(idx, vals, nd)))
        return Element(sig or self.sig, tuple(parts))

    def zip_with(self, other: "Element", fn: Callable[[Fraction, Fraction], Fraction]) -> "Element":
        _same_sig(self, other)
        parts = []
        for blk, (dx, _), (dy, _), exx, exy in zip(self.sig.blocks, self.parts, other.parts, self._exc, other._exc):
            idx = sorted(exx.keys() | exy.keys()) if blk.is_infinite else range(blk.mult)
            vals = (fn(exx.get(i, dx), exy.get(i, dy)) for i in idx)
            d = fn(dx, dy) if blk.is_infinite else ZERO
            parts.append((d, _changed(idx, vals, d)))
        return Element(self.sig, tuple(parts))

    def compare_all(self, other: "Element", pred: Callable[[Fraction, Fraction], bool]) -> bool:
        """True iff ``pred`` holds at every coordinate."""
        _same_sig(self, other)
        for blk, (dx, _), (dy, _), exx, exy in zip(self.sig.blocks, self.parts, other.parts, self._exc, other._exc):
            if blk.is_infinite:
                if not pred(dx, dy):
                    return False
                idx = exx.keys() | exy.keys()
            else:
                idx = range(blk.mult)
            if not all(pred(exx.get(i, dx), exy.get(i, dy)) for i in idx):
                return False
        return True

    # -- operators ---------------------------------------------------------

    def __or__(self, other):
        return join(self, other)

    def __and__(self, other):
        return meet(self, other)

    def __invert__(self):
        return neg(self)

    def __le__(self, other):
        return leq(self, other)

    def __lt__(self, other):
        return leq(self, other) and self != other

    def __ge__(self, other):
        return leq(other, self)

    def __gt__(self, other):
        return leq(other, self) and self != other

    def __str__(self):
        if self.sig.index_set_finite:
            vals = [str(v) for v in self.values()]
            return vals[0] if len(vals) == 1 else "(" + ", ".join(vals) + ")"
        chunks = []
        for b, (d, exc) in enumerate(self.parts):
            inner = ", ".join(f"{i}:{v}" for i, v in exc)
            if self.sig.blocks[b].is_infinite:
                inner = f"default {d}" + (f"; {inner}" if inner else "")
            chunks.append(f"[{inner}]")
        return " x ".join(chunks)


def _same_sig(x: Element, y: Element) -> None:
    if x.sig is not y.sig and x.sig != y.sig:
        raise SignatureMismatch(f"{x.sig} vs {y.sig}")


# ---------------------------------------------------------------------------
# MV operations
# ---------------------------------------------------------------------------

def _oplus(a, b):
    s = a + b
    return s if s < 1 else ONE


def oplus(x: Element, y: Element) -> Element:
    """Truncated sum min(1, x + y) in every coordinate."""
    return x.zip_with(y, _oplus)


def neg(x: Element) -> Element:
    return x.map_blocks(lambda _b, v: 1 - v)


def odot(x: Element, y: Element) -> Element:
    """Lukasiewicz product, the De Morgan dual of oplus."""
    return neg(oplus(neg(x), neg(y)))


def join(x: Element, y: Element) -> Element:
    return x.zip_with(y, max)


def meet(x: Element, y: Element) -> Element:
    return x.zip_with(y, min)


def join_mv(x: Element, y: Element) -> Element:
    """Join through the MV term  not(not x + y) + y."""
    return oplus(neg(oplus(neg(x), y)), y)


def meet_mv(x: Element, y: Element) -> Element:
    """Meet through the MV term  not(not x v not y)."""
    return neg(join_mv(neg(x), neg(y)))


def leq(x: Element, y: Element) -> bool:
    return x.compare_all(y, lambda a, b: a <= b)


def leq_mv(x: Element, y: Element) -> bool:
    """Order read off the MV structure: x <= y iff not x + y = 1."""
    return oplus(neg(x), y) == Element.one(x.sig)


def times(k: int, x: Element) -> Element:
    """k-fold oplus of x with itself (0x = 0)."""
    return x.map_blocks(lambda _b, v: min(ONE, k * v))


# ---------------------------------------------------------------------------
# Enumeration and sampling
# ---------------------------------------------------------------------------

def enumerate_carrier(sig: Signature, bound: int = DEFAULT_BOUND) -> Iterator[Element]:
    """Yield every element of a fully finite signature exactly once."""
    if not sig.is_fully_finite:
        raise InfiniteCarrier(f"{sig} has an infinite carrier")
    size = sig.carrier_size()
    if size > bound:
        raise CarrierTooLarge(f"{sig} has {size} elements, bound is {bound}")
    layout = [(b, i, blk.kind.carrier()) for b, blk in enumerate(sig.blocks) for i in range(blk.mult)]
    nblocks = len(sig.blocks)
    for combo in itertools.product(*(c for _, _, c in layout)):
        exc = [[] for _ in range(nblocks)]
        for (b, i, _), v in zip(layout, combo):
            if v:
                exc[b].append((i, v))
        yield Element(sig, tuple((ZERO, tuple(e)) for e in exc))


def random_value(kind: FactorKind, rng: random.Random, max_den: int = 12) -> Fraction:
    if kind.is_finite:
        return Fraction(rng.randrange(kind.n), kind.n - 1)
    r = rng.random()
    if r < 0.15:
        return ZERO
    if r < 0.25:
        return ONE
    d = rng.randint(1, max_den)
    return Fraction(rng.randint(0, d), d)


def random_element(sig: Signature, rng: random.Random, max_exceptions: int = 3,
                   index_span: int = 16) -> Element:
    """A random finitely described element; infinite blocks get a few exceptions."""
    data = []
    for blk in sig.blocks:
        if blk.is_infinite:
            d = ZERO if rng.random() < 0.5 else random_value(blk.kind, rng)
            k = rng.randint(0, max_exceptions)
            exc = {rng.randrange(index_span): random_value(blk.kind, rng) for _ in range(k)}
        else:
            d = ZERO
            exc = {i: random_value(blk.kind, rng) for i in range(blk.mult)}
        data.append((d, exc))
    return Element._canonical(sig, data)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def _mult_to_json(m):
    return "inf" if m == INF else m


def signature_to_json(sig: Signature) -> dict:
    blocks = []
    for blk in sig.blocks:
        if blk.kind.is_finite:
            blocks.append({"kind": "chain", "n": blk.kind.n, "mult": _mult_to_json(blk.mult)})
        else:
            blocks.append({"kind": "unit", "mult": _mult_to_json(blk.mult)})
    return {"blocks": blocks}


def signature_from_json(obj) -> Signature:
    if isinstance(obj, str):
        return Signature.parse(obj)
    try:
        blocks = []
        for spec in obj["blocks"]:
            mult = spec.get("mult", 1)
            if mult in ("inf", "w", "omega"):
                mult = INF
            elif not isinstance(mult, int) or isinstance(mult, bool):
                raise MalformedInput(f"bad multiplicity {mult!r}")
            kind = spec["kind"]
            if kind == "chain":
                blocks.append(Block(FiniteChain(spec["n"]), mult))
            elif kind in ("unit", "interval"):
                blocks.append(Block(UnitInterval(), mult))
            else:
                raise MalformedInput(f"unknown factor kind {kind!r}")
        return Signature(tuple(blocks))
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedInput(f"malformed signature spec: {exc}") from exc


def element_to_json(x: Element) -> dict:
    exc = {}
    for b, (_, pairs) in enumerate(x.parts):
        for i, v in pairs:
            exc[f"{b}.{i}"] = str(v)
    return {"exceptions": exc, "defaults": [str(d) for d, _ in x.parts]}


def element_from_json(sig: Signature, obj) -> Element:
    try:
        if "values" in obj:
            return Element.from_values(sig, [frac(v) for v in obj["values"]])
        exceptions = {}
        for key, v in obj.get("exceptions", {}).items():
            b, _, i = key.partition(".")
            exceptions[(int(b), int(i))] = frac(v)
        defaults = obj.get("defaults")
        if defaults is not None:
            defaults = [frac(d) for d in defaults]
        for b, blk in enumerate(sig.blocks):
            if blk.is_infinite and defaults is None:
                raise MalformedInput(f"block {b} is infinite and needs a default")
        return Element.build(sig, defaults, exceptions)
    except (TypeError, AttributeError, ValueError) as exc:
        raise MalformedInput(f"malformed element spec: {exc}") from exc
