"""Lattice-ordered abelian groups with strong unit of the form <Z^X, u>.

Elements are integer vectors stored like :class:`Element`: a default per
block plus finitely many exceptions.  The unit is constant on each block.
``gamma`` takes the unit interval [0, u] to a product of finite chains and
``phi`` goes back.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import brute, frames
from .core import (
    INF, Block, Element, FiniteChain, Signature, neg, oplus,
)
from .errors import NotUnitPreserving, SignatureMismatch, MalformedInput, UnitIntervalNotRepresentable
from .morphisms import BlockRule, ProductHom, Reindex, _rule_from_json, rule_to_json


@dataclass(frozen=True)
class LuBlock:
    unit: int
    mult: int | float = 1

    def __post_init__(self):
        if not isinstance(self.unit, int) or isinstance(self.unit, bool) or self.unit < 1:
            raise MalformedInput(f"unit entries must be integers >= 1, got {self.unit!r}")
        Block(FiniteChain(2), self.mult)  # reuses the multiplicity check

    @property
    def is_infinite(self) -> bool:
        return self.mult == INF

    def __str__(self):
        base = f"Z[u={self.unit}]"
        if self.mult == 1:
            return base
        return f"{base}^{'w' if self.is_infinite else self.mult}"


@dataclass(frozen=True)
class LuSignature:
    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise MalformedInput("an lu-signature needs at least one block")

    @classmethod
    def of(cls, *blocks: LuBlock) -> "LuSignature":
        return cls(tuple(blocks))

    def __str__(self):
        return " x ".join(str(b) for b in self.blocks)

    @property
    def index_set_finite(self) -> bool:
        return all(not b.is_infinite for b in self.blocks)

    def coordinates(self) -> list:
        if not self.index_set_finite:
            raise MalformedInput(f"{self} has an infinite index set")
        return [(b, i) for b, blk in enumerate(self.blocks) for i in range(blk.mult)]

    def check_coord(self, b: int, i: int) -> None:
        if not (0 <= b < len(self.blocks)):
            raise MalformedInput(f"no block {b} in {self}")
        blk = self.blocks[b]
        if i < 0 or (not blk.is_infinite and i >= blk.mult):
            raise MalformedInput(f"index {i} out of range for block {b} ({blk})")


def _int(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        if isinstance(v, str):
            try:
                return int(v)
            except ValueError:
                pass
        raise MalformedInput(f"group coordinates are integers, got {v!r}")
    return v


@dataclass(frozen=True)
class LuElement:
    """Integer vector: ``parts[b] = (default, ((index, value), ...))``."""

    sig: LuSignature
    parts: tuple

    @classmethod
    def _canonical(cls, sig: LuSignature, data) -> "LuElement":
        parts = []
        for blk, (default, exc) in zip(sig.blocks, data):
            if not blk.is_infinite and default != 0:
                exc = {i: exc.get(i, default) for i in range(blk.mult)}
                default = 0
            parts.append((default, tuple(sorted((i, v) for i, v in exc.items() if v != default))))
        return cls(sig, tuple(parts))

    @classmethod
    def build(cls, sig: LuSignature, defaults=None, exceptions=None) -> "LuElement":
        defaults = [0] * len(sig.blocks) if defaults is None else list(defaults)
        if len(defaults) != len(sig.blocks):
            raise MalformedInput(f"expected {len(sig.blocks)} defaults, got {len(defaults)}")
        data = [(_int(d), {}) for d in defaults]
        for (b, i), v in (exceptions or {}).items():
            sig.check_coord(b, i)
            data[b][1][i] = _int(v)
        return cls._canonical(sig, data)

    @classmethod
    def from_values(cls, sig: LuSignature, values) -> "LuElement":
        coords = sig.coordinates()
        if len(values) != len(coords):
            raise MalformedInput(f"{sig} has {len(coords)} coordinates, got {len(values)} values")
        return cls.build(sig, exceptions=dict(zip(coords, values)))

    @classmethod
    def zero(cls, sig: LuSignature) -> "LuElement":
        return cls(sig, tuple((0, ()) for _ in sig.blocks))

    @classmethod
    def unit(cls, sig: LuSignature) -> "LuElement":
        return cls._canonical(sig, [(blk.unit, {}) for blk in sig.blocks])

    def value(self, b: int, i: int) -> int:
        return dict(self.parts[b][1]).get(i, self.parts[b][0])

    def __getitem__(self, coord) -> int:
        return self.value(*coord)

    def default(self, b: int) -> int:
        return self.parts[b][0]

    def exceptions(self, b: int) -> dict:
        return dict(self.parts[b][1])

    def values(self) -> tuple:
        return tuple(self.value(b, i) for b, i in self.sig.coordinates())

    def map_blocks(self, fn: Callable[[int, int], int]) -> "LuElement":
        data = [(fn(b, d), {i: fn(b, v) for i, v in exc})
                for b, (d, exc) in enumerate(self.parts)]
        return LuElement._canonical(self.sig, data)

    def zip_with(self, other: "LuElement", fn: Callable[[int, int], int]) -> "LuElement":
        if self.sig != other.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")
        data = []
        for b in range(len(self.sig.blocks)):
            idx = set(self.exceptions(b)) | set(other.exceptions(b))
            data.append((fn(self.default(b), other.default(b)),
                         {i: fn(self.value(b, i), other.value(b, i)) for i in idx}))
        return LuElement._canonical(self.sig, data)

    def compare_all(self, other: "LuElement", pred) -> bool:
        if self.sig != other.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")
        for b, blk in enumerate(self.sig.blocks):
            idx = set(self.exceptions(b)) | set(other.exceptions(b))
            if not all(pred(self.value(b, i), other.value(b, i)) for i in idx):
                return False
            # the default is attained at some unmentioned index of an infinite block
            if blk.is_infinite and not pred(self.default(b), other.default(b)):
                return False
        return True

    def __add__(self, other):
        return self.zip_with(other, lambda a, c: a + c)

    def __sub__(self, other):
        return self.zip_with(other, lambda a, c: a - c)

    def __neg__(self):
        return self.map_blocks(lambda _, a: -a)

    def __or__(self, other):
        return self.zip_with(other, max)

    def __and__(self, other):
        return self.zip_with(other, min)

    def __le__(self, other):
        return self.compare_all(other, lambda a, c: a <= c)

    def scale(self, k: int) -> "LuElement":
        return self.map_blocks(lambda _, a: k * a)

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


def pos_part(a: LuElement) -> LuElement:
    return a | LuElement.zero(a.sig)


def neg_part(a: LuElement) -> LuElement:
    return (-a) | LuElement.zero(a.sig)


def abs_val(a: LuElement) -> LuElement:
    return pos_part(a) + neg_part(a)


def unit_multiple(g: LuElement) -> int:
    """Least N >= 0 with |g| <= N u."""
    out = 0
    for b, blk in enumerate(g.sig.blocks):
        vals = [abs(v) for v in g.exceptions(b).values()]
        if blk.is_infinite or not vals:
            vals.append(abs(g.default(b)))
        out = max(out, max(-(-v // blk.unit) for v in vals))
    return out


# ---------------------------------------------------------------------------
# Gamma and Phi
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaInterval:
    """The interval [0, u] of an lu-group as a product of chains L_(u+1)."""

    group: LuSignature
    sig: Signature

    def contains(self, g: LuElement) -> bool:
        return LuElement.zero(self.group) <= g and g <= LuElement.unit(self.group)

    def to_mv(self, g: LuElement) -> Element:
        if g.sig != self.group:
            raise SignatureMismatch(f"{g.sig} vs {self.group}")
        if not self.contains(g):
            raise MalformedInput(f"{g} is not in [0, u]")
        units = [blk.unit for blk in self.group.blocks]
        data = [(Fraction(d, units[b]), {i: Fraction(v, units[b]) for i, v in exc})
                for b, (d, exc) in enumerate(g.parts)]
        return Element._canonical(self.sig, data)

    def from_mv(self, x: Element) -> LuElement:
        if x.sig != self.sig:
            raise SignatureMismatch(f"{x.sig} vs {self.sig}")
        units = [blk.unit for blk in self.group.blocks]
        data = [(int(d * units[b]), {i: int(v * units[b]) for i, v in exc})
                for b, (d, exc) in enumerate(x.parts)]
        return LuElement._canonical(self.group, data)

    def oplus(self, g: LuElement, h: LuElement) -> LuElement:
        """Truncated sum (g + h) meet u."""
        return (g + h) & LuElement.unit(self.group)

    def neg(self, g: LuElement) -> LuElement:
        return LuElement.unit(self.group) - g

    def interval_elements(self, bound: int = 4096):
        """Every element of [0, u] (index-finite groups only)."""
        ranges = [range(self.group.blocks[b].unit + 1) for b, _ in self.group.coordinates()]
        if math.prod(len(r) for r in ranges) > bound:
            raise MalformedInput("interval too large to list")
        for vals in itertools.product(*ranges):
            yield LuElement.from_values(self.group, list(vals))

    def verify(self, rng: random.Random = None, samples: int = 200) -> dict:
        """Interval operations against the chain product, and the MV axioms."""
        rng = rng or random.Random(0)
        if self.group.index_set_finite and self.sig.carrier_size() <= 64:
            pts = list(self.interval_elements())
            pairs = list(itertools.product(pts, repeat=2))
            axioms = brute.mv_axioms_hold(self.to_mv(g) for g in pts)
        else:
            pts = [self.sample(rng) for _ in range(samples)]
            pairs = list(zip(pts, reversed(pts)))
            axioms = None
        return {
            "oplus agrees": all(self.to_mv(self.oplus(g, h)) == oplus(self.to_mv(g), self.to_mv(h))
                                for g, h in pairs),
            "neg agrees": all(self.to_mv(self.neg(g)) == neg(self.to_mv(g)) for g in pts),
            "round trip": all(self.from_mv(self.to_mv(g)) == g for g in pts),
            "mv axioms": axioms,
        }

    def sample(self, rng: random.Random, max_exceptions: int = 3, index_span: int = 16) -> LuElement:
        data = []
        for blk in self.group.blocks:
            if blk.is_infinite:
                exc = {rng.randrange(index_span): rng.randint(0, blk.unit) for _ in range(rng.randint(0, max_exceptions))}
                data.append((rng.randint(0, blk.unit), exc))
            else:
                data.append((0, {i: rng.randint(0, blk.unit) for i in range(blk.mult)}))
        return LuElement._canonical(self.group, data)


def gamma(L: LuSignature) -> GammaInterval:
    return GammaInterval(L, Signature(tuple(Block(FiniteChain(blk.unit + 1), blk.mult) for blk in L.blocks)))


def phi(sig: Signature) -> LuSignature:
    out = []
    for blk in sig.blocks:
        if not blk.kind.is_finite:
            raise UnitIntervalNotRepresentable(f"{sig} has a unit-interval factor")
        out.append(LuBlock(blk.kind.n - 1, blk.mult))
    return LuSignature(tuple(out))


# ---------------------------------------------------------------------------
# Compactness and algebraicity
# ---------------------------------------------------------------------------

def truncated_abs(g: LuElement) -> LuElement:
    """|g| meet u."""
    return abs_val(g) & LuElement.unit(g.sig)


def is_lu_compact(g: LuElement, L: LuSignature = None) -> frames.CompactnessVerdict:
    if L is not None and g.sig != L:
        raise SignatureMismatch(f"{g.sig} vs {L}")
    return frames.is_compact(gamma(g.sig).to_mv(truncated_abs(g)))


def truncate(g: LuElement, n: int) -> LuElement:
    """Keep indices < n of every infinite block, 0 beyond."""
    data = []
    for blk, (d, exc) in zip(g.sig.blocks, g.parts):
        if blk.is_infinite:
            e = {i: d for i in range(n)}
            e.update({i: v for i, v in exc if i < n})
            data.append((0, e))
        else:
            data.append((d, dict(exc)))
    return LuElement._canonical(g.sig, data)


@dataclass(frozen=True)
class ApproximationRecord:
    element: LuElement
    approximants: tuple
    all_compact: bool
    all_below: bool
    reaches: bool  # every coordinate is attained by some approximant

    @property
    def ok(self) -> bool:
        return self.all_compact and self.all_below and self.reaches

    def to_json(self) -> dict:
        return {
            "element": lu_element_to_json(self.element),
            "approximants": [lu_element_to_json(a) for a in self.approximants],
            "allCompact": self.all_compact,
            "allBelow": self.all_below,
            "reaches": self.reaches,
        }


def approximate(g: LuElement, k: int = 6) -> ApproximationRecord:
    """Compact approximants of g >= 0: finite truncations.

    Their join is g: a coordinate (b, i) of an infinite block agrees with g
    from the truncation at i + 1 on.  ``reaches`` checks this on every
    mentioned index and one index past them.
    """
    if not LuElement.zero(g.sig) <= g:
        raise MalformedInput("approximation is defined here for g >= 0")
    if g.sig.index_set_finite:
        approx = (g,)
        probe = g.sig.coordinates()
    else:
        top = 1 + max([i for b in range(len(g.sig.blocks)) for i in g.exceptions(b)] + [0])
        approx = tuple(truncate(g, n) for n in range(1, max(k, top + 1) + 1))
        probe = [(b, i) for b, blk in enumerate(g.sig.blocks)
                 for i in (range(top + 1) if blk.is_infinite else range(blk.mult))]
    return ApproximationRecord(
        element=g,
        approximants=approx,
        all_compact=all(is_lu_compact(a).compact for a in approx),
        all_below=all(a <= g for a in approx),
        reaches=all(any(a[c] == g[c] for a in approx) for c in probe),
    )


@dataclass(frozen=True)
class AlgebraicityReport:
    group: LuSignature
    records: tuple  # (positive part, negative part) per sampled element
    algebraic: bool = True

    @property
    def verified(self) -> bool:
        return all(p.ok and m.ok for _, p, m in self.records)

    def to_json(self) -> dict:
        return {
            "group": lu_signature_to_json(self.group),
            "algebraic": self.algebraic,
            "verified": self.verified,
            "samples": [{"element": lu_element_to_json(g), "positive": p.to_json(), "negative": m.to_json()}
                        for g, p, m in self.records],
        }


def random_lu_element(L: LuSignature, rng: random.Random, spread: int = 6,
                      max_exceptions: int = 3, index_span: int = 16) -> LuElement:
    data = []
    for blk in L.blocks:
        if blk.is_infinite:
            exc = {rng.randrange(index_span): rng.randint(-spread, spread)
                   for _ in range(rng.randint(0, max_exceptions))}
            data.append((rng.randint(-spread, spread), exc))
        else:
            data.append((0, {i: rng.randint(-spread, spread) for i in range(blk.mult)}))
    return LuElement._canonical(L, data)


def is_algebraic_lu_frame(L: LuSignature, rng: random.Random = None, samples: int = 20) -> AlgebraicityReport:
    """Every <Z^X, u> is algebraic; the report checks compact approximants of
    sampled elements, split as g = g+ - g- into two nonnegative parts."""
    rng = rng or random.Random(0)
    pts = [LuElement.zero(L), LuElement.unit(L)] + [random_lu_element(L, rng) for _ in range(samples)]
    return AlgebraicityReport(L, tuple((g, approximate(pos_part(g)), approximate(neg_part(g))) for g in pts))


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LuHom:
    """Target block t at index i is ``scales[t]`` times the source coordinate
    its index rule reads."""

    source: LuSignature
    target: LuSignature
    rules: tuple
    scales: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "scales", tuple(self.scales))
        if len(self.rules) != len(self.target.blocks) or len(self.scales) != len(self.target.blocks):
            raise MalformedInput("one index rule and one scale per target block are required")
        if any(not isinstance(s, int) or s < 1 for s in self.scales):
            raise MalformedInput("scales must be positive integers")
        # index rules are validated on two-element chains, where every
        # coordinate map is an embedding
        ProductHom(_shape(self.source), _shape(self.target), self.rules)

    def __call__(self, g: LuElement) -> LuElement:
        if g.sig != self.source:
            raise SignatureMismatch(f"{g.sig} vs source {self.source}")
        data = []
        for t, (blk, br) in enumerate(zip(self.target.blocks, self.rules)):
            s = self.scales[t]
            r = br.rule
            if blk.is_infinite and isinstance(r, Reindex):
                default = s * g.default(r.block)
                exc = {}
                for e, v in g.exceptions(r.block).items():
                    if e >= r.offset:
                        start = (e - r.offset) * r.stretch
                        exc.update({i: s * v for i in range(start, start + r.stretch)})
            elif blk.is_infinite:
                default, exc = s * g.value(*br.source(0)), {}
            else:
                default, exc = 0, {i: s * g.value(*br.source(i)) for i in range(blk.mult)}
            for i, c in br.exceptions:
                exc[i] = s * g.value(*c)
            data.append((default, exc))
        return LuElement._canonical(self.target, data)

    def preserves_unit(self) -> bool:
        return self(LuElement.unit(self.source)) == LuElement.unit(self.target)


def _shape(L: LuSignature) -> Signature:
    return Signature(tuple(Block(FiniteChain(2), blk.mult) for blk in L.blocks))


def gamma_on_morphisms(F: LuHom) -> ProductHom:
    """Restriction of a unit-preserving F to [0, u] as a ProductHom."""
    for t, br in enumerate(F.rules):
        for b in br.read_blocks():
            if F.scales[t] * F.source.blocks[b].unit != F.target.blocks[t].unit:
                raise NotUnitPreserving(
                    f"block {t}: {F.scales[t]} * {F.source.blocks[b].unit} != {F.target.blocks[t].unit}")
    return ProductHom(gamma(F.source).sig, gamma(F.target).sig, F.rules, F.name)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def _mult_json(m):
    return "inf" if m == INF else m


def _mult_from(m):
    if m in ("inf", "w", "ω", "omega"):
        return INF
    return m


def lu_signature_to_json(L: LuSignature) -> dict:
    return {"blocks": [{"unit": blk.unit, "mult": _mult_json(blk.mult)} for blk in L.blocks]}


def lu_signature_from_json(obj) -> LuSignature:
    try:
        return LuSignature(tuple(LuBlock(b["unit"], _mult_from(b.get("mult", 1))) for b in obj["blocks"]))
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"malformed lu-signature: {exc}") from exc


def lu_element_to_json(g: LuElement) -> dict:
    out = {"exceptions": {f"{b}.{i}": v for b, (_, exc) in enumerate(g.parts) for i, v in exc}}
    if not g.sig.index_set_finite:
        out["defaults"] = [d for d, _ in g.parts]
    return out


def lu_element_from_json(L: LuSignature, obj) -> LuElement:
    try:
        if "values" in obj:
            return LuElement.from_values(L, obj["values"])
        exc = {}
        for key, v in obj.get("exceptions", {}).items():
            b, _, i = key.partition(".")
            exc[(int(b), int(i))] = v
        if not L.index_set_finite and "defaults" not in obj:
            raise MalformedInput("elements of infinite blocks need explicit defaults")
        return LuElement.build(L, obj.get("defaults"), exc)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedInput(f"malformed lu-element: {exc}") from exc


def lu_hom_to_json(F: LuHom) -> dict:
    return {
        "source": lu_signature_to_json(F.source),
        "target": lu_signature_to_json(F.target),
        "indexMap": [rule_to_json(br) for br in F.rules],
        "scales": list(F.scales),
    }


def lu_hom_from_json(obj) -> LuHom:
    try:
        src = lu_signature_from_json(obj["source"])
        tgt = lu_signature_from_json(obj["target"])
        rules = tuple(_rule_from_json(r, t) for t, r in enumerate(obj["indexMap"]))
        scales = tuple(obj.get("scales", [1] * len(tgt.blocks)))
        return LuHom(src, tgt, rules, scales)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedInput(f"malformed lu-hom: {exc}") from exc
