"""Frame-theoretic structure of product MV-frames.

Suprema, pseudocomplements, the Boolean center, compactness (with explicit
certificates for non-compact elements), way-below, and the structural
classification of a signature.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .core import (
    DEFAULT_BOUND, ONE, ZERO, Element, Signature, element_to_json, enumerate_carrier, join,
    meet, oplus,
)
from .errors import InfiniteCarrier, SignatureMismatch

WITNESS_PREFIX = 64


def join_finite(xs: Iterable[Element], sig: Signature = None) -> Element:
    """Coordinatewise max of a finite family; the empty join is 0 (needs ``sig``)."""
    xs = list(xs)
    if not xs:
        if sig is None:
            raise SignatureMismatch("empty join needs an explicit signature")
        return Element.zero(sig)
    out = xs[0]
    for x in xs[1:]:
        out = join(out, x)
    if sig is not None and out.sig != sig:
        raise SignatureMismatch(f"{out.sig} vs {sig}")
    return out


def meet_finite(xs: Iterable[Element], sig: Signature = None) -> Element:
    """Coordinatewise min of a finite family; the empty meet is 1 (needs ``sig``)."""
    xs = list(xs)
    if not xs:
        if sig is None:
            raise SignatureMismatch("empty meet needs an explicit signature")
        return Element.one(sig)
    out = xs[0]
    for x in xs[1:]:
        out = meet(out, x)
    if sig is not None and out.sig != sig:
        raise SignatureMismatch(f"{out.sig} vs {sig}")
    return out


def pseudocomplement(z: Element) -> Element:
    """Largest x with x ^ z = 0: 1 where z vanishes, 0 elsewhere."""
    return z.map_blocks(lambda _b, v: ONE if v == 0 else ZERO)


def in_boolean_center(x: Element) -> bool:
    return oplus(x, x) == x


def has_boolean_coordinates(x: Element) -> bool:
    return x.all_values() <= {ZERO, ONE}


def way_below(x: Element, y: Element) -> bool:
    """x is way below y iff y v x* = 1."""
    return join(y, pseudocomplement(x)) == Element.one(y.sig)


def is_regular_element(x: Element) -> bool:
    # closed form, pinned against the brute-force join on finite algebras
    return has_boolean_coordinates(x)


# ---------------------------------------------------------------------------
# Compactness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainWitness:
    """An increasing family beta_1 <= beta_2 <= ... whose supremum is ``alpha``
    while no beta_n (hence no finite subfamily join) dominates ``alpha``.

    ``mode`` is ``"exhaust"`` (block ``block`` is cut to indices < n, used when
    ``alpha`` has infinite support) or ``"rational"`` (the unit-interval
    coordinate ``(block, coord_index)`` holding ``target`` is replaced by
    ``target * n / (n + 1)``).
    """

    alpha: Element
    mode: str
    block: int
    coord_index: Optional[int] = None
    target: Optional[Fraction] = None

    def term(self, n: int) -> Element:
        if n < 1:
            raise ValueError("witness terms are indexed from 1")
        a = self.alpha
        if self.mode == "exhaust":
            b = self.block
            data = []
            for c, blk in enumerate(a.sig.blocks):
                if c == b:
                    data.append((ZERO, {i: a.value(b, i) for i in range(n)}))
                else:
                    data.append((a.default(c), a.exceptions(c)))
            return Element._canonical(a.sig, data)
        q = self.target * Fraction(n, n + 1)
        b, i = self.block, self.coord_index
        data = [(a.default(c), a.exceptions(c)) for c in range(len(a.sig.blocks))]
        data[b][1][i] = q
        return Element._canonical(a.sig, data)

    def terms(self, k: int) -> list:
        return [self.term(n) for n in range(1, k + 1)]

    def supremum(self) -> Element:
        return self.alpha

    @property
    def formula(self) -> str:
        if self.mode == "exhaust":
            return (f"beta_n = alpha with block {self.block} cut to indices < n "
                    f"(exhausts the infinite support); sup_n beta_n = alpha")
        return (f"beta_n = alpha with coordinate {self.block}.{self.coord_index} replaced by "
                f"q_n = {self.target}*n/(n+1); q_n increases strictly to {self.target}")

    def to_json(self, k: int = 8) -> dict:
        return {
            "block": self.block,
            "coordIndex": self.coord_index,
            "mode": self.mode,
            "formula": self.formula,
            "terms": [element_to_json(t) for t in self.terms(k)],
        }


@dataclass(frozen=True)
class CompactnessVerdict:
    compact: bool
    witness: Optional[ChainWitness] = None
    reason: str = ""

    def to_json(self, k: int = 8) -> dict:
        return {
            "compact": self.compact,
            "reason": self.reason,
            "witness": None if self.witness is None else self.witness.to_json(k),
        }


def is_compact(alpha: Element) -> CompactnessVerdict:
    """Compact iff the support is finite and avoids unit-interval factors."""
    sig = alpha.sig
    for b, blk in enumerate(sig.blocks):
        if blk.is_infinite and alpha.default(b) != 0:
            return CompactnessVerdict(
                False, ChainWitness(alpha, "exhaust", b),
                f"infinite support: block {b} has default {alpha.default(b)}")
    for b, i in alpha.support():
        if not sig.kind_at(b).is_finite:
            t = alpha.value(b, i)
            return CompactnessVerdict(
                False, ChainWitness(alpha, "rational", b, i, t),
                f"nonzero value {t} on unit-interval coordinate {b}.{i}")
    return CompactnessVerdict(True, None, "finite support inside finite chains")


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    checked_terms: int
    failures: tuple = ()


def verify_witness(witness: ChainWitness, prefix: int = WITNESS_PREFIX) -> WitnessCheck:
    """Machine-check the first ``prefix`` terms of a non-compactness certificate."""
    alpha = witness.alpha
    sup = witness.supremum()
    failures = []
    if not alpha <= sup:
        failures.append("declared supremum does not dominate alpha")
    terms = witness.terms(prefix + 1)
    running = Element.zero(alpha.sig)
    for n, (cur, nxt) in enumerate(zip(terms, terms[1:]), start=1):
        if not cur <= nxt:
            failures.append(f"beta_{n} is not below beta_{n + 1}")
        if not cur <= sup:
            failures.append(f"beta_{n} exceeds the declared supremum")
        running = join(running, cur)
        if alpha <= running:
            failures.append(f"the join of beta_1..beta_{n} already dominates alpha")
        if witness.mode == "rational":
            gap = sup.value(witness.block, witness.coord_index) - cur.value(witness.block, witness.coord_index)
            if gap != witness.target / (n + 1) or not cur < nxt:
                failures.append(f"beta_{n} does not approach the target at rate t/(n+1)")
        else:
            b = witness.block
            if any(cur.value(b, i) != sup.value(b, i) for i in range(n)):
                failures.append(f"beta_{n} disagrees with the supremum below index {n}")
    return WitnessCheck(not failures, prefix, tuple(failures))


def compact_approximants(x: Element, k: int) -> list:
    """Truncations of ``x`` to indices < n (n = 1..k) on every infinite block.

    Each term is compact when ``x`` vanishes on unit-interval coordinates;
    the terms increase, stay below ``x`` and agree with it below index n,
    so their supremum is ``x``.
    """
    out = []
    for n in range(1, k + 1):
        data = []
        for b, blk in enumerate(x.sig.blocks):
            if blk.is_infinite:
                data.append((ZERO, {i: x.value(b, i) for i in range(n)}))
            else:
                data.append((ZERO, x.exceptions(b)))
        out.append(Element._canonical(x.sig, data))
    return out


def check_approximants(x: Element, k: int = 8) -> bool:
    """Certificate that ``x`` is the join of the compact elements below it."""
    if x.sig.index_set_finite:
        return is_compact(x).compact
    terms = compact_approximants(x, k)
    for n, t in enumerate(terms, start=1):
        if not (is_compact(t).compact and t <= x):
            return False
        if n < k and not t <= terms[n]:
            return False
        for b, blk in enumerate(x.sig.blocks):
            if blk.is_infinite and any(t.value(b, i) != x.value(b, i) for i in range(n)):
                return False
    return True


@dataclass(frozen=True)
class CompactSet:
    """Description of the compact elements of a signature."""

    sig: Signature

    def contains(self, x: Element) -> bool:
        return is_compact(x).compact

    def describe(self) -> str:
        sig = self.sig
        if all(not b.kind.is_finite for b in sig.blocks):
            return "{0}"
        if sig.is_fully_finite:
            return f"the whole carrier ({sig.carrier_size()} elements)"
        if sig.has_unit_interval:
            return "finite-support elements that vanish on unit-interval coordinates"
        return "finite-support elements (the direct sum of the factors)"

    def materialize(self, bound: int = DEFAULT_BOUND) -> list:
        """All compact elements; needs a finite index set."""
        if not self.sig.index_set_finite:
            raise InfiniteCarrier(f"{self.sig} has infinitely many compact elements")
        chains = _chain_part(self.sig)
        return [_widen(self.sig, chains, e) for e in enumerate_carrier(chains, bound)] if chains else [
            Element.zero(self.sig)]


def _chain_part(sig: Signature):
    """The sub-signature made of the chain blocks, or None when there are none."""
    blocks = [blk for blk in sig.blocks if blk.kind.is_finite]
    return Signature(tuple(blocks)) if blocks else None


def _widen(sig: Signature, chains: Signature, e: Element) -> Element:
    data, k = [], 0
    for blk in sig.blocks:
        if blk.kind.is_finite:
            data.append((e.default(k), e.exceptions(k)))
            k += 1
        else:
            data.append((ZERO, {}))
    return Element._canonical(sig, data)


@dataclass(frozen=True)
class MaximalCompactSet:
    """Maximal compact elements: characteristic functions chi_F of finite
    sets F of chain coordinates.

    When the chain coordinates are finitely many this is the single element
    chi_F with F all of them.  On infinite index sets the order has no
    maximal compact elements at all, and the set follows the usual
    convention that every chi_F with F finite counts as maximal compact.
    """

    sig: Signature

    @property
    def chain_index_finite(self) -> bool:
        return all(not blk.is_infinite for blk in self.sig.blocks if blk.kind.is_finite)

    def contains(self, x: Element) -> bool:
        if not has_boolean_coordinates(x) or not is_compact(x).compact:
            return False
        if self.chain_index_finite:
            return x == self.top()
        return True

    def top(self) -> Element:
        """The unique maximal compact element (finite chain index set)."""
        coords = [(b, i) for b, blk in enumerate(self.sig.blocks) if blk.kind.is_finite
                  for i in range(blk.mult)]
        return Element.indicator(self.sig, coords)

    def describe(self) -> str:
        if _chain_part(self.sig) is None:
            return "{0}"
        if self.chain_index_finite:
            return f"{{{self.top()}}}"
        return "chi_F for finite sets F of chain coordinates"

    def materialize(self) -> list:
        if not self.chain_index_finite:
            raise InfiniteCarrier("infinitely many chi_F")
        return [self.top()]


def compact_elements(sig: Signature) -> CompactSet:
    return CompactSet(sig)


def maximal_compact_elements(sig: Signature) -> MaximalCompactSet:
    return MaximalCompactSet(sig)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrameClassification:
    """Structural verdicts for a product signature.

    ``regular`` is only meaningful when ``algebraic`` is true.
    """

    algebraic: bool
    coherent: bool
    regular: bool
    fip: bool
    is_powerset_algebra: bool

    def to_json(self) -> dict:
        return {
            "algebraic": self.algebraic,
            "coherent": self.coherent,
            "regular": self.regular,
            "fip": self.fip,
            "isPowersetAlgebra": self.is_powerset_algebra,
        }


def classify(sig: Signature) -> FrameClassification:
    algebraic = not sig.has_unit_interval
    boolean = algebraic and all(blk.kind.n == 2 for blk in sig.blocks)
    return FrameClassification(
        algebraic=algebraic,
        coherent=sig.is_fully_finite,
        regular=boolean,
        fip=True,
        is_powerset_algebra=boolean,
    )
