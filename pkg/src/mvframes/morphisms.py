"""Homomorphisms between product MV-frames in reindex + chain-embed form.

A :class:`ProductHom` sends ``alpha`` to the element whose coordinate ``y``
is ``alpha(m(y))``, read through the chain embedding from the source factor
into the target factor.  The index map ``m`` is given per target block by
one of three rules (:class:`Const`, :class:`Reindex`, :class:`Explicit`)
plus finitely many exceptions.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from . import frames
from .core import (
    INF, ONE, ZERO, Block, Element, FactorKind, FiniteChain, Signature, element_to_json,
    enumerate_carrier, signature_from_json, signature_to_json,
)
from .errors import NotAlgebraicSignature, SignatureMismatch, MalformedInput


# ---------------------------------------------------------------------------
# Chain embeddings
# ---------------------------------------------------------------------------

def chain_hom_exists(src: FactorKind, dst: FactorKind) -> bool:
    if not dst.is_finite:
        return True
    if not src.is_finite:
        return False
    return (dst.n - 1) % (src.n - 1) == 0


@dataclass(frozen=True)
class ChainHom:
    """The (unique) MV-embedding of one factor into another.

    L_n embeds in L_m exactly when (n-1) divides (m-1); both chains sit in
    [0, 1] and the embedding keeps every value where it is.
    """

    src: FactorKind
    dst: FactorKind

    def __post_init__(self):
        if not chain_hom_exists(self.src, self.dst):
            raise MalformedInput(f"no MV-homomorphism {self.src.label} -> {self.dst.label}")
        if self.src.is_finite:
            carrier = self.src.carrier()
            for a in carrier:
                if not self.dst.contains(self(a)) or self(1 - a) != 1 - self(a):
                    raise MalformedInput(f"{self.label} does not preserve negation at {a}")
                for b in carrier:
                    if self(min(ONE, a + b)) != min(ONE, self(a) + self(b)):
                        raise MalformedInput(f"{self.label} does not preserve oplus at {a}, {b}")
            if self(ZERO) != 0:
                raise MalformedInput(f"{self.label} does not preserve 0")

    def __call__(self, v: Fraction) -> Fraction:
        return v

    @property
    def label(self) -> str:
        return f"{self.src.label}->{self.dst.label}"

    def to_json(self) -> dict:
        return {"from": self.src.label, "to": self.dst.label}


# ---------------------------------------------------------------------------
# Index maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    """Every index of the target block reads source coordinate (block, index)."""

    block: int
    index: int


@dataclass(frozen=True)
class Reindex:
    """Index i of the target block reads source (block, offset + i // stretch)."""

    block: int
    stretch: int = 1
    offset: int = 0


@dataclass(frozen=True)
class Explicit:
    """Finite target block: index i reads ``coords[i]``."""

    coords: tuple


Rule = Union[Const, Reindex, Explicit]


@dataclass(frozen=True)
class BlockRule:
    rule: Rule
    exceptions: tuple = ()  # sorted ((target_index, (block, index)), ...)

    def __post_init__(self):
        object.__setattr__(self, "exceptions", tuple(sorted(dict(self.exceptions).items())))

    def source(self, i: int) -> tuple:
        exc = dict(self.exceptions)
        if i in exc:
            return exc[i]
        r = self.rule
        if isinstance(r, Const):
            return (r.block, r.index)
        if isinstance(r, Reindex):
            return (r.block, r.offset + i // r.stretch)
        return r.coords[i]

    def read_blocks(self) -> set:
        r = self.rule
        out = {c[0] for _, c in self.exceptions}
        if isinstance(r, Explicit):
            out.update(c[0] for c in r.coords)
        else:
            out.add(r.block)
        return out


@dataclass(frozen=True)
class ProductHom:
    source: Signature
    target: Signature
    rules: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        if len(self.rules) != len(self.target.blocks):
            raise MalformedInput("one index rule per target block is required")
        for t, (blk, br) in enumerate(zip(self.target.blocks, self.rules)):
            self._check_rule(t, blk, br)

    def _check_rule(self, t: int, blk: Block, br: BlockRule) -> None:
        src = self.source
        r = br.rule
        if isinstance(r, Explicit):
            if blk.is_infinite or len(r.coords) != blk.mult:
                raise MalformedInput(f"explicit rule for block {t} must list {blk.mult} coordinates")
            for c in r.coords:
                src.check_coord(*c)
        elif isinstance(r, Const):
            src.check_coord(r.block, r.index)
        else:
            if r.stretch < 1 or r.offset < 0:
                raise MalformedInput("reindex needs stretch >= 1 and offset >= 0")
            sb = src.blocks[r.block] if 0 <= r.block < len(src.blocks) else None
            if sb is None:
                raise MalformedInput(f"no source block {r.block}")
            if blk.is_infinite and not sb.is_infinite:
                raise MalformedInput(f"infinite block {t} cannot reindex the finite source block {r.block}")
            if not blk.is_infinite:
                src.check_coord(r.block, r.offset + (blk.mult - 1) // r.stretch)
        for i, c in br.exceptions:
            self.target.check_coord(t, i)
            src.check_coord(*c)
        for b in br.read_blocks():
            ChainHom(src.kind_at(b), blk.kind)

    # -- evaluation ----------------------------------------------------------

    def source_coord(self, b: int, i: int) -> tuple:
        return self.rules[b].source(i)

    def coord_hom(self, b: int, i: int) -> ChainHom:
        sb, _ = self.source_coord(b, i)
        return ChainHom(self.source.kind_at(sb), self.target.kind_at(b))

    def coord_homs(self) -> list:
        out = []
        for t, br in enumerate(self.rules):
            kinds = sorted({self.source.kind_at(b).label for b in br.read_blocks()})
            out.append([{"from": k, "to": self.target.kind_at(t).label} for k in kinds])
        return out

    def __call__(self, alpha: Element) -> Element:
        return apply(self, alpha)

    def fiber_infinite_blocks(self) -> list:
        """Target blocks whose rule makes some source fiber infinite."""
        return [t for t, (blk, br) in enumerate(zip(self.target.blocks, self.rules))
                if blk.is_infinite and isinstance(br.rule, Const)]

    def representative_coords(self) -> list:
        """Source coordinates covering every kind of fiber behaviour."""
        src = self.source
        mentioned = set()
        for br in self.rules:
            r = br.rule
            mentioned.update(c for _, c in br.exceptions)
            if isinstance(r, Const):
                mentioned.add((r.block, r.index))
            elif isinstance(r, Explicit):
                mentioned.update(r.coords)
        reps = set()
        for b, blk in enumerate(src.blocks):
            if blk.is_infinite:
                local = [i for c, i in mentioned if c == b]
                offsets = [br.rule.offset for br in self.rules if isinstance(br.rule, Reindex)]
                generic = max(local + offsets + [0]) + 1
                reps.update((b, i) for i in local)
                reps.add((b, generic))
            else:
                reps.update((b, i) for i in range(blk.mult))
        return sorted(reps)


def apply(phi: ProductHom, alpha: Element) -> Element:
    if alpha.sig != phi.source:
        raise SignatureMismatch(f"{alpha.sig} vs source {phi.source}")
    data = []
    for t, (blk, br) in enumerate(zip(phi.target.blocks, phi.rules)):
        r = br.rule
        if isinstance(r, Const):
            default, exc = alpha.value(r.block, r.index), {}
        elif isinstance(r, Reindex) and blk.is_infinite:
            default, exc = alpha.default(r.block), {}
            for e, v in alpha.exceptions(r.block).items():
                if e >= r.offset:
                    start = (e - r.offset) * r.stretch
                    exc.update({i: v for i in range(start, start + r.stretch)})
        else:
            default = ZERO
            exc = {i: alpha.value(*br.source(i)) for i in range(blk.mult)}
        for i, c in br.exceptions:
            exc[i] = alpha.value(*c)
        data.append((default, exc))
    return Element._canonical(phi.target, data)


def identity_hom(sig: Signature) -> ProductHom:
    return ProductHom(sig, sig, tuple(BlockRule(Reindex(b)) for b in range(len(sig.blocks))), "id")


# ---------------------------------------------------------------------------
# Completeness and coherence
# ---------------------------------------------------------------------------

EXHAUSTIVE_SUBSETS = 9
EXHAUSTIVE_PAIRS = 64


def is_complete(phi: ProductHom, verify: bool = True) -> bool:
    """Every coordinate of the target reads one source coordinate through a
    chain embedding, and suprema are computed coordinatewise, so every
    ProductHom preserves arbitrary joins.  With ``verify`` and enumerable
    signatures the claim is also checked: all subset joins on carriers of
    at most 9 elements, all pairwise joins up to 64."""
    if not verify or not (phi.source.is_fully_finite and phi.target.is_fully_finite):
        return True
    size = phi.source.carrier_size()
    if size > EXHAUSTIVE_PAIRS:
        return True
    from . import brute

    carrier = list(enumerate_carrier(phi.source))
    limit = None if size <= EXHAUSTIVE_SUBSETS else 2
    return brute.subset_joins_preserved(phi, carrier, limit)


def _require_algebraic(phi: ProductHom) -> None:
    for s in (phi.source, phi.target):
        if s.has_unit_interval:
            raise NotAlgebraicSignature(f"{s} has a unit-interval factor")


def is_coherent_map(phi: ProductHom) -> bool:
    """Compact elements go to compact elements.

    The support of phi(alpha) is the preimage of the support of alpha under
    the index map, so this holds iff every source coordinate has a finite
    fiber, i.e. no infinite target block is constant.
    """
    _require_algebraic(phi)
    return not phi.fiber_infinite_blocks()


def _max_compact_candidates(phi: ProductHom) -> list:
    src = phi.source
    reps = phi.representative_coords()
    cands = [Element.indicator(src, [c]) for c in reps]
    cands += [Element.indicator(src, pair) for pair in zip(reps, reps[1:])]
    mc = frames.maximal_compact_elements(src)
    if mc.chain_index_finite:
        cands.append(mc.top())
    return cands


def max_compact_counterexample(phi: ProductHom) -> Optional[Element]:
    """Some chi_F (F finite) whose image is not chi_G for a finite G."""
    _require_algebraic(phi)
    for chi in _max_compact_candidates(phi):
        img = apply(phi, chi)
        if not (frames.has_boolean_coordinates(img) and img.support_finite()):
            return chi
    return None


def preserves_maximal_compact(phi: ProductHom) -> bool:
    return max_compact_counterexample(phi) is None


@dataclass(frozen=True)
class CoherenceReport:
    coherent: bool
    complete: bool
    preserves_maximal_compact: bool
    counterexample: Optional[Element] = None

    @property
    def clause_i(self) -> bool:
        return self.coherent

    @property
    def clause_ii(self) -> bool:
        return self.complete and self.preserves_maximal_compact

    @property
    def equivalent(self) -> bool:
        return self.clause_i == self.clause_ii

    def to_json(self) -> dict:
        return {
            "coherent": self.coherent,
            "complete": self.complete,
            "preservesMaximalCompact": self.preserves_maximal_compact,
            "equivalent": self.equivalent,
            "counterexample": None if self.counterexample is None else element_to_json(self.counterexample),
        }


def coherence_equivalence(phi: ProductHom) -> CoherenceReport:
    """Evaluate coherence and (completeness + maximal-compact preservation)
    separately; the report says whether they agree."""
    coherent = is_coherent_map(phi)
    cex = max_compact_counterexample(phi)
    return CoherenceReport(coherent, is_complete(phi), cex is None, cex)


# ---------------------------------------------------------------------------
# Named examples and random generation
# ---------------------------------------------------------------------------

def diagonal_embedding(n: int = 3) -> ProductHom:
    """L_n -> L_n^omega, x |-> the constant sequence x."""
    src = Signature.of(Block(FiniteChain(n)))
    tgt = Signature.of(Block(FiniteChain(n), INF))
    return ProductHom(src, tgt, (BlockRule(Const(0, 0)),), "diagonal")


def doubling_embedding(prefix_top: int = 6, tail: int = 7) -> ProductHom:
    """prod_{n>=2} L_n -> prod_{n>=2} L_{2n-1}, alpha(n) kept as a rational.

    Chains L_2..L_{prefix_top} are single blocks; every later factor is
    represented by one infinite tail block L_tail^omega -> L_{2 tail - 1}^omega.
    """
    ns = list(range(2, prefix_top + 1))
    src = Signature(tuple(Block(FiniteChain(n)) for n in ns) + (Block(FiniteChain(tail), INF),))
    tgt = Signature(tuple(Block(FiniteChain(2 * n - 1)) for n in ns)
                    + (Block(FiniteChain(2 * tail - 1), INF),))
    rules = tuple(BlockRule(Explicit(((k, 0),))) for k in range(len(ns)))
    rules += (BlockRule(Reindex(len(ns))),)
    return ProductHom(src, tgt, rules, "doubling")


def _random_sig(rng: random.Random, max_coords: int, max_chain: int) -> Signature:
    blocks, budget = [], max_coords
    for _ in range(rng.randint(1, 3)):
        n = rng.randint(2, max_chain)
        if budget > 0 and rng.random() < 0.6:
            m = rng.randint(1, min(3, budget))
            budget -= m
            blocks.append(Block(FiniteChain(n), m))
        else:
            blocks.append(Block(FiniteChain(n), INF))
    return Signature(tuple(blocks))


def random_product_hom(rng: random.Random, max_coords: int = 8, max_chain: int = 7) -> ProductHom:
    """A random hom between chain products with at most ``max_coords`` finite
    coordinates per side and chains no longer than ``max_chain``."""
    src = _random_sig(rng, max_coords, max_chain)
    src_coords = [(b, i) for b, blk in enumerate(src.blocks)
                  for i in range(blk.mult if not blk.is_infinite else 4)]
    inf_blocks = [b for b, blk in enumerate(src.blocks) if blk.is_infinite]
    blocks, rules, budget = [], [], max_coords
    for _ in range(rng.randint(1, 3)):
        infinite = budget == 0 or rng.random() < 0.4
        if infinite and inf_blocks and rng.random() < 0.6:
            b = rng.choice(inf_blocks)
            rule = Reindex(b, rng.randint(1, 2), rng.randint(0, 2))
        else:
            rule = Const(*rng.choice(src_coords))
        kind = _compatible_chain(rng, src.kind_at(rule.block).n, max_chain)
        usable = [c for c in src_coords if (kind.n - 1) % (src.kind_at(c[0]).n - 1) == 0]
        exceptions = {}
        if infinite:
            if rng.random() < 0.3:
                exceptions[rng.randrange(6)] = rng.choice(usable)
            blocks.append(Block(kind, INF))
        else:
            m = rng.randint(1, min(3, budget))
            budget -= m
            rule = Explicit(tuple(rng.choice(usable) for _ in range(m)))
            blocks.append(Block(kind, m))
        rules.append(BlockRule(rule, tuple(exceptions.items())))
    return ProductHom(src, Signature(tuple(blocks)), tuple(rules), "random")


def _compatible_chain(rng: random.Random, n: int, max_chain: int) -> FiniteChain:
    """A chain L_m, m <= max(n, max_chain), into which L_n embeds."""
    options = [m for m in range(n, max(n, max_chain) + 1) if (m - 1) % (n - 1) == 0]
    return FiniteChain(rng.choice(options))


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def _coord(s: str) -> tuple:
    b, _, i = str(s).partition(".")
    return (int(b), int(i))


def _coord_str(c) -> str:
    return f"{c[0]}.{c[1]}"


def rule_to_json(br: BlockRule) -> dict:
    r = br.rule
    if isinstance(r, Const):
        out = {"rule": "constant", "at": _coord_str((r.block, r.index))}
    elif isinstance(r, Reindex):
        if r.stretch == 1 and r.offset == 0:
            out = {"rule": "identity", "block": r.block}
        else:
            out = {"rule": "reindex", "block": r.block, "stretch": r.stretch, "offset": r.offset}
    else:
        out = {"rule": "explicit", "map": [_coord_str(c) for c in r.coords]}
    if br.exceptions:
        out["exceptions"] = {str(i): _coord_str(c) for i, c in br.exceptions}
    return out


def _rule_from_json(obj, t: int) -> BlockRule:
    kind = obj.get("rule")
    if kind == "constant":
        rule = Const(*_coord(obj["at"]))
    elif kind == "identity":
        rule = Reindex(obj.get("block", t))
    elif kind == "reindex":
        rule = Reindex(obj["block"], obj.get("stretch", 1), obj.get("offset", 0))
    elif kind == "explicit":
        rule = Explicit(tuple(_coord(c) for c in obj["map"]))
    else:
        raise MalformedInput(f"unknown index rule {kind!r}")
    exc = tuple((int(i), _coord(c)) for i, c in obj.get("exceptions", {}).items())
    return BlockRule(rule, exc)


def hom_to_json(phi: ProductHom) -> dict:
    return {
        "source": signature_to_json(phi.source),
        "target": signature_to_json(phi.target),
        "indexMap": [rule_to_json(br) for br in phi.rules],
        "coordHoms": phi.coord_homs(),
    }


def hom_from_json(obj) -> ProductHom:
    try:
        src = signature_from_json(obj["source"])
        tgt = signature_from_json(obj["target"])
        im = obj["indexMap"]
        if isinstance(im, dict):
            rule = im.get("rule")
            if rule == "identity":
                rules = tuple(BlockRule(Reindex(t)) for t in range(len(tgt.blocks)))
            elif isinstance(rule, str) and rule.startswith("constant:"):
                c = _coord(rule.split(":", 1)[1])
                rules = tuple(BlockRule(Const(*c)) for _ in tgt.blocks)
            elif isinstance(rule, dict):
                table = {_coord(k): _coord(v) for k, v in rule.items()}
                rules = tuple(
                    BlockRule(Explicit(tuple(table[(t, i)] for i in range(blk.mult))))
                    for t, blk in enumerate(tgt.blocks))
            else:
                raise MalformedInput(f"unknown index map {im!r}")
        else:
            rules = tuple(_rule_from_json(r, t) for t, r in enumerate(im))
        phi = ProductHom(src, tgt, rules)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedInput(f"malformed hom spec: {exc}") from exc
    if "coordHoms" in obj and obj["coordHoms"] != phi.coord_homs():
        raise MalformedInput("coordHoms disagree with the factor kinds read by the index map")
    return phi
