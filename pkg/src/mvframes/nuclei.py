"""Closure operators and nuclei on product MV-frames.

A :class:`NucleusSpec` wraps a map ``Element -> Element``.  The built-in
maps are coordinatewise, and carry their per-block value map so they can
be checked factor by factor: a coordinatewise map is a closure operator
(resp. preserves binary meets, fixes 0) exactly when each factor map is.
Maps given as lookup tables are checked element by element.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import frames
from .core import (
    DEFAULT_BOUND, ONE, ZERO, Block, Element, FactorKind, FiniteChain, Signature,
    UnitInterval, element_to_json, enumerate_carrier, join, leq, meet, neg, oplus,
    random_element, random_value,
)
from .errors import BadParameter, BadSignatureForNucleus, PreconditionFailed

SAMPLES = 500
EXHAUSTIVE_PAIRS = 64  # carriers up to this size get every pair checked
MATERIALIZE = 4096  # coordinatewise nuclear sets are listed up to this carrier size
NUCLEAR_EXHAUSTIVE = 128  # nuclear algebras up to this size are checked on every pair
AMBIENT_EXHAUSTIVE = 1024  # ambient carriers up to this size are scanned for compacts


@dataclass(frozen=True)
class Unknown:
    """Verdict that could not be settled; falsy."""

    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class UnitFixed:
    """Fixed values of a map on [0, 1]: ``points`` together with ``[lower, 1]``."""

    points: frozenset = frozenset()
    lower: Optional[Fraction] = None

    def contains(self, v: Fraction) -> bool:
        return v in self.points or (self.lower is not None and v >= self.lower)

    def mv_closed(self) -> bool:
        if self.lower == 0:
            return True
        if self.lower is not None and self.lower < 1:
            # 1 - [lower, 1] = [0, 1 - lower] is an interval, never covered
            return False
        pts = set(self.points) | ({ONE} if self.lower == 1 else set())
        return _mv_closed_values(pts)

    def describe(self) -> str:
        parts = [str(v) for v in sorted(self.points)]
        if self.lower is not None:
            parts.append(f"[{self.lower}, 1]")
        return "{" + ", ".join(parts) + "}" if self.lower is None else " u ".join(parts)


def _mv_closed_values(vals) -> bool:
    vals = set(vals)
    return all(1 - v in vals for v in vals) and all(
        min(ONE, a + b) in vals for a in vals for b in vals)


@dataclass(frozen=True)
class NucleusSpec:
    name: str
    sig: Signature
    fn: Callable = field(compare=False)
    coord_fn: Optional[Callable] = field(default=None, compare=False)
    unit_fixed: Optional[tuple] = field(default=None, compare=False)  # per block, UnitFixed or None
    params: tuple = ()

    def __call__(self, x: Element) -> Element:
        return self.fn(x)

    @property
    def coordinatewise(self) -> bool:
        return self.coord_fn is not None

    def block_fixed_values(self, b: int):
        """Fixed values on block ``b``: a set for chains, a UnitFixed for [0, 1]."""
        kind = self.sig.kind_at(b)
        if kind.is_finite:
            return {v for v in kind.carrier() if self.coord_fn(b, v) == v}
        return self.unit_fixed[b]

    @classmethod
    def coordinatewise_map(cls, name, sig, coord_fn, unit_fixed=None, params=()):
        def fn(x):
            return x.map_blocks(coord_fn)
        if unit_fixed is None:
            unit_fixed = tuple(None for _ in sig.blocks)
        for b, blk in enumerate(sig.blocks):
            if not blk.kind.is_finite and unit_fixed[b] is None:
                raise BadSignatureForNucleus(f"{name} has no fixed-set description for block {b}")
        return cls(name, sig, fn, coord_fn, tuple(unit_fixed), tuple(params))

    @classmethod
    def from_table(cls, name: str, table: dict) -> "NucleusSpec":
        """A user-supplied map on an enumerable algebra, as {x: j(x)}."""
        sig = next(iter(table)).sig
        if not sig.is_fully_finite or len(table) != sig.carrier_size():
            raise BadSignatureForNucleus("a table nucleus must list every element of a finite algebra")
        frozen = dict(table)
        return cls(name, sig, lambda x: frozen[x])


# ---------------------------------------------------------------------------
# Built-in nuclei
# ---------------------------------------------------------------------------

def _per_block(sig, unit_value):
    return tuple(unit_value if not blk.kind.is_finite else None for blk in sig.blocks)


def builtin_nucleus(kind: str, sig: Signature, **params) -> NucleusSpec:
    """Construct one of the named nuclei on ``sig``.

    kinds: identity, one, double_pseudocomplement, threshold (t0=...),
    parity, ceiling, halving, radical.
    """
    kind = kind.replace("-", "_")
    if kind == "identity":
        return NucleusSpec.coordinatewise_map(
            "identity", sig, lambda b, v: v, _per_block(sig, UnitFixed(lower=ZERO)))
    if kind == "one":
        return NucleusSpec.coordinatewise_map(
            "one", sig, lambda b, v: ONE, _per_block(sig, UnitFixed(frozenset({ONE}))))
    if kind in ("double_pseudocomplement", "double_pc"):
        spec = NucleusSpec.coordinatewise_map(
            "double_pseudocomplement", sig, lambda b, v: ONE if v > 0 else ZERO,
            _per_block(sig, UnitFixed(frozenset({ZERO, ONE}))))
        return NucleusSpec(spec.name, sig, lambda x: frames.pseudocomplement(frames.pseudocomplement(x)),
                           spec.coord_fn, spec.unit_fixed)
    if kind == "ceiling":
        return NucleusSpec.coordinatewise_map(
            "ceiling", sig, lambda b, v: Fraction(math.ceil(v)),
            _per_block(sig, UnitFixed(frozenset({ZERO, ONE}))))
    if kind == "threshold":
        if "t0" not in params:
            raise BadParameter("threshold needs t0")
        try:
            t0 = Fraction(params["t0"])
        except (TypeError, ValueError) as exc:
            raise BadParameter(f"bad threshold {params['t0']!r}") from exc
        for blk in sig.blocks:
            if not blk.kind.contains(t0):
                raise BadParameter(f"threshold {t0} is not a value of {blk.kind.label}")
        return NucleusSpec.coordinatewise_map(
            "threshold", sig, lambda b, v: max(v, t0), _per_block(sig, UnitFixed(lower=t0)),
            params=(("t0", str(t0)),))
    if kind == "parity":
        _require_chains(sig, "parity")
        return NucleusSpec.coordinatewise_map(
            "parity", sig, lambda b, v: v if sig.kind_at(b).n % 2 == 0 else ONE)
    if kind == "halving":
        _require_chains(sig, "halving")
        for blk in sig.blocks:
            if blk.kind.n % 2 == 0 or blk.kind.n < 3:
                raise BadSignatureForNucleus(f"halving needs chains L_(2n+1), got {blk.kind.label}")

        def halve(b, v):
            two_n = sig.kind_at(b).n - 1
            i = v * two_n
            return Fraction(math.ceil(i / 2), two_n // 2)
        return NucleusSpec.coordinatewise_map("halving", sig, halve)
    if kind == "radical":
        _require_chains(sig, "radical")
        return NucleusSpec.coordinatewise_map("radical", sig, radical_value(sig))
    raise BadParameter(f"unknown nucleus kind {kind!r}")


def radical_value(sig: Signature):
    """Per-coordinate radical: (n-2)/(n-1) below the top, 1 at the top."""
    def rad(b, v):
        n = sig.kind_at(b).n
        return ONE if v == 1 else Fraction(n - 2, n - 1)
    return rad


def _require_chains(sig: Signature, name: str) -> None:
    if sig.has_unit_interval:
        raise BadSignatureForNucleus(f"{name} is only defined on products of finite chains")


def parity_signature(top: int, tail: bool = True, tail_sizes=(8, 9)) -> Signature:
    """prod_{n>=2} L_n at desk scale: single blocks L_2..L_top, then (if
    ``tail``) one infinite block per parity standing for the remaining factors."""
    blocks = [Block(FiniteChain(n)) for n in range(2, top + 1)]
    if tail:
        blocks += [Block(FiniteChain(n), math.inf) for n in tail_sizes]
    return Signature(tuple(blocks))


def halving_signature(ns, tail: Optional[int] = None) -> Signature:
    """prod L_(2n+1) over ``ns``, optionally with an infinite L_(2 tail+1) block."""
    blocks = [Block(FiniteChain(2 * n + 1)) for n in ns]
    if tail is not None:
        blocks.append(Block(FiniteChain(2 * tail + 1), math.inf))
    return Signature(tuple(blocks))


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NuclearSet:
    sig: Signature
    description: str
    predicate: Callable = field(compare=False)
    elements: Optional[tuple] = None

    def contains(self, x: Element) -> bool:
        return self.predicate(x)

    def to_json(self) -> dict:
        return {
            "description": self.description,
            "elements": None if self.elements is None else [element_to_json(e) for e in self.elements],
        }


@dataclass(frozen=True)
class NucleusClassification:
    is_closure: bool
    is_nucleus: bool
    is_dense: bool
    is_inductive: object  # True, False or Unknown
    is_mv_type: bool
    nuclear: NuclearSet
    method: str
    violations: tuple = ()

    def to_json(self) -> dict:
        ind = self.is_inductive
        return {
            "isClosure": self.is_closure,
            "isNucleus": self.is_nucleus,
            "isDense": self.is_dense,
            "isInductive": "unknown" if isinstance(ind, Unknown) else ind,
            "isMVType": self.is_mv_type,
            "nuclear": self.nuclear.to_json(),
            "method": self.method,
            "violations": list(self.violations),
        }


def _covers(x: Element):
    """Upper covers of x in a product of finite chains."""
    for b, i in x.sig.coordinates():
        nxt = x.sig.kind_at(b).successor(x.value(b, i))
        if nxt is not None:
            exc = {c: x.value(*c) for c in x.sig.coordinates()}
            exc[(b, i)] = nxt
            yield Element.build(x.sig, exceptions=exc)


def _down_set(x: Element):
    sig = x.sig
    coords = sig.coordinates()
    ranges = [[v for v in sig.kind_at(b).carrier() if v <= x.value(b, i)] for b, i in coords]
    for combo in itertools.product(*ranges):
        yield Element.build(sig, exceptions=dict(zip(coords, combo)))


def _sample_values(kind: FactorKind, rng: random.Random, k: int) -> list:
    if kind.is_finite:
        return kind.carrier()
    vals = {ZERO, ONE, Fraction(1, 2)}
    vals.update(random_value(kind, rng) for _ in range(k))
    return sorted(vals)


def _factor_checks(j: NucleusSpec, rng: random.Random, samples: int, out: dict) -> None:
    """Closure, meet and density axioms one factor at a time."""
    f = j.coord_fn
    for b, blk in enumerate(j.sig.blocks):
        vals = _sample_values(blk.kind, rng, samples // 10)
        for v in vals:
            fv = f(b, v)
            if not blk.kind.contains(fv):
                out["closure"].append(f"block {b}: j({v}) = {fv} leaves {blk.kind.label}")
            if fv < v:
                out["closure"].append(f"block {b}: j({v}) = {fv} < {v} (not extensive)")
            if f(b, fv) != fv:
                out["closure"].append(f"block {b}: j(j({v})) != j({v}) (not idempotent)")
        for v, w in itertools.product(vals, repeat=2):
            if v <= w and f(b, v) > f(b, w):
                out["closure"].append(f"block {b}: {v} <= {w} but j({v}) > j({w}) (not monotone)")
            if f(b, min(v, w)) != min(f(b, v), f(b, w)):
                out["nucleus"].append(f"block {b}: j({v} ^ {w}) != j({v}) ^ j({w})")
        if f(b, ZERO) != 0:
            out["dense"].append(f"block {b}: j(0) = {f(b, ZERO)}")


def _factor_inductive(j: NucleusSpec, rng: random.Random, samples: int):
    """For a monotone coordinatewise j the join of j(a) over compact a <= x is
    j_k(x_k) on chain coordinates and j_k(0) on unit-interval coordinates, so
    j is inductive iff j_k is constant on every unit-interval factor."""
    unit_blocks = [b for b, blk in enumerate(j.sig.blocks) if not blk.kind.is_finite]
    for b in unit_blocks:
        base = j.coord_fn(b, ZERO)
        for v in _sample_values(UnitInterval(), rng, samples // 10):
            if j.coord_fn(b, v) != base:
                return False, f"block {b}: j({v}) = {j.coord_fn(b, v)} but compacts below give {base}"
    if unit_blocks:
        return Unknown("constant on sampled unit-interval values only"), None
    return True, None


def _factor_mv_type(j: NucleusSpec) -> list:
    bad = []
    for b, blk in enumerate(j.sig.blocks):
        fixed = j.block_fixed_values(b)
        closed = _mv_closed_values(fixed) if blk.kind.is_finite else fixed.mv_closed()
        if not closed:
            bad.append(f"block {b}: fixed values not closed under neg/oplus")
    return bad


def _coordinatewise_nuclear(j: NucleusSpec) -> NuclearSet:
    parts = []
    for b, blk in enumerate(j.sig.blocks):
        fixed = j.block_fixed_values(b)
        desc = ("{" + ", ".join(str(v) for v in sorted(fixed)) + "}") if blk.kind.is_finite else fixed.describe()
        parts.append(f"block {b} ({blk}): {desc}")

    def pred(x):
        return j(x) == x
    return NuclearSet(j.sig, "; ".join(parts), pred)


def classify_nucleus(j: NucleusSpec, rng: random.Random = None, samples: int = SAMPLES,
                     bound: int = DEFAULT_BOUND, materialize: int = MATERIALIZE,
                     exhaustive_pairs: int = EXHAUSTIVE_PAIRS) -> NucleusClassification:
    """Closure, nucleus, density, inductivity and MV-type verdicts.

    Coordinatewise maps are decided factor by factor (exact on finite
    chains); enumerable carriers of at most ``exhaustive_pairs`` elements
    are also checked element by element.  Anything else is sampled.
    """
    rng = rng or random.Random(0)
    sig = j.sig
    v = {"closure": [], "nucleus": [], "dense": [], "mv": [], "inductive": []}
    size = sig.carrier_size()
    enumerable = size is not None and size <= bound
    methods = []
    inductive = None

    if j.coordinatewise:
        methods.append("factorwise")
        _factor_checks(j, rng, samples, v)
        inductive, why = _factor_inductive(j, rng, samples)
        if why:
            v["inductive"].append(why)
        v["mv"] += _factor_mv_type(j)
        # the element-level map must agree with its factor description
        for _ in range(min(samples, 50)):
            x = random_element(sig, rng)
            if j(x) != x.map_blocks(j.coord_fn):
                v["closure"].append(f"map disagrees with its coordinate form at {x}")
                break

    exhaustive = enumerable and (not j.coordinatewise or size <= exhaustive_pairs)
    listed = exhaustive or (enumerable and size <= materialize)
    carrier = list(enumerate_carrier(sig, bound)) if listed else None
    if exhaustive:
        methods.append("exhaustive")
        ind = _exhaustive_checks(j, carrier, rng, samples, v)
        inductive = ind if inductive is None or inductive is True else inductive
    else:
        methods.append("sampled")
        _sampled_checks(j, rng, samples, v)
        if inductive is None:
            inductive = Unknown("infinite signature without a coordinatewise description")

    if carrier is not None:
        fixed = tuple(x for x in carrier if j(x) == x)
        fixed_set = set(fixed)
        nuclear = NuclearSet(sig, f"{len(fixed)} fixed points", lambda x: x in fixed_set, fixed)
    elif j.coordinatewise:
        nuclear = _coordinatewise_nuclear(j)
    else:
        nuclear = NuclearSet(sig, "fixed points of j", lambda x: j(x) == x)

    is_closure = not v["closure"]
    return NucleusClassification(
        is_closure=is_closure,
        is_nucleus=is_closure and not v["nucleus"],
        is_dense=not v["dense"],
        is_inductive=inductive,
        is_mv_type=not v["mv"],
        nuclear=nuclear,
        method="+".join(methods),
        violations=tuple(itertools.chain.from_iterable(v.values())),
    )


def _exhaustive_checks(j, carrier, rng, samples, v):
    sig = carrier[0].sig
    image = {x: j(x) for x in carrier}
    for x, jx in image.items():
        if jx.sig != sig:
            v["closure"].append(f"j({x}) is not in {sig}")
            return False
        if not leq(x, jx):
            v["closure"].append(f"j({x}) = {jx} is not above x")
        if image[jx] != jx:
            v["closure"].append(f"j(j({x})) != j({x})")
        for y in _covers(x):
            if not leq(jx, image[y]):
                v["closure"].append(f"{x} <= {y} but j({x}) is not below j({y})")
    if len(carrier) <= EXHAUSTIVE_PAIRS:
        pairs = itertools.product(carrier, repeat=2)
    else:
        pairs = ((rng.choice(carrier), rng.choice(carrier)) for _ in range(samples * 4))
    for x, y in pairs:
        if image[meet(x, y)] != meet(image[x], image[y]):
            v["nucleus"].append(f"j({x} ^ {y}) != j({x}) ^ j({y})")
            break
    zero = Element.zero(sig)
    if image[zero] != zero:
        v["dense"].append(f"j(0) = {image[zero]}")
    fixed = [x for x in carrier if image[x] == x]
    fixed_set = set(fixed)
    for x in fixed:
        if neg(x) not in fixed_set:
            v["mv"].append(f"fixed point {x} has non-fixed negation")
            break
    else:
        for x, y in itertools.product(fixed, repeat=2):
            if oplus(x, y) not in fixed_set:
                v["mv"].append(f"{x} + {y} is not fixed")
                break
    # inductive: j(x) is the join of j over compact elements below x
    xs = carrier if len(carrier) <= EXHAUSTIVE_PAIRS else rng.sample(carrier, samples // 5)
    for x in xs:
        approx = frames.join_finite([image[a] for a in _down_set(x) if frames.is_compact(a).compact], sig)
        if approx != image[x]:
            v["inductive"].append(f"j({x}) = {image[x]} but compacts below give {approx}")
            return False
    return True


def _sampled_checks(j, rng, samples, v):
    sig = j.sig
    zero = Element.zero(sig)
    if j(zero) != zero and not v["dense"]:
        v["dense"].append(f"j(0) = {j(zero)}")
    fixed_samples = []
    for _ in range(samples):
        x, y = random_element(sig, rng), random_element(sig, rng)
        jx, jy = j(x), j(y)
        if not leq(x, jx) or j(jx) != jx:
            v["closure"].append(f"closure axiom fails at {x}")
            break
        if leq(x, y) and not leq(jx, jy):
            v["closure"].append(f"monotonicity fails at {x}, {y}")
            break
        if j(meet(x, y)) != meet(jx, jy):
            v["nucleus"].append(f"meet law fails at {x}, {y}")
            break
        fixed_samples.append(jx)
    if not j.coordinatewise:
        for a, b in zip(fixed_samples, fixed_samples[1:]):
            if j(neg(a)) != neg(a) or j(oplus(a, b)) != oplus(a, b):
                v["mv"].append(f"fixed points {a}, {b} not closed under neg/oplus")
                break


# ---------------------------------------------------------------------------
# Nuclear as an algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NuclearAlgebra:
    """The fixed points of an inductive MV-type nucleus as a product MV-frame
    ``sig`` together with its embedding into the ambient algebra."""

    sig: Signature
    ambient: Signature
    embed: Callable = field(compare=False)
    checks: tuple = ()

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.checks)

    def to_json(self) -> dict:
        from .core import signature_to_json

        return {"signature": signature_to_json(self.sig), "str": str(self.sig),
                "checks": {name: passed for name, passed in self.checks}}


def nuclear_as_algebra(j: NucleusSpec, cls: NucleusClassification = None,
                       rng: random.Random = None, samples: int = 200) -> NuclearAlgebra:
    rng = rng or random.Random(0)
    cls = cls or classify_nucleus(j, rng)
    failed = [name for name, flag in (("isNucleus", cls.is_nucleus), ("isInductive", cls.is_inductive),
                                       ("isMVType", cls.is_mv_type)) if flag is not True]
    if failed:
        raise PreconditionFailed(f"{j.name}: needs nucleus, inductive and MV-type; failed {failed}", failed)
    if j.coordinatewise:
        alg = _coordinatewise_nuclear_algebra(j)
    else:
        alg = _decompose_finite_subalgebra(j, cls.nuclear.elements)
    checks = _nuclear_checks(j, alg, rng, samples)
    return NuclearAlgebra(alg.sig, alg.ambient, alg.embed, checks)


def _coordinatewise_nuclear_algebra(j: NucleusSpec) -> NuclearAlgebra:
    blocks = []
    for b, blk in enumerate(j.sig.blocks):
        fixed = j.block_fixed_values(b)
        if blk.kind.is_finite:
            kind = FiniteChain(len(fixed))
        elif fixed.lower == 0:
            kind = UnitInterval()
        else:
            kind = FiniteChain(len(fixed.points | ({ONE} if fixed.lower == 1 else set())))
        blocks.append(Block(kind, blk.mult))
    sub = Signature(tuple(blocks))
    # a sub-MV-chain of [0, 1] with d+1 elements is {k/d}, so values embed as themselves

    def embed(y):
        return y.map_blocks(lambda _b, val: val, sig=j.sig)
    return NuclearAlgebra(sub, j.sig, embed)


def _decompose_finite_subalgebra(j: NucleusSpec, fixed) -> NuclearAlgebra:
    """Write a finite sub-MV-algebra as a product of chains via the atoms of
    its Boolean center."""
    sig = j.sig
    fixed = list(fixed)
    zero = Element.zero(sig)
    boolean = [x for x in fixed if frames.in_boolean_center(x)]
    atoms = [e for e in boolean if e != zero and not any(a != zero and a != e and leq(a, e) for a in boolean)]
    chains = []
    for e in atoms:
        comp = sorted({meet(x, e) for x in fixed}, key=lambda y: sum(y.values()))
        chains.append(comp)
    sub = Signature(tuple(Block(FiniteChain(len(c))) for c in chains))

    def embed(y):
        parts = []
        for k, comp in enumerate(chains):
            step = y.value(k, 0) * (len(comp) - 1)
            parts.append(comp[int(step)])
        return frames.join_finite(parts, sig)
    return NuclearAlgebra(sub, sig, embed)


def _nuclear_checks(j: NucleusSpec, alg: NuclearAlgebra, rng, samples) -> tuple:
    sub, amb = alg.sig, alg.ambient
    sub_size = sub.carrier_size()
    if sub_size is not None and sub_size <= NUCLEAR_EXHAUSTIVE:
        elems = list(enumerate_carrier(sub))
        # oplus, join and meet are commutative, so unordered pairs suffice
        pairs = list(itertools.combinations_with_replacement(elems, 2))
    else:
        elems = [random_element(sub, rng) for _ in range(samples)]
        pairs = list(zip(elems, elems[1:]))
    compacts_sub = [y for y in elems if frames.is_compact(y).compact]
    emb = {y: alg.embed(y) for y in elems}

    def embed(y):
        hit = emb.get(y)
        return alg.embed(y) if hit is None else hit
    image = set(emb.values())
    checks = []
    checks.append(("embedding lands in fixed points", all(j(x) == x for x in image)))
    checks.append(("embedding is injective", len(image) == len(emb)))
    checks.append(("closed under neg and oplus", all(
        embed(neg(y)) == neg(emb[y]) for y in elems) and all(
        embed(oplus(y, z)) == oplus(emb[y], emb[z]) for y, z in pairs)))
    checks.append(("joins coincide with ambient joins", all(
        embed(join(y, z)) == join(emb[y], emb[z]) for y, z in pairs)))
    checks.append(("meets coincide with ambient meets", all(
        embed(meet(y, z)) == meet(emb[y], emb[z]) for y, z in pairs)))
    # algebraic: each element is the join of the compact elements of jA below it
    if sub.has_unit_interval:
        algebraic = False
    elif sub.is_fully_finite:
        algebraic = all(frames.join_finite([c for c in compacts_sub if leq(c, y)], sub) == y for y in elems)
    else:
        algebraic = all(frames.check_approximants(y) for y in elems)
    checks.append(("nuclear is algebraic", algebraic))
    # j applied to compacts of A gives exactly the compacts of jA
    if amb.is_fully_finite and amb.carrier_size() <= AMBIENT_EXHAUSTIVE:
        jk = {j(a) for a in enumerate_carrier(amb) if frames.is_compact(a).compact}
        k_sub = {embed(y) for y in enumerate_carrier(sub) if frames.is_compact(y).compact}
        checks.append(("j k(A) == k(jA)", jk == k_sub))
    else:
        ok = True
        for _ in range(samples):
            a = random_element(amb, rng)
            if frames.is_compact(a).compact:
                ja = j(a)
                back = ja.map_blocks(lambda _b, val: val, sig=sub) if j.coordinatewise else None
                if back is not None and not frames.is_compact(back).compact:
                    ok = False
        for y in compacts_sub:
            x = emb[y]
            if not (frames.is_compact(x).compact and j(x) == x):
                ok = False
        checks.append(("j k(A) == k(jA)", ok))
    return tuple(checks)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def nucleus_from_json(sig: Signature, obj) -> NucleusSpec:
    """A builtin name, ``{"kind": name, "params": {...}}``, or
    ``{"kind": "table", "table": [{"from": element, "to": element}, ...]}``."""
    from .core import element_from_json
    from .errors import MalformedInput

    if isinstance(obj, str):
        return builtin_nucleus(obj, sig)
    try:
        if obj["kind"] == "table":
            table = {element_from_json(sig, row["from"]): element_from_json(sig, row["to"]) for row in obj["table"]}
            if not table:
                raise MalformedInput("empty nucleus table")
            return NucleusSpec.from_table(obj.get("name", "table"), table)
        params = dict(obj.get("params", {}))
        return builtin_nucleus(obj["kind"], sig, **params)
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedInput(f"malformed nucleus spec: {exc}") from exc
