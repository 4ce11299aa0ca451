"""Finite Lukasiewicz rings: products of chain rings Z/p^k.

Ring-side operations (annihilators, ideal products, prime ideals, radicals)
are computed on residues by brute force, one factor at a time; ideals of a
product ring are products of ideals of the factors.  The ideal lattice is
then matched against the product of chains  prod L_(k_i + 1).
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import frames, nuclei
from .core import (
    DEFAULT_BOUND, ONE, Block, Element, FiniteChain, Signature, enumerate_carrier, join, leq,
    meet, neg, oplus,
)
from .errors import CarrierTooLarge, MalformedInput


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


# ---------------------------------------------------------------------------
# One chain ring Z/p^k, on residues
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def principal_ideal(q: int, a: int) -> frozenset:
    return frozenset((r * a) % q for r in range(q))


@lru_cache(maxsize=None)
def factor_ideals(p: int, k: int) -> tuple:
    """Ideals of Z/p^k as residue sets, indexed by generator exponent 0..k."""
    q = p**k
    return tuple(principal_ideal(q, p**e % q) for e in range(k + 1))


def exponent_of(p: int, k: int, residues) -> int:
    residues = frozenset(residues)
    for e, ideal in enumerate(factor_ideals(p, k)):
        if ideal == residues:
            return e
    raise MalformedInput(f"{sorted(residues)} is not an ideal of Z/{p**k}")


def additive_closure(q: int, gens) -> frozenset:
    out = {0}
    frontier = [0]
    gens = {g % q for g in gens}
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = (x + g) % q
            if y not in out:
                out.add(y)
                frontier.append(y)
    return frozenset(out)


@lru_cache(maxsize=None)
def factor_annihilator(p: int, k: int, e: int) -> int:
    q = p**k
    ideal = factor_ideals(p, k)[e]
    return exponent_of(p, k, [r for r in range(q) if all(r * s % q == 0 for s in ideal)])


@lru_cache(maxsize=None)
def factor_product(p: int, k: int, e1: int, e2: int) -> int:
    q = p**k
    a, b = factor_ideals(p, k)[e1], factor_ideals(p, k)[e2]
    return exponent_of(p, k, additive_closure(q, {x * y for x in a for y in b}))


@lru_cache(maxsize=None)
def factor_primes(p: int, k: int) -> tuple:
    """Exponents of the prime ideals of Z/p^k, found from the definition."""
    q = p**k
    out = []
    for e, ideal in enumerate(factor_ideals(p, k)):
        if len(ideal) == q:
            continue
        if all((a * b) % q not in ideal or a in ideal or b in ideal
               for a in range(q) for b in range(q)):
            out.append(e)
    return tuple(out)


def factor_contains(p: int, k: int, big: int, small: int) -> bool:
    """Ideal (p^small) is inside ideal (p^big), as residue sets."""
    ideals = factor_ideals(p, k)
    return ideals[small] <= ideals[big]


# ---------------------------------------------------------------------------
# Product rings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteRing:
    factors: tuple  # ((p, k), ...)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(tuple(f) for f in self.factors))
        if not self.factors:
            raise MalformedInput("a ring needs at least one factor")
        for p, k in self.factors:
            if not is_prime(p) or not isinstance(k, int) or k < 1:
                raise MalformedInput(f"Z/{p}^{k} is not a chain ring Z/p^k with p prime, k >= 1")

    @classmethod
    def parse(cls, text: str) -> "FiniteRing":
        """``"Z/8 x Z/9"`` -> factors ((2, 3), (3, 2))."""
        factors = []
        for token in text.replace("*", "x").split("x"):
            token = token.strip()
            if not token.startswith("Z/"):
                raise MalformedInput(f"cannot parse ring factor {token!r}")
            factors.append(prime_power(int(token[2:])))
        return cls(tuple(factors))

    @property
    def moduli(self) -> tuple:
        return tuple(p**k for p, k in self.factors)

    def ideal_count(self) -> int:
        return math.prod(k + 1 for _, k in self.factors)

    def ideals(self):
        for exps in itertools.product(*(range(k + 1) for _, k in self.factors)):
            yield RingIdeal(self, exps)

    def whole(self) -> "RingIdeal":
        return RingIdeal(self, tuple(0 for _ in self.factors))

    def zero_ideal(self) -> "RingIdeal":
        return RingIdeal(self, tuple(k for _, k in self.factors))

    def prime_spectrum(self) -> list:
        """Prime ideals: a prime of one factor times the other factors."""
        out = []
        for i, (p, k) in enumerate(self.factors):
            for e in factor_primes(p, k):
                exps = [0] * len(self.factors)
                exps[i] = e
                out.append(RingIdeal(self, tuple(exps)))
        return out

    def __str__(self):
        return " x ".join(f"Z/{q}" for q in self.moduli)


def prime_power(q: int) -> tuple:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                raise MalformedInput(f"{q} is not a prime power")
            return (p, k)
    raise MalformedInput(f"{q} is not a prime power")


@dataclass(frozen=True)
class RingIdeal:
    """The ideal (p_1^e_1) x ... x (p_r^e_r); e_i = 0 is the whole factor."""

    ring: FiniteRing
    exps: tuple

    def residues(self, i: int) -> frozenset:
        p, k = self.ring.factors[i]
        return factor_ideals(p, k)[self.exps[i]]

    def generators(self) -> tuple:
        return tuple(p**e % p**k for (p, k), e in zip(self.ring.factors, self.exps))

    def __le__(self, other: "RingIdeal") -> bool:
        return all(self.residues(i) <= other.residues(i) for i in range(len(self.exps)))

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators()) + ")"


def _componentwise(I: RingIdeal, fn) -> RingIdeal:
    return RingIdeal(I.ring, tuple(fn(p, k, e) for (p, k), e in zip(I.ring.factors, I.exps)))


def annihilator(I: RingIdeal) -> RingIdeal:
    return _componentwise(I, factor_annihilator)


def ideal_product(I: RingIdeal, J: RingIdeal) -> RingIdeal:
    return RingIdeal(I.ring, tuple(factor_product(p, k, a, b)
                                   for (p, k), a, b in zip(I.ring.factors, I.exps, J.exps)))


def oplus_ideals(I: RingIdeal, J: RingIdeal) -> RingIdeal:
    """I + J in the MV sense: Ann(Ann(I) Ann(J))."""
    return annihilator(ideal_product(annihilator(I), annihilator(J)))


def intersect(I: RingIdeal, J: RingIdeal) -> RingIdeal:
    return RingIdeal(I.ring, tuple(
        exponent_of(p, k, I.residues(i) & J.residues(i)) for i, (p, k) in enumerate(I.ring.factors)))


def ideal_sum(I: RingIdeal, J: RingIdeal) -> RingIdeal:
    out = []
    for i, (p, k) in enumerate(I.ring.factors):
        q = p**k
        out.append(exponent_of(p, k, additive_closure(q, I.residues(i) | J.residues(i))))
    return RingIdeal(I.ring, tuple(out))


def radical(I: RingIdeal) -> RingIdeal:
    """Intersection of the prime ideals containing I (R itself if none)."""
    acc = I.ring.whole()
    for P in I.ring.prime_spectrum():
        if I <= P:
            acc = intersect(acc, P)
    return acc


# ---------------------------------------------------------------------------
# Ideal lattice as a product of chains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdealLattice:
    ring: FiniteRing
    sig: Signature

    def to_element(self, I: RingIdeal) -> Element:
        return Element.from_values(self.sig, [Fraction(k - e, k) for (_, k), e in zip(self.ring.factors, I.exps)])

    def from_element(self, x: Element) -> RingIdeal:
        vals = x.values()
        return RingIdeal(self.ring, tuple(int(k - v * k) for (_, k), v in zip(self.ring.factors, vals)))

    def verify_order_iso(self) -> bool:
        ideals = list(self.ring.ideals())
        elems = {I: self.to_element(I) for I in ideals}
        if len(set(elems.values())) != len(ideals):
            return False
        return all((I <= J) == leq(elems[I], elems[J]) for I in ideals for J in ideals)


def ring_signature(R: FiniteRing) -> Signature:
    return Signature(tuple(Block(FiniteChain(k + 1)) for _, k in R.factors))


def ideal_lattice(R: FiniteRing, bound: int = DEFAULT_BOUND) -> IdealLattice:
    if R.ideal_count() > bound:
        raise CarrierTooLarge(f"{R} has {R.ideal_count()} ideals, bound is {bound}")
    return IdealLattice(R, ring_signature(R))


def radical_on_frame(f: Element) -> Element:
    """Closed form: (n-2)/(n-1) where f < 1, 1 where f = 1."""
    return f.map_blocks(nuclei.radical_value(f.sig))


def radical_case_family(f: Element) -> list:
    """Compact elements below f whose radicals join to the radical of f.

    When f < 1 everywhere these are the single-coordinate restrictions of
    f; otherwise they are the indicators of the coordinates where f = 1.
    """
    coords = f.sig.coordinates()
    top = [c for c in coords if f[c] == 1]
    if not top:
        return [Element.indicator(f.sig, [c], f[c]) for c in coords]
    return [Element.indicator(f.sig, [c]) for c in top]


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def mv_check(R: FiniteRing, bound: int = DEFAULT_BOUND, pair_limit: int = 4096) -> dict:
    """Ring-side lattice and MV operations against the chain product."""
    lat = ideal_lattice(R, bound)
    ideals = list(R.ideals())
    el = {I: lat.to_element(I) for I in ideals}
    if len(ideals) ** 2 <= pair_limit:
        pairs = list(itertools.product(ideals, repeat=2))
    else:
        rng = random.Random(0)
        pairs = [(rng.choice(ideals), rng.choice(ideals)) for _ in range(pair_limit)]
    return {
        "order isomorphism": lat.verify_order_iso() if len(ideals) ** 2 <= pair_limit * 4 else None,
        "zero ideal is 0": el[R.zero_ideal()] == Element.zero(lat.sig),
        "whole ring is 1": el[R.whole()] == Element.one(lat.sig),
        "annihilator is negation": all(el[annihilator(I)] == neg(el[I]) for I in ideals),
        "(I*J*)* is oplus": all(el[oplus_ideals(I, J)] == oplus(el[I], el[J]) for I, J in pairs),
        "intersection is meet": all(el[intersect(I, J)] == meet(el[I], el[J]) for I, J in pairs),
        "ideal sum is join": all(el[ideal_sum(I, J)] == join(el[I], el[J]) for I, J in pairs),
    }


def radical_table(R: FiniteRing, bound: int = DEFAULT_BOUND) -> list:
    """(ideal, radical, frame value of ideal, frame value of radical) rows."""
    lat = ideal_lattice(R, bound)
    rows = []
    for I in R.ideals():
        r = radical(I)
        rows.append((I, r, lat.to_element(I), lat.to_element(r)))
    return rows


def radical_agreement(R: FiniteRing) -> tuple:
    """Ring-side radical vs the closed form for every ideal of R, vectorized.

    Ideals are rows of exponents.  A prime of slot i contains I iff the
    residue sets say so; the intersection of the primes containing I is
    the prime's exponent in each slot that has one, and the whole factor
    elsewhere.  Returns (all agree, number of ideals checked).
    """
    ks = [k for _, k in R.factors]
    exps = np.indices([k + 1 for k in ks]).reshape(len(ks), -1).T
    rad = np.zeros_like(exps)
    for i, (p, k) in enumerate(R.factors):
        rad[:, i] = np.asarray(_factor_radical_column(p, k))[exps[:, i]]
    k_arr = np.array(ks)
    # frame numerators over denominator k: ideal (p^e) <-> (k - e)/k
    ring_side = k_arr - rad
    closed_form = np.where(exps == 0, k_arr, k_arr - 1)
    return bool(np.array_equal(ring_side, closed_form)), len(exps)


@lru_cache(maxsize=None)
def _factor_radical_column(p: int, k: int) -> tuple:
    """Slot-i exponent of the intersection of the primes containing (p^e)."""
    primes = factor_primes(p, k)
    col = []
    for e in range(k + 1):
        acc = factor_ideals(p, k)[0]
        for P in primes:
            if factor_contains(p, k, P, e):
                acc = acc & factor_ideals(p, k)[P]
        col.append(exponent_of(p, k, acc))
    return tuple(col)


@lru_cache(maxsize=None)
def _radical_classification(sig: Signature, samples: int, materialize: int, exhaustive_pairs: int):
    j = nuclei.builtin_nucleus("radical", sig)
    return j, nuclei.classify_nucleus(j, random.Random(0), samples=samples, materialize=materialize,
                                      exhaustive_pairs=exhaustive_pairs)


@dataclass(frozen=True)
class RadicalReport:
    ring: FiniteRing
    classification: object
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.checks)

    def to_json(self) -> dict:
        out = self.classification.to_json()
        out["ring"] = str(self.ring)
        out["checks"] = {name: passed for name, passed in self.checks}
        return out


def radical_nucleus_report(R: FiniteRing, bound: int = DEFAULT_BOUND, samples: int = nuclei.SAMPLES,
                           materialize: int = nuclei.MATERIALIZE, element_checks: int = 256,
                           exhaustive_pairs: int = nuclei.EXHAUSTIVE_PAIRS) -> RadicalReport:
    lat = ideal_lattice(R, bound)
    sig = lat.sig
    j, cls = _radical_classification(sig, samples, materialize, exhaustive_pairs)
    all_fields = all(k == 1 for _, k in R.factors)
    ns = [blk.kind.n for blk in sig.blocks]
    checks = [
        ("closure operator", cls.is_closure),
        ("nucleus", cls.is_nucleus),
        ("inductive", cls.is_inductive is True),
        ("dense iff all exponents are 1", cls.is_dense == all_fields),
    ]
    expected_fixed = [{Fraction(n - 2, n - 1), ONE} for n in ns]
    checks.append(("nuclear is prod {(n-2)/(n-1), 1}",
                   all(j.block_fixed_values(b) == expected_fixed[b] for b in range(len(ns)))))
    checks.append(("nuclear is a subalgebra iff all n = 2", cls.is_mv_type == all(n == 2 for n in ns)))
    agree, _ = radical_agreement(R)
    checks.append(("ring radical equals closed form (all ideals)", agree))
    # object-level spot check through the lattice isomorphism
    if R.ideal_count() > element_checks:
        rng = random.Random(0)
        ideals = [RingIdeal(R, tuple(rng.randint(0, k) for _, k in R.factors)) for _ in range(element_checks)]
    else:
        ideals = list(R.ideals())
    checks.append(("ring radical equals closed form (elements)", all(
        lat.to_element(radical(I)) == radical_on_frame(lat.to_element(I)) for I in ideals)))
    checks.append(("radical is the join over its compact family", all(
        frames.join_finite([radical_on_frame(a) for a in radical_case_family(f)], sig) == radical_on_frame(f)
        for f in (lat.to_element(I) for I in ideals))))
    return RadicalReport(R, cls, tuple(checks))


def ring_from_json(obj) -> FiniteRing:
    if isinstance(obj, str):
        return FiniteRing.parse(obj)
    try:
        return FiniteRing(tuple((f["p"], f["k"]) for f in obj["factors"]))
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"malformed ring spec: {exc}") from exc


def ring_to_json(R: FiniteRing) -> dict:
    return {"factors": [{"p": p, "k": k} for p, k in R.factors]}
