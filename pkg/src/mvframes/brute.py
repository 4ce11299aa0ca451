"""Brute-force oracles over finite carriers.

Everything here works from the definitions (order, finite joins, subsets)
and never calls the closed forms it is meant to check.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .core import Element, FiniteChain, join, leq, meet, neg, oplus
from .frames import join_finite


def subsets(items, max_size=None):
    items = list(items)
    top = len(items) if max_size is None else min(max_size, len(items))
    for r in range(top + 1):
        yield from itertools.combinations(items, r)


def pseudocomplement(z: Element, carrier) -> Element:
    zero = Element.zero(z.sig)
    return join_finite([x for x in carrier if meet(x, z) == zero], z.sig)


def way_below_set(x: Element, carrier) -> list:
    one = Element.one(x.sig)
    return [a for a in carrier if join(x, pseudocomplement(a, carrier)) == one]


def is_regular(x: Element, carrier) -> bool:
    return join_finite(way_below_set(x, carrier), x.sig) == x


def subset_joins(carrier) -> list:
    """Join of every subset, indexed by bitmask; each mask extends a smaller one."""
    carrier = list(carrier)
    out = [Element.zero(carrier[0].sig)] * (1 << len(carrier))
    for mask in range(1, len(out)):
        low = (mask & -mask).bit_length() - 1
        out[mask] = join(out[mask & (mask - 1)], carrier[low])
    return out


def is_compact(alpha: Element, carrier, max_cover=None, joins=None) -> bool:
    """Every subset S of the carrier with join >= alpha has a subfamily of
    at most ``max_cover`` members (any finite size when None) whose join is
    still >= alpha.  ``joins`` may pass a precomputed :func:`subset_joins`."""
    carrier = list(carrier)
    joins = joins if joins is not None else subset_joins(carrier)
    for mask, top in enumerate(joins):
        if not leq(alpha, top):
            continue
        if max_cover is None:
            continue  # S itself is a finite subfamily
        members = [k for k in range(len(carrier)) if mask >> k & 1]
        if not any(leq(alpha, joins[sum(1 << k for k in f)]) for f in subsets(members, max_cover)):
            return False
    return True


def join_of_compacts_below(x: Element, carrier, compact) -> Element:
    return join_finite([a for a in carrier if compact(a) and leq(a, x)], x.sig)


def subset_joins_preserved(f, carrier, max_subset=None) -> bool:
    """f(join S) == join f(S) for all subsets S (up to ``max_subset`` members)."""
    carrier = list(carrier)
    src = carrier[0].sig
    tgt = f(carrier[0]).sig
    for s in subsets(carrier, max_subset):
        if f(join_finite(s, src)) != join_finite([f(x) for x in s], tgt):
            return False
    return True


def chain_homs(n: int, m: int) -> list:
    """All MV-homomorphisms L_n -> L_m, as value tables.

    A homomorphism is fixed by the image g of the generator 1/(n-1), since
    k/(n-1) is the k-fold oplus of the generator; every candidate g is
    tried and the resulting map checked against 0, oplus and neg on all
    pairs.
    """
    src = FiniteChain(n).carrier()
    tgt = FiniteChain(m)
    found = []
    for g in tgt.carrier():
        table = {}
        for k, v in enumerate(src):
            acc = Fraction(0)
            for _ in range(k):
                acc = min(Fraction(1), acc + g)
            table[v] = acc
        ok = table[Fraction(0)] == 0 and all(
            table[min(Fraction(1), a + b)] == min(Fraction(1), table[a] + table[b])
            for a in src for b in src
        ) and all(table[1 - a] == 1 - table[a] for a in src)
        if ok:
            found.append(table)
    return found


def mv_axioms_hold(carrier) -> bool:
    carrier = list(carrier)
    one = Element.one(carrier[0].sig)
    zero = Element.zero(carrier[0].sig)
    for x in carrier:
        if neg(neg(x)) != x or oplus(x, zero) != x or oplus(neg(zero), x) != neg(zero):
            return False
    for x, y in itertools.product(carrier, repeat=2):
        if oplus(x, y) != oplus(y, x):
            return False
        if oplus(neg(oplus(neg(x), y)), y) != oplus(neg(oplus(neg(y), x)), x):
            return False
    return neg(zero) == one
