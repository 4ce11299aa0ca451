"""Hypothesis strategies for signatures and elements."""
from fractions import Fraction

from hypothesis import strategies as st

from mvframes.core import INF, Block, Element, FiniteChain, Signature, UnitInterval

chain_kinds = st.integers(min_value=2, max_value=7).map(FiniteChain)
kinds = st.one_of(chain_kinds, st.just(UnitInterval()))


def blocks(kind_strategy=kinds, infinite=True):
    mults = st.one_of(st.integers(1, 3), st.just(INF)) if infinite else st.integers(1, 3)
    return st.builds(Block, kind_strategy, mults)


def signatures(kind_strategy=kinds, infinite=True, max_blocks=3):
    return st.lists(blocks(kind_strategy, infinite), min_size=1, max_size=max_blocks).map(
        lambda bs: Signature(tuple(bs)))


def finite_signatures(max_blocks=2):
    return st.lists(st.builds(Block, st.integers(2, 4).map(FiniteChain), st.integers(1, 2)),
                    min_size=1, max_size=max_blocks).map(lambda bs: Signature(tuple(bs)))


def values(kind):
    if kind.is_finite:
        return st.integers(0, kind.n - 1).map(lambda k: Fraction(k, kind.n - 1))
    return st.fractions(min_value=0, max_value=1, max_denominator=24)


@st.composite
def elements(draw, sig):
    defaults, exceptions = [], {}
    for b, blk in enumerate(sig.blocks):
        if blk.is_infinite:
            defaults.append(draw(values(blk.kind)))
            for i in draw(st.sets(st.integers(0, 12), max_size=3)):
                exceptions[(b, i)] = draw(values(blk.kind))
        else:
            defaults.append(Fraction(0))
            for i in range(blk.mult):
                exceptions[(b, i)] = draw(values(blk.kind))
    return Element.build(sig, defaults, exceptions)


@st.composite
def sig_and_elements(draw, count=2, sig_strategy=None):
    sig = draw(sig_strategy if sig_strategy is not None else signatures())
    return (sig, *[draw(elements(sig)) for _ in range(count)])
