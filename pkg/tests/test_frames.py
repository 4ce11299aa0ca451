import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given

from mvframes import brute, frames
from mvframes.core import Element, Signature, enumerate_carrier, join, leq, meet, oplus
from mvframes.errors import InfiniteCarrier, SignatureMismatch

from strategies import elements, sig_and_elements, signatures

SMALL = ["L2", "L3", "L4", "L3 x L3", "L3 x L4", "L2 x L2 x L2"]


def carrier(text):
    return list(enumerate_carrier(Signature.parse(text)))


def vals(text, *xs):
    return Element.from_values(Signature.parse(text), [F(x) for x in xs])


# -- finite joins -------------------------------------------------------------------

def test_finite_joins_and_meets():
    assert frames.join_finite(carrier("L3")) == vals("L3", 1)
    assert frames.join_finite([vals("L3 x L3", "1/2", 0), vals("L3 x L3", 0, "1/2")]) == vals("L3 x L3", "1/2", "1/2")
    sig = Signature.parse("L3")
    assert frames.meet_finite([], sig) == Element.one(sig)
    assert frames.join_finite([], sig) == Element.zero(sig)
    with pytest.raises(SignatureMismatch):
        frames.join_finite([])


# -- pseudocomplement -------------------------------------------------------------------

@pytest.mark.parametrize("text", SMALL)
def test_pseudocomplement_matches_brute_force(text):
    elems = carrier(text)
    for z in elems:
        assert frames.pseudocomplement(z) == brute.pseudocomplement(z, elems)


def test_pseudocomplement_values():
    assert frames.pseudocomplement(Element.zero(Signature.parse("L3"))) == vals("L3", 1)
    assert frames.pseudocomplement(vals("L3 x L3", "1/2", 0)) == vals("L3 x L3", 0, 1)
    assert frames.pseudocomplement(vals("L4", "1/3")) == vals("L4", 0)


@pytest.mark.parametrize("text", SMALL)
def test_pseudocomplement_laws(text):
    pc = frames.pseudocomplement
    elems = carrier(text)
    for z in elems:
        assert frames.in_boolean_center(pc(z))
        assert leq(z, pc(pc(z)))
        if frames.in_boolean_center(z):
            assert pc(pc(z)) == z
    for x, y in itertools.product(elems, repeat=2):
        if leq(x, y):
            assert leq(pc(pc(x)), pc(pc(y)))


@pytest.mark.parametrize("text", SMALL)
def test_double_pseudocomplement_of_compact_is_compact_and_boolean(text):
    pc = frames.pseudocomplement
    for x in carrier(text):
        if frames.is_compact(x).compact:
            xx = pc(pc(x))
            assert frames.is_compact(xx).compact and frames.in_boolean_center(xx)


@given(sig_and_elements(count=1))
def test_pseudocomplement_meets_to_zero(data):
    sig, z = data
    assert meet(z, frames.pseudocomplement(z)) == Element.zero(sig)


# -- Boolean center, way below, regular elements ----------------------------------------

def test_boolean_center_examples():
    sig = Signature.parse("L3^w")
    assert frames.in_boolean_center(Element.zero(sig)) and frames.in_boolean_center(Element.one(sig))
    assert not frames.in_boolean_center(vals("L3", "1/2"))
    assert frames.in_boolean_center(Element.indicator(sig, [(0, 0), (0, 3)]))


@given(sig_and_elements(count=1))
def test_boolean_center_two_descriptions_agree(data):
    _, x = data
    assert frames.in_boolean_center(x) == frames.has_boolean_coordinates(x)
    assert frames.in_boolean_center(x) == (oplus(x, x) == x)


def test_way_below_examples():
    sig = Signature.parse("L3 x L4")
    for y in enumerate_carrier(sig):
        assert frames.way_below(Element.zero(sig), y)
    half, one = vals("L3", "1/2"), vals("L3", 1)
    assert frames.way_below(half, one)
    assert not frames.is_regular_element(half)
    assert brute.join_of_compacts_below(half, carrier("L3"), lambda a: frames.way_below(a, half)) == vals("L3", 0)


def test_element_with_middle_value_misses_top_with_its_complement():
    sig = Signature.parse("U x L3^w")
    alpha = Element.build(sig, [0, 0], {(0, 0): F(2, 7)})
    assert join(alpha, frames.pseudocomplement(alpha))[(0, 0)] == F(2, 7)


@pytest.mark.parametrize("text", SMALL)
def test_regular_closed_form_matches_brute_force(text):
    elems = carrier(text)
    for x in elems:
        assert frames.is_regular_element(x) == brute.is_regular(x, elems)


# -- compactness ---------------------------------------------------------------------------

@pytest.mark.parametrize("text", ["L2", "L3", "L2 x L3", "L3 x L3"])
def test_compactness_matches_brute_force(text):
    elems = carrier(text)
    for x in elems:
        assert frames.is_compact(x).compact == brute.is_compact(x, elems)


def test_brute_force_cover_bound_is_not_vacuous():
    # in L2 x L2 the top needs two atoms, so it is not covered by single members
    elems = carrier("L2 x L2")
    top = vals("L2 x L2", 1, 1)
    assert not brute.is_compact(top, elems, max_cover=1)
    assert brute.is_compact(top, elems, max_cover=2)


def test_compact_verdict_examples():
    sig = Signature.parse("L3^w")
    finite = Element.build(sig, [0], {(0, 0): F(1, 2)})
    assert frames.is_compact(finite).compact and frames.is_compact(finite).witness is None
    cofinite = Element.build(sig, [1])
    v = frames.is_compact(cofinite)
    assert not v.compact and v.witness.mode == "exhaust"
    u = Signature.parse("U x L3")
    alpha = Element.from_values(u, [F(1), F(0)])
    v = frames.is_compact(alpha)
    assert not v.compact and v.witness.mode == "rational"
    assert [t[(0, 0)] for t in v.witness.terms(3)] == [F(1, 2), F(2, 3), F(3, 4)]


@given(sig_and_elements(count=1, sig_strategy=signatures()))
def test_negative_verdicts_carry_valid_witnesses(data):
    _, x = data
    v = frames.is_compact(x)
    expected = x.support_finite() and all(
        x[(b, i)] == 0 for b, i in x.support() if not x.sig.kind_at(b).is_finite)
    assert v.compact == expected
    if not v.compact:
        assert frames.verify_witness(v.witness, 64).ok
        assert len(v.witness.to_json()["terms"]) == 8


def test_tampered_witness_is_rejected():
    sig = Signature.parse("U")
    alpha = Element.from_values(sig, [F(1, 2)])
    bogus = frames.ChainWitness(alpha, "rational", 0, 0, F(1))  # climbs past alpha
    assert not frames.verify_witness(bogus, 16).ok
    compact = Element.zero(Signature.parse("L3^w"))
    assert not frames.verify_witness(frames.ChainWitness(compact, "exhaust", 0), 16).ok


def test_compact_and_maximal_compact_descriptions():
    assert frames.compact_elements(Signature.parse("U^3")).describe() == "{0}"
    assert frames.compact_elements(Signature.parse("U^3")).materialize() == [Element.zero(Signature.parse("U^3"))]
    assert len(frames.compact_elements(Signature.parse("L3 x L4")).materialize()) == 12
    assert "finite-support" in frames.compact_elements(Signature.parse("L3^w")).describe()
    with pytest.raises(InfiniteCarrier):
        frames.compact_elements(Signature.parse("L3^w")).materialize()

    sq = Signature.parse("L3^2")
    assert frames.maximal_compact_elements(sq).materialize() == [vals("L3^2", 1, 1)]
    omega = Signature.parse("L3^w")
    mc = frames.maximal_compact_elements(omega)
    assert mc.contains(Element.indicator(omega, [(0, 0), (0, 3)]))
    assert not mc.contains(Element.indicator(omega, [(0, 0)], F(1, 2)))
    assert frames.maximal_compact_elements(Signature.parse("U^2")).describe() == "{0}"


@pytest.mark.parametrize("text", SMALL)
def test_compacts_are_closed_under_meets(text):
    elems = [x for x in carrier(text) if frames.is_compact(x).compact]
    for a, b in itertools.product(elems, repeat=2):
        assert frames.is_compact(meet(a, b)).compact


@given(sig_and_elements(count=2))
def test_finite_support_meets_stay_compact(data):
    _, a, b = data
    if frames.is_compact(a).compact and frames.is_compact(b).compact:
        assert frames.is_compact(meet(a, b)).compact


@pytest.mark.parametrize("text", ["L3 x L3", "L2 x L4", "L2 x L2 x L2"])
def test_frame_law_on_all_subsets(text):
    elems = carrier(text)
    sig = elems[0].sig
    for s in brute.subsets(elems):
        top = frames.join_finite(s, sig)
        for a in elems:
            assert meet(a, top) == frames.join_finite([meet(a, x) for x in s], sig)


@given(signatures(infinite=True).filter(lambda s: not s.has_unit_interval).flatmap(
    lambda s: elements(s)))
def test_algebraic_signatures_have_compact_approximants(x):
    assert frames.check_approximants(x, 6)


# -- classification -------------------------------------------------------------------------

def test_classification_table():
    c = frames.classify(Signature.parse("L3 x L4"))
    assert (c.algebraic, c.coherent, c.regular) == (True, True, False)
    c = frames.classify(Signature.parse("L2^w"))
    assert (c.algebraic, c.regular, c.coherent, c.is_powerset_algebra) == (True, True, False, True)
    assert not frames.classify(Signature.parse("U^2")).algebraic
    assert frames.classify(Signature.parse("L3 x U")).fip


@given(signatures())
def test_classification_implications(sig):
    c = frames.classify(sig)
    assert c.fip
    assert c.algebraic == (not sig.has_unit_interval)
    if c.coherent:
        assert c.algebraic
    if c.is_powerset_algebra:
        assert c.algebraic and c.regular
    assert set(c.to_json()) == {"algebraic", "coherent", "regular", "fip", "isPowersetAlgebra"}
