import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from mvframes import frames
from mvframes.core import Element, Signature, enumerate_carrier, leq, meet, neg, oplus
from mvframes.errors import BadParameter, BadSignatureForNucleus, MalformedInput, PreconditionFailed
from mvframes.nuclei import (
    NucleusSpec, Unknown, builtin_nucleus, classify_nucleus, halving_signature, nuclear_as_algebra,
    nucleus_from_json, parity_signature,
)

from strategies import finite_signatures


def vals(text, *xs):
    return Element.from_values(Signature.parse(text), [F(x) for x in xs])


def brute_verdicts(j, carrier):
    """Nucleus axioms straight from their definitions, over all pairs."""
    closure = all(leq(x, j(x)) and j(j(x)) == j(x) for x in carrier) and all(
        leq(j(x), j(y)) for x, y in itertools.product(carrier, repeat=2) if leq(x, y))
    nucleus = closure and all(j(meet(x, y)) == meet(j(x), j(y))
                              for x, y in itertools.product(carrier, repeat=2))
    zero = Element.zero(carrier[0].sig)
    fixed = {x for x in carrier if j(x) == x}
    mv_type = all(neg(x) in fixed for x in fixed) and all(
        oplus(x, y) in fixed for x, y in itertools.product(fixed, repeat=2))
    return closure, nucleus, j(zero) == zero, mv_type, fixed


# -- worked examples -------------------------------------------------------------------

def test_double_pseudocomplement_on_three_chain():
    sig = Signature.parse("L3")
    j = builtin_nucleus("double_pseudocomplement", sig)
    c = classify_nucleus(j)
    assert c.is_nucleus and c.is_dense and c.is_inductive is True and c.is_mv_type
    assert set(c.nuclear.elements) == {vals("L3", 0), vals("L3", 1)}
    # j does not commute with negation
    half = vals("L3", "1/2")
    assert j(neg(half)) != neg(j(half))
    alg = nuclear_as_algebra(j, c)
    assert str(alg.sig) == "L2" and alg.ok


def test_double_pseudocomplement_fixes_the_boolean_center():
    sig = Signature.parse("L3 x L4")
    j = builtin_nucleus("double_pc", sig)
    carrier = list(enumerate_carrier(sig))
    fixed = set(classify_nucleus(j).nuclear.elements)
    assert fixed == {x for x in carrier if frames.in_boolean_center(x)}
    assert all(j(x) == frames.pseudocomplement(frames.pseudocomplement(x)) for x in carrier)


def test_threshold_nuclear_set_is_an_upper_set():
    sig = Signature.parse("L5 x L5")
    j = builtin_nucleus("threshold", sig, t0="1/2")
    c = classify_nucleus(j)
    assert c.is_nucleus and not c.is_dense and not c.is_mv_type
    expected = {x for x in enumerate_carrier(sig) if all(v >= F(1, 2) for v in x.values())}
    assert set(c.nuclear.elements) == expected
    with pytest.raises(PreconditionFailed) as info:
        nuclear_as_algebra(j, c)
    assert "isMVType" in info.value.failed


def test_threshold_parameter_errors():
    sig = Signature.parse("L3")
    with pytest.raises(BadParameter):
        builtin_nucleus("threshold", sig)
    with pytest.raises(BadParameter):
        builtin_nucleus("threshold", sig, t0="1/3")
    with pytest.raises(BadParameter):
        builtin_nucleus("threshold", sig, t0="half")
    with pytest.raises(BadParameter):
        builtin_nucleus("cube-root", sig)


def test_halving_nuclear_algebra():
    sig = halving_signature([1, 2, 3, 4])
    assert str(sig) == "L3 x L5 x L7 x L9"
    j = builtin_nucleus("halving", sig)
    assert j(vals("L3 x L5 x L7 x L9", "1/2", "1/4", "1/6", "3/8")) == vals(
        "L3 x L5 x L7 x L9", 1, "1/2", "1/3", "1/2")
    c = classify_nucleus(j)
    assert c.is_nucleus and c.is_dense and c.is_inductive is True and c.is_mv_type
    alg = nuclear_as_algebra(j, c)
    assert str(alg.sig) == "L2 x L3 x L4 x L5"
    assert alg.ok, alg.checks


def test_halving_needs_odd_chains():
    with pytest.raises(BadSignatureForNucleus):
        builtin_nucleus("halving", Signature.parse("L4"))
    with pytest.raises(BadSignatureForNucleus):
        builtin_nucleus("halving", Signature.parse("U"))


def test_halving_with_infinite_tail():
    sig = halving_signature([1, 2], tail=3)
    j = builtin_nucleus("halving", sig)
    c = classify_nucleus(j, random.Random(1), samples=100)
    assert "sampled" in c.method and c.nuclear.elements is None
    alg = nuclear_as_algebra(j, c, random.Random(1), samples=60)
    assert str(alg.sig) == "L2 x L3 x L4^w"
    assert alg.ok, alg.checks


def test_identity_nucleus():
    sig = Signature.parse("L3 x L4")
    j = builtin_nucleus("identity", sig)
    c = classify_nucleus(j)
    assert c.is_nucleus and c.is_dense and c.is_mv_type and len(c.nuclear.elements) == 12
    assert nuclear_as_algebra(j, c).sig == sig


def test_parity_nucleus_on_a_finite_prefix():
    sig = parity_signature(6, tail=False)
    assert str(sig) == "L2 x L3 x L4 x L5 x L6"
    j = builtin_nucleus("parity", sig)
    c = classify_nucleus(j)
    assert c.is_nucleus and not c.is_dense and not c.is_mv_type
    expected = {x for x in enumerate_carrier(sig) if x.value(1, 0) == 1 and x.value(3, 0) == 1}
    assert set(c.nuclear.elements) == expected
    with pytest.raises(PreconditionFailed):
        nuclear_as_algebra(j, c)


def test_parity_nucleus_with_tails():
    sig = parity_signature(5)
    j = builtin_nucleus("parity", sig)
    c = classify_nucleus(j, random.Random(2), samples=100)
    assert c.is_nucleus and not c.is_mv_type
    x = Element.build(sig, [0, 0, 0, 0, F(2, 7), 1], {(1, 0): F(1), (3, 0): F(1)})
    assert c.nuclear.contains(x)
    assert not c.nuclear.contains(Element.one(sig).map_blocks(lambda b, v: F(1, 2) if b == 1 else v))


def test_ceiling_on_the_unit_interval():
    sig = Signature.parse("U")
    c = classify_nucleus(builtin_nucleus("ceiling", sig), random.Random(3))
    assert c.is_nucleus and c.is_dense and c.is_mv_type
    assert c.is_inductive is False


def test_constant_one_on_the_unit_interval_is_undecided():
    sig = Signature.parse("U")
    c = classify_nucleus(builtin_nucleus("one", sig), random.Random(4))
    assert c.is_nucleus and not c.is_dense
    assert isinstance(c.is_inductive, Unknown) and not c.is_inductive
    assert c.to_json()["isInductive"] == "unknown"


def test_radical_nucleus_values():
    sig = Signature.parse("L2 x L3 x L4")
    j = builtin_nucleus("radical", sig)
    assert j(Element.zero(sig)) == vals("L2 x L3 x L4", 0, "1/2", "2/3")
    c = classify_nucleus(j)
    assert c.is_nucleus and not c.is_dense and c.is_mv_type is False
    with pytest.raises(BadSignatureForNucleus):
        builtin_nucleus("radical", Signature.parse("U x L3"))


# -- table nuclei ------------------------------------------------------------------------

def table_json(sig, pairs):
    from mvframes.core import element_to_json

    return {"kind": "table", "name": "mine",
            "table": [{"from": element_to_json(a), "to": element_to_json(b)} for a, b in pairs]}


def test_table_nucleus_matching_a_builtin():
    sig = Signature.parse("L3 x L3")
    ref = builtin_nucleus("double_pc", sig)
    j = nucleus_from_json(sig, table_json(sig, [(x, ref(x)) for x in enumerate_carrier(sig)]))
    assert j.name == "mine" and not j.coordinatewise
    c = classify_nucleus(j)
    assert c.method == "exhaustive" and c.is_nucleus and c.is_mv_type
    alg = nuclear_as_algebra(j, c)
    assert str(alg.sig) == "L2 x L2" and alg.ok


def test_table_that_is_not_a_nucleus():
    sig = Signature.parse("L3")
    half, one, zero = vals("L3", "1/2"), vals("L3", 1), vals("L3", 0)
    j = NucleusSpec.from_table("swap", {zero: one, half: half, one: zero})
    c = classify_nucleus(j)
    assert not c.is_closure and not c.is_nucleus and c.violations
    with pytest.raises(BadSignatureForNucleus):
        NucleusSpec.from_table("partial", {zero: zero})


def test_malformed_nucleus_json():
    sig = Signature.parse("L3")
    with pytest.raises(MalformedInput):
        nucleus_from_json(sig, {"params": {}})
    with pytest.raises(MalformedInput):
        nucleus_from_json(sig, {"kind": "table", "table": []})
    assert nucleus_from_json(sig, {"kind": "threshold", "params": {"t0": "1/2"}}).params == (("t0", "1/2"),)


# -- properties --------------------------------------------------------------------------

kinds = st.sampled_from(["identity", "one", "double_pc", "ceiling", "radical", "threshold"])


@given(finite_signatures().filter(lambda s: s.carrier_size() <= 48), kinds)
def test_classification_matches_brute_force(sig, kind):
    params = {"t0": "1"} if kind == "threshold" else {}
    j = builtin_nucleus(kind, sig, **params)
    carrier = list(enumerate_carrier(sig))
    closure, nucleus, dense, mv_type, fixed = brute_verdicts(j, carrier)
    c = classify_nucleus(j, random.Random(0), samples=40)
    assert (c.is_closure, c.is_nucleus, c.is_dense, c.is_mv_type) == (closure, nucleus, dense, mv_type)
    assert c.is_inductive is True  # finite algebras: every element is compact
    assert set(c.nuclear.elements) == fixed


@given(finite_signatures(), kinds)
def test_nuclear_algebra_whenever_preconditions_hold(sig, kind):
    params = {"t0": "0"} if kind == "threshold" else {}
    j = builtin_nucleus(kind, sig, **params)
    c = classify_nucleus(j, random.Random(0), samples=40)
    if c.is_nucleus and c.is_inductive is True and c.is_mv_type:
        alg = nuclear_as_algebra(j, c, random.Random(0), samples=40)
        assert alg.ok, alg.checks
        assert alg.sig.carrier_size() == len(c.nuclear.elements)
    else:
        with pytest.raises(PreconditionFailed):
            nuclear_as_algebra(j, c)
