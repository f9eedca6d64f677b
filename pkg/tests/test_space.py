import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from kidmodel.context import AttributeId
from kidmodel.errors import ConfigError
from kidmodel.fca import three_way_from_activity
from kidmodel.space import (
    BasisMismatchError,
    Cue,
    DimensionWeights,
    EmptySupportError,
    MatchKind,
    build_memory,
    candidates_intersecting,
    encode_attrs,
    encode_concept,
    fidelity,
    match_cue,
    similarity,
)

from oracles import bf_match, random_context


def coords_by_name(vec):
    return {str(a): c for a, c in zip(vec.basis, vec.coords) if c}


def test_encode_one_hot(ctx):
    v = encode_concept(ctx, three_way_from_activity(ctx, "Sleeping"))
    assert coords_by_name(v) == {"Pressure.Bed": 1.0}
    assert v.support == {AttributeId("Pressure", "Bed")}


def test_encode_breakfast_unit_weights(ctx):
    v = encode_concept(ctx, three_way_from_activity(ctx, "Breakfast"))
    got = coords_by_name(v)
    assert set(got) == {"Magnetic.Fridge", "Pressure.Seat", "Electric.Toaster"}
    for c in got.values():
        assert c == pytest.approx(1 / math.sqrt(3), abs=1e-12)


def test_encode_breakfast_weighted(ctx):
    w = DimensionWeights({"Electric": 2})
    got = coords_by_name(encode_concept(ctx, three_way_from_activity(ctx, "Breakfast"), w))
    s6 = math.sqrt(6)
    assert got["Magnetic.Fridge"] == pytest.approx(1 / s6, abs=1e-12)
    assert got["Pressure.Seat"] == pytest.approx(1 / s6, abs=1e-12)
    assert got["Electric.Toaster"] == pytest.approx(2 / s6, abs=1e-12)


def test_encode_empty_intent_rejected():
    from kidmodel.context import parse_context

    c = parse_context(",D\n,a\nz,0\n")
    with pytest.raises(EmptySupportError):
        encode_concept(c, three_way_from_activity(c, "z"))


@pytest.mark.parametrize("bad", [0, -1, float("nan"), float("inf")])
def test_weights_must_be_positive(bad):
    with pytest.raises(ConfigError):
        DimensionWeights({"PIR": bad})


def test_weights_unknown_dimension(ctx):
    with pytest.raises(ConfigError):
        build_memory(ctx, DimensionWeights({"Sonar": 2}))


def test_similarity_examples(ctx, memory):
    bf = memory.entry("Breakfast").vector
    assert similarity(bf, bf) == 1.0
    cue = encode_attrs(ctx, ["Magnetic.Fridge", "Magnetic.Cupboard", "Electric.Toaster"])
    assert similarity(cue, bf) == pytest.approx(2 / 3, abs=1e-12)
    assert similarity(memory.entry("Sleeping").vector, memory.entry("Leaving").vector) == 0.0
    assert fidelity(cue, bf) == pytest.approx(4 / 9, abs=1e-12)


def test_similarity_basis_mismatch(ctx):
    from kidmodel.context import parse_context

    other = parse_context(",D\n,a\nx,1\n")
    with pytest.raises(BasisMismatchError):
        similarity(encode_attrs(other, ["D.a"]), encode_attrs(ctx, ["PIR.Shower"]))


def test_match_exact_leaving(memory):
    r = match_cue(memory, ["Magnetic.MainDoor"])
    assert r.kind is MatchKind.EXACT
    assert r.candidates == ("Leaving",)
    assert r.best_similarity == 1.0
    assert r.unique_top == "Leaving"


def test_match_fridge_smallest_superset(memory):
    r = match_cue(memory, ["Magnetic.Fridge"])
    assert r.kind is MatchKind.SMALLEST_SUPERSET
    assert r.candidates == ("Breakfast", "Lunch", "Snacks")
    assert r.unique_top is None
    assert r.best_similarity == pytest.approx(1 / math.sqrt(3), abs=1e-12)


def test_match_overlap_breakfast(memory):
    r = match_cue(memory, ["Magnetic.Fridge", "Magnetic.Cupboard", "Electric.Toaster"])
    assert r.kind is MatchKind.OVERLAP
    assert r.candidates[0] == "Breakfast"
    assert r.unique_top == "Breakfast"
    assert r.best_similarity == pytest.approx(2 / 3, abs=1e-9)


def test_match_fridge_cupboard(memory):
    r = match_cue(memory, ["Magnetic.Fridge", "Magnetic.Cupboard"])
    assert r.kind is MatchKind.OVERLAP
    assert r.candidates[0] == "Grooming"
    assert r.best_similarity == pytest.approx(0.5, abs=1e-12)


def test_match_largest_subset(memory):
    # no intent contains {MainDoor, Seat, TV, Toaster}; Spare_time's does not contain Toaster
    r = match_cue(memory, ["Magnetic.MainDoor", "Pressure.Seat", "Electric.TV", "Electric.Toaster"])
    assert r.kind is MatchKind.LARGEST_SUBSET
    assert r.candidates == ("Spare_time",)


def test_match_none_and_empty(memory):
    r = match_cue(memory, ["PIR.Basin"])
    assert r.kind is MatchKind.NONE and r.candidates == () and r.unique_top is None
    with pytest.raises(EmptySupportError):
        match_cue(memory, [])


def test_exact_match_keeps_duplicates(memory):
    r = match_cue(memory, Cue.of(memory.context, ["PIR.Shower", "Flush.Toilet"]))
    assert r.kind is MatchKind.EXACT
    assert r.candidates == ("Toileting", "Showering")
    assert r.unique_top is None


def test_every_intent_matches_itself(ctx, memory):
    for e in memory.entries:
        r = match_cue(memory, e.concept.positive_intent)
        assert r.kind is MatchKind.EXACT
        assert e.activity in r.candidates


def test_candidates_intersecting(memory):
    assert candidates_intersecting(memory, ["Magnetic.Fridge"]) == {"Breakfast", "Lunch", "Dinner", "Snacks"}
    assert candidates_intersecting(memory, ["PIR.Basin"]) == frozenset()
    assert candidates_intersecting(memory, ["Magnetic.Fridge", "Magnetic.Cupboard"]) == {
        "Breakfast",
        "Lunch",
        "Dinner",
        "Snacks",
        "Grooming",
    }


def test_weight_override_in_match(memory):
    # doubling Electric lets the toaster dominate and keeps Breakfast on top
    r = match_cue(memory, ["Magnetic.Fridge", "Electric.Toaster"], DimensionWeights({"Electric": 2}))
    assert r.kind is MatchKind.SMALLEST_SUPERSET
    assert r.candidates == ("Breakfast",)


seeds = st.integers(min_value=0, max_value=2**32)


@settings(max_examples=200, deadline=None)
@given(seeds, st.data())
def test_match_equals_brute_force(seed, data):
    rng = random.Random(seed)
    c = random_context(rng)
    mem = build_memory(c)
    cue = data.draw(st.lists(st.sampled_from(c.attributes), min_size=1, unique=True))
    kind, cands, best = bf_match(c, {str(a) for a in cue})
    r = match_cue(mem, cue)
    assert r.kind.value == kind
    assert list(r.candidates) == cands
    assert r.best_similarity == pytest.approx(best, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(seeds, st.floats(min_value=0.01, max_value=100), st.data())
def test_uniform_scale_invariance(seed, factor, data):
    c = random_context(random.Random(seed))
    mem = build_memory(c)
    cue = data.draw(st.lists(st.sampled_from(c.attributes), min_size=1, unique=True))
    base = match_cue(mem, cue)
    scaled = match_cue(mem, cue, DimensionWeights().scaled(factor, c))
    assert (scaled.kind, scaled.candidates) == (base.kind, base.candidates)
    assert scaled.best_similarity == pytest.approx(base.best_similarity, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(seeds, st.data())
def test_vector_properties(seed, data):
    c = random_context(random.Random(seed))
    dims = [d.name for d in c.dimensions]
    w = DimensionWeights({d: data.draw(st.floats(min_value=0.1, max_value=10)) for d in dims})
    a = data.draw(st.lists(st.sampled_from(c.attributes), min_size=1, unique=True))
    b = data.draw(st.lists(st.sampled_from(c.attributes), min_size=1, unique=True))
    va, vb = encode_attrs(c, a, w), encode_attrs(c, b, w)
    assert abs(va.norm - 1) <= 1e-9
    assert all(x >= 0 for x in va.coords)
    assert va.support == {x for x, y in zip(c.attributes, va.coords) if y}
    assert abs(similarity(va, vb) - similarity(vb, va)) <= 1e-12
    assert abs(similarity(va, va) - 1) <= 1e-9
    assert 0 <= similarity(va, vb) <= 1


@settings(max_examples=100, deadline=None)
@given(seeds, st.data())
def test_superset_candidates_antitone(seed, data):
    c = random_context(random.Random(seed))
    mem = build_memory(c)
    small = data.draw(st.lists(st.sampled_from(c.attributes), min_size=1, unique=True))
    extra = data.draw(st.lists(st.sampled_from(c.attributes), unique=True))
    r1, r2 = match_cue(mem, small), match_cue(mem, set(small) | set(extra))
    if r1.kind is MatchKind.SMALLEST_SUPERSET and r2.kind is MatchKind.SMALLEST_SUPERSET:
        supers1 = {e.activity for e in mem.entries if set(small) <= e.concept.positive_intent}
        supers2 = {
            e.activity for e in mem.entries if set(small) | set(extra) <= e.concept.positive_intent
        }
        assert supers2 <= supers1
