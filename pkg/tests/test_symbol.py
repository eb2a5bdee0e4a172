import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import C, corpus_names
from heckemap import load_fixture
from heckemap.generate import GeneratorConfig, random_symbol
from heckemap.ring import get_ring, parse_ring_element
from heckemap.symbol import (Cusp, HFSSyntaxError, InvalidErAdjacency, PSL2Element, SymbolError,
                             cross, hfs_from_json, hfs_to_json, pairing_circle, pairing_er,
                             parse_hfs, qgon_complete, qgon_next, reconstruct_er_polygon,
                             serialize_hfs, side_pairing_generators, validate_hfs)


# ---- cross and q-gons ------------------------------------------------------

def test_cross_examples():
    assert cross(C(3, "-inf"), C(3, "0")) == 1
    assert cross(C(6, "L/2"), C(6, "2/L")) == 1
    assert cross(C(6, "L/2"), C(6, "inf")) == get_ring(6)(2)


def test_qgon_next_examples():
    assert qgon_next(C(6, "L/2"), C(6, "2/L")).same_point(C(6, "L"))
    assert qgon_next(C(6, "2/L"), C(6, "L")).same_point(C(6, "inf"))
    assert qgon_next(C(3, "0"), C(3, "1")).same_point(C(3, "inf"))
    with pytest.raises(SymbolError):
        qgon_next(C(6, "0"), C(6, "L"))


def test_qgon_complete_examples(expected):
    P6 = qgon_complete(C(6, "-inf"), C(6, "0"))
    want = expected["g6_free_triangle"]["qgon_from_base"]
    assert all(c.same_point(C(6, w)) for c, w in zip(P6.cusps, want))
    P3 = qgon_complete(C(3, "-1"), C(3, "0"))
    assert [c.key() for c in P3.cusps] == [C(3, x).key() for x in ("-1", "0", "inf", "-1")]
    P4 = qgon_complete(C(4, "-inf"), C(4, "0"))
    assert all(c.same_point(C(4, w)) for c, w in zip(P4.cusps, ["-inf", "0", "1/L", "L", "inf"]))


def test_reconstruct_er_examples():
    P = reconstruct_er_polygon(C(6, "L/2"), C(6, "inf"), 2)
    assert P.cusps[0].same_point(C(6, "L/2"))
    assert P.cusps[1].same_point(C(6, "2/L")) and P.cusps[2].same_point(C(6, "L"))
    assert P.cusps[3].same_point(C(6, "inf"))
    base = qgon_complete(C(6, "-inf"), C(6, "0"))
    assert {c.key() for c in P.cusps} == {c.key() for c in base.cusps}
    with pytest.raises(InvalidErAdjacency):
        reconstruct_er_polygon(C(6, "0"), C(6, "1/L"), 2)


def test_reconstruct_er3_round_trip():
    base = qgon_complete(C(6, "-inf"), C(6, "0"))
    # e3 on q=6 skips s = 6 - 2 = 4 steps: 0 -> ... -> L
    x, y = base.cusps[1], base.cusps[5]
    P = reconstruct_er_polygon(x, y, 3)
    assert P.cusps[0].same_point(x) and P.cusps[4].same_point(y)
    assert {c.key() for c in P.cusps} == {c.key() for c in base.cusps}


# ---- parsing -----------------------------------------------------------------

def test_parse_examples():
    h = parse_hfs("q=6 / cusps: -inf, 0/1, 1/L, L/2, inf / labels: o, o, o, e2")
    assert serialize_hfs(h) == serialize_hfs(load_fixture("g6_free_triangle"))
    h = parse_hfs("q=3 / cusps: -inf, 0/1, inf / labels: b, b")
    assert [l.text() for l in h.labels] == ["b", "b"]
    with pytest.raises(HFSSyntaxError, match="0"):
        parse_hfs("q=3 / cusps: -inf, inf / labels: o")


@pytest.mark.parametrize("text, line", [
    ("q=2\ncusps: -inf, 0, inf\nlabels: o, o", 1),
    ("q=3\ncusps: 0, 1, inf\nlabels: o, o", 2),
    ("q=3\ncusps: -inf, 0, 1\nlabels: o, o", 2),
    ("q=3\ncusps: -inf, 0, inf\nlabels: o, x", 3),
    ("q=3\ncusps: -inf, 0, inf\nlabels: o", 3),
    ("q=3\ncusps: -inf, 0, inf", 1),
])
def test_parse_errors_carry_position(text, line):
    with pytest.raises(HFSSyntaxError) as info:
        parse_hfs(text)
    assert info.value.line == line


@pytest.mark.parametrize("name", corpus_names())
def test_serialize_round_trip(name):
    h = load_fixture(name)
    assert serialize_hfs(parse_hfs(serialize_hfs(h))) == serialize_hfs(h)
    assert serialize_hfs(hfs_from_json(hfs_to_json(h))) == serialize_hfs(h)


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_is_valid(name):
    assert validate_hfs(load_fixture(name)) == []


# ---- validation ----------------------------------------------------------------

def test_validate_examples():
    text = serialize_hfs(load_fixture("modular_gamma3"))
    bad = text.replace("labels: 1, 2, 2", "labels: 1, 4, 2")
    assert [str(v) for v in validate_hfs(parse_hfs(bad))] == ["UnpairedFreeLabel(2)", "UnpairedFreeLabel(4)"]
    e4 = parse_hfs("q=6 / cusps: -inf, 0/1, 1/L, L/2, inf / labels: o, o, o, e4")
    assert [v.code for v in validate_hfs(e4)] == ["ErNotDivisor"]


def test_validate_structural_codes():
    h = parse_hfs("q=3 / cusps: -inf, 0, 2, inf / labels: o, o, o")
    assert "AdjacencyDeterminant" in {v.code for v in validate_hfs(h)}
    h = parse_hfs("q=3 / cusps: -inf, 1, 0, inf / labels: o, o, o")
    assert "NotIncreasing" in {v.code for v in validate_hfs(h)}
    h = parse_hfs("q=6 / cusps: -inf, 0/1, 1/L, inf / labels: o, o, e2")
    assert {v.code for v in validate_hfs(h)} & {"InvalidErAdjacency", "DecompositionFailed"}


# ---- side pairings ---------------------------------------------------------------

def _mats(q, rows):
    return [PSL2Element.from_strings(q, ((a, b), (c, d))) for a, b, c, d in rows]


@pytest.mark.parametrize("name, q", [("g4_index8", 4), ("modular_gamma3", 3), ("g6_free_triangle", 6)])
def test_generators_match_worked_lists(expected, name, q):
    got = [g for _, g in side_pairing_generators(load_fixture(name))]
    assert got == _mats(q, expected[name]["generators"])


def test_circle_generator_formula(expected):
    M = PSL2Element.from_strings(6, (("1", "0"), ("L", "1")))
    g = pairing_circle((C(6, "0"), C(6, "1/L")))
    assert g == M * PSL2Element.S(6) * M.inverse()


def test_er_generator_is_power_of_R():
    P = reconstruct_er_polygon(C(6, "L/2"), C(6, "inf"), 2)
    g = pairing_er((C(6, "L/2"), C(6, "inf")), P, 2)
    assert g == PSL2Element.R(6) ** 3
    assert g == PSL2Element.from_strings(6, (("-L", "2"), ("-2", "L")))
    assert g.act(C(6, "L/2")).same_point(C(6, "inf"))
    assert g.act(C(6, "inf")).same_point(C(6, "L/2"))


def test_generator_count():
    for name in corpus_names():
        h = load_fixture(name)
        kinds = [l.kind for l in h.labels]
        want = sum(k != "free" for k in kinds) + len(h.free_values())
        assert len(side_pairing_generators(h)) == want


# ---- properties --------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=3, max_value=8), st.integers(min_value=0, max_value=10**6))
def test_generator_orders(q, seed):
    h = random_symbol(q, random.Random(seed), GeneratorConfig(max_expansions=2))
    for lab, g in side_pairing_generators(h):
        if lab.kind == "circle":
            assert g.order(4) == 2 and not g.trace()
            _side(h, lab, g)
        elif lab.kind == "bullet":
            assert g.order(q + 1) == q
        elif lab.kind == "er":
            assert g.order(q + 1) == lab.value
        else:
            t = g.trace()
            assert (t * t - 4).sign() >= 0
            assert g.order(2 * q) is None


def _side(h, lab, g):
    for i, l in enumerate(h.labels):
        if l == lab:
            x, y = h.adjacency(i)
            if g.act(x).same_point(y) and g.act(y).same_point(x):
                return i
    raise AssertionError("circle generator swaps no side")


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=3, max_value=12), st.integers(min_value=0, max_value=10**6))
def test_qgon_closes_from_random_seed(q, seed):
    rng = random.Random(seed)
    R = get_ring(q)
    # a random image of the base side under a product of S and T
    g = PSL2Element.identity(q)
    for _ in range(rng.randint(0, 6)):
        g = g * (PSL2Element.S(q) if rng.random() < 0.5 else PSL2Element.T(q) ** rng.choice([-1, 1]))
    a = Cusp(g.a, g.c)
    b = Cusp(g.b, g.d)
    if cross(a, b) != 1:
        a, b = b, a
    P = qgon_complete(a, b, q)
    assert P.cusps[-1].same_point(a)
    assert all(cross(P.cusps[i], P.cusps[i + 1]) == 1 for i in range(q))
    assert R is a.ring
