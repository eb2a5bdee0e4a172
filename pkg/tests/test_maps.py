import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import C, corpus_names, literal_perm
from heckemap import load_fixture
from heckemap.generate import GeneratorConfig, random_symbol, two_bullet_symbol
from heckemap.maps import (CombinatorialMap, build_map, canonical_relabel, decompose, dessin, invariants, map_to_json,
                           maps_isomorphic, vertex_classes_by_pairings, DecompositionError)
from heckemap.perm import Permutation
from heckemap.symbol import side_pairing_generators


def _keys(face):
    return {c.key() for c in face.cusps}


def _key_set(q, texts):
    return {C(q, t).key() for t in texts}


# ---- decomposition ---------------------------------------------------------

def test_decompose_m7():
    d = decompose(load_fixture("m7"))
    qgons = [f for f in d.faces if f.kind == "qgon"]
    assert sorted(f.size for f in d.faces) == [1, 3, 3]
    assert {frozenset(_keys(f)) for f in qgons} == {frozenset(_key_set(3, ["-1", "0", "inf"])),
                                                     frozenset(_key_set(3, ["0", "1", "inf"]))}
    assert d.size == 7


def test_decompose_g4():
    d = decompose(load_fixture("g4_index8"))
    assert [f.kind for f in d.faces] == ["qgon", "qgon"]
    assert {frozenset(_keys(f)) for f in d.faces} == {
        frozenset(_key_set(4, ["inf", "0", "1/L", "L"])), frozenset(_key_set(4, ["L", "3/L", "2L", "inf"]))}
    assert d.size == 8


def test_decompose_er_face():
    d = decompose(load_fixture("g6_free_triangle"))
    assert [(f.kind, f.size, f.r) for f in d.faces] == [("er", 3, 2)]


def test_face_budget_is_enforced():
    with pytest.raises(DecompositionError, match="budget"):
        decompose(load_fixture("modular_index11"), face_budget=1)


# ---- literal permutations from the worked examples --------------------------

@pytest.mark.parametrize("name", ["g4_index8", "modular_gamma3", "g5_five_bullets", "modular_index11"])
def test_map_isomorphic_to_literal(expected, name):
    e = expected[name]
    n, nb = e["dart_tokens"], e.get("barred_tokens", e["dart_tokens"])
    r1, r2 = literal_perm(e["r1"], n, nb), literal_perm(e["r2"], n, nb)
    m = build_map(load_fixture(name))
    # the printed r2 may run clockwise; accept either orientation
    assert maps_isomorphic(m, (r1, r2)) or maps_isomorphic(m, (r1, r2.inverse()))


def test_cycle_structures():
    m = build_map(load_fixture("g4_index8"))
    assert m.r2.cycle_type() == [4, 4] and m.r1.cycle_type() == [2, 2, 2, 2]
    m = build_map(load_fixture("modular_gamma3"))
    assert m.r2.cycle_type() == [3] * 4 and m.r1.cycle_type() == [2] * 6
    m = build_map(load_fixture("modular_index11"))
    assert sorted(m.r2.cycle_type()) == [1, 1, 3, 3, 3]
    assert sorted(m.r1.cycle_type()) == [1, 1, 1, 2, 2, 2, 2]


def test_dessin_examples():
    s0, s1 = dessin(build_map(load_fixture("g6_free_triangle")))
    assert s0.is_identity() and s1.cycle_type() == [3]
    s0, _ = dessin(build_map(load_fixture("g5_five_bullets")))
    assert s0.cycle_type() == [2] * 5
    s0, s1 = dessin(build_map(two_bullet_symbol(3)))
    assert s0.cycle_type() == [2] and s1.is_identity()


# ---- invariants ------------------------------------------------------------------

def test_invariants_gamma3(expected):
    rep = invariants(build_map(load_fixture("modular_gamma3")))
    want = expected["modular_gamma3"]["derived"]
    assert (rep.index, rep.tau2, rep.vertices, rep.degrees, rep.level, rep.genus) == \
        (12, want["tau2"], want["vertices"], want["degrees"], want["level"], want["genus"])


def test_invariants_g4(expected):
    rep = invariants(build_map(load_fixture("g4_index8")))
    want = expected["g4_index8"]["derived"]
    assert (rep.index, rep.vertices, rep.edges, rep.faces, rep.genus) == \
        (8, want["vertices"], want["edges"], want["faces"], want["genus"])
    assert rep.vertices - rep.edges + rep.faces == 2 - 2 * rep.genus


def test_invariants_m7(expected):
    rep = invariants(build_map(load_fixture("m7")))
    s = expected["m7"]["stated"]
    assert (rep.tau2, rep.v[3], rep.vertices, rep.degrees, rep.genus) == \
        (s["tau2"], s["v3"], s["vertices"], s["degrees"], s["genus"])


@pytest.mark.parametrize("name", ["m1_6", "m3_4", "m2_5"])
def test_degree_splits(expected, name):
    assert invariants(build_map(load_fixture(name))).degrees == expected[name]["stated"]["degrees"]


@pytest.mark.parametrize("name, count", [("modular_gamma3", 4), ("g6_free_triangle", 1), ("m7", 1)])
def test_vertex_classes(name, count):
    h = load_fixture(name)
    assert len(vertex_classes_by_pairings(h)) == count


def test_map_json_fields():
    d = map_to_json(build_map(load_fixture("g6_free_triangle")))
    assert {"omega", "r1", "r2", "r0", "faces", "edges"} <= set(d)


# ---- invariants over the corpus and random symbols ----------------------------------

def _check_map(h):
    m = build_map(h)
    q = h.q
    assert (m.r1 * m.r1).is_identity()
    assert (m.r2 ** q).is_identity()
    assert all(q % len(c) == 0 for c in m.r2.cycles())
    assert (m.r0 * m.r1 * m.r2).is_identity()
    assert m.group().is_transitive()
    rep = invariants(m)
    faces = decompose(h).faces
    assert m.omega_size == sum(f.size for f in faces) == sum(rep.degrees) == rep.index
    assert rep.genus >= 0
    # each free edge has a dangling end at an order-2 point, counted as a vertex
    assert rep.vertices + rep.tau2 - rep.edges + rep.faces == 2 - 2 * rep.genus
    assert len(side_pairing_generators(h)) == rep.tau2 + sum(rep.v.values()) + len(h.free_values())
    assert len(vertex_classes_by_pairings(h)) == rep.vertices
    c = canonical_relabel(m)
    assert (c.r1, c.r2) == (canonical_relabel(c).r1, canonical_relabel(c).r2)
    return m


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_map_invariants(name):
    _check_map(load_fixture(name))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=3, max_value=8), st.integers(min_value=0, max_value=10**6))
def test_random_map_invariants(q, seed):
    m = _check_map(random_symbol(q, random.Random(seed), GeneratorConfig(max_expansions=2)))
    perm = list(range(m.omega_size))
    random.Random(seed).shuffle(perm)
    c = Permutation(perm)
    renamed = (c * m.r1 * c.inverse(), c * m.r2 * c.inverse())
    assert maps_isomorphic(m, renamed)
    a, b = canonical_relabel(m), canonical_relabel(CombinatorialMap(m.q, *renamed))
    assert (a.r1, a.r2) == (b.r1, b.r2)
