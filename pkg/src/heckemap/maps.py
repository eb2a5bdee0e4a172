"""Special polygon decomposition and the combinatorial map of darts.

The special polygon is cut into faces by repeatedly completing the ideal
q-gon on the left of a boundary side.  Every face side is a dart; r1 swaps
the two darts of an edge, r2 rotates each face counterclockwise, and
r0 = r2^-1 r1^-1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from fractions import Fraction
from typing import Optional

from .perm import Permutation, PermGroup, are_conjugate_tuples
from .perm import canonical_relabel as _canonical_tuple
from .symbol import (
    Cusp,
    HeckeFareySymbol,
    SymbolError,
    normalize_side,
    qgon_complete,
    reconstruct_er_polygon,
    side_pairing_generators,
    structural_violations,
)

__all__ = [
    "DecompositionError",
    "Face",
    "Edge",
    "Decomposition",
    "CombinatorialMap",
    "InvariantReport",
    "decompose",
    "build_map",
    "invariants",
    "vertex_classes_by_pairings",
    "canonical_relabel",
    "maps_isomorphic",
    "dessin",
    "map_to_json",
    "default_face_budget",
]


class DecompositionError(SymbolError):
    pass


@dataclass
class Face:
    kind: str  # "qgon" | "bullet" | "er"
    tags: list  # side tags in counterclockwise order
    cusps: list  # start cusp of each side
    r: Optional[int] = None

    @property
    def size(self):
        return len(self.tags)


@dataclass(frozen=True)
class Edge:
    kind: str  # "free" | "paired"
    darts: tuple


@dataclass
class Decomposition:
    faces: list
    opp: dict  # involution on side tags after gluing

    @property
    def size(self):
        return sum(f.size for f in self.faces)


def default_face_budget(hfs: HeckeFareySymbol) -> int:
    return 10 * len(hfs.cusps) * hfs.q


# ---------------------------------------------------------------------------
# decomposition


class _Builder:
    def __init__(self, hfs, budget):
        self.hfs = hfs
        self.q = hfs.q
        self.budget = budget
        self.opp = {}
        self.faces = []
        self.n_chords = 0

    def chord(self):
        k = self.n_chords
        self.n_chords += 1
        a, b = ("C", k, 0), ("C", k, 1)
        self.opp[a], self.opp[b] = b, a
        return a, b

    def add_face(self, face):
        self.faces.append(face)
        if len(self.faces) > self.budget:
            raise DecompositionError(f"face budget {self.budget} exceeded")

    def glue(self, t, u):
        a, b = self.opp.pop(t), self.opp.pop(u)
        if a == u:  # the pair already faces itself: nothing left to join
            return
        self.opp[a], self.opp[b] = b, a

    def run(self):
        hfs = self.hfs
        # the polygon boundary; -inf and inf are one vertex, so drop -inf
        region = []
        for i, lab in enumerate(hfs.labels):
            u, v = hfs.adjacency(i)
            tag = ("S", i)
            # a bullet side faces its own 1-gon; other sides face the outside
            outside = ("B", i) if lab.kind == "bullet" else ("X", i)
            self.opp[tag], self.opp[outside] = outside, tag
            if lab.kind == "er":
                region.extend(self.er_face(i, u, v, lab.value))
            else:
                region.append((u, v, tag))
        self.split(region)
        for i, lab in enumerate(hfs.labels):
            if lab.kind == "bullet":
                u, v = hfs.adjacency(i)
                self.add_face(Face("bullet", [("B", i)], [v]))
        return Decomposition(self.faces, self.opp)

    def er_face(self, i, u, v, r):
        P = reconstruct_er_polygon(u, v, r, self.q)
        s = self.q - self.q // r
        tags, cusps, back = [], [], []
        for k in range(s, self.q):
            inner, outer = self.chord()
            tags.append(inner)
            cusps.append(P.cusps[k])
            back.append((P.cusps[k + 1], P.cusps[k], outer))
        self.add_face(Face("er", tags, cusps, r))
        # the er side itself never becomes a dart
        del self.opp[self.opp.pop(("S", i))]
        return back[::-1]

    def split(self, region):
        stack = [region]
        while stack:
            reg = stack.pop()
            if not reg:
                continue
            pinch = _first_repeat(reg)
            if pinch is not None:
                i, j = pinch
                stack.append(reg[i:j])
                stack.append(reg[j:] + reg[:i])
                continue
            if len(reg) == 2:
                (u0, v0, t0), (u1, v1, t1) = reg
                if not (u0.same_point(v1) and v0.same_point(u1)):
                    raise DecompositionError("two-sided region is not a digon")
                self.glue(t0, t1)
                continue
            if len(reg) < 2:
                raise DecompositionError("one-sided region")
            stack.extend(self.cut_qgon(reg))

    def cut_qgon(self, reg):
        m = len(reg)
        u, v = normalize_side(reg[0][0], reg[0][1])
        P = qgon_complete(u, v, self.q)
        pos = [0]
        for k in range(1, self.q):
            c = P.cusps[k]
            found = None
            for step in range(1, m):
                p = (pos[-1] + step) % m
                if p == 0:
                    break
                if reg[p][0].same_point(c):
                    found = p
                    break
            if found is None:
                raise DecompositionError(
                    f"q-gon vertex {c.text()} off the region boundary")
            pos.append(found)
        pos.append(m)
        tags, cusps, rest = [], [], []
        for k in range(self.q):
            a, b = pos[k], pos[k + 1]
            cusps.append(P.cusps[k])
            if b == a + 1:
                tags.append(reg[a][2])
            else:
                inner, outer = self.chord()
                tags.append(inner)
                rest.append(reg[a:b] + [(P.cusps[k + 1], P.cusps[k], outer)])
        self.add_face(Face("qgon", tags, cusps))
        return rest


def _first_repeat(reg):
    seen = {}
    for idx, (u, _, _) in enumerate(reg):
        key = u.key()
        if key in seen:
            return seen[key], idx
        seen[key] = idx
    return None


def decompose(hfs: HeckeFareySymbol, face_budget: Optional[int] = None) -> Decomposition:
    bad = structural_violations(hfs)
    if bad:
        raise DecompositionError("structurally invalid symbol: " + ", ".join(map(str, bad)))
    budget = face_budget if face_budget is not None else default_face_budget(hfs)
    return _Builder(hfs, budget).run()


# ---------------------------------------------------------------------------
# the map


@dataclass
class CombinatorialMap:
    q: int
    r1: Permutation
    r2: Permutation
    faces: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    dart_names: list = field(default_factory=list)

    @property
    def omega_size(self):
        return self.r1.degree

    @property
    def r0(self):
        return self.r2.inverse() * self.r1.inverse()

    def group(self) -> PermGroup:
        return PermGroup([self.r1, self.r2], self.omega_size)


def _dart_partner(tag, dart_of, opp, hfs):
    """Follow facing links (and free pairings) from a dart to the dart across its edge."""
    other = opp[tag]
    for _ in range(2 * len(opp) + 2):
        if other in dart_of:
            return dart_of[other]
        kind, i = other
        lab = hfs.labels[i]
        if lab.kind == "circle":
            return dart_of[tag]
        if lab.kind != "free":
            raise DecompositionError(f"dangling side {other}")
        j = next(k for k, l in enumerate(hfs.labels) if l == lab and k != i)
        other = opp[("X", j)]
    raise DecompositionError("cyclic side identification")


def build_map(hfs: HeckeFareySymbol, face_budget: Optional[int] = None,
              decomposition: Optional[Decomposition] = None) -> CombinatorialMap:
    dec = decomposition or decompose(hfs, face_budget)
    dart_of, names = {}, []
    for f in dec.faces:
        for t in f.tags:
            dart_of[t] = len(names)
            names.append(t)
    n = len(names)
    r2 = [0] * n
    for f in dec.faces:
        ids = [dart_of[t] for t in f.tags]
        for k, d in enumerate(ids):
            r2[d] = ids[(k + 1) % len(ids)]
    r1 = [_dart_partner(t, dart_of, dec.opp, hfs) for t in names]
    R1 = Permutation(r1)
    if not (R1 * R1).is_identity():
        raise DecompositionError("edge pairing is not an involution")
    edges = []
    for cyc in R1.cycles():
        edges.append(Edge("free" if len(cyc) == 1 else "paired", tuple(cyc)))
    m = CombinatorialMap(hfs.q, R1, Permutation(r2), dec.faces, edges, names)
    if n == 0 or not m.group().is_transitive():
        raise DecompositionError("map is not connected")
    return m


# ---------------------------------------------------------------------------
# invariants


@dataclass
class InvariantReport:
    index: int
    tau2: int
    v: dict  # r -> number of r-cycles of order q/r faces, for divisors 1 < r <= q
    vertices: int
    edges: int
    faces: int
    degrees: list
    level: int
    genus: int

    def as_dict(self):
        return {
            "index": self.index,
            "tau2": self.tau2,
            "v": {str(k): v for k, v in sorted(self.v.items())},
            "vertices": self.vertices,
            "edges": self.edges,
            "faces": self.faces,
            "degrees": list(self.degrees),
            "genus": self.genus,
            "level": self.level,
        }


def _lcm(values):
    out = 1
    for x in values:
        out = out * x // gcd(out, x)
    return out


def invariants(m: CombinatorialMap) -> InvariantReport:
    q = m.q
    d = m.omega_size
    tau2 = len(m.r1.fixed_points())
    face_lengths = [len(c) for c in m.r2.cycles()]
    for L in face_lengths:
        if q % L:
            raise DecompositionError(f"face of size {L} does not divide q={q}")
    v = {r: 0 for r in range(2, q + 1) if q % r == 0}
    for L in face_lengths:
        if L < q:
            v[q // L] += 1
    degrees = sorted(len(c) for c in m.r0.cycles())
    v_inf = len(degrees)
    # 2g - 2 + tau2/2 + sum v_r (1 - 1/r) + v_inf = d (1/2 - 1/q)
    rhs = Fraction(d) * (Fraction(1, 2) - Fraction(1, q)) - Fraction(tau2, 2) \
        - sum(Fraction(c) * (1 - Fraction(1, r)) for r, c in v.items()) - v_inf + 2
    if rhs.denominator != 1 or rhs.numerator % 2 or rhs < 0:
        raise DecompositionError(f"genus equation has no non-negative integer solution ({rhs}/2)")
    g = rhs.numerator // 2
    n_edges = len(m.r1.cycles())
    # each free edge ends at an order-2 point, which the surface counts as a vertex
    if v_inf + tau2 - n_edges + len(face_lengths) != 2 - 2 * g:
        raise DecompositionError("Euler characteristic disagrees with the genus formula")
    return InvariantReport(d, tau2, v, v_inf, n_edges, len(face_lengths), degrees, _lcm(degrees), g)


def vertex_classes_by_pairings(hfs: HeckeFareySymbol):
    """Partition cusp positions of the symbol under the side-pairing generators."""
    n = len(hfs.cusps)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    union(0, n - 1)
    gens = side_pairing_generators(hfs)
    free_sides = {}
    for i, lab in enumerate(hfs.labels):
        if lab.kind == "free":
            free_sides.setdefault(lab.value, []).append(i)
    for lab, g in gens:
        if lab.kind == "free":
            a, b = free_sides[lab.value]
        else:
            a = b = next(i for i, l in enumerate(hfs.labels) if l == lab and _owns(hfs, i, lab, g))
        A, B = (a, a + 1), (b, b + 1)
        for h in (g, g.inverse()):
            img = {e: h.act(hfs.cusps[e]) for e in A}
            hits = [(e, f) for e in A for f in B if img[e].same_point(hfs.cusps[f])]
            if lab.kind == "free" and len(hits) < 2:
                continue
            for e, f in hits:
                union(e, f)
    classes = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    return sorted(classes.values())


def _owns(hfs, i, lab, g):
    # circle/bullet/er labels repeat, so match the generator to its side
    from .symbol import pairing_bullet, pairing_circle, pairing_er
    adj = hfs.adjacency(i)
    if lab.kind == "circle":
        return pairing_circle(adj) == g
    if lab.kind == "bullet":
        return pairing_bullet(adj) == g
    P = reconstruct_er_polygon(adj[0], adj[1], lab.value, hfs.q)
    return pairing_er(adj, P, lab.value) == g


# ---------------------------------------------------------------------------
# relabeling, isomorphism, export


def canonical_relabel(m: CombinatorialMap) -> CombinatorialMap:
    r1, r2 = _canonical_tuple((m.r1, m.r2))
    out = CombinatorialMap(m.q, r1, r2)
    out.edges = [Edge("free" if len(c) == 1 else "paired", tuple(c)) for c in r1.cycles()]
    return out


def maps_isomorphic(a, b) -> bool:
    """Accepts maps or (r1, r2) tuples."""
    ta = (a.r1, a.r2) if isinstance(a, CombinatorialMap) else tuple(a)
    tb = (b.r1, b.r2) if isinstance(b, CombinatorialMap) else tuple(b)
    return are_conjugate_tuples(ta, tb)


def dessin(m: CombinatorialMap):
    """(sigma0, sigma1) = (r1, r2)."""
    return m.r1, m.r2


def map_to_json(m: CombinatorialMap) -> dict:
    return {
        "omega": m.omega_size,
        "r1": m.r1.to_cycles_str(),
        "r2": m.r2.to_cycles_str(),
        "r0": m.r0.to_cycles_str(),
        "faces": [{"kind": f.kind, "size": f.size, "r": f.r} for f in m.faces],
        "edges": [{"kind": e.kind, "darts": [d + 1 for d in e.darts]} for e in m.edges],
    }


def map_json_text(m: CombinatorialMap) -> str:
    return json.dumps(map_to_json(m), sort_keys=True)
