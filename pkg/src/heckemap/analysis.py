"""Subgroup verdicts computed from the map: normality, automorphisms, level, congruence."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .maps import CombinatorialMap, InvariantReport, build_map, invariants
from .perm import Permutation, PermGroup, StructureSummary, left_to_right, structure_summary
from .ring import QuotientRing, get_ring
from .symbol import HeckeFareySymbol, PSL2Element, side_pairing_generators

__all__ = [
    "AnalysisOptions",
    "AnalysisReport",
    "ConsistencyError",
    "OracleResult",
    "FiniteMatrix",
    "monodromy",
    "is_normal",
    "core_index",
    "automorphisms",
    "is_quasi_regular",
    "is_regular",
    "level",
    "f_T_f_U",
    "hsu_congruence",
    "oracle_modulus",
    "congruence_oracle",
    "analyze",
    "report_json",
]


class ConsistencyError(RuntimeError):
    """Two independent computations disagree."""


@dataclass(frozen=True)
class AnalysisOptions:
    congruence: str = "both"  # hsu | oracle | both | off
    max_oracle_size: int = 10**6
    face_budget: Optional[int] = None
    emit_generators: bool = False
    base_dart: int = 0

    def __post_init__(self):
        if self.congruence not in ("hsu", "oracle", "both", "off"):
            raise ValueError(f"unknown congruence method {self.congruence!r}")
        if self.max_oracle_size < 1:
            raise ValueError("max_oracle_size must be >= 1")
        if self.face_budget is not None and self.face_budget < 1:
            raise ValueError("face_budget must be >= 1")


# ---------------------------------------------------------------------------
# group-level verdicts


def monodromy(m: CombinatorialMap) -> PermGroup:
    return m.group()


def core_index(m: CombinatorialMap) -> int:
    """Index of the largest normal subgroup inside X, which is |G_X|."""
    return monodromy(m).order()


def is_normal(m: CombinatorialMap) -> bool:
    return core_index(m) == m.omega_size


def automorphisms(m: CombinatorialMap, bound: int = 10**6):
    C = monodromy(m).centralizer_in_symmetric()
    return C, structure_summary(C, bound)


def is_regular(m: CombinatorialMap) -> bool:
    return monodromy(m).centralizer_in_symmetric().order() == m.omega_size


def is_quasi_regular(m: CombinatorialMap) -> bool:
    degrees = {len(c) for c in m.r0.cycles()}
    sizes = {len(c) for c in m.r2.cycles()}
    n_free = len(m.r1.fixed_points())
    return len(degrees) == 1 and len(sizes) == 1 and n_free in (0, m.omega_size)


def level(m: CombinatorialMap) -> int:
    return m.r0.order()


def f_T_f_U(m: CombinatorialMap):
    """Images of T = (1 1; 0 1) and U = (1 0; 1 1) for q = 3."""
    if m.q != 3:
        raise ValueError("f(T), f(U) are defined for the modular group only (q = 3)")
    r0 = m.r0
    return r0, m.r1 * r0.inverse() * m.r1.inverse()


# ---------------------------------------------------------------------------
# congruence relations on f(T), f(U)


def _w(*factors):
    # words are read left to right, as for a right action on cosets
    return left_to_right(*factors)


def _hsu_odd(A, B, N):
    half = pow(2, -1, N)
    return (_w(B ** 2, A ** (-half)) ** 3).is_identity()


def _hsu_two_power_parts(l, r, e):
    fifth = pow(5, -1, e)
    s = _w(l ** 20, r ** fifth, l ** -4, r ** -1)
    x = _w(l, r ** -1, l)
    return s, x


def _hsu_two_power(A, B, N):
    s, x = _hsu_two_power_parts(A, B, N)
    return (_w(x ** -1, s, x) == s ** -1
            and _w(s ** -1, B, s) == B ** 25
            and (_w(s, B ** 5, A, B ** -1, A) ** 3).is_identity())


def hsu_congruence(fT: Permutation, fU: Permutation) -> bool:
    """Congruence test for a finite-index subgroup of the modular group from f(T), f(U)."""
    A, B = fT, fU
    N = A.order()
    if N == 1:
        return True
    e, m = 1, N
    while m % 2 == 0:
        m //= 2
        e *= 2
    if e == 1:
        return _hsu_odd(A, B, N)
    if m == 1:
        return _hsu_two_power(A, B, N)
    c = (pow(e, -1, m) * e) % N  # 0 mod e, 1 mod m
    d = (pow(m, -1, e) * m) % N  # 1 mod e, 0 mod m
    a, b, l, r = A ** c, B ** c, A ** d, B ** d
    half = pow(2, -1, m)
    s, x = _hsu_two_power_parts(l, r, e)
    y = _w(a, b ** -1, a)
    checks = (
        _w(a, r) == _w(r, a),
        (y ** 4).is_identity(),
        y ** 2 == _w(b ** -1, a) ** 3,
        y ** 2 == _w(b ** 2, a ** (-half)) ** -3,
        _w(x ** -1, s, x) == s ** -1,
        _w(s ** -1, r, s) == r ** 25,
        x ** 2 == _w(s, r ** 5, l, r ** -1, l) ** 3,
    )
    return all(checks)


# ---------------------------------------------------------------------------
# finite quotient oracle


class _IndexedRing:
    """Residues of a QuotientRing numbered on first use, with memoized + and *."""

    def __init__(self, Q: QuotientRing):
        self.Q = Q
        self.elems = []
        self.index = {}
        self._neg, self._add, self._mul = {}, {}, {}

    def _id(self, residue):
        i = self.index.get(residue)
        if i is None:
            i = self.index[residue] = len(self.elems)
            self.elems.append(residue)
        return i

    def of(self, x):
        return self._id(self.Q.reduce_vec(x.coeffs))

    def neg(self, i):
        r = self._neg.get(i)
        if r is None:
            r = self._neg[i] = self._id(self.Q.neg(self.elems[i]))
        return r

    def add(self, i, j):
        key = (i, j) if i <= j else (j, i)
        r = self._add.get(key)
        if r is None:
            r = self._add[key] = self._id(self.Q.add(self.elems[i], self.elems[j]))
        return r

    def mul(self, i, j):
        key = (i, j) if i <= j else (j, i)
        r = self._mul.get(key)
        if r is None:
            r = self._mul[key] = self._id(self.Q.mul(self.elems[i], self.elems[j]))
        return r


class FiniteMatrix:
    """2x2 matrix over Z[lambda]/(m) modulo +-I; stored as the lesser of M and -M."""

    __slots__ = ("ring", "entries")

    def __init__(self, ring: _IndexedRing, entries):
        neg = ring.neg
        self.ring = ring
        entries = tuple(entries)
        self.entries = min(entries, tuple(neg(x) for x in entries))

    @classmethod
    def from_psl(cls, ring: _IndexedRing, g: PSL2Element):
        return cls(ring, tuple(ring.of(x) for x in g.entries()))

    def __mul__(self, o):
        R = self.ring
        add, mul = R.add, R.mul
        a, b, c, d = self.entries
        e, f, g, h = o.entries
        return FiniteMatrix(R, (add(mul(a, e), mul(b, g)), add(mul(a, f), mul(b, h)),
                                add(mul(c, e), mul(d, g)), add(mul(c, f), mul(d, h))))

    def __eq__(self, o):
        return isinstance(o, FiniteMatrix) and self.entries == o.entries

    def __hash__(self):
        return hash(self.entries)

    def det(self):
        R = self.ring
        a, b, c, d = self.entries
        return R.add(R.mul(a, d), R.neg(R.mul(b, c)))


@dataclass(frozen=True)
class OracleResult:
    verdict: Optional[bool]  # None when a size cap was hit
    modulus: str
    image_size: Optional[int]
    orbit_size: Optional[int]

    @property
    def inconclusive(self):
        return self.verdict is None


def oracle_modulus(q: int, n: int):
    """Ideal generator for the principal subgroup whose containment decides congruence."""
    R = get_ring(q)
    if q in (3, 4, 6):
        return R(n) * R.lam
    if q == 5:
        return R(2 * n)
    raise ValueError(f"no congruence criterion for q={q}")


def congruence_oracle(m: CombinatorialMap, max_size: int = 10**6, base_dart: int = 0) -> OracleResult:
    """Compare |<S, T> mod I| with the orbit of (dart, identity) under the pair action."""
    q = m.q
    gen = oracle_modulus(q, level(m))
    Q = QuotientRing(get_ring(q), gen)
    Q = _IndexedRing(Q)
    S = FiniteMatrix.from_psl(Q, PSL2Element.S(q))
    T = FiniteMatrix.from_psl(Q, PSL2Element.T(q))
    ident = FiniteMatrix.from_psl(Q, PSL2Element.identity(q))
    label = str(gen)

    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in (S, T):
            y = g * x
            if y not in seen:
                seen.add(y)
                if len(seen) > max_size:
                    return OracleResult(None, label, None, None)
                queue.append(y)
    image = len(seen)

    pairs = ((m.r1, S), (m.r0, T))
    start = (base_dart, ident)
    orbit = {start}
    queue = deque([start])
    while queue:
        d, x = queue.popleft()
        for p, g in pairs:
            y = (p(d), g * x)
            if y not in orbit:
                orbit.add(y)
                if len(orbit) > max_size:
                    return OracleResult(None, label, image, None)
                queue.append(y)
    return OracleResult(len(orbit) == image, label, image, len(orbit))


# ---------------------------------------------------------------------------
# aggregate report


@dataclass
class AnalysisReport:
    q: int
    index: int
    map: CombinatorialMap
    invariants: InvariantReport
    monodromy_order: int
    core_index: int
    normal: bool
    aut: StructureSummary
    normalizer_quotient_note: str
    regular: bool
    quasi_regular: bool
    level: int
    congruence: dict
    generators: list = field(default_factory=list)

    def as_dict(self, emit_generators=False, emit_dessin=False):
        m = self.map
        inv = self.invariants.as_dict()
        out = {
            "q": self.q,
            "index": self.index,
            "darts": m.omega_size,
            "r1": m.r1.to_cycles_str(),
            "r2": m.r2.to_cycles_str(),
            "r0": m.r0.to_cycles_str(),
            "invariants": {k: inv[k] for k in
                           ("tau2", "v", "vertices", "edges", "faces", "degrees", "genus", "level")},
            "monodromy_order": str(self.monodromy_order),
            "core_index": self.core_index,
            "normal": self.normal,
            "aut": self.aut.as_dict(),
            "normalizer_quotient_note": self.normalizer_quotient_note,
            "quasi_regular": self.quasi_regular,
            "regular": self.regular,
            "congruence": self.congruence,
        }
        if emit_generators:
            out["generators"] = [{"kind": lab.text(), "matrix": g.rows_text()} for lab, g in self.generators]
        if emit_dessin:
            out["dessin"] = {"sigma0": m.r1.to_cycles_str(), "sigma1": m.r2.to_cycles_str()}
        return out


def _congruence(m: CombinatorialMap, opts: AnalysisOptions) -> dict:
    q = m.q
    n = level(m)
    out = {"applicable": q <= 6, "verdict": None, "method": None, "modulus": None}
    if q > 6:
        out["verdict"] = "not applicable"
        return out
    if opts.congruence == "off":
        out["method"] = "off"
        return out
    want_hsu = opts.congruence in ("hsu", "both") and q == 3
    want_oracle = opts.congruence in ("oracle", "both") or (opts.congruence == "hsu" and q != 3)
    hsu = oracle = None
    if want_hsu:
        hsu = hsu_congruence(*f_T_f_U(m))
    if want_oracle:
        oracle = congruence_oracle(m, opts.max_oracle_size, opts.base_dart)
        out["modulus"] = oracle.modulus
        out["image_size"] = oracle.image_size
        out["orbit_size"] = oracle.orbit_size
    else:
        out["modulus"] = str(oracle_modulus(q, n))
    if want_hsu and want_oracle:
        out["method"] = "both"
        if oracle.inconclusive:
            out["verdict"] = hsu
            out["agreement"] = "oracle inconclusive"
        elif oracle.verdict != hsu:
            raise ConsistencyError(f"permutation relations say {hsu}, finite-quotient oracle says {oracle.verdict}")
        else:
            out["verdict"] = hsu
            out["agreement"] = True
    elif want_hsu:
        out["method"] = "hsu"
        out["verdict"] = hsu
    else:
        out["method"] = "oracle"
        out["verdict"] = "inconclusive" if oracle.inconclusive else oracle.verdict
    return out


def analyze(hfs: HeckeFareySymbol, options: Optional[AnalysisOptions] = None) -> AnalysisReport:
    opts = options or AnalysisOptions()
    m = build_map(hfs, opts.face_budget)
    inv = invariants(m)
    G = monodromy(m)
    order = G.order()
    C = G.centralizer_in_symmetric()
    aut = structure_summary(C)
    if hfs.q in (3, 4, 6):
        note = "Aut equals the centralizer of G_X in the symmetric group"
    else:
        note = "Aut equals the centralizer of G_X, isomorphic to N(X)/X in PSL(2,R)"
    return AnalysisReport(
        q=hfs.q,
        index=m.omega_size,
        map=m,
        invariants=inv,
        monodromy_order=order,
        core_index=order,
        normal=order == m.omega_size,
        aut=aut,
        normalizer_quotient_note=note,
        regular=C.order() == m.omega_size,
        quasi_regular=is_quasi_regular(m),
        level=inv.level,
        congruence=_congruence(m, opts),
        generators=side_pairing_generators(hfs),
    )


def report_json(report: AnalysisReport, emit_generators=False, emit_dessin=False) -> str:
    return json.dumps(report.as_dict(emit_generators, emit_dessin), sort_keys=True, indent=2)
