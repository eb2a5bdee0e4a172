"""Permutations and permutation groups with a deterministic Schreier-Sims chain.

Points are 0..n-1 internally and 1..n in cycle notation.  Composition is
functional, right to left: ``(p * q)(x) == p(q(x))``.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

__all__ = [
    "Permutation",
    "PermGroup",
    "parse_cycles",
    "left_to_right",
    "structure_summary",
    "StructureSummary",
    "canonical_relabel",
    "are_conjugate_tuples",
    "brute_force_closure",
]


class Permutation:
    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        self.images = tuple(images)
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, cycles, n: int) -> "Permutation":
        """Build from 0-based cycles."""
        img = list(range(n))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                img[x] = cyc[(i + 1) % len(cyc)]
        if sorted(img) != list(range(n)):
            raise ValueError("cycles do not define a permutation")
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        a = self.images
        return Permutation(a[y] for y in other.images)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, y in enumerate(self.images):
            inv[y] = i
        return Permutation(inv)

    def __invert__(self):
        return self.inverse()

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        out = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def is_identity(self) -> bool:
        return all(i == y for i, y in enumerate(self.images))

    def cycles(self, include_fixed: bool = True):
        seen = [False] * len(self.images)
        out = []
        for i in range(len(self.images)):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            if include_fixed or len(cyc) > 1:
                out.append(cyc)
        return out

    def cycle_type(self):
        return sorted(len(c) for c in self.cycles())

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.images else 1

    def fixed_points(self):
        return [i for i, y in enumerate(self.images) if i == y]

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def to_cycles_str(self, include_fixed: bool = True) -> str:
        cyc = self.cycles(include_fixed)
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in cyc)

    def __str__(self):
        return self.to_cycles_str()

    def __repr__(self):
        return f"Permutation({self.to_cycles_str(False)}, n={self.degree})"


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: Optional[int] = None, labels: Optional[dict] = None) -> Permutation:
    """Parse 1-based cycle notation such as ``(1,2)(3)``.

    ``labels`` maps arbitrary tokens to 0-based points, for fixtures that use
    names like ``1b`` for a barred dart.
    """
    stripped = re.sub(r"\s+", "", text)
    if _CYCLE.sub("", stripped):
        raise ValueError(f"bad cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE.findall(stripped):
        if not body:
            continue
        toks = body.split(",")
        if labels is not None:
            cycles.append([labels[t] for t in toks])
        else:
            cycles.append([int(t) - 1 for t in toks])
    if n is None:
        n = max((x for c in cycles for x in c), default=-1) + 1
    return Permutation.from_cycles(cycles, n)


def left_to_right(*perms: Permutation) -> Permutation:
    """Product of perms applied first to last (the word order of a right action)."""
    out = perms[0]
    for p in perms[1:]:
        out = p * out
    return out


# ---------------------------------------------------------------------------
# stabilizer chain


class _Level:
    __slots__ = ("base_point", "gens", "transversal", "inverses", "points", "checked")

    def __init__(self, base_point, gens):
        self.base_point = base_point
        self.gens = gens
        self.transversal = None  # point -> coset representative u with u(base) = point
        self.inverses = None
        self.points = None
        self.checked = set()  # (point, generator index) pairs whose Schreier element sifts

    def compute_orbit(self, n):
        """Grow the orbit under the current generators, keeping existing representatives."""
        if self.transversal is None:
            ident = Permutation.identity(n)
            self.transversal = {self.base_point: ident}
            self.inverses = {self.base_point: ident}
            self.points = [self.base_point]
        trans, pts = self.transversal, self.points
        k = 0
        while k < len(pts):
            x = pts[k]
            ux = trans[x]
            for g in self.gens:
                y = g(x)
                if y not in trans:
                    u = g * ux
                    trans[y] = u
                    self.inverses[y] = u.inverse()
                    pts.append(y)
            k += 1


class PermGroup:
    """Group generated by permutations of 0..n-1, with a lazily built BSGS."""

    def __init__(self, generators: Iterable[Permutation], degree: Optional[int] = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group with no generators")
            degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("generators of different degrees")
        self.degree = degree
        self.generators = [g for g in gens if not g.is_identity()]
        self._levels = None

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    # -- Schreier-Sims ------------------------------------------------------

    def _sift(self, g, start=0):
        levels = self._levels
        for i in range(start, len(levels)):
            lev = levels[i]
            x = g(lev.base_point)
            if x not in lev.inverses:
                return g, i
            g = lev.inverses[x] * g
        return g, len(levels)

    def _build(self, base_prefix=()):
        n = self.degree
        base = list(base_prefix)
        for g in self.generators:
            if all(g(b) == b for b in base):
                base.append(next(i for i in range(n) if g(i) != i))
        levels = []
        for i, b in enumerate(base):
            gens = [g for g in self.generators if all(g(c) == c for c in base[:i])]
            levels.append(_Level(b, gens))
        for lev in levels:
            lev.compute_orbit(n)
        self._levels = levels

        i = len(levels) - 1
        while i >= 0:
            lev = levels[i]
            restart = False
            k = 0
            while k < len(lev.points) and not restart:
                x = lev.points[k]
                ux = lev.transversal[x]
                for si, s in enumerate(lev.gens):
                    if (x, si) in lev.checked:
                        continue
                    sx = s(x)
                    h = lev.inverses[sx] * s * ux
                    if not h.is_identity():
                        res, j = self._sift(h, i + 1)
                        if not res.is_identity():
                            if j == len(levels):
                                moved = next(p for p in range(n) if res(p) != p)
                                levels.append(_Level(moved, []))
                            for t in range(i + 1, j + 1):
                                levels[t].gens.append(res)
                                levels[t].compute_orbit(n)
                            i = j
                            restart = True
                            break
                    lev.checked.add((x, si))
                k += 1
            if not restart:
                i -= 1

    def _chain(self, base_prefix=()):
        prefix = list(base_prefix)
        if self._levels is None or [lv.base_point for lv in self._levels[: len(prefix)]] != prefix:
            self._build(prefix)
        return self._levels

    @property
    def base(self):
        return [lv.base_point for lv in self._chain()]

    def order(self) -> int:
        return math.prod(len(lv.transversal) for lv in self._chain())

    def contains(self, g: Permutation) -> bool:
        self._chain()
        res, j = self._sift(g)
        return j == len(self._levels) and res.is_identity()

    __contains__ = contains

    # -- orbits and stabilizers --------------------------------------------

    def orbit(self, point: int) -> set:
        seen = {point}
        queue = deque([point])
        while queue:
            x = queue.popleft()
            for g in self.generators:
                y = g(x)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree if self.degree else True

    def stabilizer_generators(self, point: int):
        """Generators of the point stabilizer (strong generators fixing point)."""
        levels = self._chain((point,))
        if len(levels) < 2:
            return []
        return list(levels[1].gens)

    def stabilizer(self, point: int) -> "PermGroup":
        return PermGroup(self.stabilizer_generators(point), self.degree)

    def centralizer_in_symmetric(self) -> "PermGroup":
        """Centralizer of a transitive group in the full symmetric group.

        Every point fixed by the stabilizer G_d of d = 0 gives one centralizing
        permutation, so the result has exactly that many elements.
        """
        n = self.degree
        if not self.is_transitive():
            raise ValueError("centralizer_in_symmetric needs a transitive group")
        stab = self.stabilizer_generators(0)
        fixed = [w for w in range(n) if all(h(w) == w for h in stab)]
        elements = [self._centralizing_perm(w) for w in fixed]
        return PermGroup(elements, n)

    def _centralizing_perm(self, omega: int) -> Permutation:
        n = self.degree
        image = [None] * n
        image[0] = omega
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for g in self.generators:
                y = g(x)
                if image[y] is None:
                    image[y] = g(image[x])
                    queue.append(y)
        return Permutation(image)

    def elements(self, limit: Optional[int] = None):
        return brute_force_closure(self.generators, self.degree, limit)

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(a * b == b * a for i, a in enumerate(gs) for b in gs[i + 1:])


def brute_force_closure(gens, degree, limit=None):
    """All elements of <gens> by breadth-first closure; None if over limit."""
    ident = Permutation.identity(degree)
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g * x
            if y not in seen:
                seen.add(y)
                if limit is not None and len(seen) > limit:
                    return None
                queue.append(y)
    return seen


@dataclass(frozen=True)
class StructureSummary:
    order: int
    exponent: Optional[int]
    abelian: Optional[bool]
    cyclic: Optional[bool]

    def as_dict(self):
        return {"order": self.order, "exponent": self.exponent,
                "abelian": self.abelian, "cyclic": self.cyclic}


def structure_summary(G: PermGroup, bound: int = 10**6) -> StructureSummary:
    order = G.order()
    if order > bound:
        return StructureSummary(order, None, None, None)
    abelian = G.is_abelian()
    if abelian:
        exponent = math.lcm(1, *(g.order() for g in G.generators))
    else:
        exponent = math.lcm(1, *(g.order() for g in G.elements()))
    return StructureSummary(order, exponent, abelian, abelian and exponent == order)


# ---------------------------------------------------------------------------
# simultaneous relabeling


def _relabel_from(perms, start):
    n = perms[0].degree
    label = {start: 0}
    order = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for p in perms:
            y = p(x)
            if y not in label:
                label[y] = len(order)
                order.append(y)
                queue.append(y)
    if len(order) != n:
        return None
    return tuple(Permutation(label[p(order[i])] for i in range(n)) for p in perms)


def canonical_relabel(perms):
    """Least breadth-first relabeling of a transitive tuple over all base points."""
    perms = tuple(perms)
    best = None
    for start in range(perms[0].degree):
        cand = _relabel_from(perms, start)
        if cand is None:
            raise ValueError("canonical_relabel needs a transitive tuple")
        key = tuple(p.images for p in cand)
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def are_conjugate_tuples(perms_a, perms_b) -> bool:
    """Whether two transitive tuples agree after one simultaneous relabeling."""
    perms_a, perms_b = tuple(perms_a), tuple(perms_b)
    if len(perms_a) != len(perms_b) or perms_a[0].degree != perms_b[0].degree:
        return False
    target = _relabel_from(perms_a, 0)
    if target is None:
        return False
    return any(_relabel_from(perms_b, s) == target for s in range(perms_b[0].degree))
