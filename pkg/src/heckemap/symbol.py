"""Hecke-Farey symbols: data model, text/JSON formats, validation, side pairings.

A symbol is the cusp list ``-inf, x_0, ..., x_n, inf`` with one label per
adjacency.  Cusps keep the numerator/denominator pair exactly as written,
since reducedness in Z[lambda] is only meaningful through adjacency
determinants.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional

from .ring import RationalRingElement, RingElement, RingError, get_ring, parse_ring_element

__all__ = [
    "SymbolError",
    "HFSSyntaxError",
    "InvalidErAdjacency",
    "Cusp",
    "PairingLabel",
    "HeckeFareySymbol",
    "PSL2Element",
    "QGon",
    "Violation",
    "cross",
    "cusp_less",
    "normalize_side",
    "qgon_next",
    "qgon_complete",
    "reconstruct_er_polygon",
    "pairing_circle",
    "pairing_bullet",
    "pairing_free",
    "pairing_er",
    "side_pairing_generators",
    "parse_hfs",
    "serialize_hfs",
    "hfs_from_json",
    "hfs_to_json",
    "structural_violations",
    "validate_hfs",
]


class SymbolError(ValueError):
    """A symbol is structurally unusable."""


class HFSSyntaxError(SymbolError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class InvalidErAdjacency(SymbolError):
    pass


# ---------------------------------------------------------------------------
# cusps


class Cusp:
    """Projective point num/den over Z[lambda_q]; -inf is (-1, 0), inf is (1, 0)."""

    __slots__ = ("num", "den", "_key")

    def __init__(self, num: RingElement, den: RingElement):
        if num.ring is not den.ring:
            raise RingError("mixed q in cusp")
        if not num and not den:
            raise SymbolError("cusp 0/0")
        self.num = num
        self.den = den
        self._key = None

    @classmethod
    def of(cls, q, num, den=1):
        R = get_ring(q)
        return cls(R(num), R(den))

    @property
    def ring(self):
        return self.num.ring

    def key(self):
        """Canonical value: 'inf' or the element num/den of Q(lambda)."""
        if self._key is None:
            self._key = "inf" if not self.den else RationalRingElement.quotient(self.num, self.den)
        return self._key

    def same_point(self, other: "Cusp") -> bool:
        return self.key() == other.key()

    def is_infinite(self) -> bool:
        return not self.den

    def __neg__(self):
        return Cusp(-self.num, -self.den)

    def scaled(self, s):
        return Cusp(self.num * s, self.den * s)

    def __eq__(self, other):
        # representation equality; use same_point for projective comparison
        return isinstance(other, Cusp) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def text(self) -> str:
        if not self.den:
            return "-inf" if self.num.sign() < 0 else "inf"
        return f"{self.num}/{self.den}"

    def __repr__(self):
        return f"Cusp({self.text()})"

    def __float__(self):
        if not self.den:
            return float("inf") if self.num.sign() > 0 else float("-inf")
        return float(self.num) / float(self.den)


def cross(u: Cusp, w: Cusp) -> RingElement:
    """For u = a/b and w = c/d, return cb - ad."""
    return w.num * u.den - u.num * w.den


def cusp_less(u: Cusp, w: Cusp) -> bool:
    """Real order u < w for finite cusps; -inf/inf by the sign of the numerator."""
    if u.is_infinite():
        return u.num.sign() < 0 and not (w.is_infinite() and w.num.sign() < 0)
    if w.is_infinite():
        return w.num.sign() > 0
    return cross(u, w).sign() * u.den.sign() * w.den.sign() > 0


def normalize_side(u: Cusp, v: Cusp):
    """Return (u, v') with v' = +-v and cross(u, v') = 1."""
    c = cross(u, v)
    if c == 1:
        return u, v
    if c == -1:
        return u, -v
    raise SymbolError(f"adjacency ({u.text()}, {v.text()}) has determinant {c}, not +-1")


# ---------------------------------------------------------------------------
# labels and symbols


@dataclass(frozen=True)
class PairingLabel:
    kind: str  # "circle" | "bullet" | "free" | "er"
    value: Optional[int] = None

    @classmethod
    def parse(cls, tok: str) -> "PairingLabel":
        if tok == "o":
            return cls("circle")
        if tok == "b":
            return cls("bullet")
        if re.fullmatch(r"\d+", tok):
            return cls("free", int(tok))
        m = re.fullmatch(r"e(\d+)", tok)
        if m:
            return cls("er", int(m.group(1)))
        raise ValueError(f"unknown label {tok!r}")

    def text(self) -> str:
        return {"circle": "o", "bullet": "b"}.get(self.kind) or (
            str(self.value) if self.kind == "free" else f"e{self.value}")

    def __str__(self):
        return self.text()


@dataclass(frozen=True)
class HeckeFareySymbol:
    q: int
    cusps: tuple
    labels: tuple

    @property
    def ring(self):
        return get_ring(self.q)

    @property
    def n_adjacencies(self):
        return len(self.labels)

    def adjacency(self, i):
        """Cusp pair (x_{i-1}, x_i) carrying labels[i]."""
        return self.cusps[i], self.cusps[i + 1]

    def free_values(self):
        seen = []
        for lab in self.labels:
            if lab.kind == "free" and lab.value not in seen:
                seen.append(lab.value)
        return seen

    def __str__(self):
        return serialize_hfs(self)


# ---------------------------------------------------------------------------
# PSL(2) over Z[lambda]


class PSL2Element:
    """2x2 matrix of determinant 1 up to sign; first nonzero entry positive."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, check=True):
        R = next(x.ring for x in (a, b, c, d) if isinstance(x, RingElement))
        a, b, c, d = (R(x) for x in (a, b, c, d))
        if check and a * d - b * c != 1:
            raise SymbolError("matrix does not have determinant 1")
        first = next(x for x in (a, b, c, d) if x)
        if first.sign() < 0:
            a, b, c, d = -a, -b, -c, -d
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def from_strings(cls, q, rows):
        R = get_ring(q)
        (a, b), (c, d) = rows
        return cls(*(parse_ring_element(str(x), R) for x in (a, b, c, d)))

    @classmethod
    def identity(cls, q):
        R = get_ring(q)
        return cls(R.one, R.zero, R.zero, R.one)

    @classmethod
    def S(cls, q):
        R = get_ring(q)
        return cls(R.zero, R.one, -R.one, R.zero)

    @classmethod
    def T(cls, q):
        R = get_ring(q)
        return cls(R.one, R.lam, R.zero, R.one)

    @classmethod
    def R(cls, q):
        """(0 1; -1 lambda) = S T^-1, elliptic of order q."""
        R = get_ring(q)
        return cls(R.zero, R.one, -R.one, R.lam)

    @classmethod
    def from_columns(cls, first: Cusp, second: Cusp):
        return cls(first.num, second.num, first.den, second.den)

    @property
    def q(self):
        return self.a.q

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, o):
        return PSL2Element(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                           self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d, check=False)

    def inverse(self):
        return PSL2Element(self.d, -self.b, -self.c, self.a, check=False)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = PSL2Element.identity(self.q)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, PSL2Element) and self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def is_identity(self):
        return self.b == 0 and self.c == 0 and self.a == 1

    def trace(self):
        return self.a + self.d

    def order(self, limit: int) -> Optional[int]:
        g = self
        for k in range(1, limit + 1):
            if g.is_identity():
                return k
            g = g * self
        return None

    def act(self, x: Cusp) -> Cusp:
        return Cusp(self.a * x.num + self.b * x.den, self.c * x.num + self.d * x.den)

    def rows_text(self):
        return [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]

    def __repr__(self):
        return f"PSL2Element(({self.a} {self.b}; {self.c} {self.d}))"


# ---------------------------------------------------------------------------
# q-gons


@dataclass(frozen=True)
class QGon:
    """Cusps c_1..c_{q+1} in counterclockwise order with consecutive cross 1."""

    q: int
    cusps: tuple

    def sides(self):
        return [(self.cusps[i], self.cusps[i + 1]) for i in range(self.q)]

    def index_of(self, x: Cusp) -> Optional[int]:
        for i, c in enumerate(self.cusps[: self.q]):
            if c.same_point(x):
                return i
        return None


def qgon_next(c_prev: Cusp, c_curr: Cusp) -> Cusp:
    if cross(c_prev, c_curr) != 1:
        raise SymbolError("qgon_next needs cross(c_prev, c_curr) = 1")
    lam = c_curr.ring.lam
    return Cusp(lam * c_curr.num - c_prev.num, lam * c_curr.den - c_prev.den)


def qgon_complete(c1: Cusp, c2: Cusp, q: Optional[int] = None) -> QGon:
    q = q or c1.ring.q
    cs = [c1, c2]
    for _ in range(q - 1):
        cs.append(qgon_next(cs[-2], cs[-1]))
    if not cs[-1].same_point(c1):
        raise RuntimeError("q-gon recurrence failed to close")  # pragma: no cover
    return QGon(q, tuple(cs))


def reconstruct_er_polygon(x_left: Cusp, x_right: Cusp, r: int, q: Optional[int] = None) -> QGon:
    """The q-gon with x_left, y_2, ..., y_{q-q/r}, x_right consecutive.

    Returned with x_left first; x_right sits at index q - q/r.
    """
    R = x_left.ring
    q = q or R.q
    if r <= 1 or r >= q or q % r:
        raise InvalidErAdjacency(f"e{r} is not a proper divisor label for q={q}")
    det = cross(x_left, x_right)
    if det == 1:
        raise InvalidErAdjacency("e_r adjacency with determinant 1")
    if not det:
        raise InvalidErAdjacency("e_r adjacency between equal cusps")
    s = q - q // r
    # v_{k+1} = A^k e1 with A = (lambda 1; -1 0); c_{1+s} = alpha c_1 + beta c_0
    lam = R.lam
    prev, cur = (R.zero, R.one), (R.one, R.zero)  # v_0 = A^-1 e1 = (0, 1)
    for _ in range(s):
        prev, cur = cur, (lam * cur[0] - prev[0], lam * cur[1] - prev[1])
    alpha, beta = cur
    if not beta:
        raise InvalidErAdjacency("degenerate e_r step count")
    nu = (-beta).divide_exact(det)
    if nu is None:
        raise InvalidErAdjacency("no integral q-gon through the e_r adjacency")
    num0 = (nu * x_right.num - alpha * x_left.num).divide_exact(beta)
    den0 = (nu * x_right.den - alpha * x_left.den).divide_exact(beta)
    if num0 is None or den0 is None:
        raise InvalidErAdjacency("no integral q-gon through the e_r adjacency")
    c0 = Cusp(num0, den0)
    poly = qgon_complete(c0, x_left, q)
    cs = poly.cusps[1:] + (qgon_next(poly.cusps[-2], poly.cusps[-1]),)
    P = QGon(q, cs)
    if not P.cusps[s].same_point(x_right):
        raise InvalidErAdjacency("reconstructed q-gon misses x_right")  # pragma: no cover
    # interior entries must lie strictly between the two in real order
    chain = [x_left] + list(P.cusps[1:s]) + [x_right]
    for u, w in zip(chain, chain[1:]):
        if not cusp_less(_finite_or_pos(u, first=u is x_left), _finite_or_pos(w)):
            raise InvalidErAdjacency("interior q-gon entries are not between the e_r cusps")
    return P


def _finite_or_pos(c: Cusp, first=False):
    # inside an e_r chain an infinite cusp is +inf unless it is the left end
    if c.is_infinite():
        R = c.ring
        return Cusp(R(-1 if first else 1), R.zero)
    return c


# ---------------------------------------------------------------------------
# side pairings


def _conj_matrix(x: Cusp, y: Cusp) -> PSL2Element:
    """(c a; d b) for the adjacency (a/b, c/d) with cb - ad = 1."""
    x, y = normalize_side(x, y)
    return PSL2Element(y.num, x.num, y.den, x.den)


def pairing_circle(adjacency) -> PSL2Element:
    M = _conj_matrix(*adjacency)
    return M * PSL2Element.S(M.q) * M.inverse()


def pairing_bullet(adjacency) -> PSL2Element:
    M = _conj_matrix(*adjacency)
    return M * PSL2Element.R(M.q) * M.inverse()


def pairing_free(adj1, adj2) -> PSL2Element:
    """(u -x; v -y)(c a; d b)^-1, carrying (a/b, c/d) onto (u/v, x/y)."""
    M = _conj_matrix(*adj1)
    u, x = normalize_side(*adj2)
    N = PSL2Element(u.num, -x.num, u.den, -x.den)
    return N * M.inverse()


def pairing_er(adjacency, P: QGon, r: int) -> PSL2Element:
    q = P.q
    C = PSL2Element.from_columns(-P.cusps[0], P.cusps[1])
    return C * PSL2Element.R(q) ** (q // r) * C.inverse()


def _adjacent(hfs, i, j):
    return abs(i - j) == 1


def side_pairing_generators(hfs: HeckeFareySymbol):
    """One generator per circle, bullet, e_r label and per free pair, in symbol order.

    Free pairs map the first side onto the second, except for two sides that
    share a cusp, which are emitted in the opposite direction.
    """
    out = []
    done = set()
    for i, lab in enumerate(hfs.labels):
        adj = hfs.adjacency(i)
        if lab.kind == "circle":
            out.append((lab, pairing_circle(adj)))
        elif lab.kind == "bullet":
            out.append((lab, pairing_bullet(adj)))
        elif lab.kind == "er":
            P = reconstruct_er_polygon(adj[0], adj[1], lab.value, hfs.q)
            out.append((lab, pairing_er(adj, P, lab.value)))
        elif lab.kind == "free":
            if lab.value in done:
                continue
            j = next(k for k in range(i + 1, len(hfs.labels)) if hfs.labels[k] == lab)
            done.add(lab.value)
            g = pairing_free(adj, hfs.adjacency(j))
            if _adjacent(hfs, i, j):
                g = g.inverse()
            out.append((lab, g))
    return out


# ---------------------------------------------------------------------------
# text and JSON formats


def _parse_cusp(tok: str, q: int, line: int, col: int) -> Cusp:
    R = get_ring(q)
    t = re.sub(r"\s+", "", tok)
    try:
        if t == "-inf":
            return Cusp(R(-1), R.zero)
        if t == "inf":
            return Cusp(R(1), R.zero)
        if "/" in t:
            num, den = t.split("/", 1)
            return Cusp(parse_ring_element(num, R), parse_ring_element(den, R))
        return Cusp(parse_ring_element(t, R), R.one)
    except (RingError, SymbolError) as exc:
        raise HFSSyntaxError(f"bad cusp {tok.strip()!r}: {exc}", line, col) from None


def _split_items(body: str, line: int, offset: int):
    items = []
    col = offset
    for part in body.split(","):
        stripped = part.strip()
        lead = len(part) - len(part.lstrip())
        items.append((stripped, col + lead))
        col += len(part) + 1
    return items


def _build(q, cusps, labels, where=(None, None)) -> HeckeFareySymbol:
    if len(labels) != len(cusps) - 1:
        raise HFSSyntaxError(f"{len(labels)} labels for {len(cusps)} cusps (need {len(cusps) - 1})", *where)
    if not any(c.den and not c.num for c in cusps):
        raise HFSSyntaxError("no cusp equals 0", *where)
    return HeckeFareySymbol(q, tuple(cusps), tuple(labels))


_ONE_LINE = re.compile(r"\s*/\s*(?=(?:cusps|labels)\s*:)")


def parse_hfs(text: str) -> HeckeFareySymbol:
    """Parse the three-line text format (a single line joined by `` / `` also works)."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) == 1:
        lines = _ONE_LINE.split(lines[0])
    if len(lines) != 3:
        raise HFSSyntaxError(f"expected 3 lines (q, cusps, labels), found {len(lines)}", 1, 1)

    m = re.fullmatch(r"\s*q\s*=\s*(\d+)\s*", lines[0])
    if not m:
        raise HFSSyntaxError("first line must be q=<int>", 1, 1)
    q = int(m.group(1))
    if q < 3:
        raise HFSSyntaxError(f"q must be >= 3, got {q}", 1, m.start(1) + 1)

    m = re.fullmatch(r"(\s*cusps\s*:)(.*)", lines[1])
    if not m:
        raise HFSSyntaxError("second line must start with 'cusps:'", 2, 1)
    items = _split_items(m.group(2), 2, len(m.group(1)) + 1)
    if items[0][0] != "-inf":
        raise HFSSyntaxError("cusp list must start with -inf", 2, items[0][1])
    if items[-1][0] != "inf":
        raise HFSSyntaxError("cusp list must end with inf", 2, items[-1][1])
    cusps = [_parse_cusp(tok, q, 2, col) for tok, col in items]

    m = re.fullmatch(r"(\s*labels\s*:)(.*)", lines[2])
    if not m:
        raise HFSSyntaxError("third line must start with 'labels:'", 3, 1)
    labels = []
    for tok, col in _split_items(m.group(2), 3, len(m.group(1)) + 1):
        try:
            labels.append(PairingLabel.parse(tok))
        except ValueError as exc:
            raise HFSSyntaxError(str(exc), 3, col) from None
    return _build(q, cusps, labels, (3, 1))


def serialize_hfs(hfs: HeckeFareySymbol) -> str:
    return (f"q={hfs.q}\n"
            f"cusps: {', '.join(c.text() for c in hfs.cusps)}\n"
            f"labels: {', '.join(l.text() for l in hfs.labels)}\n")


def hfs_to_json(hfs: HeckeFareySymbol) -> dict:
    return {
        "q": hfs.q,
        "cusps": [[str(c.num), str(c.den)] for c in hfs.cusps],
        "labels": [l.text() for l in hfs.labels],
    }


def hfs_from_json(data) -> HeckeFareySymbol:
    if isinstance(data, str):
        data = json.loads(data)
    q = int(data["q"])
    if q < 3:
        raise HFSSyntaxError(f"q must be >= 3, got {q}")
    R = get_ring(q)
    try:
        cusps = [Cusp(parse_ring_element(str(n), R), parse_ring_element(str(d), R)) for n, d in data["cusps"]]
        labels = [PairingLabel.parse(str(t)) for t in data["labels"]]
    except (RingError, ValueError) as exc:
        raise HFSSyntaxError(str(exc)) from None
    return _build(q, cusps, labels)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    code: str
    detail: object = None

    def __str__(self):
        return self.code if self.detail is None else f"{self.code}({self.detail})"


def structural_violations(hfs: HeckeFareySymbol):
    out = []
    q = hfs.q
    cs = hfs.cusps
    if len(hfs.labels) != len(cs) - 1:
        out.append(Violation("LabelCountMismatch", len(hfs.labels)))
        return out
    if not any(c.den and not c.num for c in cs):
        out.append(Violation("NoZeroCusp"))
    if not (cs[0].is_infinite() and cs[0].num.sign() < 0):
        out.append(Violation("BadFirstCusp"))
    if not (cs[-1].is_infinite() and cs[-1].num.sign() > 0):
        out.append(Violation("BadLastCusp"))
    for i, c in enumerate(cs[1:-1], start=1):
        if c.is_infinite():
            out.append(Violation("InteriorInfinity", i))
    if not out:
        for i in range(len(cs) - 1):
            if not cusp_less(cs[i], cs[i + 1]):
                out.append(Violation("NotIncreasing", i))

    counts = {}
    for lab in hfs.labels:
        if lab.kind == "free":
            counts[lab.value] = counts.get(lab.value, 0) + 1
    for v, k in sorted(counts.items()):
        if k != 2:
            out.append(Violation("UnpairedFreeLabel", v))

    for i, lab in enumerate(hfs.labels):
        x, y = hfs.adjacency(i)
        if lab.kind == "er":
            if lab.value <= 1 or lab.value >= q:
                out.append(Violation("ErOutOfRange", lab.value))
                continue
            if q % lab.value:
                out.append(Violation("ErNotDivisor", lab.value))
                continue
            if cross(x, y) == 1:
                out.append(Violation("ErDeterminantOne", i))
        elif cross(x, y) != 1:
            out.append(Violation("AdjacencyDeterminant", i))
    return out


def validate_hfs(hfs: HeckeFareySymbol, face_budget: Optional[int] = None):
    """List of violations; empty iff the symbol is usable end to end."""
    out = structural_violations(hfs)
    if out:
        return out
    from .maps import decompose  # local import: maps depends on this module

    try:
        decompose(hfs, face_budget=face_budget)
    except SymbolError as exc:
        code = "InvalidErAdjacency" if isinstance(exc, InvalidErAdjacency) else "DecompositionFailed"
        out.append(Violation(code, str(exc)))
    return out
