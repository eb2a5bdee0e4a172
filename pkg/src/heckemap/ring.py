"""Exact arithmetic in Z[lambda_q], lambda_q = 2cos(pi/q), and its finite quotients.

Elements are integer coefficient vectors reduced modulo the minimal polynomial
of lambda_q.  Signs of real embeddings are decided with rational interval
bisection, so nothing here ever touches a float except to seed a bracket.
"""

from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "RingError",
    "minimal_polynomial",
    "HeckeRing",
    "RingElement",
    "RationalRingElement",
    "QuotientRing",
    "QuotientElement",
    "get_ring",
]


class RingError(ValueError):
    """Domain error in ring arithmetic (mixed q, division by zero, bad q)."""


# ---------------------------------------------------------------------------
# integer polynomials (tuples, lowest degree first)


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _poly_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_divexact(a, b):
    """Quotient of a by monic b; raises if the remainder is nonzero."""
    a = list(a)
    db = len(b) - 1
    if b[-1] != 1:
        raise RingError("divisor must be monic")
    q = [0] * max(len(a) - db, 1)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            q[k - db] = c
            for j in range(db + 1):
                a[k - db + j] -= c * b[j]
    if any(a):
        raise RingError("inexact polynomial division")
    return _trim(q)


@lru_cache(maxsize=None)
def _cyclotomic(n):
    p = (-1,) + (0,) * (n - 1) + (1,)
    for d in range(1, n):
        if n % d == 0:
            p = _poly_divexact(p, _cyclotomic(d))
    return p


def minimal_polynomial(q: int) -> tuple:
    """Monic minimal polynomial of 2cos(pi/q) over Z, coefficients low to high.

    2cos(pi/q) = z + 1/z for z a primitive 2q-th root of unity, so the result
    is the cyclotomic polynomial Phi_2q rewritten in x = z + 1/z.
    """
    if q < 3:
        raise RingError(f"q must be >= 3, got {q}")
    phi = _cyclotomic(2 * q)
    m = (len(phi) - 1) // 2
    # z^-m Phi(z) = c_m + sum_{k>=1} c_{m+k} (z^k + z^-k);  z^k + z^-k = D_k(x)
    dickson = [(2,), (0, 1)]
    for _ in range(2, m + 1):
        a, b = dickson[-1], dickson[-2]
        nxt = [0] * (len(a) + 1)
        for i, c in enumerate(a):
            nxt[i + 1] += c
        for i, c in enumerate(b):
            nxt[i] -= c
        dickson.append(_trim(nxt))
    out = [0] * (m + 1)
    out[0] += phi[m]
    for k in range(1, m + 1):
        for i, c in enumerate(dickson[k]):
            out[i] += phi[m + k] * c
    return _trim(out)


# ---------------------------------------------------------------------------
# the ring Z[lambda_q]


class HeckeRing:
    """Context object for Z[lambda_q]: minimal polynomial, degree, sign oracle."""

    def __init__(self, q: int):
        self.q = q
        self.minpoly = minimal_polynomial(q)
        self.degree = len(self.minpoly) - 1
        # lambda in [lo/2^k, (lo+1)/2^k]
        self._bracket = None

    def __repr__(self):
        return f"HeckeRing(q={self.q})"

    def __reduce__(self):
        return (get_ring, (self.q,))

    # construction helpers
    def __call__(self, value) -> "RingElement":
        if isinstance(value, RingElement):
            if value.ring is not self:
                raise RingError("mixed q")
            return value
        if isinstance(value, int):
            return RingElement(self, (value,) + (0,) * (self.degree - 1))
        if isinstance(value, str):
            return parse_ring_element(value, self)
        return RingElement(self, self._reduce(tuple(value)))

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def lam(self):
        if self.degree == 1:
            # q = 3: lambda = 1
            return self(-self.minpoly[0])
        return RingElement(self, (0, 1) + (0,) * (self.degree - 2))

    def _reduce(self, coeffs):
        d = self.degree
        c = list(coeffs) + [0] * max(0, d - len(coeffs))
        m = self.minpoly
        for k in range(len(c) - 1, d - 1, -1):
            t = c[k]
            if t:
                c[k] = 0
                for j in range(d):
                    c[k - d + j] -= t * m[j]
        return tuple(c[:d])

    def mul_vec(self, a, b):
        return self._reduce(_poly_mul(a, b) or (0,))

    # -- real sign ---------------------------------------------------------

    def _eval_minpoly_scaled(self, num, k):
        # sign of f(num / 2^k) via homogeneous integer evaluation
        m = self.minpoly
        D = len(m) - 1
        s = sum(c * num ** i * (1 << (k * (D - i))) for i, c in enumerate(m))
        return (s > 0) - (s < 0)

    def _initial_bracket(self):
        k = 40
        approx = 2.0 * math.cos(math.pi / self.q)
        centre = int(round(approx * (1 << k)))
        lo, hi = centre - 8, centre + 8
        if not (self._eval_minpoly_scaled(lo, k) < 0 < self._eval_minpoly_scaled(hi, k)):
            raise RingError(f"could not bracket lambda_{self.q}")  # pragma: no cover
        # shrink to a unit bracket by bisection
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._eval_minpoly_scaled(mid, k) < 0:
                lo = mid
            else:
                hi = mid
        return lo, k

    def lambda_interval(self, bits: int):
        """Return (lo, hi) Fractions bracketing lambda_q with width <= 2^-bits."""
        if self._bracket is None:
            self._bracket = self._initial_bracket()
        lo, k = self._bracket
        while k < bits:
            lo, k = 2 * lo, k + 1
            if self._eval_minpoly_scaled(lo + 1, k) < 0:
                lo += 1
            self._bracket = (lo, k)
        if k > bits:
            shift = k - bits
            return Fraction(lo >> shift, 1 << bits), Fraction((lo >> shift) + 1, 1 << bits)
        return Fraction(lo, 1 << k), Fraction(lo + 1, 1 << k)

    def sign(self, coeffs) -> int:
        if not any(coeffs):
            return 0
        if self.degree == 1:
            c = coeffs[0]
            return (c > 0) - (c < 0)
        bits = 24
        while True:
            lo, hi = self.lambda_interval(bits)
            low = high = Fraction(0)
            for i, c in enumerate(coeffs):
                if not c:
                    continue
                a, b = c * lo ** i, c * hi ** i
                low += min(a, b)
                high += max(a, b)
            if low > 0:
                return 1
            if high < 0:
                return -1
            bits *= 2

    # -- rational linear algebra ------------------------------------------

    def mult_matrix(self, coeffs):
        """Columns are coeffs * lambda^j, j = 0..d-1."""
        cols = []
        basis = [0] * self.degree
        for j in range(self.degree):
            e = list(basis)
            e[j] = 1
            cols.append(self.mul_vec(coeffs, tuple(e)))
        return [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]

    def solve(self, b_coeffs, a_coeffs):
        """Rational x with b * x = a (as coefficient vectors)."""
        d = self.degree
        M = self.mult_matrix(b_coeffs)
        A = [[Fraction(v) for v in row] + [Fraction(a_coeffs[i])] for i, row in enumerate(M)]
        for col in range(d):
            piv = next(r for r in range(col, d) if A[r][col] != 0)
            A[col], A[piv] = A[piv], A[col]
            p = A[col][col]
            A[col] = [v / p for v in A[col]]
            for r in range(d):
                if r != col and A[r][col] != 0:
                    f = A[r][col]
                    A[r] = [x - f * y for x, y in zip(A[r], A[col])]
        return tuple(A[i][d] for i in range(d))


@lru_cache(maxsize=None)
def get_ring(q: int) -> HeckeRing:
    return HeckeRing(q)


class RingElement:
    """An element of Z[lambda_q] in canonical (reduced) form."""

    __slots__ = ("ring", "coeffs", "_hash")

    def __init__(self, ring: HeckeRing, coeffs: tuple):
        self.ring = ring
        self.coeffs = coeffs
        self._hash = None

    @property
    def q(self):
        return self.ring.q

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring is not self.ring:
                raise RingError(f"mixed q: {self.q} and {other.q}")
            return other
        if isinstance(other, int):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElement(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElement(self.ring, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElement(self.ring, self.ring.mul_vec(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise RingError("negative powers are not ring elements")
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring is other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.q, self.coeffs))
        return self._hash

    def __bool__(self):
        return any(self.coeffs)

    def is_integer(self):
        return not any(self.coeffs[1:])

    def sign(self) -> int:
        return self.ring.sign(self.coeffs)

    def __float__(self):
        lam = 2 * math.cos(math.pi / self.q)
        return float(sum(c * lam ** i for i, c in enumerate(self.coeffs)))

    def divide_exact(self, other):
        """Return c with other * c == self, or None if no such c in Z[lambda]."""
        other = self._coerce(other)
        if not other:
            raise RingError("division by zero")
        sol = self.ring.solve(other.coeffs, self.coeffs)
        if any(x.denominator != 1 for x in sol):
            return None
        return RingElement(self.ring, tuple(int(x) for x in sol))

    def to_rational(self):
        return RationalRingElement(self.ring, tuple(Fraction(c) for c in self.coeffs))

    def __str__(self):
        return format_ring_element(self)

    def __repr__(self):
        return f"RingElement(q={self.q}, {format_ring_element(self)!r})"


def sign_of(a: RingElement) -> int:
    return a.sign()


class RationalRingElement:
    """Element of Q(lambda_q); used as a canonical key for cusp values."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    @classmethod
    def quotient(cls, num: RingElement, den: RingElement):
        if not den:
            raise RingError("division by zero")
        return cls(num.ring, num.ring.solve(den.coeffs, num.coeffs))

    def __eq__(self, other):
        return (isinstance(other, RationalRingElement) and self.ring is other.ring
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RationalRingElement(q={self.ring.q}, {self.coeffs})"


# ---------------------------------------------------------------------------
# text syntax: integer polynomials in L


_TERM = re.compile(r"([+-]?)(\d*)\*?(L(?:\^(\d+))?)?")


def parse_ring_element(text: str, ring: HeckeRing) -> RingElement:
    s = re.sub(r"\s+", "", text)
    if not s:
        raise RingError("empty ring element")
    coeffs = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, digits, lpart, exp = m.groups()
        if m.end() == pos or (not digits and not lpart) or (not first and not sign):
            raise RingError(f"cannot parse ring element {text!r} at column {pos + 1}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        k = (int(exp) if exp else 1) if lpart else 0
        coeffs[k] = coeffs.get(k, 0) + c
        pos = m.end()
        first = False
    vec = [0] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        vec[k] += c
    # reduce powers of lambda as elements (L means lambda even when q = 3)
    out = ring.zero
    lam = ring.lam
    for k, c in enumerate(vec):
        if c:
            out = out + c * lam ** k
    return out


def format_ring_element(a: RingElement) -> str:
    terms = []
    for k in range(len(a.coeffs) - 1, -1, -1):
        c = a.coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else ("L" if k == 1 else f"L^{k}")
        mag = abs(c)
        body = str(mag) if (mono == "" or mag != 1) else ""
        body += mono
        if not terms:
            terms.append(("-" if c < 0 else "") + body)
        else:
            terms.append(("-" if c < 0 else "+") + body)
    return "".join(terms) or "0"


# ---------------------------------------------------------------------------
# quotient rings Z[lambda]/(g)


def _hnf_rows(rows):
    """Upper-triangular Hermite normal form of a full-rank square integer matrix."""
    A = [list(r) for r in rows]
    n = len(A)
    d = len(A[0])
    out = []
    for col in range(d):
        # gcd-combine all remaining rows on this column into a single pivot row
        while True:
            nz = [r for r in A if r[col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            for r in nz[1:]:
                f = r[col] // p[col]
                for j in range(d):
                    r[j] -= f * p[j]
        piv = next((r for r in A if r[col] != 0), None)
        if piv is None:
            raise RingError("ideal lattice is not full rank")
        A.remove(piv)
        if piv[col] < 0:
            piv = [-v for v in piv]
        out.append(piv)
    # reduce entries to the right of each pivot against later pivots
    for i in range(d - 1, -1, -1):
        for j in range(i + 1, d):
            f = out[i][j] // out[j][j]
            if f:
                out[i] = [a - f * b for a, b in zip(out[i], out[j])]
    assert len(out) == n
    return [tuple(r) for r in out]


class QuotientRing:
    """Finite ring Z[lambda_q] / (generator)."""

    def __init__(self, ring: HeckeRing, generator: RingElement):
        generator = ring(generator)
        if not generator:
            raise RingError("zero ideal generator")
        self.ring = ring
        self.q = ring.q
        self.generator = generator
        lam = ring.lam
        rows = [(generator * lam ** j).coeffs for j in range(ring.degree)]
        self.basis = _hnf_rows(rows)
        self.size = math.prod(self.basis[j][j] for j in range(ring.degree))

    def __repr__(self):
        return f"QuotientRing(q={self.q}, ({self.generator}), size={self.size})"

    def reduce_vec(self, v):
        v = list(v)
        for j, row in enumerate(self.basis):
            f = v[j] // row[j]
            if f:
                for k in range(j, len(v)):
                    v[k] -= f * row[k]
        return tuple(v)

    def __call__(self, x) -> "QuotientElement":
        if isinstance(x, QuotientElement):
            return x
        x = self.ring(x)
        return QuotientElement(self, self.reduce_vec(x.coeffs))

    def add(self, a, b):
        return self.reduce_vec([x + y for x, y in zip(a, b)])

    def neg(self, a):
        return self.reduce_vec([-x for x in a])

    def mul(self, a, b):
        return self.reduce_vec(self.ring.mul_vec(a, b))

    def residues(self):
        ranges = [range(self.basis[j][j]) for j in range(self.ring.degree)]
        for v in itertools.product(*ranges):
            yield QuotientElement(self, tuple(v))

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)


class QuotientElement:
    __slots__ = ("parent", "residue")

    def __init__(self, parent: QuotientRing, residue: tuple):
        self.parent = parent
        self.residue = residue

    def _other(self, other):
        if isinstance(other, QuotientElement):
            return other.residue
        return self.parent(other).residue

    def __add__(self, other):
        return QuotientElement(self.parent, self.parent.add(self.residue, self._other(other)))

    __radd__ = __add__

    def __neg__(self):
        return QuotientElement(self.parent, self.parent.neg(self.residue))

    def __sub__(self, other):
        return self + (-self.parent(other) if not isinstance(other, QuotientElement) else -other)

    def __mul__(self, other):
        return QuotientElement(self.parent, self.parent.mul(self.residue, self._other(other)))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QuotientElement):
            try:
                other = self.parent(other)
            except (RingError, TypeError):
                return NotImplemented
        return self.parent is other.parent and self.residue == other.residue

    def __hash__(self):
        return hash(self.residue)

    def __repr__(self):
        return f"QuotientElement({self.residue})"
