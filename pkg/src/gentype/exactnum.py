"""Exact arithmetic backends.

Four layers, from most to least general:

* ``Cyclo`` — sparse elements of the union of all cyclotomic fields, stored as
  finite sums  sum_i  c_i * e(q_i)  with rational c_i and rational phases
  q_i mod 1, where e(q) = exp(2*pi*i*q).  Canonical reduction rewrites every
  phase into the tensor-product integral basis of the prime-power cyclotomic
  fields, so equality (in particular: being zero, being rational) is decidable
  and exact.
* ``PhasedSqrt`` — monomials  c * sqrt(m) * e(s/8)  (c rational >= 0,
  m squarefree).  Quadratic Gauss sums always collapse to this shape; keeping
  them as monomials avoids quadratic-size cyclotomic products.
* ``SymbolicReal`` — finite sums  c * pi^k * sqrt(m)  used by the volume and
  bound formulas.  Exact ring operations; comparison goes through intervals.
* ``RationalInterval`` — closed intervals with Fraction endpoints and outward
  rounding; the only place approximation enters, and always rigorously.

Floating point appears in exactly two decision procedures (choosing which
eighth-root phase / signature residue to verify); the chosen answer is then
verified exactly, so a float glitch can only cause an exception, never a
wrong result.
"""

from __future__ import annotations

import cmath
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

Frac = Fraction

# ---------------------------------------------------------------------------
# small number-theory helpers


def factorint(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs here are modest)."""
    assert n >= 1
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def squarefree_decompose(n: int) -> tuple[int, int]:
    """n = s^2 * m with m squarefree; returns (s, m).  Requires n >= 1."""
    s, m = 1, 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, m


def mod1(q: Frac) -> Frac:
    return q - (q.numerator // q.denominator)


def mod2(q: Frac) -> Frac:
    r = q % 2
    return r if r >= 0 else r + 2


def int_to_str(v: int) -> str:
    """``str(v)`` that lifts the interpreter's digit guard when needed.

    Rigorous interval endpoints can be exact rationals with tens of
    thousands of digits; serializing them must not trip the conversion
    limit CPython applies by default.
    """
    try:
        return str(v)
    except ValueError:
        sys.set_int_max_str_digits(
            max(sys.get_int_max_str_digits(), v.bit_length() // 3 + 16)
        )
        return str(v)


def str_to_int(s: str) -> int:
    """``int(s)`` accepting arbitrarily many digits (still strict on form)."""
    try:
        return int(s)
    except ValueError:
        body = s.strip().lstrip("+-")
        if not (body.isdigit() and body.isascii()):
            raise
        sys.set_int_max_str_digits(
            max(sys.get_int_max_str_digits(), len(s) + 16)
        )
        return int(s)


# ---------------------------------------------------------------------------
# sparse cyclotomic numbers


def _phase_components(q: Frac) -> list[tuple[int, int, int]]:
    """Split q mod 1 into prime-power parts: q = sum c/p^k (mod 1).

    Returns [(p, p^k, c)] with 0 <= c < p^k, one entry per prime dividing the
    denominator.
    """
    n = q.denominator
    a = q.numerator % n
    comps = []
    for p, e in factorint(n).items():
        pk = p**e
        m = n // pk
        c = (a * pow(m, -1, pk)) % pk
        comps.append((p, pk, c))
    return comps


def _canonical(terms: dict[Frac, Frac]) -> dict[Frac, Frac]:
    """Rewrite into the tensor-product basis (exponent at p below phi(p^k))."""
    work = list(terms.items())
    out: dict[Frac, Frac] = {}
    while work:
        q, coef = work.pop()
        if not coef:
            continue
        offender = None
        for p, pk, c in _phase_components(q):
            phi = pk - pk // p
            if c >= phi:
                offender = (p, pk, c, phi)
                break
        if offender is None:
            acc = out.get(q, Frac(0)) + coef
            if acc:
                out[q] = acc
            else:
                out.pop(q, None)
            continue
        p, pk, c, phi = offender
        step = pk // p  # p^(k-1)
        r = c - phi
        base = q - Frac(c, pk)
        for i in range(p - 1):
            work.append((mod1(base + Frac(r + i * step, pk)), -coef))
    return out


class Cyclo:
    """Sparse exact cyclotomic number: dict {phase mod 1 -> coefficient}."""

    __slots__ = ("terms", "_canon")

    def __init__(self, terms: dict[Frac, Frac] | None = None):
        self.terms = terms if terms is not None else {}
        self._canon: dict[Frac, Frac] | None = None

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "Cyclo":
        return Cyclo({})

    @staticmethod
    def from_rational(c) -> "Cyclo":
        c = Frac(c)
        return Cyclo({Frac(0): c} if c else {})

    @staticmethod
    def root(q) -> "Cyclo":
        """e(q) = exp(2 pi i q)."""
        return Cyclo({mod1(Frac(q)): Frac(1)})

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "Cyclo") -> "Cyclo":
        t = dict(self.terms)
        for q, c in other.terms.items():
            acc = t.get(q, Frac(0)) + c
            if acc:
                t[q] = acc
            else:
                t.pop(q, None)
        return Cyclo(t)

    def __neg__(self) -> "Cyclo":
        return Cyclo({q: -c for q, c in self.terms.items()})

    def __sub__(self, other: "Cyclo") -> "Cyclo":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Frac(other)
            if not c:
                return Cyclo.zero()
            return Cyclo({q: c * v for q, v in self.terms.items()})
        t: dict[Frac, Frac] = {}
        for q1, c1 in self.terms.items():
            for q2, c2 in other.terms.items():
                q = mod1(q1 + q2)
                acc = t.get(q, Frac(0)) + c1 * c2
                if acc:
                    t[q] = acc
                else:
                    t.pop(q, None)
        return Cyclo(t)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Cyclo":
        assert n >= 0
        result = Cyclo.from_rational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "Cyclo":
        return Cyclo({mod1(-q): c for q, c in self.terms.items()})

    def times_root(self, q) -> "Cyclo":
        q = Frac(q)
        return Cyclo({mod1(p + q): c for p, c in self.terms.items()})

    # -- decisions ----------------------------------------------------------

    def canonical(self) -> dict[Frac, Frac]:
        if self._canon is None:
            self._canon = _canonical(self.terms)
        return self._canon

    def is_zero(self) -> bool:
        return not self.canonical()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclo.from_rational(other)
        if not isinstance(other, Cyclo):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):  # pragma: no cover - not used as dict key in anger
        return hash(frozenset(self.canonical().items()))

    def is_rational(self) -> bool:
        c = self.canonical()
        return not c or set(c) == {Frac(0)}

    def rational_value(self) -> Frac:
        c = self.canonical()
        if not c:
            return Frac(0)
        if set(c) != {Frac(0)}:
            raise ValueError(f"not rational: {self!r}")
        return c[Frac(0)]

    def is_real(self) -> bool:
        return (self - self.conj()).is_zero()

    def to_complex(self) -> complex:
        return sum(float(c) * cmath.exp(2j * cmath.pi * float(q))
                   for q, c in self.terms.items()) or complex(0)

    def __repr__(self):
        c = self.canonical()
        if not c:
            return "Cyclo(0)"
        bits = " + ".join(f"{v}*e({q})" for q, v in sorted(c.items()))
        return f"Cyclo({bits})"


_SQRT_CACHE: dict[int, Cyclo] = {}


def sqrt_cyclo(m: int) -> Cyclo:
    """Exact cyclotomic expansion of sqrt(m), m squarefree >= 1.

    sqrt(2) = e(1/8) + e(-1/8); for odd p, the quadratic Gauss sum
    sum_t e(t^2/p) equals sqrt(p) (p = 1 mod 4) or i*sqrt(p) (p = 3 mod 4),
    so sqrt(p) is that sum twisted by e(-1/4) in the latter case.
    """
    if m in _SQRT_CACHE:
        return _SQRT_CACHE[m]
    out = Cyclo.from_rational(1)
    for p in factorint(m):
        if p == 2:
            piece = Cyclo.root(Frac(1, 8)) + Cyclo.root(Frac(-1, 8))
        else:
            piece = Cyclo.zero()
            for t in range(p):
                piece = piece + Cyclo.root(Frac(t * t, p))
            if p % 4 == 3:
                piece = piece.times_root(Frac(-1, 4))
        out = out * piece
    _SQRT_CACHE[m] = out
    return out


# ---------------------------------------------------------------------------
# radical monomials  c * sqrt(rad) * e(eighth/8)


@dataclass(frozen=True)
class PhasedSqrt:
    """c * sqrt(rad) * e(eighth/8) with c >= 0 rational, rad squarefree."""

    coef: Frac
    rad: int
    eighth: int

    @staticmethod
    def zero() -> "PhasedSqrt":
        return PhasedSqrt(Frac(0), 1, 0)

    def is_zero(self) -> bool:
        return self.coef == 0

    def __mul__(self, other: "PhasedSqrt") -> "PhasedSqrt":
        if self.is_zero() or other.is_zero():
            return PhasedSqrt.zero()
        g = gcd(self.rad, other.rad)
        return PhasedSqrt(self.coef * other.coef * g,
                          (self.rad // g) * (other.rad // g),
                          (self.eighth + other.eighth) % 8)

    def conj(self) -> "PhasedSqrt":
        return PhasedSqrt(self.coef, self.rad, (-self.eighth) % 8)

    def to_cyclo(self) -> Cyclo:
        if self.is_zero():
            return Cyclo.zero()
        return (sqrt_cyclo(self.rad) * self.coef).times_root(Frac(self.eighth, 8))

    def abs_squared(self) -> Frac:
        return self.coef * self.coef * self.rad


# ---------------------------------------------------------------------------
# rational intervals with outward rounding


def sqrt_lower(x: Frac, digits: int = 40) -> Frac:
    """Largest 10^-digits-grid fraction whose square is <= x (x >= 0)."""
    assert x >= 0
    if x == 0:
        return Frac(0)
    s = 10**digits
    a, b = x.numerator, x.denominator
    return Frac(isqrt(a * b * s * s), b * s)


def sqrt_upper(x: Frac, digits: int = 40) -> Frac:
    assert x >= 0
    if x == 0:
        return Frac(0)
    s = 10**digits
    a, b = x.numerator, x.denominator
    r = isqrt(a * b * s * s)
    if r * r < a * b * s * s:
        r += 1
    return Frac(r, b * s)


@dataclass(frozen=True)
class RationalInterval:
    lo: Frac
    hi: Frac

    def __post_init__(self):
        assert self.lo <= self.hi, (self.lo, self.hi)

    @staticmethod
    def exact(x) -> "RationalInterval":
        x = Frac(x)
        return RationalInterval(x, x)

    def __add__(self, other):
        other = _coerce(other)
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        prods = [self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi]
        return RationalInterval(min(prods), max(prods))

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalInterval":
        assert self.lo > 0 or self.hi < 0, "interval straddles zero"
        return RationalInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return _coerce(other) * self.reciprocal()

    def __pow__(self, n: int) -> "RationalInterval":
        if n < 0:
            return (self ** (-n)).reciprocal()
        if n == 0:
            return RationalInterval.exact(1)
        out = RationalInterval.exact(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        # tighten even powers of sign-straddling intervals: not needed here
        return out

    def sqrt(self, digits: int = 40) -> "RationalInterval":
        assert self.lo >= 0
        return RationalInterval(sqrt_lower(self.lo, digits),
                                sqrt_upper(self.hi, digits))

    # certain comparisons ---------------------------------------------------

    def surely_less(self, other) -> bool:
        other = _coerce(other)
        return self.hi < other.lo

    def surely_greater(self, other) -> bool:
        other = _coerce(other)
        return self.lo > other.hi

    def contains(self, x) -> bool:
        x = Frac(x)
        return self.lo <= x <= self.hi

    @property
    def width(self) -> Frac:
        return self.hi - self.lo

    def midpoint(self) -> Frac:
        return (self.lo + self.hi) / 2

    def __repr__(self):
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"


def _coerce(x) -> RationalInterval:
    if isinstance(x, RationalInterval):
        return x
    return RationalInterval.exact(x)


# pi to 44 digits; the truncation is below pi and the +1 ulp bound is above.
_PI_DIGITS = 314159265358979323846264338327950288419716939
PI = RationalInterval(Frac(_PI_DIGITS, 10**44), Frac(_PI_DIGITS + 1, 10**44))


# ---------------------------------------------------------------------------
# symbolic reals: sums of  c * pi^k * sqrt(m)


class SymbolicReal:
    """Exact element of Q[pi, pi^-1, sqrt(m) for squarefree m].

    Stored canonically as {(pi_power, radicand): coefficient} with squarefree
    radicands and nonzero coefficients, so structural equality is exact
    (pi-powers and distinct square roots are linearly independent over Q).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Frac] | None = None):
        self.terms = terms if terms is not None else {}

    @staticmethod
    def from_rational(c) -> "SymbolicReal":
        c = Frac(c)
        return SymbolicReal({(0, 1): c} if c else {})

    @staticmethod
    def monomial(coef, pi_power: int = 0, radicand: int = 1) -> "SymbolicReal":
        coef = Frac(coef)
        if not coef:
            return SymbolicReal()
        s, m = squarefree_decompose(radicand)
        return SymbolicReal({(pi_power, m): coef * s})

    def __add__(self, other):
        other = _coerce_sym(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            acc = t.get(k, Frac(0)) + c
            if acc:
                t[k] = acc
            else:
                t.pop(k, None)
        return SymbolicReal(t)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicReal({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce_sym(other))

    def __rsub__(self, other):
        return _coerce_sym(other) + (-self)

    def __mul__(self, other):
        other = _coerce_sym(other)
        t: dict[tuple[int, int], Frac] = {}
        for (k1, m1), c1 in self.terms.items():
            for (k2, m2), c2 in other.terms.items():
                g = gcd(m1, m2)
                key = (k1 + k2, (m1 // g) * (m2 // g))
                acc = t.get(key, Frac(0)) + c1 * c2 * g
                if acc:
                    t[key] = acc
                else:
                    t.pop(key, None)
        return SymbolicReal(t)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SymbolicReal":
        assert n >= 0
        out = SymbolicReal.from_rational(1)
        for _ in range(n):
            out = out * self
        return out

    def divide_by_monomial(self, other: "SymbolicReal") -> "SymbolicReal":
        [(key, c)] = other.terms.items()
        k, m = key
        # 1/(c pi^k sqrt(m)) = pi^-k sqrt(m) / (c m)
        inv = SymbolicReal.monomial(Frac(1, 1) / (c * m), -k, m)
        return self * inv

    def __truediv__(self, other):
        other = _coerce_sym(other)
        if len(other.terms) != 1:
            raise ValueError("division only by monomials")
        return self.divide_by_monomial(other)

    def is_rational(self) -> bool:
        return all(k == (0, 1) for k in self.terms)

    def rational_value(self) -> Frac:
        if not self.terms:
            return Frac(0)
        if not self.is_rational():
            raise ValueError(f"not rational: {self!r}")
        return self.terms[(0, 1)]

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SymbolicReal.from_rational(other)
        if not isinstance(other, SymbolicReal):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def interval(self, digits: int = 40) -> RationalInterval:
        out = RationalInterval.exact(0)
        for (k, m), c in self.terms.items():
            piece = PI**k if k else RationalInterval.exact(1)
            piece = piece * RationalInterval.exact(Frac(m)).sqrt(digits)
            out = out + piece * c
        return out

    def __repr__(self):
        if not self.terms:
            return "SymbolicReal(0)"
        bits = []
        for (k, m), c in sorted(self.terms.items()):
            s = str(c)
            if k:
                s += f"*pi^{k}"
            if m != 1:
                s += f"*sqrt({m})"
            bits.append(s)
        return "SymbolicReal(" + " + ".join(bits) + ")"


def _coerce_sym(x) -> SymbolicReal:
    if isinstance(x, SymbolicReal):
        return x
    return SymbolicReal.from_rational(x)
