"""Exact Hirzebruch–Mumford volume of the orthogonal group of an even lattice.

The volume is assembled from local densities (padic module), Bernoulli
numbers, and — for even n — a critical Dirichlet L-value expressed as a
rational multiple of pi^s/sqrt(|D|).  All transcendental factors cancel
symbolically; the final result is asserted to be a positive rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod

from .errors import (InputInvalid, NonRationalVolume, ParityViolation,
                     PreconditionUnverified)
from .exactnum import (RationalInterval, SymbolicReal, factorint,
                       squarefree_decompose)
from .lattice import EvenLattice
from .padic import JordanData, jordan_decompose, local_factor_Cp, local_invariants

_BERNOULLI_CACHE: dict[int, Fraction] = {0: Fraction(1)}


def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m (B_1 = -1/2 convention)."""
    if m < 0:
        raise InputInvalid("Bernoulli index must be nonnegative")
    if m not in _BERNOULLI_CACHE:
        top = max(_BERNOULLI_CACHE)
        for k in range(top + 1, m + 1):
            if k > 1 and k % 2 == 1:
                _BERNOULLI_CACHE[k] = Fraction(0)
                continue
            acc = Fraction(0)
            for j in range(k):
                acc += comb(k + 1, j) * _BERNOULLI_CACHE[j]
            _BERNOULLI_CACHE[k] = -acc / (k + 1)
    return _BERNOULLI_CACHE[m]


def bernoulli_poly(s: int, x: Fraction) -> Fraction:
    """Bernoulli polynomial B_s(x)."""
    return sum((comb(s, k) * bernoulli(k) * x**(s - k) for k in range(s + 1)),
               Fraction(0))


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d / n) for n >= 1."""
    if n <= 0:
        raise InputInvalid("kronecker wants a positive lower argument")
    out = 1
    for p, e in factorint(n).items():
        if p == 2:
            if d % 2 == 0:
                return 0
            s = 1 if d % 8 in (1, 7) else -1
        else:
            s = _legendre(d, p)
            if s == 0:
                return 0
        out *= s**e
    return out


def fundamental_discriminant(L: EvenLattice) -> tuple[int, int]:
    """(t, D) with t^2 D = (-1)^(n/2+1) det(L), D a fundamental discriminant."""
    n = L.rank - 2
    if n % 2:
        raise InputInvalid("fundamental discriminant wants even n")
    m = (-1)**(n // 2 + 1) * L.det
    assert m != 0
    sign = 1 if m > 0 else -1
    t0, m0 = squarefree_decompose(abs(m))
    d0 = sign * m0
    if d0 % 4 == 1:
        return t0, d0
    assert t0 % 2 == 0, "even lattice determinant must give a discriminant"
    return t0 // 2, 4 * d0


def generalized_bernoulli(s: int, d: int) -> Fraction:
    """B_{s, chi_D} = f^{s-1} sum_a chi_D(a) B_s(a/f), f = |D|."""
    f = abs(d) if d != 1 else 1
    if d == 1:
        return bernoulli(s)
    total = Fraction(0)
    for a in range(1, f + 1):
        c = kronecker(d, a)
        if c:
            total += c * bernoulli_poly(s, Fraction(a, f))
    return Fraction(f)**(s - 1) * total


def dirichlet_L_critical(s: int, d: int) -> SymbolicReal:
    """L(s, chi_D) at a critical integer: rational * pi^s / sqrt(|D|)."""
    if s < 1:
        raise InputInvalid("critical L-value wants s >= 1")
    delta = 0 if d > 0 else 1
    if (s - delta) % 2:
        raise ParityViolation(f"s = {s} has wrong parity for D = {d}")
    f = abs(d)
    b = generalized_bernoulli(s, d)
    sign = (-1)**(1 + (s - delta) // 2)
    coef = sign * Fraction(2)**(s - 1) * b / (factorial(s) * Fraction(f)**s)
    t, rad = squarefree_decompose(f)
    out = SymbolicReal.monomial(coef * t, s, rad)
    lo = out.interval()
    assert lo.lo > 0, "critical L-values are positive"
    return out


def zeta_interval(s: int, cutoff: int = 64, corrections: int = 8) -> RationalInterval:
    """Rigorous enclosure of zeta(s) for integer s >= 2 (Euler–Maclaurin)."""
    if s < 2:
        raise InputInvalid("zeta interval wants s >= 2")
    val = sum((Fraction(1, k**s) for k in range(1, cutoff)), Fraction(0))
    val += Fraction(1, (s - 1) * cutoff**(s - 1)) + Fraction(1, 2 * cutoff**s)
    for i in range(1, corrections + 1):
        rising = prod(range(s, s + 2 * i - 1))
        val += bernoulli(2 * i) / factorial(2 * i) * rising \
            / Fraction(cutoff)**(s + 2 * i - 1)
    rising = prod(range(s, s + 2 * corrections + 1))
    rem = abs(bernoulli(2 * corrections + 2)) / factorial(2 * corrections + 2) \
        * rising / Fraction(cutoff)**(s + 2 * corrections + 1)
    return RationalInterval(val - rem, val + rem)


# ---------------------------------------------------------------------------
# volume assembly


@dataclass(frozen=True)
class VolumeTerms:
    n: int
    det_size: int
    jordan: dict[int, JordanData]
    c_term: SymbolicReal
    f_term: Fraction
    g_term: Fraction
    h_term: Fraction | None
    disc_t: int | None
    disc_d: int | None


def _chi_scale0(jd: JordanData) -> int:
    b = jd.block_at(0)
    if b is None or b.rank % 2:
        return 0
    if jd.p == 2:
        raise InputInvalid("chi at p = 2 handled via E_{2,0}")
    return b.chi_even_part()


def volume_terms(L: EvenLattice, assume_contains_u: bool = False) -> VolumeTerms:
    sig = L.signature
    if sig[0] != 2:
        raise InputInvalid(f"volume formula wants signature (2, n), got {sig}")
    n = sig[1]
    det_size = abs(L.det)
    primes = sorted(factorint(det_size))
    jordan = {p: jordan_decompose(L.gram, p) for p in primes}
    if not assume_contains_u:
        for p in primes:
            if jordan[p].rank_at(0) < 2:
                raise PreconditionUnverified(
                    f"unimodular rank at p = {p} is below 2; "
                    "cannot confirm a hyperbolic-plane embedding")
    # F
    f_term = Fraction(1)
    for p in primes:
        np_half = jordan[p].rank_at(0) // 2
        if np_half <= n // 2:
            for k in range(np_half + 1, n // 2 + 2):
                f_term *= 1 - Fraction(1, p**(2 * k))
    # G
    g_term = Fraction(1)
    for p in primes:
        if p == 2:
            continue
        chi0 = _chi_scale0(jordan[p])
        npr = jordan[p].rank_at(0)
        if npr % 2 == 0:
            g_term *= 1 + Fraction(chi0, p**(npr // 2))
    if det_size % 2 == 0:
        inv2 = local_invariants(jordan[2])
        b0 = jordan[2].block_at(0)
        if b0 is not None:
            g_term *= inv2.e2[0]
        # rank 0 at scale 0 is excluded by the precondition
    # C
    cp = Fraction(1)
    for p in primes:
        cp *= local_factor_Cp(jordan[p])
    if n % 2:
        c_rat = 8 * Fraction(det_size, 4)**((n + 3) // 2) * cp
        c_term = SymbolicReal.from_rational(c_rat)
        h_term = None
        t = d = None
    else:
        t, d = fundamental_discriminant(L)
        ts, rad = squarefree_decompose(det_size)
        coef = 8 * Fraction(det_size, 4)**((n + 2) // 2) * Fraction(ts, 2) * cp
        c_term = SymbolicReal.monomial(coef, -(n + 2) // 2, rad)
        h_term = g_term
        for p in primes:
            h_term *= (1 - Fraction(kronecker(d, p), p**(n // 2 + 1))) \
                / (1 - Fraction(1, p**(n + 2)))
    return VolumeTerms(n, det_size, jordan, c_term, f_term, g_term,
                       h_term, t, d)


def vol_hm(L: EvenLattice, assume_contains_u: bool = False) -> Fraction:
    """Hirzebruch–Mumford volume of O^+(L), as an exact positive rational."""
    terms = volume_terms(L, assume_contains_u)
    n = terms.n
    if n % 2:
        bern = prod((abs(bernoulli(2 * k)) / (2 * k)
                     for k in range(1, (n + 1) // 2 + 1)), start=Fraction(1))
        total = terms.c_term * (terms.f_term * terms.g_term * bern)
    else:
        bern = prod((abs(bernoulli(2 * k)) / (2 * k)
                     for k in range(1, n // 2 + 1)), start=Fraction(1))
        lval = dirichlet_L_critical(n // 2 + 1, terms.disc_d)
        total = terms.c_term * lval
        total = total * (terms.f_term * terms.h_term * bern * factorial(n // 2))
    if not total.is_rational():
        raise NonRationalVolume(f"volume did not reduce to a rational: {total!r}")
    out = total.rational_value()
    assert out > 0
    return out
