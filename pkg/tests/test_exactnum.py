"""Exact arithmetic tower: cyclotomics, radicals, intervals, symbolic reals."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction as F

import pytest

from gentype.exactnum import (
    PI,
    Cyclo,
    PhasedSqrt,
    RationalInterval,
    SymbolicReal,
    factorint,
    int_to_str,
    mod1,
    mod2,
    sqrt_cyclo,
    sqrt_lower,
    sqrt_upper,
    squarefree_decompose,
    str_to_int,
)


def test_factorint_and_squarefree():
    assert factorint(360) == {2: 3, 3: 2, 5: 1}
    assert factorint(1) == {}
    assert squarefree_decompose(12) == (2, 3)
    assert squarefree_decompose(1) == (1, 1)
    assert squarefree_decompose(49) == (7, 1)


def test_mod_reductions():
    assert mod1(F(7, 3)) == F(1, 3)
    assert mod1(F(-1, 3)) == F(2, 3)
    assert mod2(F(7, 2)) == F(3, 2)
    assert mod2(F(-1, 2)) == F(3, 2)


def test_cyclo_roots_of_unity():
    z = Cyclo.root(F(1, 5))
    acc = Cyclo.from_rational(1)
    for _ in range(5):
        acc = acc * z
    assert acc == Cyclo.from_rational(1)  # z^5 == 1
    assert acc.is_rational() and acc.rational_value() == 1
    # 1 + z + z^2 + z^3 + z^4 == 0
    total = Cyclo.zero()
    for k in range(5):
        total = total + Cyclo.root(F(k, 5))
    assert total.is_zero()


def test_cyclo_conj_and_complex():
    z = Cyclo.root(F(3, 8))
    w = z + Cyclo.root(F(1, 3))
    num = w.to_complex()
    ref = cmath.exp(2j * cmath.pi * 3 / 8) + cmath.exp(2j * cmath.pi / 3)
    assert abs(num - ref) < 1e-12
    assert abs(w.conj().to_complex() - ref.conjugate()) < 1e-12
    assert (w * w.conj()).is_real()


def test_sqrt_cyclo_squares_to_radicand():
    for m in (1, 2, 3, 5, 6, 15):
        s = sqrt_cyclo(m)
        sq = s * s
        assert sq.is_rational() and sq.rational_value() == m
        assert abs(s.to_complex() - math.sqrt(m)) < 1e-12


def test_phased_sqrt_round_trip():
    g = PhasedSqrt(F(3), 2, 5)
    assert g.abs_squared() == 18
    z = g.to_cyclo()
    ref = 3 * math.sqrt(2) * cmath.exp(2j * cmath.pi * 5 / 8)
    assert abs(z.to_complex() - ref) < 1e-12


def test_interval_arithmetic_exact_endpoints():
    a = RationalInterval.exact(F(1, 3))
    b = RationalInterval.exact(F(1, 6))
    assert (a + b).lo == F(1, 2) and (a + b).hi == F(1, 2)
    assert (a * b).lo == F(1, 18)
    assert (a - b).hi == F(1, 6)
    assert (a ** 2).lo == F(1, 9)
    assert a.reciprocal().lo == 3


def test_interval_sqrt_encloses():
    iv = RationalInterval.exact(2).sqrt()
    assert iv.lo * iv.lo <= 2 <= iv.hi * iv.hi
    assert iv.width < F(1, 10**30)
    assert sqrt_lower(F(2)) ** 2 <= 2 <= sqrt_upper(F(2)) ** 2


def test_interval_comparisons():
    one = RationalInterval.exact(1)
    two = RationalInterval.exact(2)
    assert one.surely_less(two)
    assert two.surely_greater(one)
    assert not one.surely_less(one)
    assert RationalInterval(F(1), F(2)).contains(F(3, 2))
    assert not RationalInterval(F(1), F(2)).contains(F(3))


def test_pi_interval_tight():
    assert PI.lo < F(314159265359, 10**11) + F(1, 10**9)
    assert PI.lo <= F(math.pi).limit_denominator(10**15) <= PI.hi or PI.width < F(1, 10**40)
    assert float(PI.lo) == pytest.approx(math.pi, abs=1e-15)
    assert PI.width < F(1, 10**40)


def test_symbolic_real_monomials():
    s = SymbolicReal.monomial(F(1, 2), 1, 3)  # (1/2) * pi * sqrt(3)
    assert float(s.interval(25).lo) == pytest.approx(math.pi * math.sqrt(3) / 2)
    t = s * s  # rational: (1/4) pi^2 * 3 -- still has pi^2
    assert not t.is_rational()
    u = SymbolicReal.monomial(F(2), 0, 2) * SymbolicReal.monomial(F(3), 0, 2)
    assert u.is_rational() and u.rational_value() == 12
    zero = s - s
    assert zero.is_zero()


def test_symbolic_real_mixed_sum():
    s = SymbolicReal.from_rational(F(1, 4)) + SymbolicReal.monomial(F(1, 4), 0, 2)
    val = float(s.interval(25).lo)
    assert val == pytest.approx((1 + math.sqrt(2)) / 4)
    assert not s.is_rational()


def test_big_int_string_round_trip():
    big = 10 ** 6000 + 12345
    s = int_to_str(big)
    assert len(s) == 6001
    assert str_to_int(s) == big
    assert str_to_int("-42") == -42
    with pytest.raises(ValueError):
        str_to_int("12x34")
