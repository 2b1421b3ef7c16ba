"""Tests for reflective-class enumeration and the obstruction sum."""

import math
from collections import Counter
from fractions import Fraction as F

import pytest

from corpus import CORPUS, two_u, root_a
from gentype.errors import InputInvalid
from gentype.fqf import FiniteQuadraticForm, is_isometric, orthogonal_group
from gentype.hmvol import bernoulli
from gentype.lattice import discriminant_form, eichler_vector, orthogonal_complement, rank1
from gentype.reflect import (
    KIND_AI,
    KIND_AII,
    KIND_BI,
    KIND_BII,
    KIND_BIII,
    bound_e,
    bound_f,
    bound_g,
    divisible_by_two,
    enumerate_classes,
    group_shape,
    inverse_sqrt,
    kinds_for,
    obstruction_sum,
    orbit_reduce,
    universal_bound_sum,
)


# -- kinds and helpers --------------------------------------------------------


def test_kinds_for_parity():
    assert kinds_for(4) == (KIND_AI, KIND_AII, KIND_BI, KIND_BII, KIND_BIII)
    assert kinds_for(3) == (KIND_AI, KIND_AII, KIND_BI, KIND_BII)


def test_group_shape():
    mk = FiniteQuadraticForm.from_descriptor
    assert group_shape(mk("q(4,1)+q(3,2)")) == (12, 0)
    assert group_shape(mk("q(4,1)+q(3,2)+a")) == (12, 1)
    assert group_shape(mk("a+b")) is None            # exponent 2
    assert group_shape(mk("q(4,1)+q(4,7)")) is None  # two order-4 factors
    assert group_shape(FiniteQuadraticForm.trivial()) is None


def test_divisible_by_two():
    A = FiniteQuadraticForm.from_descriptor("q(4,1)+q(3,2)")
    assert divisible_by_two(A, (2, 1))
    assert divisible_by_two(A, (0, 2))
    assert not divisible_by_two(A, (1, 0))


# -- class enumeration --------------------------------------------------------


def square_roots_of_one(m: int) -> int:
    return sum(1 for j in range(m) if (j * j) % m == 1)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6])
def test_class_counts_on_cyclic_family(d):
    # for 2U + <-2d> the discriminant group is Z/2d and each kind's count
    # reduces to counting square roots of unity
    A = discriminant_form(two_u(rank1(-2 * d)))
    got = Counter(c.kind for c in enumerate_classes(A, 3))
    want = {KIND_AII: 1}
    if d % 4 == 1:
        want[KIND_AI] = 1
    if 2 * d > 2:
        want[KIND_BI] = square_roots_of_one(4 * d) // 2
        want[KIND_BII] = square_roots_of_one(d)
    assert got == {k: v for k, v in want.items() if v}


def test_class_counts_odd_exponent_even_n():
    A = discriminant_form(CORPUS["2U+A2(-1)"])
    got = Counter(c.kind for c in enumerate_classes(A, 4))
    assert got == {KIND_AII: 1, KIND_BIII: 2}
    # same group at odd n carries no BIII classes
    got3 = Counter(c.kind for c in enumerate_classes(A, 3))
    assert got3 == {KIND_AII: 1}


def test_class_fields_brute_predicates():
    # second implementation of the defining predicates, straight from the
    # docstring: norm, divisor, order and q-value per kind
    A = discriminant_form(two_u(rank1(-12)))  # Z/12
    d_exp = A.exponent
    for c in enumerate_classes(A, 3):
        if c.kind == KIND_AI:
            assert A.order_of(c.x) == 2 and A.q_of(c.x) == F(3, 2)
            assert (c.norm, c.div) == (-2, 2)
        elif c.kind == KIND_AII:
            assert c.x == A.zero and (c.norm, c.div) == (-2, 1)
        elif c.kind == KIND_BI:
            assert A.order_of(c.x) == d_exp
            assert A.q_of(c.x) == F(-1, d_exp) % 2
            assert (c.norm, c.div) == (-d_exp, d_exp)
        elif c.kind == KIND_BII:
            assert A.order_of(c.x) == d_exp // 2
            assert A.q_of(c.x) == F(-4, d_exp) % 2
            assert divisible_by_two(A, c.x)
            assert (c.norm, c.div) == (-d_exp, d_exp // 2)


def test_complement_form_realized_by_lattice():
    # the pinned complement forms for the A kinds match the actual
    # discriminant forms of the orthogonal complements
    L = two_u(rank1(-4))
    A = discriminant_form(L)
    for c in enumerate_classes(A, 3):
        if c.kind not in (KIND_AI, KIND_AII):
            continue
        vec = eichler_vector(L, c.x, c.div, F(c.norm, c.div**2))
        AK = discriminant_form(orthogonal_complement(L, vec))
        assert AK.invariant_factors() == c.complement_orders
        assert is_isometric(AK, c.complement_form)


# -- orbit reduction ----------------------------------------------------------


def test_orbit_reduce_merges_bi_classes():
    A = discriminant_form(two_u(rank1(-12)))
    auts = orthogonal_group(A)
    bi = [c for c in enumerate_classes(A, 3) if c.kind == KIND_BI]
    assert len(bi) == 4
    out = orbit_reduce(A, bi, auts)
    assert len(out) == 1
    assert (out[0].size, out[0].signed_count, out[0].delta) == (4, 2, 1)


def test_orbit_reduce_delta_flag():
    # kind BII with D = 4 is the only doubled case
    A = discriminant_form(two_u(rank1(-4)))  # Z/4, D = 4
    auts = orthogonal_group(A)
    bii = [c for c in enumerate_classes(A, 3) if c.kind == KIND_BII]
    assert bii and all(c.exponent_d == 4 for c in bii)
    out = orbit_reduce(A, bii, auts)
    assert all(od.delta == 2 for od in out)


# -- bound functions ----------------------------------------------------------


def test_bound_e_values():
    assert bound_e(KIND_AI, 3) == 9
    assert bound_e(KIND_AII, 3) == 2
    assert bound_e(KIND_AII, 10) == 2**8
    assert bound_e(KIND_BI, 7) == 9
    assert bound_e(KIND_BII, 3) == 2**9
    assert bound_e(KIND_BIII, 4) == 1
    with pytest.raises(InputInvalid):
        bound_e(KIND_AI, 2)
    with pytest.raises(InputInvalid):
        bound_e("nope", 5)


def _float_zeta(s: int) -> float:
    return sum(1.0 / k**s for k in range(1, 10**6))


def _float_core(n: int) -> float:
    if n % 2:
        s = (n + 1) // 2
        coef = math.factorial(s) / abs(float(bernoulli(n + 1)))
        return math.pi ** ((7 - n) // 2) * coef * _float_zeta(s)
    s = n // 2
    return math.pi ** (s + 5) / math.factorial(s) * _float_zeta(s + 1)


def _float_factor_a(n: int) -> float:
    lead = 2.0 ** ((n - 4) / 2) if n % 2 else 2.0 ** (n // 2 - 3)
    return lead * _float_core(n)


def _float_factor_b(n: int) -> float:
    lead = 2.0 ** (n - 4) if n % 2 else 2.0 ** (n - 5)
    return lead * _float_core(n)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 9, 12])
def test_bound_f_matches_float_evaluation(n):
    cases = {
        KIND_AI: _float_factor_a(n),
        KIND_AII: 64 / 3 * _float_factor_a(n),
        KIND_BI: 3.0 ** ((2 - n) / 2) * _float_factor_b(n),
        KIND_BII: 3.0 ** ((2 - n) / 2) * 64 / 3 * _float_factor_b(n),
    }
    if n % 2 == 0:
        cases[KIND_BIII] = (3.0 ** ((2 - n) / 2) * 2.0 ** (1 - n // 2)
                            * _float_factor_b(n))
    for kind, ref in cases.items():
        iv = bound_f(kind, n)
        assert iv.lo < iv.hi
        assert abs(float(iv.lo) - ref) < 1e-6 * ref, kind


def test_bound_g_parity_guard():
    with pytest.raises(InputInvalid):
        bound_g(KIND_BIII, 5)
    with pytest.raises(InputInvalid):
        bound_g(KIND_AI, 5)


def test_universal_bound_sum_is_kind_sum():
    for n in (3, 4, 7):
        total = universal_bound_sum(n)
        acc_lo = acc_hi = F(0)
        for kind in kinds_for(n):
            iv = bound_f(kind, n)
            acc_lo += bound_e(kind, n) * iv.lo
            acc_hi += bound_e(kind, n) * iv.hi
        assert total.lo == acc_lo and total.hi == acc_hi


def test_inverse_sqrt_interval():
    iv = inverse_sqrt(8)
    assert iv.lo < iv.hi
    assert iv.lo**2 < F(1, 8) < iv.hi**2


# -- obstruction sum ----------------------------------------------------------


@pytest.mark.parametrize("d, want", [(1, 70), (2, 64), (3, 38)])
def test_obstruction_exact_totals(d, want):
    r = obstruction_sum(two_u(rank1(-2 * d)))
    assert r.mode == "exact"
    assert r.total.lo == r.total.hi == want
    assert r.volume is not None
    # per-kind exact contributions add up to the total
    acc = F(0)
    for rep in r.kinds:
        assert rep.contribution.lo == rep.contribution.hi
        acc += rep.contribution.lo
    assert acc == want


def test_obstruction_exact_below_closed_form_bounds():
    # each enumerated kind's orbit sum obeys e_*(n), and the exact total
    # stays below the universal majorant
    L = two_u(rank1(-6))
    r = obstruction_sum(L)
    n = r.n
    for rep in r.kinds:
        if rep.mode == "exact":
            assert rep.orbit_sum <= bound_e(rep.kind, n)
    majorant = universal_bound_sum(n) * inverse_sqrt(r.det_size)
    assert r.total.surely_less(majorant)


def test_obstruction_hybrid_fallback():
    r = obstruction_sum(two_u(rank1(-2)), cap=2)
    assert r.mode == "hybrid"
    modes = {rep.kind: rep.mode for rep in r.kinds}
    assert modes[KIND_AII] == "bound"  # complement group order 4 beats the cap
    assert modes[KIND_AI] == "exact"
    assert r.warnings and "cap" in r.warnings[0]


def test_obstruction_bound_mode():
    r = obstruction_sum(two_u(rank1(-2)), mode="bound")
    assert r.mode == "bound"
    assert r.volume is None
    assert r.total.lo < r.total.hi
    js = r.to_json()
    assert js["mode"] == "bound"
    assert "majorant" in js["soundness"]


def test_obstruction_input_guards():
    with pytest.raises(InputInvalid):
        obstruction_sum(two_u(rank1(-2)), mode="fast")
    with pytest.raises(InputInvalid):
        obstruction_sum(rank1(-2).direct_sum(rank1(-2)))


def test_obstruction_json_round_trip():
    r = obstruction_sum(two_u(rank1(-4)))
    js = r.to_json()
    assert js["n"] == 3
    assert js["discriminant_order"] == 4
    by_kind = {entry["kind"]: entry for entry in js["kinds"]}
    assert by_kind[KIND_AII]["class_count"] == 1
    for entry in js["kinds"]:
        if entry["mode"] == "exact" and entry["orbit_count"]:
            assert entry["orbits"]
            for orb in entry["orbits"]:
                num, den = orb["group_ratio"].split("/")
                assert int(den) > 0
