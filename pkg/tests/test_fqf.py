"""Finite quadratic forms: construction, Gauss sums, isometry, orbits, QC."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction as F
from itertools import product

import pytest

from gentype.errors import CapExceeded, InputInvalid
from gentype.exactnum import Cyclo, sqrt_cyclo, squarefree_decompose
from gentype.fqf import (
    FiniteQuadraticForm,
    apply_aut,
    classify_quasi_cyclic,
    counts,
    gauss_sum_cyclo,
    gauss_sum_radical,
    is_isometric,
    is_quasi_cyclic,
    is_quasi_cyclic_brute,
    orbits,
    orthogonal_group,
    perp,
    quasi_cyclic_reduction,
    quotient_form,
    signature_mod_8,
    subgroup_form,
    subgroup_from_generators,
    torsion_elements,
)
from gentype.lattice import discriminant_form, e8, hyperbolic_plane, rank1

from corpus import CORPUS, root_a, root_d4, two_u


def brute_aut_count(A):
    """Independent |O(A)| oracle: try all generator images, check bijective
    homomorphism preserving b and q."""
    elems = list(A.elements())
    gens = [A.reduce(tuple(1 if j == i else 0 for j in range(len(A.orders))))
            for i in range(len(A.orders))]
    cands = [
        [y for y in elems
         if A.order_of(y) == A.order_of(g) and A.q_of(y) == A.q_of(g)]
        for g in gens
    ]
    count = 0
    for images in product(*cands):
        def f(x, images=images):
            acc = A.zero
            for xi, im in zip(x, images):
                acc = A.add(acc, A.smul(xi, im))
            return acc
        vals = [f(x) for x in elems]
        if len(set(vals)) != len(elems):
            continue
        if all(A.q_of(f(x)) == A.q_of(x) for x in elems) and all(
            A.b_of(f(x), f(y)) == A.b_of(x, y) for x in elems for y in elems
        ):
            count += 1
    return count


# ---------------------------------------------------------------------------
# construction and descriptors


def test_cyclic_form_values():
    A = FiniteQuadraticForm.cyclic(4, F(1, 4))
    assert A.order == 4 and A.exponent == 4
    assert sorted(A.q_of(x) for x in A.elements()) == [0, F(1, 4), F(1, 4), 1]


def test_descriptor_blocks():
    u1 = FiniteQuadraticForm.from_descriptor("u(1)")
    assert sorted(u1.q_of(x) for x in u1.elements()) == [0, 0, 0, 1]
    v1 = FiniteQuadraticForm.from_descriptor("v(1)")
    assert sorted(v1.q_of(x) for x in v1.elements()) == [0, 1, 1, 1]
    ab = FiniteQuadraticForm.from_descriptor("a+b")
    assert sorted(ab.q_of(x) for x in ab.elements()) == [0, 0, F(1, 2), F(3, 2)]
    q32 = FiniteQuadraticForm.from_descriptor("q(3,2)")
    assert sorted(q32.q_of(x) for x in q32.elements()) == [0, F(4, 3), F(4, 3)]


def test_descriptor_rejects_garbage():
    with pytest.raises(InputInvalid):
        FiniteQuadraticForm.from_descriptor("q(6,1)")  # 6 is not a prime power
    with pytest.raises(InputInvalid):
        FiniteQuadraticForm.from_descriptor("nope")


def test_direct_sum_orders():
    A = FiniteQuadraticForm.cyclic(2, F(1, 2))
    B = FiniteQuadraticForm.cyclic(3, F(2, 3))
    C = A.direct_sum(B)
    assert C.order == 6
    assert C.invariant_factors() == (6,)


def test_invariant_factors():
    A = FiniteQuadraticForm.from_descriptor("u(1)+q(4,1)")
    assert A.invariant_factors() == (2, 2, 4)


# ---------------------------------------------------------------------------
# discriminant forms of reference lattices


def test_discriminant_form_rank1():
    # <-2k> has cyclic discriminant group with q(j) = -j^2/(2k) mod 2
    for k in (1, 2, 3, 5):
        A = discriminant_form(rank1(-2 * k))
        assert A.orders == (2 * k,)
        want = sorted((F(-(j * j), 2 * k)) % 2 for j in range(2 * k))
        assert sorted(A.q_of(x) for x in A.elements()) == want


def test_discriminant_form_root_lattices():
    A2 = discriminant_form(root_a(2))
    assert is_isometric(A2, FiniteQuadraticForm.from_descriptor("q(3,2)"))
    D4 = discriminant_form(root_d4())
    assert is_isometric(D4, FiniteQuadraticForm.from_descriptor("v(1)"))
    E8 = discriminant_form(e8(-1))
    assert E8.is_trivial()


def test_signature_mod_8_matches_lattice_signature():
    for L in (rank1(2), rank1(-2), hyperbolic_plane(), e8(-1),
              rank1(2).direct_sum(rank1(4)), two_u(root_a(2))):
        pos, neg = L.signature
        assert signature_mod_8(discriminant_form(L)) == (pos - neg) % 8


# ---------------------------------------------------------------------------
# Gauss sums


@pytest.mark.parametrize("name", ["2U+<-6>", "2U+A2(-1)", "2U+<-8>+<-2>^2"])
def test_gauss_sum_matches_numeric(name):
    A = discriminant_form(CORPUS[name])
    for d in (1, 2, -3):
        num = gauss_sum_cyclo(A, d).to_complex()
        brute = sum(
            cmath.exp(1j * math.pi * d * float(A.q_of(x)))
            for x in A.elements()
        )
        assert abs(num - brute) < 1e-9


def test_milgram_formula():
    for name in ("2U+<-2>", "2U+<-12>", "2U+A3(-1)", "2U+D4(-1)"):
        A = discriminant_form(CORPUS[name])
        g = gauss_sum_radical(A, 1)
        assert g.coef > 0
        assert g.coef * g.coef * g.rad == A.order
        assert g.eighth == signature_mod_8(A)
        s, m = squarefree_decompose(A.order)
        expected = (Cyclo.from_rational(s) * sqrt_cyclo(m)
                    * Cyclo.root(F(signature_mod_8(A), 8)))
        assert gauss_sum_cyclo(A, 1) == expected


def test_torsion_elements():
    A = FiniteQuadraticForm.cyclic(4, F(1, 4))
    assert sorted(torsion_elements(A, 2)) == [(0,), (2,)]
    assert len(list(torsion_elements(A, 4))) == 4
    B = FiniteQuadraticForm.from_descriptor("u(1)")
    assert len(list(torsion_elements(B, 2))) == 4


# ---------------------------------------------------------------------------
# orthogonal groups and orbits


@pytest.mark.parametrize(
    "build,size",
    [
        (lambda: FiniteQuadraticForm.cyclic(2, F(1, 2)), 1),
        (lambda: FiniteQuadraticForm.cyclic(3, F(4, 3)), 2),
        (lambda: FiniteQuadraticForm.from_descriptor("u(1)"), 2),
        (lambda: FiniteQuadraticForm.from_descriptor("v(1)"), 6),
        (lambda: FiniteQuadraticForm.from_descriptor("a+b"), 1),
        (lambda: discriminant_form(rank1(-12)), 4),
        (lambda: FiniteQuadraticForm.cyclic(5, F(8, 5)), 2),
        (lambda: FiniteQuadraticForm.from_descriptor("u(1)+a"), 2),
    ],
)
def test_orthogonal_group_sizes_against_brute_oracle(build, size):
    A = build()
    group = orthogonal_group(A)
    assert len(group) == size
    assert brute_aut_count(A) == size


def test_orthogonal_group_elements_preserve_form():
    A = discriminant_form(rank1(-12))
    for images in orthogonal_group(A):
        for x in A.elements():
            assert A.q_of(apply_aut(A, images, x)) == A.q_of(x)


def test_orthogonal_group_cap():
    A = discriminant_form(two_u(rank1(-9998)))
    with pytest.raises(CapExceeded):
        orthogonal_group(A, cap=100)


def test_orbits_partition():
    A = discriminant_form(rank1(-12))
    auts = orthogonal_group(A)
    parts = orbits(A, auts, list(A.elements()))
    seen = [x for part in parts for x in part]
    assert sorted(seen) == sorted(A.elements())
    for part in parts:
        assert len(auts) % len(part) == 0  # orbit size divides group order


# ---------------------------------------------------------------------------
# isometry testing


def test_is_isometric_positive():
    u = FiniteQuadraticForm.from_descriptor("u(1)")
    v = FiniteQuadraticForm.from_descriptor("v(1)")
    # the classical 2-adic relation u + u ~ v + v
    assert is_isometric(u.direct_sum(u), v.direct_sum(v))
    # order of summands does not matter
    a = FiniteQuadraticForm.cyclic(2, F(1, 2))
    b = FiniteQuadraticForm.cyclic(3, F(2, 3))
    assert is_isometric(a.direct_sum(b), b.direct_sum(a))


def test_is_isometric_negative():
    u = FiniteQuadraticForm.from_descriptor("u(1)")
    v = FiniteQuadraticForm.from_descriptor("v(1)")
    assert not is_isometric(u, v)
    aa = FiniteQuadraticForm.from_descriptor("a+a")
    assert not is_isometric(aa, u)
    c1 = FiniteQuadraticForm.cyclic(5, F(2, 5))
    c2 = FiniteQuadraticForm.cyclic(5, F(4, 5))
    assert not is_isometric(c1, c2)


def test_is_isometric_against_group_order():
    # same underlying group, isometric forms must have equal |O(A)|
    A = discriminant_form(two_u(rank1(-4), rank1(-2)))
    B = discriminant_form(two_u(rank1(-2), rank1(-4)))
    assert is_isometric(A, B)
    assert len(orthogonal_group(A)) == len(orthogonal_group(B))


# ---------------------------------------------------------------------------
# subgroups, perp, quotients


def sub_order(sub):
    total = 1
    for o in sub.gen_orders:
        total *= o
    return total


def test_perp_subgroup_form():
    # in Z/8 with q(j) = -j^2/8, the 2-torsion element 4 pairs trivially
    # exactly with the even residues
    A = discriminant_form(rank1(-8))
    x = A.reduce((4,))
    sub = perp(A, [x])
    assert sub_order(sub) == 4
    S = subgroup_form(A, sub)
    assert sorted(S.q_of(y) for y in S.elements()) == sorted(
        (F(-(j * j), 8)) % 2 for j in (0, 2, 4, 6)
    )


def test_quotient_form_by_reduction_subgroup():
    A = discriminant_form(two_u(root_d4(), root_d4()))
    sub = quasi_cyclic_reduction(A)
    Q, lifts = quotient_form(A, sub)
    assert A.order == Q.order * sub_order(sub) ** 2
    assert is_quasi_cyclic(Q)
    assert len(lifts) == len(Q.orders)  # one lift per quotient generator


# ---------------------------------------------------------------------------
# quasi-cyclic classification


def test_quasi_cyclic_structural_matches_brute_small():
    cases = [
        "a", "b", "a+a", "a+b", "u(1)", "v(1)", "u(1)+a", "u(1)+u(1)",
        "q(3,1)", "q(3,1)+q(3,2)", "q(9,1)+q(3,1)", "q(4,1)+a",
        "q(25,1)+q(5,1)", "q(8,3)+u(1)", "v(2)", "u(2)+b",
    ]
    for desc in cases:
        A = FiniteQuadraticForm.from_descriptor(desc)
        assert is_quasi_cyclic(A) == is_quasi_cyclic_brute(A), desc


def test_quasi_cyclic_known_cases():
    # hyperbolic plane form u(1) contains no isotropic plane (order 4 only)
    assert is_quasi_cyclic(FiniteQuadraticForm.from_descriptor("u(1)"))
    # u(1)+u(1) has Witt index 2: an isotropic (Z/2)^2 exists
    assert not is_quasi_cyclic(FiniteQuadraticForm.from_descriptor("u(1)+u(1)"))
    assert not is_quasi_cyclic(discriminant_form(two_u(root_d4(), root_d4())))
    label = classify_quasi_cyclic(
        FiniteQuadraticForm.from_descriptor("q(3,1)+q(3,1)").p_part(3)[0]
    )
    assert isinstance(label.quasi_cyclic, bool)


def test_quasi_cyclic_reduction_properties():
    for desc in ("u(1)+u(1)", "a+a+a+a", "q(3,1)+q(3,2)+q(3,1)"):
        A = FiniteQuadraticForm.from_descriptor(desc)
        D = A.exponent
        sub = quasi_cyclic_reduction(A)
        Q, _ = quotient_form(A, sub)
        assert is_quasi_cyclic(Q)
        assert Q.exponent == D or 2 * Q.exponent == D


def test_counts_dimensions():
    A = discriminant_form(two_u(rank1(-2)))
    cd = counts(A)
    assert cd.plus_dim >= 1 and cd.minus_dim >= 0
    assert cd.two_torsion == 2
    assert cd.three_torsion == 1
    B = discriminant_form(two_u(root_a(2)))
    assert counts(B).three_torsion == 3
