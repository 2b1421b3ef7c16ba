"""p-adic Jordan decompositions and local density factors."""

from __future__ import annotations

from fractions import Fraction as F

import pytest

from gentype.errors import InputInvalid
from gentype.intmat import det_bareiss
from gentype.padic import (
    chi,
    e2_factor,
    jordan_decompose,
    local_factor_Cp,
    local_invariants,
    p_factor,
)
from gentype.lattice import e8, hyperbolic_plane, rank1

from corpus import CORPUS, root_a, two_u


def gram_of(L):
    return [list(r) for r in L.gram]


def v_p(n, p):
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def test_jordan_known_shapes():
    L = two_u(rank1(-2))
    jd = jordan_decompose(gram_of(L), 2)
    assert [(b.scale, b.rank) for b in jd.blocks] == [(0, 4), (1, 1)]
    assert jd.blocks[0].odd_diag == ()       # 2U is 2-adically even
    assert jd.blocks[1].odd_diag == (7,)     # <-2> = 2 * <unit 7 mod 8>
    jd3 = jordan_decompose(gram_of(L), 3)
    assert [(b.scale, b.rank) for b in jd3.blocks] == [(0, 5)]


def test_jordan_scale_ranks_account_for_determinant():
    for name, L in CORPUS.items():
        det = abs(L.det)
        for p in (2, 3, 5, 7):
            jd = jordan_decompose(gram_of(L), p)
            total = sum(b.scale * b.rank for b in jd.blocks)
            assert total == v_p(det, p), (name, p)


def test_jordan_unit_dets_are_units():
    for name in ("2U+<-12>", "2U+A4(-1)", "2U+<-7200>"):
        L = CORPUS[name]
        for p in (2, 3, 5):
            jd = jordan_decompose(gram_of(L), p)
            for b in jd.blocks:
                assert b.unit_det % p != 0


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@pytest.mark.parametrize("name, p", [
    ("2U + <-6>", 3),
    ("2U + A2(-1)", 5),
    ("<-6> + <-10>", 3),
    ("<-6> + <-10>", 5),
])
def test_chi_detects_hyperbolic_even_blocks(name, p):
    # chi vanishes on odd-rank blocks; on even-rank blocks it is +1
    # exactly when the block is a sum of hyperbolic planes over Z_p,
    # which the Legendre symbol of (-1)^(rank/2) * det decides.
    lattices = {
        "2U + <-6>": two_u(rank1(-6)),
        "2U + A2(-1)": two_u(root_a(2)),
        "<-6> + <-10>": rank1(-6).direct_sum(rank1(-10)),
    }
    jd = jordan_decompose(gram_of(lattices[name]), p)
    saw_even = False
    for b in jd.blocks:
        sign = chi(b)
        assert sign in (-1, 0, 1)
        if b.rank % 2 == 1:
            assert sign == 0
        else:
            saw_even = True
            assert sign == _legendre((-1) ** (b.rank // 2) * b.unit_det, p)
    if name.startswith("2U"):
        assert saw_even  # the unimodular 2U part contributes a rank-4 block


def test_chi_sign_both_values_occur():
    L = two_u(root_a(2))
    blocks5 = jordan_decompose(gram_of(L), 5).blocks
    assert chi(blocks5[0]) == -1  # 2U + A2(-1) is anisotropic-twisted at 5
    blocks3 = jordan_decompose(gram_of(two_u(rank1(-6))), 3).blocks
    assert chi(blocks3[0]) == 1


def test_chi_rejects_odd_blocks():
    L = two_u(rank1(-2))
    jd = jordan_decompose(gram_of(L), 2)
    odd_block = jd.blocks[1]
    with pytest.raises(InputInvalid):
        chi(odd_block)


def test_e8_is_even_unimodular_at_2():
    jd = jordan_decompose(gram_of(e8(-1)), 2)
    assert len(jd.blocks) == 1
    b = jd.blocks[0]
    assert (b.scale, b.rank, b.odd_diag) == (0, 8, ())


def test_p_factor_values():
    # product over j <= l of (1 - p^(-2j))
    assert p_factor(2, 1) == F(3, 4)
    assert p_factor(3, 2) == F(8, 9) * F(80, 81)
    assert p_factor(5, 1) == F(24, 25)
    want = F(1)
    for j in range(1, 4):
        want *= 1 - F(1, 2 ** (2 * j))
    assert p_factor(2, 3) == want


def test_local_factor_positive_rational():
    for name in ("2U+<-2>", "2U+<-12>", "2U+A3(-1)", "2U+D4(-1)"):
        L = CORPUS[name]
        for p in (2, 3):
            jd = jordan_decompose(gram_of(L), p)
            val = local_factor_Cp(jd)
            assert val > 0


def test_local_invariants_structure():
    L = two_u(rank1(-2))
    jd = jordan_decompose(gram_of(L), 2)
    inv = local_invariants(jd)
    assert inv.p == 2
    assert set(inv.e2) == {0, 1}
    assert e2_factor(jd, 0) == inv.e2[0]
    assert e2_factor(jd, 1) == inv.e2[1]
