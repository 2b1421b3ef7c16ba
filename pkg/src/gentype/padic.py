"""p-adic Jordan decomposition of even lattices and local volume factors.

For each prime p the Gram matrix is split over Z_p into unimodular blocks
scaled by powers p^j.  For p = 2 each block is further normalized into an
even part (hyperbolic-plane count and type) plus an odd-diagonal part of
rank at most two, using the three-odd-entries-to-one rewriting.

The local factor C_p assembled from this data feeds the exact volume
computation; all arithmetic is integer/Fraction exact, with working
matrices reduced modulo a safely large prime power.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .errors import InputInvalid
from .exactnum import factorint


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _valuation(a: int, p: int, infinity: int) -> int:
    if a == 0:
        return infinity
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


@dataclass(frozen=True)
class JordanBlock:
    """One unimodular constituent scaled by p^scale."""

    p: int
    scale: int
    rank: int
    unit_det: int            # determinant of the unimodular block, p-unit
    odd_diag: tuple[int, ...]  # p = 2 only: odd part diagonal (mod 8), len <= 2
    num_v: int               # p = 2 only: V-type planes in the even part

    @property
    def even_rank(self) -> int:
        return self.rank - len(self.odd_diag)

    def is_odd(self) -> bool:
        return bool(self.odd_diag)

    def chi_even_part(self) -> int:
        """chi of the even part: +1 iff it is a sum of hyperbolic planes."""
        if self.p == 2:
            return -1 if self.num_v % 2 else 1
        if self.rank % 2:
            return 0
        sign = -1 if (self.p % 4 == 3 and (self.rank // 2) % 2) else 1
        return sign * _legendre(self.unit_det, self.p)


def chi(block: JordanBlock) -> int:
    """chi of an even unimodular block: 0 odd rank, +1 hyperbolic, -1 else."""
    if block.p == 2:
        if block.odd_diag:
            raise InputInvalid("chi is defined only for even blocks")
        return block.chi_even_part()
    return block.chi_even_part()


@dataclass(frozen=True)
class JordanData:
    p: int
    blocks: tuple[JordanBlock, ...]  # ascending scale, only nonzero ranks

    def block_at(self, j: int) -> JordanBlock | None:
        for b in self.blocks:
            if b.scale == j:
                return b
        return None

    def rank_at(self, j: int) -> int:
        b = self.block_at(j)
        return b.rank if b else 0

    def is_odd_at(self, j: int) -> bool:
        b = self.block_at(j)
        return b.is_odd() if b else False

    @property
    def total_rank(self) -> int:
        return sum(b.rank for b in self.blocks)

    @property
    def top_scale(self) -> int:
        return max((b.scale for b in self.blocks), default=0)


# ---------------------------------------------------------------------------
# decomposition


def _sym_update(m, idx, k, coeffs):
    """row_k += sum c_i row_i, and the same for columns (keeps symmetry)."""
    for i, c in coeffs:
        if c:
            for l in idx:
                m[k][l] += c * m[i][l]
    for i, c in coeffs:
        if c:
            for l in idx:
                m[l][k] += c * m[l][i]


def _reduce_entries(m, idx, modulus):
    for i in idx:
        for j in idx:
            m[i][j] %= modulus


def _walk_three_odds(odds: list[int]) -> tuple[list[int], int, int]:
    """Rewrite an odd-diagonal list down to length <= 2.

    <a> + <b> + <c> is replaced by <a+b+c> plus one hyperbolic-type plane,
    U when -(a+b+c) = abc mod 8 and V when 3(a+b+c) = abc mod 8.
    Returns (short odd list, extra U count, extra V count).
    """
    odds = [x % 8 for x in odds]
    num_u = num_v = 0
    while len(odds) > 2:
        a, b, c = odds[0], odds[1], odds[2]
        t = (a + b + c) % 8
        m = (a * b * c) % 8
        if (-t) % 8 == m:
            num_u += 1
        elif (3 * t) % 8 == m:
            num_v += 1
        else:
            raise AssertionError("odd triple admits no plane rewriting")
        odds = [t] + odds[3:]
    return odds, num_u, num_v


def jordan_decompose(gram, p: int) -> JordanData:
    """Jordan data of an integer Gram matrix at the prime p."""
    n = len(gram)
    m = [[int(x) for x in row] for row in gram]
    from . import intmat
    det = intmat.det_bareiss([row[:] for row in m])
    if det == 0:
        raise InputInvalid("Gram matrix must be nondegenerate")
    vdet = _valuation(abs(det), p, 10**9)
    nbig = vdet + 8
    modulus = p**(nbig + 16)
    inf = nbig + 100

    idx = list(range(n))
    raw: dict[int, dict] = {}

    def rec(scale_entry):
        raw.setdefault(scale_entry, {"odds": [], "num_u": 0, "num_v": 0,
                                     "unit_det": 1, "rank": 0})
        return raw[scale_entry]

    while idx:
        _reduce_entries(m, idx, modulus)
        vmin = min(_valuation(m[i][j] % modulus, p, inf)
                   for i in idx for j in idx if i <= j)
        assert vmin <= vdet, "pivot valuation exceeded determinant budget"
        diag = [i for i in idx if _valuation(m[i][i] % modulus, p, inf) == vmin]
        if diag:
            i = diag[0]
            unit = (m[i][i] // p**vmin) % modulus
            inv_unit = pow(unit, -1, modulus)
            for k in list(idx):
                if k == i:
                    continue
                a = m[k][i]
                t = -(a // p**vmin % modulus) * inv_unit % modulus
                _sym_update(m, idx, k, [(i, t)])
            blk = rec(vmin)
            blk["rank"] += 1
            blk["unit_det"] = blk["unit_det"] * unit % modulus
            if p == 2:
                blk["odds"].append(unit % 8)
            idx.remove(i)
            continue
        # no diagonal entry achieves the minimum
        pair = None
        for i in idx:
            for j in idx:
                if i < j and _valuation(m[i][j] % modulus, p, inf) == vmin:
                    pair = (i, j)
                    break
            if pair:
                break
        assert pair is not None
        i, j = pair
        if p != 2:
            # make a diagonal pivot: row_i += row_j
            _sym_update(m, idx, i, [(j, 1)])
            continue
        # p = 2: split the even 2x2 block at (i, j)
        a, b, c = m[i][i], m[i][j], m[j][j]
        scale = vmin
        bb = [[a // 2**scale, b // 2**scale], [b // 2**scale, c // 2**scale]]
        d = (bb[0][0] * bb[1][1] - bb[0][1] * bb[0][1]) % modulus
        inv_d = pow(d, -1, modulus)
        for k in list(idx):
            if k in (i, j):
                continue
            r1 = m[k][i] // 2**scale
            r2 = m[k][j] // 2**scale
            ti = -(r1 * bb[1][1] - r2 * bb[0][1]) * inv_d % modulus
            tj = -(r2 * bb[0][0] - r1 * bb[0][1]) * inv_d % modulus
            _sym_update(m, idx, k, [(i, ti), (j, tj)])
        blk = rec(scale)
        blk["rank"] += 2
        blk["unit_det"] = blk["unit_det"] * d % modulus
        if d % 8 == 7:
            blk["num_u"] += 1
        elif d % 8 == 3:
            blk["num_v"] += 1
        else:
            raise AssertionError("even 2x2 determinant must be 3 or 7 mod 8")
        idx.remove(i)
        idx.remove(j)

    blocks = []
    for scale in sorted(raw):
        info = raw[scale]
        odds, extra_u, extra_v = ([], 0, 0)
        if p == 2:
            odds, extra_u, extra_v = _walk_three_odds(info["odds"])
        blocks.append(JordanBlock(
            p=p, scale=scale, rank=info["rank"],
            unit_det=info["unit_det"] % (8 if p == 2 else p),
            odd_diag=tuple(odds),
            num_v=info["num_v"] + extra_v if p == 2 else 0))
    data = JordanData(p, tuple(blocks))
    assert data.total_rank == n
    assert sum(b.scale * b.rank for b in data.blocks) == vdet
    if p != 2:
        want = _legendre(det // p**vdet, p)
        got = prod(_legendre(b.unit_det, p) for b in data.blocks)
        assert want == got, "unit determinant mismatch at odd p"
    else:
        want = (det // 2**vdet) % 8
        got = 1
        for b in data.blocks:
            for e in b.odd_diag:
                got = got * e % 8
            got = got * pow(7, (b.even_rank // 2) - b.num_v, 8) % 8
            got = got * pow(3, b.num_v, 8) % 8
        assert want == got, "unit determinant mismatch at p = 2"
    return data


# ---------------------------------------------------------------------------
# local invariants and the factor C_p


def p_factor(p: int, l: int) -> Fraction:
    """P_p(l) = prod_{k=1..l} (1 - p^{-2k})."""
    out = Fraction(1)
    for k in range(1, l + 1):
        out *= 1 - Fraction(1, p**(2 * k))
    return out


def e2_factor(data: JordanData, j: int) -> Fraction:
    """E_{2,j}: correction for a nonzero block at scale j (p = 2)."""
    assert data.p == 2
    b = data.block_at(j)
    assert b is not None and b.rank > 0
    if data.is_odd_at(j - 1) or data.is_odd_at(j + 1):
        return Fraction(1)
    if len(b.odd_diag) == 2 and (b.odd_diag[0] - b.odd_diag[1]) % 4 == 0:
        return Fraction(1)
    chi_plus = b.chi_even_part()
    half = b.even_rank // 2
    return 1 + Fraction(chi_plus, 2**half)


@dataclass(frozen=True)
class LocalInvariants:
    p: int
    s_p: int
    w_p: int
    q: int | None          # p = 2 only
    s2_prime: int | None   # p = 2 only
    e2: dict | None        # p = 2 only: scale -> E_{2,j} for nonzero blocks


def local_invariants(data: JordanData) -> LocalInvariants:
    blocks = data.blocks
    s_p = len(blocks)
    w_p = 0
    for b in blocks:
        tail = sum(c.rank for c in blocks if c.scale > b.scale)
        w2 = b.scale * b.rank * (b.rank + 1 + 2 * tail)
        assert w2 % 2 == 0
        w_p += w2 // 2
    if data.p != 2:
        return LocalInvariants(data.p, s_p, w_p, None, None, None)
    q = 0
    for b in blocks:
        if b.is_odd():
            q += b.rank + (1 if data.is_odd_at(b.scale + 1) else 0)
    s2p = 0
    for j in range(0, data.top_scale + 2):
        if data.rank_at(j) == 0 and (data.is_odd_at(j - 1) or data.is_odd_at(j + 1)):
            s2p += 1
    e2 = {b.scale: e2_factor(data, b.scale) for b in blocks}
    return LocalInvariants(2, s_p, w_p, q, s2p, e2)


def local_factor_Cp(data: JordanData) -> Fraction:
    """The local factor C_p from the Jordan data (1 when p is unramified)."""
    inv = local_invariants(data)
    p = data.p
    if len(data.blocks) == 1 and data.blocks[0].scale == 0:
        return Fraction(1)
    if p != 2:
        out = Fraction(2)**(1 - inv.s_p) * Fraction(1, p**inv.w_p)
        for b in data.blocks:
            if b.scale == 0:
                continue
            out /= p_factor(p, b.rank // 2)
            if b.rank % 2 == 0:
                out *= 1 + Fraction(chi(b), p**(b.rank // 2))
        return out
    exp = 1 - inv.s_p - inv.s2_prime - inv.w_p + inv.q
    out = Fraction(2)**exp
    for b in data.blocks:
        if b.scale == 0:
            continue
        out /= p_factor(2, b.even_rank // 2)
        out *= inv.e2[b.scale]
    return out
