"""Metaplectic action on a finite quadratic form and cusp-form dimensions.

The group ring C[A] of a finite quadratic form A carries a unitary action of
the metaplectic double cover of SL2(Z), generated by

    T e_g = e(q(g)/2) e_g,
    S e_g = e(rk/8) / sqrt(|A|) * sum_h e(-(g,h)) e_h,

where rk is the rank residue mod 8 of a negative-definite even lattice whose
discriminant form is A (so the signature of A is -rk mod 8).  The center is
generated by Z = S^2, whose eigenspaces W+ / W- are spanned by e_g + e_{-g}
and e_g - e_{-g}.

Everything here is exact: matrix entries are cyclotomic numbers carrying a
1/sqrt(scale) factor, eigenphase sums are recovered from traces of low powers,
and the dimension count asserts integrality instead of rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InputInvalid,
    NonIntegralDimension,
    NotQuasiCyclicWhenRequired,
    ParityViolation,
    SignatureMismatch,
)
from .exactnum import Cyclo, Frac, SymbolicReal, mod1, sqrt_cyclo, squarefree_decompose
from .fqf import (
    FiniteQuadraticForm,
    counts,
    gauss_sum_cyclo,
    is_quasi_cyclic,
    orbit_representatives,
    signature_mod_8,
)
from .lattice import EvenLattice, _check_two_u_prefix, discriminant_form

PLUS = "plus"
MINUS = "minus"


def _sqrt_as_cyclo(n: int) -> Cyclo:
    s, m = squarefree_decompose(n)
    return sqrt_cyclo(m) * s


@dataclass(frozen=True)
class ScaledMatrix:
    """Square matrix whose value is ``entries / sqrt(root_scale)``."""

    entries: tuple[tuple[Cyclo, ...], ...]
    root_scale: int = 1

    @property
    def size(self) -> int:
        return len(self.entries)

    @staticmethod
    def scalar(d: int, value: Cyclo, root_scale: int = 1) -> "ScaledMatrix":
        rows = tuple(
            tuple(value if i == j else Cyclo.zero() for j in range(d))
            for i in range(d)
        )
        return ScaledMatrix(rows, root_scale)

    @staticmethod
    def identity(d: int) -> "ScaledMatrix":
        return ScaledMatrix.scalar(d, Cyclo.from_rational(1))

    def times(self, other: "ScaledMatrix") -> "ScaledMatrix":
        d = self.size
        assert other.size == d
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = Cyclo.zero()
                for t in range(d):
                    left = self.entries[i][t]
                    if not left.terms:
                        continue
                    acc = acc + left * other.entries[t][j]
                row.append(acc)
            rows.append(tuple(row))
        return ScaledMatrix(tuple(rows), self.root_scale * other.root_scale)

    def dagger(self) -> "ScaledMatrix":
        d = self.size
        rows = tuple(
            tuple(self.entries[j][i].conj() for j in range(d)) for i in range(d)
        )
        return ScaledMatrix(rows, self.root_scale)

    def equals(self, other: "ScaledMatrix") -> bool:
        if self.size != other.size:
            return False
        left_scale = _sqrt_as_cyclo(other.root_scale)
        right_scale = _sqrt_as_cyclo(self.root_scale)
        for i in range(self.size):
            for j in range(self.size):
                lhs = self.entries[i][j] * left_scale
                rhs = other.entries[i][j] * right_scale
                if not (lhs - rhs).is_zero():
                    return False
        return True


class WeilRep:
    """The metaplectic action on C[A], split into the W+ / W- blocks."""

    def __init__(self, form: FiniteQuadraticForm, rk: int):
        self.form = form
        self.rk = rk % 8
        self._counts = counts(form)
        self._blocks: dict[str, tuple[ScaledMatrix, ScaledMatrix, ScaledMatrix]] = {}

    @property
    def d_plus(self) -> int:
        return self._counts.plus_dim

    @property
    def d_minus(self) -> int:
        return self._counts.minus_dim

    def dim(self, parity: str) -> int:
        return self.d_plus if parity == PLUS else self.d_minus

    def central_eigenvalue(self, parity: str) -> Cyclo:
        phase = Frac(self.rk, 4) + (0 if parity == PLUS else Frac(1, 2))
        return Cyclo.root(phase)

    def matrices(self, parity: str) -> tuple[ScaledMatrix, ScaledMatrix, ScaledMatrix]:
        """(T, S, Z) restricted to the requested parity block."""
        if parity not in (PLUS, MINUS):
            raise InputInvalid(f"parity must be {PLUS!r} or {MINUS!r}")
        if parity not in self._blocks:
            self._blocks[parity] = self._build_block(parity)
        return self._blocks[parity]

    def _build_block(self, parity):
        A = self.form
        reps = orbit_representatives(A, minus_only=(parity == MINUS))
        d = len(reps)
        sign = 1 if parity == PLUS else -1
        sigma = Frac(self.rk, 8)
        t_rows = []
        s_rows = []
        for i, h in enumerate(reps):
            t_rows.append(
                tuple(
                    Cyclo.root(A.q_of(h) / 2) if i == j else Cyclo.zero()
                    for j in range(d)
                )
            )
            row = []
            for g in reps:
                pairing = A.b_of(g, h)
                val = Cyclo.root(-pairing)
                if A.neg(g) != g:
                    val = val + Cyclo.root(pairing) * sign
                row.append(val.times_root(sigma))
            s_rows.append(tuple(row))
        t_mat = ScaledMatrix(tuple(t_rows), 1)
        s_mat = ScaledMatrix(tuple(s_rows), A.order)
        z_mat = s_mat.times(s_mat)
        return t_mat, s_mat, z_mat


def build_weil(M_disc: FiniteQuadraticForm, rk_mod_8: int) -> WeilRep:
    """Attach the metaplectic action to a discriminant form.

    ``rk_mod_8`` is the rank residue of the negative-definite lattice the form
    comes from; consistency with the form's signature residue is enforced.
    """
    rk = rk_mod_8 % 8
    sig = signature_mod_8(M_disc)
    if sig != (-rk) % 8:
        raise SignatureMismatch(
            f"form has signature {sig} mod 8, incompatible with rank {rk} mod 8"
        )
    return WeilRep(M_disc, rk)


def verify_relations(W: WeilRep, parity: str | None = None) -> None:
    """Check S^2 = Z, (ST)^3 = Z, Z = +-i^rk, and unitarity, exactly.

    The orbit basis is orthogonal but not orthonormal (a free orbit vector
    e_g +- e_{-g} has squared norm 2, a fixed one has 1), so unitarity is
    norm preservation against the basis Gram matrix rather than S S* = 1.
    """
    parities = (PLUS, MINUS) if parity is None else (parity,)
    A = W.form
    for par in parities:
        d = W.dim(par)
        if d == 0:
            continue
        t_mat, s_mat, z_mat = W.matrices(par)
        central = ScaledMatrix.scalar(d, W.central_eigenvalue(par))
        if not s_mat.times(s_mat).equals(z_mat):
            raise AssertionError(f"S^2 != Z on the {par} block")
        if not z_mat.equals(central):
            raise AssertionError(f"Z is not the expected scalar on the {par} block")
        st = s_mat.times(t_mat)
        if not st.times(st).times(st).equals(central):
            raise AssertionError(f"(ST)^3 != Z on the {par} block")
        reps = orbit_representatives(A, minus_only=(par == MINUS))
        gram = ScaledMatrix(
            tuple(
                tuple(
                    Cyclo.from_rational(1 if A.neg(g) == g else 2)
                    if i == j
                    else Cyclo.zero()
                    for j, _ in enumerate(reps)
                )
                for i, g in enumerate(reps)
            )
        )
        if not s_mat.dagger().times(gram).times(s_mat).equals(gram):
            raise AssertionError(f"S does not preserve norms on the {par} block")


# ---------------------------------------------------------------------------
# eigenphase sums


@dataclass(frozen=True)
class AlphaTerms:
    """The four eigenphase sums for both parity blocks, as exact rationals."""

    a1_plus: Frac
    a2_plus: Frac
    a3_plus: Frac
    a4_plus: int
    a1_minus: Frac
    a2_minus: Frac
    a3_minus: Frac
    a4_minus: int
    parity: str

    def selected(self) -> tuple[Frac, Frac, Frac, int]:
        if self.parity == PLUS:
            return (self.a1_plus, self.a2_plus, self.a3_plus, self.a4_plus)
        return (self.a1_minus, self.a2_minus, self.a3_minus, self.a4_minus)

    def total(self) -> Frac:
        a1, a2, a3, a4 = self.selected()
        return a1 + a2 + a3 + a4


def _as_integer(value: Cyclo, what: str) -> int:
    if not value.is_rational():
        raise AssertionError(f"{what} is not rational: {value!r}")
    rat = value.rational_value()
    if rat.denominator != 1:
        raise AssertionError(f"{what} is not an integer: {rat}")
    return int(rat)


def _order_two_phases(d: int, theta: Frac, trace: Cyclo) -> list[tuple[Frac, int]]:
    """Eigenphase multiplicities of a unitary X with X^2 = e(theta), given tr X."""
    x = mod1(theta) / 2
    diff = _as_integer(trace.times_root(-x), "eigenvalue multiplicity difference")
    m1, r = divmod(d + diff, 2)
    assert r == 0 and 0 <= m1 <= d, (d, diff)
    return [(x, m1), (mod1(x + Frac(1, 2)), d - m1)]


def _order_three_phases(
    d: int, theta: Frac, trace: Cyclo, trace_sq: Cyclo
) -> list[tuple[Frac, int]]:
    """Same for X with X^3 = e(theta), given tr X and tr X^2."""
    y = mod1(theta) / 3
    out = []
    total = 0
    for j in range(3):
        beta = mod1(y + Frac(j, 3))
        val = (
            Cyclo.from_rational(d)
            + trace.times_root(-beta)
            + trace_sq.times_root(-2 * beta)
        )
        m3 = _as_integer(val, "eigenvalue multiplicity")
        m, r = divmod(m3, 3)
        assert r == 0 and m >= 0, (m3, j)
        out.append((beta, m))
        total += m
    assert total == d, (total, d)
    return out


def alpha_terms(W: WeilRep, l: Fraction) -> AlphaTerms:
    """The four eigenphase sums of the weight-``l`` dimension count.

    ``l`` must satisfy l + rk/2 in Z; the parity that weight-``l`` forms take
    values in is recorded in the result.
    """
    l = Frac(l)
    A = W.form
    rk = W.rk
    shifted = l + Frac(rk, 2)
    if shifted.denominator != 1:
        raise ParityViolation(
            f"weight {l} incompatible with rank residue {rk} mod 8"
        )
    parity = PLUS if int(shifted) % 2 == 0 else MINUS
    g = {d: gauss_sum_cyclo(A, d) for d in (1, 2, -2, 3, -3, -1)}
    order = A.order
    half = Frac(1, 2)

    values: dict[str, tuple[Frac, Frac, Frac, int]] = {}
    for par, sign, s in ((PLUS, 1, Frac(0)), (MINUS, -1, half)):
        d_par = W.dim(par)
        # order-4 piece: X = e(l/4) S restricted, X^2 = e(l/2) Z
        tr_s = (g[-2] + g[2] * sign) * g[1] * Frac(1, 2 * order)
        tr_x1 = tr_s.times_root(Frac(l + rk, 4))
        theta2 = Frac(l, 2) + Frac(rk, 4) + s
        phases1 = _order_two_phases(d_par, theta2, tr_x1)
        a1 = sum((m * beta for beta, m in phases1), Frac(0))
        # order-6 piece: X = e(-l/6) (ST)^{-1}, X^3 = e(-l/2) Z^{-1}
        tr_st_inv = (g[1] + g[-3] * sign) * g[1] * Frac(1, 2 * order)
        tr_x2 = tr_st_inv.times_root(Frac(-l, 6))
        tr_st_inv_sq = (g[-1] + g[3] * sign) * g[1] * Frac(1, 2 * order)
        tr_x2_sq = tr_st_inv_sq.times_root(Frac(-l, 3) + s)
        theta3 = -Frac(l, 2) - Frac(rk, 4) + s
        phases2 = _order_three_phases(d_par, theta3, tr_x2, tr_x2_sq)
        a2 = sum((m * beta for beta, m in phases2), Frac(0))
        # parabolic piece: phases of the diagonal T block, and the count of
        # orbits with q = 0 in 2Z
        reps = orbit_representatives(A, minus_only=(par == MINUS))
        a3 = sum((mod1(A.q_of(x) / 2) for x in reps), Frac(0))
        a4 = sum(1 for x in reps if A.q_of(x) == 0)
        assert a1 >= 0 and a2 >= 0 and a3 >= 0
        values[par] = (a1, a2, a3, a4)

    cd = W._counts
    assert values[PLUS][3] == cd.even_orbits_plus
    assert values[MINUS][3] == cd.even_orbits_minus
    return AlphaTerms(*values[PLUS], *values[MINUS], parity)


def dim_cusp(W: WeilRep, l: Fraction, allow_lower_bound: bool = False):
    """Exact dimension of the weight-``l`` cusp space (integral for l > 2).

    For l <= 2 the formula only bounds the dimension from below; that rational
    bound is returned as-is when ``allow_lower_bound`` is set, and rejected
    otherwise.
    """
    l = Frac(l)
    terms = alpha_terms(W, l)
    d = W.dim(terms.parity)
    value = d + Frac(d) * l / 12 - terms.total()
    if l <= 2:
        if allow_lower_bound:
            return value
        raise InputInvalid(f"weight {l} <= 2: dimension formula is only a bound")
    if value.denominator != 1:
        raise NonIntegralDimension(
            f"dimension formula gave {value} at weight {l}"
        )
    dim = int(value)
    assert dim >= 0, (dim, l)
    return dim


def bruinier_bounds(
    A: FiniteQuadraticForm, parity: str
) -> tuple[SymbolicReal, SymbolicReal]:
    """Upper bounds d/4 + sqrt|G2|/4 and d/3 + (1 + sqrt|G3|)/(3 sqrt 3)."""
    cd = counts(A)
    d = cd.plus_dim if parity == PLUS else cd.minus_dim
    s2, m2 = squarefree_decompose(cd.two_torsion)
    bound1 = SymbolicReal.from_rational(Frac(d, 4)) + SymbolicReal.monomial(
        Frac(s2, 4), 0, m2
    )
    # (1 + sqrt g3) / (3 sqrt 3) = sqrt(3)/9 + sqrt(3 g3)/9
    s3, m3 = squarefree_decompose(3 * cd.three_torsion)
    bound2 = (
        SymbolicReal.from_rational(Frac(d, 3))
        + SymbolicReal.monomial(Frac(1, 9), 0, 3)
        + SymbolicReal.monomial(Frac(s3, 9), 0, m3)
    )
    return bound1, bound2


def alpha_minus_closed(A: FiniteQuadraticForm, rk: int, l: Fraction) -> tuple[Frac, Frac]:
    """Closed Gauss-sum expressions for the two minus-block eigenphase sums.

    Independent of the trace recursion in :func:`alpha_terms`; used as a
    cross-check.  Both values are provably rational and returned exactly.

    Valid exactly on the weights whose forms take values in the minus block
    (l + rk/2 odd); elsewhere the phase e(x1) leaves the real axis and the
    expressions stop describing the eigenphase sums.
    """
    l = Frac(l)
    rk = rk % 8
    shifted = l + Frac(rk, 2)
    if shifted.denominator != 1 or int(shifted) % 2 == 0:
        raise ParityViolation(
            f"closed minus-block formulas need l + rk/2 odd; got l={l}, rk={rk}"
        )
    cd = counts(A)
    d_minus = Frac(cd.minus_dim)
    order = A.order
    g1 = gauss_sum_cyclo(A, 1)
    inv_sqrt = g1.times_root(Frac(rk, 8)) * Frac(1, order)  # 1/sqrt|A| exactly

    x1 = Frac(2 * l + rk + 2, 8)
    z = gauss_sum_cyclo(A, 2).times_root(x1)
    imag = (z - z.conj()).times_root(Frac(-1, 4)) * Frac(1, 2)
    term1 = imag * inv_sqrt * Frac(1, 4)
    if not term1.is_rational():
        raise AssertionError("first minus-block correction is not rational")
    a1 = d_minus / 4 + term1.rational_value()

    x2 = Frac(-4 * l - 3 * rk + 10, 24)
    w = (gauss_sum_cyclo(A, 1) - gauss_sum_cyclo(A, -3)).times_root(x2)
    real = (w + w.conj()) * Frac(1, 2)
    s3, m3 = squarefree_decompose(3 * order)
    # 1/sqrt(3|A|) = s3 * sqrt(m3) / (3|A|)
    term2 = real * sqrt_cyclo(m3) * Frac(s3, 9 * order)
    if not term2.is_rational():
        raise AssertionError("second minus-block correction is not rational")
    a2 = d_minus / 3 + term2.rational_value()
    return a1, a2


# ---------------------------------------------------------------------------
# weight scan


def min_cusp_weight(
    L: EvenLattice, require_quasi_cyclic: bool = True
) -> tuple[Frac, int] | None:
    """Smallest weight with a nonzero cusp space, within the useful range.

    The lattice must split two hyperbolic planes off an explicit basis.  The
    scan covers half-integers l with l + n/2 in Z, l > 2, and orthogonal-group
    weight k = l + n/2 - 1 in [4, n); returns (l, k) or None.

    Lifting cusp forms to the orthogonal group needs every isotropic subgroup
    of the discriminant form to be cyclic; pass ``require_quasi_cyclic=False``
    only for diagnostics.
    """
    _check_two_u_prefix(L)
    pos, neg = L.signature
    if pos != 2:
        raise InputInvalid(f"signature {L.signature} is not (2, n)")
    n = neg
    A = discriminant_form(L)
    if require_quasi_cyclic and not is_quasi_cyclic(A):
        raise NotQuasiCyclicWhenRequired(
            "cusp forms only lift when every isotropic subgroup is cyclic"
        )
    W = build_weil(A, (n - 2) % 8)
    l = Frac(5, 2) if n % 2 == 1 else Frac(3)
    limit = Frac(n, 2) + 1
    while l < limit:
        k = l + Frac(n, 2) - 1
        assert k.denominator == 1
        if int(k) >= 4 and dim_cusp(W, l) > 0:
            return l, int(k)
        l += 1
    return None
