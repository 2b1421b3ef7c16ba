"""Even integral lattices: Gram arithmetic, discriminant forms, complements.

A lattice is stored as its Gram matrix on a fixed basis.  The discriminant
group dual/lattice is computed via Smith normal form, returning both the
abstract finite quadratic form and rational dual-basis representatives for
its generators, so that classes can be lifted to actual dual vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import intmat
from .errors import InputInvalid, NormClassMismatch, NotIsotropic
from .exactnum import mod1, mod2
from .fqf import FiniteQuadraticForm, Subgroup


class EvenLattice:
    """Nondegenerate even lattice given by an integer Gram matrix."""

    __slots__ = ("gram", "_det", "_sig", "_disc")

    def __init__(self, gram, check: bool = True):
        self.gram = tuple(tuple(int(x) for x in row) for row in gram)
        self._det = None
        self._sig = None
        self._disc = None
        if check:
            self._validate()

    def _validate(self):
        n = len(self.gram)
        for i, row in enumerate(self.gram):
            if len(row) != n:
                raise InputInvalid("Gram matrix must be square")
            if row[i] % 2 != 0:
                raise InputInvalid("even lattice needs even diagonal")
            for j in range(n):
                if row[j] != self.gram[j][i]:
                    raise InputInvalid("Gram matrix must be symmetric")
        if n and self.det == 0:
            raise InputInvalid("Gram matrix must be nondegenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        if self._det is None:
            self._det = intmat.det_bareiss([list(r) for r in self.gram]) if self.gram else 1
        return self._det

    @property
    def signature(self) -> tuple[int, int]:
        if self._sig is None:
            pos, neg, zero = intmat.inertia([list(r) for r in self.gram])
            assert zero == 0
            self._sig = (pos, neg)
        return self._sig

    def inner(self, x, y):
        total = 0
        for i, xi in enumerate(x):
            if xi:
                row = self.gram[i]
                for j, yj in enumerate(y):
                    if yj:
                        total += xi * row[j] * yj
        return total

    def norm(self, x):
        return self.inner(x, x)

    def pairing_vector(self, x):
        """gram · x (pairings of x against the basis)."""
        return [sum(self.gram[i][j] * x[j] for j in range(self.rank))
                for i in range(self.rank)]

    def direct_sum(self, other: "EvenLattice") -> "EvenLattice":
        n, m = self.rank, other.rank
        g = [[0] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                g[i][j] = self.gram[i][j]
        for i in range(m):
            for j in range(m):
                g[n + i][n + j] = other.gram[i][j]
        return EvenLattice(g, check=False)

    def __repr__(self):
        return f"EvenLattice(rank={self.rank}, det={self.det}, sig={self.signature})"


def hyperbolic_plane() -> EvenLattice:
    return EvenLattice([[0, 1], [1, 0]], check=False)


_E8_GRAM = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, -1],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, -1, 0, 0, 0, 0, 2],
]


def e8(sign: int = 1) -> EvenLattice:
    if sign not in (1, -1):
        raise InputInvalid("e8 sign must be +1 or -1")
    return EvenLattice([[sign * x for x in row] for row in _E8_GRAM], check=False)


def rank1(n: int) -> EvenLattice:
    if n == 0 or n % 2:
        raise InputInvalid("rank-1 lattice needs a nonzero even norm")
    return EvenLattice([[n]], check=False)


@dataclass(frozen=True)
class LatticeVector:
    lattice: EvenLattice
    coords: tuple[int, ...]

    @property
    def norm(self) -> int:
        return self.lattice.norm(self.coords)

    @property
    def div(self) -> int:
        pv = self.lattice.pairing_vector(self.coords)
        return gcd(*pv) if any(pv) else 0

    def is_primitive(self) -> bool:
        return gcd(*self.coords) == 1


# ---------------------------------------------------------------------------
# discriminant form


@dataclass(frozen=True)
class DiscriminantData:
    form: FiniteQuadraticForm
    dual_gens: tuple[tuple[Fraction, ...], ...]  # lattice-basis coordinates


def discriminant_data(L: EvenLattice) -> DiscriminantData:
    """A_L = L^dual / L with rational dual vectors for its generators."""
    if L._disc is not None:
        return L._disc
    r = L.rank
    if r == 0:
        data = DiscriminantData(FiniteQuadraticForm.trivial(), ())
        L._disc = data
        return data
    g = [list(row) for row in L.gram]
    u, s, _ = intmat.snf_with_transforms(g)
    uinv = intmat.invert_unimodular(u)
    gens = []
    orders = []
    for i in range(r):
        di = abs(s[i][i])
        if di > 1:
            w = [uinv[t][i] for t in range(r)]
            dual = intmat.solve_fraction(g, w)
            gens.append(tuple(dual))
            orders.append(di)
    qs = []
    bs = []
    for v in gens:
        qs.append(mod2(sum((vi * L.gram[i][j] * vj
                            for i, vi in enumerate(v) for j, vj in enumerate(v)
                            if vi and vj), Fraction(0))))
    for v in gens:
        row = []
        for w in gens:
            row.append(mod1(sum((vi * L.gram[i][j] * wj
                                 for i, vi in enumerate(v) for j, wj in enumerate(w)
                                 if vi and wj), Fraction(0))))
        bs.append(row)
    form = FiniteQuadraticForm(orders, qs, bs, check=True)
    assert form.order == abs(L.det)
    data = DiscriminantData(form, tuple(gens))
    L._disc = data
    return data


def discriminant_form(L: EvenLattice) -> FiniteQuadraticForm:
    return discriminant_data(L).form


def dual_representative(L: EvenLattice, data: DiscriminantData, x) -> tuple[Fraction, ...]:
    """Canonical dual vector for a class: coordinates reduced into [0, 1)."""
    r = L.rank
    acc = [Fraction(0)] * r
    for xi, gen in zip(x, data.dual_gens):
        if xi:
            for j in range(r):
                acc[j] += xi * gen[j]
    return tuple(f - (f.numerator // f.denominator) for f in acc)


def dual_class(L: EvenLattice, data: DiscriminantData, v) -> tuple[int, ...]:
    """The class in A_L of a dual vector v (lattice-basis Fraction coords)."""
    r = L.rank
    form = data.form
    k = form.rank
    if k == 0:
        return ()
    # integer encoding: w = gram * v must be integral for v in the dual
    w = []
    for i in range(r):
        val = sum(L.gram[i][j] * v[j] for j in range(r))
        if val.denominator != 1:
            raise InputInvalid("vector is not in the dual lattice")
        w.append(int(val))
    cols = []
    for gen in data.dual_gens:
        col = [int(sum(L.gram[i][j] * gen[j] for j in range(r))) for i in range(r)]
        cols.append(col)
    for i in range(r):
        cols.append([L.gram[t][i] for t in range(r)])
    m = intmat.transpose(cols)
    uu, ss, vv = intmat.snf_with_transforms(m)
    uw = [sum(uu[i][j] * w[j] for j in range(r)) for i in range(r)]
    ncols = len(cols)
    y = [0] * ncols
    for i in range(r):
        d = ss[i][i] if i < ncols else 0
        if d == 0:
            if uw[i] != 0:
                raise InputInvalid("class lift failed")
            continue
        if uw[i] % d:
            raise InputInvalid("class lift failed")
        y[i] = uw[i] // d
    sol = [sum(vv[i][j] * y[j] for j in range(ncols)) for i in range(ncols)]
    return form.reduce(sol[:k])


# ---------------------------------------------------------------------------
# vectors with prescribed class data


def _check_two_u_prefix(L: EvenLattice):
    if L.rank < 5:
        raise InputInvalid("expected a lattice of shape 2U + M")
    for (i, j, want) in ((0, 0, 0), (1, 1, 0), (0, 1, 1), (2, 2, 0), (3, 3, 0), (2, 3, 1)):
        if L.gram[i][j] != want:
            raise InputInvalid("leading basis vectors must form two hyperbolic planes")
    for i in (0, 1, 2, 3):
        for j in range(L.rank):
            if j not in (0, 1, 2, 3) and L.gram[i][j] != 0:
                raise InputInvalid("hyperbolic planes must split off orthogonally")
    if L.gram[0][2] or L.gram[0][3] or L.gram[1][2] or L.gram[1][3]:
        raise InputInvalid("hyperbolic planes must be mutually orthogonal")


def eichler_vector(L: EvenLattice, x, d: int, r) -> LatticeVector:
    """A primitive vector l with (l,l) = d^2 r, div(l) = d, [l/d] = x.

    L must start with two orthogonal hyperbolic planes; the vector is built
    inside the first plane plus the orthogonal rest, l = d(e + k f + m).
    """
    _check_two_u_prefix(L)
    r = Fraction(r)
    data = discriminant_data(L)
    form = data.form
    x = form.reduce(x)
    if form.order_of(x) != d:
        raise InputInvalid(f"class has order {form.order_of(x)}, expected {d}")
    if mod2(form.q_of(x) - r) != 0:
        raise NormClassMismatch(f"q(x) = {form.q_of(x)} is not r = {r} mod 2Z")
    m = dual_representative(L, data, x)
    mm = sum((m[i] * L.gram[i][j] * m[j] for i in range(L.rank)
              for j in range(L.rank) if m[i] and m[j]), Fraction(0))
    k = (r - mm) / 2
    assert k.denominator == 1, "norm-class congruence must make k integral"
    coords = []
    for j in range(L.rank):
        c = d * (m[j] + (1 if j == 0 else 0) + (k if j == 1 else 0))
        assert c.denominator == 1
        coords.append(int(c))
    vec = LatticeVector(L, tuple(coords))
    assert vec.norm == d * d * r
    assert vec.div == d
    assert vec.is_primitive()
    check = dual_class(L, data, tuple(Fraction(c, d) for c in coords))
    assert check == x, "constructed vector must represent the requested class"
    return vec


def orthogonal_complement(L: EvenLattice, vec: LatticeVector) -> EvenLattice:
    """The sublattice of vectors orthogonal to vec, on a canonical basis."""
    if vec.norm == 0 or not vec.is_primitive():
        raise InputInvalid("complement wants a primitive vector of nonzero norm")
    pv = L.pairing_vector(vec.coords)
    kern = intmat.kernel_basis([pv])
    rows = intmat.hnf_rows([list(v) for v in kern])
    gram = intmat.gram_apply([list(row) for row in L.gram], rows)
    K = EvenLattice(gram)
    assert K.rank == L.rank - 1
    assert K.det * vec.div**2 == L.det * vec.norm
    return K


def overlattice(L: EvenLattice, G: Subgroup) -> EvenLattice:
    """The even overlattice generated by L and an isotropic subgroup of A_L."""
    if not G.is_isotropic():
        raise NotIsotropic("overlattice needs an isotropic subgroup")
    data = discriminant_data(L)
    if G.form is not data.form and (G.form.orders != data.form.orders):
        raise InputInvalid("subgroup does not live in A_L")
    r = L.rank
    lifts = [dual_representative(L, data, g) for g in G.gens]
    t = 1
    for v in lifts:
        for f in v:
            t = t * f.denominator // gcd(t, f.denominator)
    rows = [[t if j == i else 0 for j in range(r)] for i in range(r)]
    for v in lifts:
        rows.append([int(f * t) for f in v])
    basis = intmat.hnf_rows(rows)
    assert len(basis) == r
    gram = [[Fraction(0)] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            val = sum(Fraction(basis[i][a], t) * L.gram[a][b] * Fraction(basis[j][b], t)
                      for a in range(r) for b in range(r)
                      if basis[i][a] and basis[j][b])
            assert val.denominator == 1, "overlattice must be integral"
            gram[i][j] = int(val)
    out = EvenLattice(gram)
    assert out.det * G.order**2 == L.det
    return out


# ---------------------------------------------------------------------------
# JSON encoding


def lattice_to_json(L: EvenLattice) -> dict:
    return {"gram": [list(row) for row in L.gram]}


def lattice_from_json(obj) -> EvenLattice:
    """Accepts {"gram": [[...]]} or {"blocks": ["U", "E8+", "E8-", "rank1:-2", ...]}."""
    if not isinstance(obj, dict):
        raise InputInvalid("lattice JSON must be an object")
    if "gram" in obj:
        gram = obj["gram"]
        if (not isinstance(gram, list) or not gram
                or any(not isinstance(row, list) for row in gram)):
            raise InputInvalid("gram must be a non-empty list of rows")
        return EvenLattice(gram)
    if "blocks" in obj:
        parts = []
        for name in obj["blocks"]:
            if not isinstance(name, str):
                raise InputInvalid("block names must be strings")
            if name == "U":
                parts.append(hyperbolic_plane())
            elif name in ("E8+", "E8"):
                parts.append(e8(1))
            elif name == "E8-":
                parts.append(e8(-1))
            elif name.startswith("rank1:"):
                try:
                    n = int(name.split(":", 1)[1])
                except ValueError:
                    raise InputInvalid(f"bad rank1 block: {name!r}") from None
                parts.append(rank1(n))
            else:
                raise InputInvalid(f"unknown block: {name!r}")
        if not parts:
            raise InputInvalid("blocks list is empty")
        out = parts[0]
        for p in parts[1:]:
            out = out.direct_sum(p)
        return out
    raise InputInvalid("lattice JSON needs 'gram' or 'blocks'")
