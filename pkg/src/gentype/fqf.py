"""Finite quadratic forms on finite abelian groups.

A form is a finite abelian group A = ⊕ Z/d_i with a quadratic map
q : A -> Q/2Z whose polarization b(x, y) = (q(x+y) - q(x) - q(y))/2 mod 1 is a
nondegenerate symmetric pairing A x A -> Q/Z.  Elements are coordinate tuples
with respect to the stored (independent) generators.

Conventions
-----------
* q values are reduced into [0, 2); b values into [0, 1).
* On a cyclic group of odd prime-power order p^k, well-definedness mod 2Z
  forces q(gen) to have an even numerator over p^k; the descriptor token
  ``q(p^k,eps)`` therefore means q(gen) = 2*eps/p^k for odd p and
  q(gen) = eps/2^k for p = 2.
* ``u(k)`` / ``v(k)`` are the two even rank-2 blocks on (Z/2^k)^2 with
  b(e, f) = 1/2^k and q(e) = q(f) = 0 resp. 2/2^k.
* ``a`` / ``b`` abbreviate q(2,1) and q(2,-1) (order-2 generators with
  q = 1/2 resp. 3/2).

Everything downstream (Gauss sums, Weil data, reflective class enumeration,
quasi-cyclic reduction) works through this class.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import gcd, lcm, prod

from .errors import CapExceeded, InputInvalid, NotIsotropic
from .exactnum import (Cyclo, Frac, PhasedSqrt, factorint, mod1, mod2,
                       squarefree_decompose)
from . import intmat

DEFAULT_CAP = 4096


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


class FiniteQuadraticForm:
    """Nondegenerate finite quadratic form with fixed independent generators."""

    __slots__ = ("orders", "q", "b", "_radical_checked", "_q_cache",
                 "_den", "_qn", "_bn2")

    # q_of memoization is capped so huge groups cannot pin memory
    _Q_CACHE_LIMIT = 1 << 16

    def __init__(self, orders, q, b, check: bool = True):
        keep = [i for i, d in enumerate(orders) if d > 1]
        self.orders = tuple(int(orders[i]) for i in keep)
        self.q = tuple(mod2(Frac(q[i])) for i in keep)
        self.b = tuple(tuple(mod1(Frac(b[i][j])) for j in keep) for i in keep)
        self._radical_checked = False
        self._q_cache: dict = {}
        # integer tables over a common denominator keep evaluation exact
        # while avoiding per-term rational arithmetic
        den = 1
        for v in self.q:
            den = lcm(den, v.denominator)
        for row in self.b:
            for v in row:
                den = lcm(den, v.denominator)
        self._den = den
        self._qn = tuple(int(v * den) for v in self.q)
        self._bn2 = tuple(tuple(int(2 * v * den) for v in row) for row in self.b)
        if check:
            self._validate()

    def _validate(self):
        r = len(self.orders)
        for i in range(r):
            d = self.orders[i]
            if mod2(Frac(d * d) * self.q[i]) != 0:
                raise InputInvalid(f"q value {self.q[i]} ill-defined on Z/{d}")
            if mod1(self.b[i][i] - self.q[i]) != 0:
                raise InputInvalid("diagonal of pairing must equal q mod 1")
            for j in range(r):
                if self.b[i][j] != self.b[j][i]:
                    raise InputInvalid("pairing must be symmetric")
                if mod1(d * self.b[i][j]) != 0:
                    raise InputInvalid("pairing ill-defined for given orders")
        if self.order <= DEFAULT_CAP * 16:
            self._check_nondegenerate()

    def _check_nondegenerate(self):
        if self._radical_checked:
            return
        rad = perp(self, [tuple(1 if j == i else 0 for j in range(self.rank))
                          for i in range(self.rank)])
        if rad.order != 1:
            raise InputInvalid("degenerate quadratic form")
        self._radical_checked = True

    # -- basic structure ----------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return prod(self.orders) if self.orders else 1

    @property
    def exponent(self) -> int:
        return lcm(*self.orders) if self.orders else 1

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def is_trivial(self) -> bool:
        return not self.orders

    def elements(self):
        return itertools.product(*[range(d) for d in self.orders])

    def reduce(self, x) -> tuple[int, ...]:
        return tuple(int(c) % d for c, d in zip(x, self.orders))

    def add(self, x, y):
        return tuple((a + c) % d for a, c, d in zip(x, y, self.orders))

    def neg(self, x):
        return tuple((-a) % d for a, d in zip(x, self.orders))

    def smul(self, t: int, x):
        return tuple((t * a) % d for a, d in zip(x, self.orders))

    def order_of(self, x) -> int:
        return lcm(*[d // gcd(c, d) for c, d in zip(x, self.orders)]) if self.orders else 1

    def q_of(self, x) -> Frac:
        x = tuple(x)
        cached = self._q_cache.get(x)
        if cached is not None:
            return cached
        qn, bn2 = self._qn, self._bn2
        total = 0
        for i, xi in enumerate(x):
            if xi:
                total += xi * xi * qn[i]
                row = bn2[i]
                for j in range(i + 1, len(x)):
                    if x[j]:
                        total += xi * x[j] * row[j]
        result = Frac(total % (2 * self._den), self._den)
        if len(self._q_cache) < self._Q_CACHE_LIMIT:
            self._q_cache[x] = result
        return result

    def b_of(self, x, y) -> Frac:
        bn2 = self._bn2
        total = 0
        for i, xi in enumerate(x):
            if xi:
                row = bn2[i]
                for j, yj in enumerate(y):
                    if yj:
                        total += xi * yj * row[j]
        return Frac(total % (2 * self._den), 2 * self._den)

    def invariant_factors(self) -> tuple[int, ...]:
        """Group invariant factors d_1 | d_2 | ... (ascending)."""
        slots: dict[int, list[int]] = {}
        for d in self.orders:
            for p, e in factorint(d).items():
                slots.setdefault(p, []).append(p**e)
        depth = max((len(v) for v in slots.values()), default=0)
        out = []
        for i in range(depth):
            f = 1
            for p, v in slots.items():
                v_sorted = sorted(v, reverse=True)
                if i < len(v_sorted):
                    f *= v_sorted[i]
            out.append(f)
        return tuple(sorted(out))

    # -- constructions ------------------------------------------------------

    def direct_sum(self, other: "FiniteQuadraticForm") -> "FiniteQuadraticForm":
        r1, r2 = self.rank, other.rank
        orders = self.orders + other.orders
        q = self.q + other.q
        b = [[Frac(0)] * (r1 + r2) for _ in range(r1 + r2)]
        for i in range(r1):
            for j in range(r1):
                b[i][j] = self.b[i][j]
        for i in range(r2):
            for j in range(r2):
                b[r1 + i][r1 + j] = other.b[i][j]
        return FiniteQuadraticForm(orders, q, b, check=False)

    def p_part(self, p: int) -> tuple["FiniteQuadraticForm", list[tuple[int, ...]]]:
        """The p-primary part, plus its generators as elements of self."""
        gens = []
        orders = []
        for i, d in enumerate(self.orders):
            v = 0
            dd = d
            while dd % p == 0:
                dd //= p
                v += 1
            if v:
                g = [0] * self.rank
                g[i] = dd * pow(dd, -1, p**v) % d if dd > 1 else 1
                # dd * inv(dd) = 1 mod p^v keeps q-values aligned with the
                # idempotent splitting; order of g is exactly p^v.
                gens.append(tuple(g))
                orders.append(p**v)
        q = [self.q_of(g) for g in gens]
        b = [[self.b_of(g, h) for h in gens] for g in gens]
        return FiniteQuadraticForm(orders, q, b, check=False), gens

    @staticmethod
    def trivial() -> "FiniteQuadraticForm":
        return FiniteQuadraticForm((), (), ())

    @staticmethod
    def cyclic(n: int, qgen: Frac) -> "FiniteQuadraticForm":
        return FiniteQuadraticForm((n,), (qgen,), ((mod1(Frac(qgen)),),))

    @staticmethod
    def from_descriptor(text: str) -> "FiniteQuadraticForm":
        """Parse tokens like ``u(1)+v(2)+q(9,2)+a+b`` (whitespace ignored)."""
        form = FiniteQuadraticForm.trivial()
        s = text.replace(" ", "")
        if not s:
            raise InputInvalid("empty descriptor")
        for token in s.split("+"):
            m = re.fullmatch(r"q\((\d+),(-?\d+)\)", token)
            if m:
                n, eps = int(m.group(1)), int(m.group(2))
                fac = factorint(n)
                if len(fac) != 1:
                    raise InputInvalid(f"q() wants a prime power, got {n}")
                [(p, _)] = fac.items()
                if gcd(eps, p) != 1:
                    raise InputInvalid(f"eps must be a unit at {p}: {token}")
                qgen = Frac(eps, n) if p == 2 else Frac(2 * eps, n)
                form = form.direct_sum(FiniteQuadraticForm.cyclic(n, mod2(qgen)))
                continue
            m = re.fullmatch(r"([uv])\((\d+)\)", token)
            if m:
                kind, k = m.group(1), int(m.group(2))
                n = 2**k
                qq = Frac(0) if kind == "u" else Frac(2, n)
                blk = FiniteQuadraticForm(
                    (n, n), (qq, qq),
                    ((mod1(qq), Frac(1, n)), (Frac(1, n), mod1(qq))))
                form = form.direct_sum(blk)
                continue
            if token == "a":
                form = form.direct_sum(FiniteQuadraticForm.cyclic(2, Frac(1, 2)))
                continue
            if token == "b":
                form = form.direct_sum(FiniteQuadraticForm.cyclic(2, Frac(3, 2)))
                continue
            raise InputInvalid(f"bad descriptor token: {token!r}")
        return form

    def __repr__(self):
        if not self.orders:
            return "FQF(trivial)"
        bits = ", ".join(f"Z/{d}: q={q}" for d, q in zip(self.orders, self.q))
        return f"FQF({bits})"


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True)
class Subgroup:
    form: FiniteQuadraticForm
    gens: tuple[tuple[int, ...], ...]
    gen_orders: tuple[int, ...]

    @property
    def order(self) -> int:
        return prod(self.gen_orders) if self.gen_orders else 1

    def elements(self) -> frozenset:
        A = self.form
        out = {A.zero}
        for g, d in zip(self.gens, self.gen_orders):
            out = {A.add(x, A.smul(t, g)) for x in out for t in range(d)}
        return frozenset(out)

    def is_isotropic(self) -> bool:
        A = self.form
        for i, g in enumerate(self.gens):
            if A.q_of(g) != 0:
                return False
            for h in self.gens[i + 1:]:
                if A.b_of(g, h) != 0:
                    return False
        return True


def subgroup_from_generators(A: FiniteQuadraticForm, raw_gens) -> Subgroup:
    """Canonical independent generators for the subgroup they span."""
    r = A.rank
    if r == 0 or not raw_gens:
        return Subgroup(A, (), ())
    cols = [list(g) for g in raw_gens]
    lattice_rows = cols + [[A.orders[i] if j == i else 0 for j in range(r)]
                           for i in range(r)]
    basis = intmat.hnf_rows(lattice_rows)  # r rows, full rank
    assert len(basis) == r
    # relations diag(d) expressed in the basis
    p_t = intmat.transpose(basis)
    rel = []
    for i in range(r):
        e = [A.orders[i] if j == i else 0 for j in range(r)]
        sol = intmat.solve_fraction(p_t, e)
        assert all(x.denominator == 1 for x in sol)
        rel.append([int(x) for x in sol])
    y = intmat.transpose(rel)  # columns are relation vectors in basis coords
    u, s, _ = intmat.snf_with_transforms(y)
    uinv = intmat.invert_unimodular(u)
    gens = []
    gorders = []
    for i in range(r):
        di = s[i][i]
        if di > 1:
            vec = [sum(basis[t][j] * uinv[t][i] for t in range(r)) for j in range(r)]
            gens.append(A.reduce(vec))
            gorders.append(di)
    return Subgroup(A, tuple(gens), tuple(gorders))


def perp(A: FiniteQuadraticForm, gens) -> Subgroup:
    """Orthogonal complement subgroup {x : b(x, g) = 0 for all g}."""
    r = A.rank
    gens = [A.reduce(g) for g in gens]
    gens = [g for g in gens if g != A.zero] or []
    if r == 0:
        return Subgroup(A, (), ())
    if not gens:
        return subgroup_from_generators(
            A, [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)])
    rows = []
    for g in gens:
        rows.append([A.b_of(tuple(1 if t == j else 0 for t in range(r)), g)
                     for j in range(r)])
    m = lcm(*[f.denominator for row in rows for f in row], 1)
    c = [[int(f * m) for f in row] for row in rows]
    u, s, v = intmat.snf_with_transforms(c)
    nrows = len(c)
    scale = []
    for j in range(r):
        if j < nrows and s[j][j]:
            scale.append(m // gcd(s[j][j], m))
        else:
            scale.append(1)
    sol_gens = [tuple(v[t][j] * scale[j] for t in range(r)) for j in range(r)]
    return subgroup_from_generators(A, sol_gens)


def perp_lattice(A: FiniteQuadraticForm, gens):
    """Integer lattice (column basis) of lifts of perp(A, gens)."""
    r = A.rank
    sub = perp(A, gens)
    cols = [list(g) for g in sub.gens]
    cols += [[A.orders[i] if j == i else 0 for j in range(r)] for i in range(r)]
    basis_rows = intmat.hnf_rows(cols)
    assert len(basis_rows) == r
    return intmat.transpose(basis_rows)  # columns form the basis


def subgroup_form(A: FiniteQuadraticForm, sub: Subgroup,
                  check: bool = False) -> FiniteQuadraticForm:
    """The (possibly degenerate) form restricted to a subgroup."""
    q = [A.q_of(g) for g in sub.gens]
    b = [[A.b_of(g, h) for h in sub.gens] for g in sub.gens]
    return FiniteQuadraticForm(sub.gen_orders, q, b, check=check)


def quotient_form(A: FiniteQuadraticForm, sub: Subgroup
                  ) -> tuple[FiniteQuadraticForm, list[tuple[int, ...]]]:
    """The induced form on perp(sub)/sub for isotropic sub.

    Returns the quotient form together with lifts (elements of A) of its
    generators.
    """
    if not sub.is_isotropic():
        raise NotIsotropic("quotient requires an isotropic subgroup")
    r = A.rank
    if r == 0 or sub.order == 1:
        gens = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
        return A, gens
    p = perp_lattice(A, sub.gens)
    cols = [list(g) for g in sub.gens]
    cols += [[A.orders[i] if j == i else 0 for j in range(r)] for i in range(r)]
    x = []
    for col in cols:
        sol = intmat.solve_fraction(p, col)
        assert all(f.denominator == 1 for f in sol), "sub not inside perp"
        x.append([int(f) for f in sol])
    xmat = intmat.transpose(x)
    u, s, _ = intmat.snf_with_transforms(xmat)
    uinv = intmat.invert_unimodular(u)
    gens = []
    gorders = []
    for i in range(r):
        di = s[i][i]
        assert di != 0
        if di > 1:
            vec = [sum(p[j][t] * uinv[t][i] for t in range(r)) for j in range(r)]
            gens.append(A.reduce(vec))
            gorders.append(di)
    q = [A.q_of(g) for g in gens]
    b = [[A.b_of(g, h) for h in gens] for g in gens]
    out = FiniteQuadraticForm(gorders, q, b, check=False)
    assert out.order * sub.order * sub.order == A.order
    return out, gens


# ---------------------------------------------------------------------------
# counting data


@dataclass(frozen=True)
class CountData:
    """Element counts entering the dimension formula.

    plus_dim / minus_dim: orbit counts of {x, -x} classes (all classes /
    classes with 2x != 0); even_orbits_*: those classes with q = 0 mod 2Z.
    """

    plus_dim: int
    minus_dim: int
    even_orbits_plus: int
    even_orbits_minus: int
    two_torsion: int
    three_torsion: int


def counts(A: FiniteQuadraticForm) -> CountData:
    t2 = prod(gcd(2, d) for d in A.orders) if A.orders else 1
    t3 = prod(gcd(3, d) for d in A.orders) if A.orders else 1
    n = A.order
    plus = (n + t2) // 2
    minus = (n - t2) // 2
    even_fixed = 0
    even_free_pairs = 0
    seen_even = 0
    for x in A.elements():
        if A.q_of(x) == 0:
            seen_even += 1
            if A.neg(x) == x:
                even_fixed += 1
    even_free_pairs = (seen_even - even_fixed) // 2
    return CountData(plus, minus, even_fixed + even_free_pairs,
                     even_free_pairs, t2, t3)


def orbit_representatives(A: FiniteQuadraticForm, minus_only: bool = False):
    """Canonical representatives of {x, -x} classes (min of the pair)."""
    reps = []
    for x in A.elements():
        nx = A.neg(x)
        if x <= nx:
            if minus_only and nx == x:
                continue
            reps.append(x)
    return reps


# ---------------------------------------------------------------------------
# Gauss sums and signature


def torsion_elements(A: FiniteQuadraticForm, d: int):
    """Elements killed by d."""
    ranges = []
    for di in A.orders:
        step = di // gcd(d, di)
        ranges.append(range(0, di, step))
    return itertools.product(*ranges)


def gauss_sum_cyclo(A: FiniteQuadraticForm, d: int) -> Cyclo:
    """sum over A of e(d q(x) / 2), as an exact cyclotomic number."""
    total = Cyclo.zero()
    for x in A.elements():
        total = total + Cyclo.root(Frac(d, 1) * A.q_of(x) / 2)
    return total


def gauss_sum_radical(A: FiniteQuadraticForm, d: int) -> PhasedSqrt:
    """Gauss sum as c*sqrt(m)*e(j/8), verified exactly.

    Works one primary part at a time (the sum is multiplicative over
    orthogonal splittings), so supports stay linear in the part sizes.
    """
    out = PhasedSqrt(Frac(1), 1, 0)
    for p in factorint(A.order):
        ap, _ = A.p_part(p)
        t = gauss_sum_cyclo(ap, d)
        # |T|^2 = |A_p| * sum over the d-torsion of e(d q / 2)
        small = Cyclo.zero()
        for z in torsion_elements(ap, d):
            small = small + Cyclo.root(Frac(d, 1) * ap.q_of(z) / 2)
        mag2 = (small * ap.order).rational_value()
        assert mag2.denominator == 1 and mag2 >= 0
        if mag2 == 0:
            assert t.is_zero()
            return PhasedSqrt.zero()
        s, m = squarefree_decompose(int(mag2))
        for j in range(8):
            cand = PhasedSqrt(Frac(s), m, j)
            if (t - cand.to_cyclo()).is_zero():
                out = out * cand
                break
        else:
            raise AssertionError("gauss sum did not reduce to c*sqrt(m)*e(j/8)")
    return out


def signature_mod_8(A: FiniteQuadraticForm) -> int:
    """Signature residue: sum e(q/2) = sqrt(|A|) e(sig/8)."""
    g = gauss_sum_radical(A, 1)
    assert g.abs_squared() == A.order, "total Gauss sum magnitude must be sqrt|A|"
    return g.eighth


# ---------------------------------------------------------------------------
# orthogonal group


def orthogonal_group(A: FiniteQuadraticForm, cap: int = DEFAULT_CAP,
                     max_nodes: int = 2_000_000):
    """All automorphisms preserving q, as tuples of generator images."""
    if A.order > cap:
        raise CapExceeded(f"|A| = {A.order} exceeds cap {cap}")
    r = A.rank
    if r == 0:
        return [()]
    cands: list[list[tuple[int, ...]]] = []
    for i in range(r):
        di, qi = A.orders[i], A.q[i]
        cands.append([x for x in A.elements()
                      if A.order_of(x) == di and A.q_of(x) == qi])
    results = []
    nodes = 0
    diag_rel = [[A.orders[i] if j == i else 0 for j in range(r)] for i in range(r)]

    def surjective(images) -> bool:
        rows = [list(g) for g in images] + diag_rel
        basis = intmat.hnf_rows(rows)
        det = 1
        for i, row in enumerate(basis):
            det *= row[i] if i < len(row) else 0
        return abs(det) == 1

    def extend(level, chosen):
        nonlocal nodes
        if level == r:
            if surjective(chosen):
                results.append(tuple(chosen))
            return
        for x in cands[level]:
            nodes += 1
            if nodes > max_nodes:
                raise CapExceeded("automorphism search exceeded node budget")
            ok = True
            for j in range(level):
                if A.b_of(x, chosen[j]) != A.b[level][j]:
                    ok = False
                    break
            if ok:
                chosen.append(x)
                extend(level + 1, chosen)
                chosen.pop()

    extend(0, [])
    results.sort()
    return results


def apply_aut(A: FiniteQuadraticForm, images, x):
    out = A.zero
    for xi, img in zip(x, images):
        if xi:
            out = A.add(out, A.smul(xi, img))
    return out


def orbits(A: FiniteQuadraticForm, auts, elems):
    """Partition elems into orbits under the listed automorphisms."""
    remaining = set(elems)
    parts = []
    while remaining:
        seed = min(remaining)
        orbit = {seed}
        frontier = [seed]
        while frontier:
            x = frontier.pop()
            for im in auts:
                y = apply_aut(A, im, x)
                if y in remaining and y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        remaining -= orbit
        parts.append(frozenset(orbit))
    return parts


def is_isometric(A: FiniteQuadraticForm, B: FiniteQuadraticForm,
                 cap: int = DEFAULT_CAP, max_nodes: int = 2_000_000) -> bool:
    """Whether two finite quadratic forms are isometric (brute search).

    Cheap invariants first (order, invariant factors, the multiset of
    (element order, q-value) pairs), then a backtracking search for a
    q-preserving isomorphism, mapping generators of A to candidates in B
    with matching order and q, checking bilinear compatibility pairwise and
    surjectivity at the leaves.
    """
    if A.order != B.order:
        return False
    if A.order > cap:
        raise CapExceeded(f"|A| = {A.order} exceeds cap {cap}")
    if A.invariant_factors() != B.invariant_factors():
        return False
    profile_a = sorted((A.order_of(x), A.q_of(x)) for x in A.elements())
    profile_b = sorted((B.order_of(y), B.q_of(y)) for y in B.elements())
    if profile_a != profile_b:
        return False
    r = A.rank
    if r == 0:
        return True
    cands: list[list[tuple[int, ...]]] = []
    for i in range(r):
        di, qi = A.orders[i], A.q[i]
        cands.append([y for y in B.elements()
                      if B.order_of(y) == di and B.q_of(y) == qi])
    rb = B.rank
    diag_rel = [[B.orders[i] if j == i else 0 for j in range(rb)]
                for i in range(rb)]
    nodes = 0

    def surjective(images) -> bool:
        rows = [list(g) for g in images] + diag_rel
        basis = intmat.hnf_rows(rows)
        det = 1
        for i, row in enumerate(basis):
            det *= row[i] if i < len(row) else 0
        return abs(det) == 1

    def extend(level, chosen) -> bool:
        nonlocal nodes
        if level == r:
            return surjective(chosen)
        for y in cands[level]:
            nodes += 1
            if nodes > max_nodes:
                raise CapExceeded("isometry search exceeded node budget")
            ok = True
            for j in range(level):
                if B.b_of(y, chosen[j]) != A.b[level][j]:
                    ok = False
                    break
            if ok:
                chosen.append(y)
                if extend(level + 1, chosen):
                    return True
                chosen.pop()
        return False

    return extend(0, [])


# ---------------------------------------------------------------------------
# isotropic subgroups (brute enumeration, capped)


def isotropic_subgroups(A: FiniteQuadraticForm, cap: int = DEFAULT_CAP):
    """All isotropic subgroups as frozensets of elements (0 included)."""
    if A.order > cap:
        raise CapExceeded(f"|A| = {A.order} exceeds cap {cap}")
    iso = [x for x in A.elements() if A.q_of(x) == 0 and x != A.zero]
    seed = frozenset({A.zero})
    seen = {seed}
    frontier = [seed]
    while frontier:
        cur = frontier.pop()
        for x in iso:
            if x in cur:
                continue
            if any(A.b_of(x, y) != 0 for y in cur):
                continue
            new = set(cur)
            for t in range(1, A.order_of(x)):
                tx = A.smul(t, x)
                for y in cur:
                    new.add(A.add(y, tx))
            fs = frozenset(new)
            if fs not in seen:
                seen.add(fs)
                frontier.append(fs)
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def _quasi_cyclic_by_subgroup_scan(A: FiniteQuadraticForm, cap: int = DEFAULT_CAP) -> bool:
    for sub in isotropic_subgroups(A, cap):
        n = len(sub)
        if n == 1:
            continue
        if not any(A.order_of(x) == n for x in sub):
            return False
    return True


def is_quasi_cyclic_brute(A: FiniteQuadraticForm, cap: int = DEFAULT_CAP) -> bool:
    """Exhaustive decision with no structure theory: scan for isotropic planes.

    Every noncyclic subgroup contains (Z/p)^2 for some prime p, and any
    subgroup of an isotropic subgroup is isotropic.  Conversely, for x, y of
    prime order p, q(x) = q(y) = q(x + y) = 0 forces b(x, y) = 0, so q then
    vanishes on all of <x, y>.  Whether every isotropic subgroup is cyclic
    therefore reduces to a scan over pairs of prime-order isotropic elements.
    """
    if A.order > cap:
        raise CapExceeded(f"|A| = {A.order} exceeds cap {cap}")
    by_prime: dict[int, list] = {}
    for x in A.elements():
        if x == A.zero or A.q_of(x) != 0:
            continue
        o = A.order_of(x)
        if factorint(o) == {o: 1}:
            by_prime.setdefault(o, []).append(x)
    for p, elems in by_prime.items():
        multiples = {x: {A.smul(t, x) for t in range(1, p)} for x in elems}
        for i, x in enumerate(elems):
            for y in elems[i + 1:]:
                if y in multiples[x]:
                    continue
                if A.q_of(A.add(x, y)) == 0:
                    return False
    return True


# ---------------------------------------------------------------------------
# quasi-cyclic classification (structural)


@dataclass(frozen=True)
class QuasiCyclicLabel:
    quasi_cyclic: bool
    p: int | None
    case: int | None
    detail: str


def _is_anisotropic(A: FiniteQuadraticForm) -> bool:
    for x in A.elements():
        if x != A.zero and A.q_of(x) == 0:
            return False
    return True


def classify_quasi_cyclic(A: FiniteQuadraticForm) -> QuasiCyclicLabel:
    """Decide whether every isotropic subgroup of a primary form is cyclic.

    The decision is structural (no subgroup enumeration): split a maximal
    cyclic summand where one exists and inspect the complement, fall back to
    the short catalogue for 2-elementary forms.
    """
    if A.is_trivial():
        return QuasiCyclicLabel(True, None, 2, "trivial")
    primes = {next(iter(factorint(d))) for d in A.orders}
    assert len(primes) == 1, "classify_quasi_cyclic expects a primary form"
    if any(len(factorint(d)) != 1 for d in A.orders):
        raise InputInvalid("classify_quasi_cyclic expects a primary form")
    p = primes.pop()
    k = max(factorint(d)[p] for d in A.orders)
    r = A.rank

    if p != 2:
        if k == 1:
            # p-elementary: quasi-cyclic iff the Witt index is at most 1
            m = [[int(p * A.b_of(gi, gj)) % p
                  for gj in _unit_vectors(A)] for gi in _unit_vectors(A)]
            det = intmat.det_bareiss(m) % p
            assert det != 0
            if r <= 3:
                return QuasiCyclicLabel(True, p, 2, f"elementary rank {r}")
            if r == 4:
                inv2 = pow(2, -1, p)
                dd = (det * pow(inv2, r, p)) % p
                hyper = _legendre(((-1) ** (r // 2)) * dd, p) == 1
                if not hyper:
                    return QuasiCyclicLabel(True, p, 2, "elementary rank 4, non-split")
                return QuasiCyclicLabel(False, p, None, "elementary rank 4, split")
            return QuasiCyclicLabel(False, p, None, f"elementary rank {r} >= 5")
        # k >= 2: split a unit top generator, complement must be anisotropic
        pk = p**k
        cands = [x for x in A.elements()
                 if A.order_of(x) == pk and mod1(A.q_of(x) / 2).denominator == pk]
        assert cands, "odd primary form must expose a unit-valued top generator"
        x = min(cands)
        comp = subgroup_form(A, perp(A, [x]))
        if _is_anisotropic(comp):
            return QuasiCyclicLabel(True, p, 1, f"<unit/{pk}> + anisotropic")
        return QuasiCyclicLabel(False, p, None, "top split has isotropic complement")

    # p = 2
    if k == 1:
        if r > 5:
            return QuasiCyclicLabel(False, 2, None, f"2-elementary length {r} > 5")
        ok = _quasi_cyclic_by_subgroup_scan(A, cap=64)
        return QuasiCyclicLabel(ok, 2, 3 if ok else None,
                                "2-elementary catalogue" if ok else "2-elementary, not in catalogue")
    if r > 5:
        return QuasiCyclicLabel(False, 2, None, f"2-group length {r} > 5")
    pk = 2**k
    cands = [x for x in A.elements()
             if A.order_of(x) == pk and mod1(A.q_of(x) / 2).denominator == 2 * pk]
    for x in sorted(cands):
        comp = subgroup_form(A, perp(A, [x]))
        if _is_anisotropic(comp):
            return QuasiCyclicLabel(True, 2, 1, f"<odd/{pk}> + anisotropic")
        if k == 2 and comp.exponent <= 2 and comp.rank <= 3:
            return QuasiCyclicLabel(True, 2, 2, "<odd/4> + short 2-elementary")
    return QuasiCyclicLabel(False, 2, None, "no admissible top split")


def _unit_vectors(A: FiniteQuadraticForm):
    return [tuple(1 if j == i else 0 for j in range(A.rank)) for i in range(A.rank)]


def is_quasi_cyclic(A: FiniteQuadraticForm) -> bool:
    return all(classify_quasi_cyclic(A.p_part(p)[0]).quasi_cyclic
               for p in factorint(A.order))


# ---------------------------------------------------------------------------
# quasi-cyclic reduction


def _greedy_isotropic(A: FiniteQuadraticForm, orthogonal_to, start_gens=()):
    """Greedily extend an isotropic generator list (least element first)."""
    gens = list(start_gens)

    def span(gen_list):
        out = {A.zero}
        for g in gen_list:
            cur = set(out)
            for t in range(1, A.order_of(g)):
                tg = A.smul(t, g)
                cur.update(A.add(x, tg) for x in out)
            out = cur
        return out

    while True:
        cur_span = span(gens)
        best = None
        for y in A.elements():
            if y in cur_span or A.q_of(y) != 0:
                continue
            if any(A.b_of(y, z) != 0 for z in orthogonal_to):
                continue
            if any(A.b_of(y, g) != 0 for g in gens):
                continue
            best = y
            break  # elements() is already in canonical order
        if best is None:
            return gens
        gens.append(best)


def _reduction_gens_primary(A: FiniteQuadraticForm, p: int) -> list[tuple[int, ...]]:
    """Generators (in A-coordinates of the primary part) of the reducing subgroup."""
    label = classify_quasi_cyclic(A)
    if label.quasi_cyclic:
        return []
    k = max(factorint(d)[p] for d in A.orders)
    pk = p**k
    if p != 2:
        cands = [x for x in A.elements()
                 if A.order_of(x) == pk and mod1(A.q_of(x) / 2).denominator == pk]
        x = min(cands)
        return _greedy_isotropic(A, [x])
    # p = 2
    cands = [x for x in A.elements()
             if A.order_of(x) == pk and mod1(A.q_of(x) / 2).denominator == 2 * pk]
    if cands:
        x = min(cands)
        return _greedy_isotropic(A, [x])
    if k == 1:
        # even 2-elementary: strip hyperbolic pieces until the catalogue hits
        gens: list[tuple[int, ...]] = []
        while True:
            sub = subgroup_from_generators(A, gens) if gens else None
            if gens:
                quot, _ = quotient_form(A, sub)
            else:
                quot = A
            if classify_quasi_cyclic(quot).quasi_cyclic:
                return gens
            nxt = _greedy_isotropic(A, [], start_gens=gens)
            assert len(nxt) > len(gens), "even 2-elementary reduction stalled"
            gens = gens[:] + [nxt[len(gens)]]
    # k >= 2 with even-type top scale: split off a hyperbolic-style 2^k block
    e = min(x for x in A.elements() if A.order_of(x) == pk)
    f = min(x for x in A.elements()
            if A.b_of(e, x).denominator == pk)
    block = subgroup_from_generators(A, [e, f])
    unit = Frac(1, pk)
    vval = mod2(Frac(2, pk))
    tops = sorted(x for x in block.elements()
                  if A.order_of(x) == pk and A.q_of(x) in (Frac(0), vval))
    std = None
    for e0 in tops:
        for f0 in tops:
            if A.q_of(f0) == A.q_of(e0) and A.b_of(e0, f0) == unit:
                std = (e0, f0)
                break
        if std:
            break
    assert std is not None, "even top-scale block is neither u nor v type"
    e0, f0 = std
    m = (k + 1) // 2
    x = A.smul(2**m, A.add(e0, f0))
    assert A.q_of(x) == 0
    g1 = A.add(e0, A.neg(f0))
    return _greedy_isotropic(A, [g1], start_gens=[x])


def quasi_cyclic_reduction(A: FiniteQuadraticForm) -> Subgroup:
    """An isotropic subgroup G with A/G quasi-cyclic and exponent D or D/2."""
    all_gens: list[tuple[int, ...]] = []
    for p in factorint(A.order):
        ap, embed = A.p_part(p)
        for g in _reduction_gens_primary(ap, p):
            vec = A.zero
            for gi, emb in zip(g, embed):
                if gi:
                    vec = A.add(vec, A.smul(gi, emb))
            all_gens.append(vec)
    sub = subgroup_from_generators(A, all_gens)
    from .errors import NotIsotropic
    if not sub.is_isotropic():
        raise NotIsotropic("internal: reduction subgroup must be isotropic")
    quot, _ = quotient_form(A, sub)
    assert is_quasi_cyclic(quot), "internal: reduction failed to reach quasi-cyclic"
    d_old, d_new = A.exponent, quot.exponent
    assert d_new == d_old or 2 * d_new == d_old, (d_old, d_new)
    return sub
