"""Stably reflective vector classes and the reflective obstruction sum.

A primitive vector l in an even lattice L = 2U + M of signature (2, n) is
stably reflective when the reflection in l lies in O^+(L) and acts as +-1 on
the discriminant form A_L.  Such vectors fall into five kinds, keyed by the
pair ((l, l), div(l)):

    AI   (-2, 2)    AII  (-2, 1)
    BI   (-D, D)    BII  (-D, D/2)    BIII (-2D, D)

where the B kinds occur only when A_L = Z/D + (Z/2)^m with D = exponent > 2
(D even for BI/BII; D odd, m = 0 and n even for BIII).  The branch divisor
of the modular variety attached to L is swept out by these vectors, and
certifying bigness of the relevant Q-line bundle needs an upper bound on the
sum, over branch components, of Hirzebruch-Mumford volume ratios.

By the Eichler criterion (valid because L splits two hyperbolic planes),
classes of stably reflective vectors modulo the stable orthogonal group
biject with discriminant classes x = [l / div(l)] satisfying per-kind order
and norm conditions; components of the branch divisor correspond to such
classes modulo +-1.  This module enumerates the classes, reduces them modulo
O(A_L) and +-1, and evaluates the obstruction sum in two modes:

  exact -- per orbit, build a representative vector, take its orthogonal
           complement K, and sum  |O(A_K)/+-1| / |O(A_L)/+-1| * vol(K)/vol(L)
           over the +-1-classes;
  bound -- the closed-form majorant  |A_L|^(-1/2) * sum_* e_*(n) f_*(n).

Exact mode upper-bounds the true branch-divisor sum because the stabilizer
of a component contains the stable orthogonal group of K; bound mode
majorizes exact mode kind by kind.  When a group enumeration exceeds its cap
the affected kind falls back to its closed-form bound and the result is
labeled "hybrid".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Frac
from math import factorial

from .errors import CapExceeded, InputInvalid
from .exactnum import PI, RationalInterval, int_to_str, mod2
from .fqf import (DEFAULT_CAP, FiniteQuadraticForm, orthogonal_group, orbits,
                  perp, subgroup_form, torsion_elements)
from .hmvol import bernoulli, vol_hm, zeta_interval
from .lattice import (EvenLattice, discriminant_form, eichler_vector,
                      orthogonal_complement)

KIND_AI = "AI"
KIND_AII = "AII"
KIND_BI = "BI"
KIND_BII = "BII"
KIND_BIII = "BIII"
KINDS = (KIND_AI, KIND_AII, KIND_BI, KIND_BII, KIND_BIII)


def kinds_for(n: int) -> tuple[str, ...]:
    """The kinds that can occur in signature (2, n): BIII needs n even."""
    return KINDS if n % 2 == 0 else KINDS[:4]


# ---------------------------------------------------------------------------
# class enumeration


@dataclass(frozen=True)
class ReflectiveClass:
    """One stable-orthogonal-group class of stably reflective vectors.

    ``x`` is the discriminant class of l / div(l); ``complement_orders`` are
    the invariant factors the complement's discriminant group must have, and
    ``complement_form`` pins the full expected form where the classification
    determines it (kinds AI and AII).
    """

    kind: str
    x: tuple[int, ...]
    norm: int
    div: int
    complement_orders: tuple[int, ...]
    complement_form: FiniteQuadraticForm | None = None

    @property
    def exponent_d(self) -> int:
        """The D of the B kinds (div for BI/BIII, 2*div for BII)."""
        if self.kind == KIND_BII:
            return 2 * self.div
        return self.div


def group_shape(A: FiniteQuadraticForm) -> tuple[int, int] | None:
    """(D, m) when the group is Z/D + (Z/2)^m with D = exponent > 2."""
    inv = A.invariant_factors()
    if not inv or inv[-1] <= 2:
        return None
    if any(f != 2 for f in inv[:-1]):
        return None
    return inv[-1], len(inv) - 1


def divisible_by_two(A: FiniteQuadraticForm, x) -> bool:
    """Whether x = 2y has a solution in A (componentwise on the generators)."""
    return all(xi % 2 == 0 or d % 2 == 1 for xi, d in zip(x, A.orders))


def enumerate_classes(A: FiniteQuadraticForm, n: int) -> list[ReflectiveClass]:
    """All classes of stably reflective vectors for a lattice 2U + M.

    The kind-AII class (norm -2, div 1, class 0) is always present.  Kind AI
    collects the order-2 classes with q = 3/2.  The B kinds exist only when
    the group is Z/D + (Z/2)^m with D > 2, and come with norm and divisor
    determined by D; BIII further needs D odd (hence m = 0) and n even.
    """
    out: list[ReflectiveClass] = []
    two_part = FiniteQuadraticForm.cyclic(2, Frac(1, 2))
    aii_form = two_part.direct_sum(A)
    for x in torsion_elements(A, 2):
        if A.order_of(x) == 2 and A.q_of(x) == Frac(3, 2):
            sub = perp(A, [x])
            form = subgroup_form(A, sub, check=True)
            out.append(ReflectiveClass(KIND_AI, x, -2, 2,
                                       form.invariant_factors(), form))
    out.append(ReflectiveClass(KIND_AII, A.zero, -2, 1,
                               aii_form.invariant_factors(), aii_form))
    shape = group_shape(A)
    if shape is not None:
        d_exp, m = shape
        if d_exp % 2 == 0:
            q_bi = mod2(Frac(-1, d_exp))
            q_bii = mod2(Frac(-4, d_exp))
            for x in A.elements():
                if A.order_of(x) == d_exp and A.q_of(x) == q_bi:
                    out.append(ReflectiveClass(KIND_BI, x, -d_exp, d_exp,
                                               (2,) * m))
                elif (A.order_of(x) == d_exp // 2 and A.q_of(x) == q_bii
                      and divisible_by_two(A, x)):
                    out.append(ReflectiveClass(KIND_BII, x, -d_exp, d_exp // 2,
                                               (2,) * (m + 2)))
        elif m == 0 and n % 2 == 0:
            q_biii = mod2(Frac(-2, d_exp))
            for x in A.elements():
                if A.order_of(x) == d_exp and A.q_of(x) == q_biii:
                    out.append(ReflectiveClass(KIND_BIII, x, -2 * d_exp, d_exp,
                                               (2,)))
    out.sort(key=lambda c: (KINDS.index(c.kind), c.x))
    return out


# ---------------------------------------------------------------------------
# orbit reduction


@dataclass(frozen=True)
class OrbitData:
    """One O(A_L)-orbit of reflective classes, with the +-1 bookkeeping.

    ``signed_count`` is the number of {x, -x} pairs the orbit contains; the
    negation acts freely on the orbit unless its elements are 2-torsion, in
    which case every class is self-paired.  ``delta`` records the doubling
    flag (2 exactly for kind BII with D = 4, where all classes are fixed by
    negation) for reporting and cross-checks.
    """

    rep: ReflectiveClass
    size: int
    signed_count: int
    delta: int


def orbit_reduce(A: FiniteQuadraticForm, classes, auts) -> list[OrbitData]:
    """Partition classes (of one or more kinds) into O(A_L)-orbits."""
    out: list[OrbitData] = []
    by_kind: dict[str, list[ReflectiveClass]] = {}
    for c in classes:
        by_kind.setdefault(c.kind, []).append(c)
    for kind in KINDS:
        kind_classes = by_kind.get(kind)
        if not kind_classes:
            continue
        lookup = {c.x: c for c in kind_classes}
        parts = orbits(A, auts, list(lookup))
        for part in sorted(parts, key=min):
            rep = lookup[min(part)]
            fixed = sum(1 for x in part if A.neg(x) == x)
            assert fixed in (0, len(part)), \
                "negation must act freely or trivially on each orbit"
            signed = (len(part) + fixed) // 2
            delta = 2 if kind == KIND_BII and rep.exponent_d == 4 else 1
            out.append(OrbitData(rep, len(part), signed, delta))
    return out


# ---------------------------------------------------------------------------
# counting and volume bound functions


def bound_e(kind: str, n: int) -> int:
    """Upper bound for the per-kind orbit sum of +-1-group-order ratios."""
    if n < 3:
        raise InputInvalid(f"need n >= 3, got {n}")
    if kind == KIND_AI:
        return 9
    if kind == KIND_AII:
        return 2 ** (n - 2)
    if kind == KIND_BI:
        return 9
    if kind == KIND_BII:
        return 2 ** (n + 6)
    if kind == KIND_BIII:
        return 1
    raise InputInvalid(f"unknown kind {kind!r}")


def _half_power(base: int, half_exponent: int) -> RationalInterval:
    """base**(half_exponent / 2) as a sharp interval, any sign of exponent."""
    whole, rem = divmod(half_exponent, 2)
    out = RationalInterval.exact(Frac(base) ** whole)
    if rem:
        out = out * RationalInterval.exact(base).sqrt()
    return out


def _odd_core(n: int) -> RationalInterval:
    s = (n + 1) // 2
    coef = Frac(factorial(s)) / abs(bernoulli(n + 1))
    return PI ** ((7 - n) // 2) * RationalInterval.exact(coef) * zeta_interval(s)


def _even_core(n: int) -> RationalInterval:
    s = n // 2
    return PI ** (s + 5) * RationalInterval.exact(Frac(1, factorial(s))) \
        * zeta_interval(s + 1)


def _volume_factor_a(n: int) -> RationalInterval:
    if n % 2:
        return _half_power(2, n - 4) * _odd_core(n)
    return RationalInterval.exact(Frac(2) ** (n // 2 - 3)) * _even_core(n)


def _volume_factor_b(n: int) -> RationalInterval:
    if n % 2:
        return RationalInterval.exact(Frac(2) ** (n - 4)) * _odd_core(n)
    return RationalInterval.exact(Frac(2) ** (n - 5)) * _even_core(n)


def bound_g(kind: str, n: int) -> RationalInterval:
    """Type-B volume-ratio factor before the D**(-n/2) * 2**omega(D) part."""
    if n < 3:
        raise InputInvalid(f"need n >= 3, got {n}")
    if kind == KIND_BI:
        return _volume_factor_b(n)
    if kind == KIND_BII:
        return RationalInterval.exact(Frac(64, 3)) * _volume_factor_b(n)
    if kind == KIND_BIII:
        if n % 2:
            raise InputInvalid("kind BIII exists only for even n")
        return RationalInterval.exact(Frac(2) ** (1 - n // 2)) \
            * _volume_factor_b(n)
    raise InputInvalid(f"no g-factor for kind {kind!r}")


def bound_f(kind: str, n: int) -> RationalInterval:
    """Per-class volume-ratio bound: vol(K)/vol(L) < f_*(n) / sqrt|A_L|."""
    if n < 3:
        raise InputInvalid(f"need n >= 3, got {n}")
    if kind == KIND_AI:
        return _volume_factor_a(n)
    if kind == KIND_AII:
        return RationalInterval.exact(Frac(64, 3)) * _volume_factor_a(n)
    if kind in (KIND_BI, KIND_BII, KIND_BIII):
        return _half_power(3, 2 - n) * bound_g(kind, n)
    raise InputInvalid(f"unknown kind {kind!r}")


def universal_bound_sum(n: int) -> RationalInterval:
    """sum over kinds of e_*(n) * f_*(n), the form-independent majorant."""
    total = RationalInterval.exact(0)
    for kind in kinds_for(n):
        total = total + RationalInterval.exact(bound_e(kind, n)) * bound_f(kind, n)
    return total


def inverse_sqrt(order: int) -> RationalInterval:
    """Sharp interval around 1 / sqrt(order)."""
    return RationalInterval.exact(Frac(1, order)).sqrt()


# ---------------------------------------------------------------------------
# obstruction sum


@dataclass(frozen=True)
class OrbitContribution:
    """Exact data for one +-1-reduced orbit in the obstruction sum."""

    rep: ReflectiveClass
    orbit_size: int
    signed_count: int
    delta: int
    group_ratio: Frac
    volume_ratio: Frac
    complement_det: int

    @property
    def value(self) -> Frac:
        return self.signed_count * self.group_ratio * self.volume_ratio


@dataclass(frozen=True)
class KindReport:
    """Per-kind slice of the obstruction sum.

    mode "exact": ``orbit_sum`` is the sum of signed_count * group_ratio
    (the quantity bounded by e_*(n)) and ``contribution`` is exact.
    mode "bound": contribution is e_*(n) * f_*(n) / sqrt|A_L|.
    mode "empty": the kind has no classes; contribution is exactly zero.
    """

    kind: str
    mode: str
    class_count: int
    orbit_count: int | None
    orbit_sum: Frac | None
    contribution: RationalInterval
    orbits: tuple[OrbitContribution, ...] = ()


_SOUNDNESS = {
    "exact": ("per-orbit terms use the stable orthogonal group of each "
              "complement in place of the full component stabilizer, so the "
              "total is an upper bound for the branch-divisor sum"),
    "hybrid": ("per-orbit terms use the stable orthogonal group of each "
               "complement in place of the full component stabilizer, and "
               "kinds over the enumeration cap use closed-form bounds, so "
               "the total is an upper bound for the branch-divisor sum"),
    "bound": ("closed-form majorant of the branch-divisor sum; no "
              "enumeration performed"),
}


@dataclass(frozen=True)
class ObstructionResult:
    """The reflective obstruction sum with its per-kind breakdown."""

    mode: str
    total: RationalInterval
    n: int
    det_size: int
    volume: Frac | None
    kinds: tuple[KindReport, ...]
    warnings: tuple[str, ...]

    def to_json(self) -> dict:
        def frac(x):
            if x is None:
                return None
            return f"{int_to_str(x.numerator)}/{int_to_str(x.denominator)}"

        def interval(iv):
            return {"lower": frac(iv.lo), "upper": frac(iv.hi)}

        kinds = []
        for rep in self.kinds:
            entry = {
                "kind": rep.kind,
                "mode": rep.mode,
                "class_count": rep.class_count,
                "orbit_count": rep.orbit_count,
                "orbit_sum": frac(rep.orbit_sum),
                "contribution": interval(rep.contribution),
            }
            if rep.orbits:
                entry["orbits"] = [{
                    "class": list(o.rep.x),
                    "norm": o.rep.norm,
                    "div": o.rep.div,
                    "orbit_size": o.orbit_size,
                    "signed_count": o.signed_count,
                    "delta": o.delta,
                    "group_ratio": frac(o.group_ratio),
                    "volume_ratio": frac(o.volume_ratio),
                    "complement_det": o.complement_det,
                } for o in rep.orbits]
            kinds.append(entry)
        return {
            "mode": self.mode,
            "soundness": _SOUNDNESS[self.mode],
            "total": interval(self.total),
            "n": self.n,
            "discriminant_order": self.det_size,
            "volume": frac(self.volume),
            "kinds": kinds,
            "warnings": list(self.warnings),
        }


def _pm_order(A: FiniteQuadraticForm, group_order: int) -> int:
    """|O(A)/+-1|: negation is the identity exactly on 2-elementary groups."""
    return group_order // 2 if A.exponent > 2 else group_order


def _bound_report(kind: str, n: int, inv_sqrt: RationalInterval,
                  class_count: int = -1) -> KindReport:
    contribution = RationalInterval.exact(bound_e(kind, n)) \
        * bound_f(kind, n) * inv_sqrt
    return KindReport(kind, "bound", class_count, None, None, contribution)


def obstruction_sum(L: EvenLattice, mode: str = "auto",
                    cap: int = DEFAULT_CAP) -> ObstructionResult:
    """Upper bound for the branch-divisor volume sum of L = 2U + M.

    mode "bound" evaluates the closed-form majorant; "exact"/"auto" attempt
    the per-orbit exact sum, falling back kind by kind (with a warning) to
    the closed form whenever a group enumeration exceeds the cap.  The total
    is always a rigorous upper bound; exact contributions are exact
    rationals, so the interval is a point unless some kind fell back.
    """
    if mode not in ("auto", "exact", "bound"):
        raise InputInvalid(f"unknown mode {mode!r}")
    pos, n = L.signature
    if pos != 2:
        raise InputInvalid(f"signature {L.signature} is not (2, n)")
    if n < 3:
        raise InputInvalid(f"need n >= 3, got {n}")
    A = discriminant_form(L)
    det_size = A.order
    inv_sqrt = inverse_sqrt(det_size)
    warnings: list[str] = []

    auts = None
    if mode == "bound":
        pass
    elif det_size > cap:
        warnings.append(
            f"discriminant group order {det_size} exceeds cap {cap}; "
            "using the closed-form bound")
    else:
        try:
            auts = orthogonal_group(A, cap=cap)
        except CapExceeded as exc:
            warnings.append(f"{exc}; using the closed-form bound")

    if auts is None:
        reports = tuple(_bound_report(kind, n, inv_sqrt)
                        for kind in kinds_for(n))
        total = RationalInterval.exact(0)
        for rep in reports:
            total = total + rep.contribution
        return ObstructionResult("bound", total, n, det_size, None,
                                 reports, tuple(warnings))

    o_l_pm = _pm_order(A, len(auts))
    vol_l = vol_hm(L)
    classes = enumerate_classes(A, n)
    reports: list[KindReport] = []
    total = RationalInterval.exact(0)
    hybrid = False
    for kind in kinds_for(n):
        kind_classes = [c for c in classes if c.kind == kind]
        if not kind_classes:
            reports.append(KindReport(kind, "empty", 0, 0, Frac(0),
                                      RationalInterval.exact(0)))
            continue
        try:
            contribs = []
            orbit_sum = Frac(0)
            value = Frac(0)
            for od in orbit_reduce(A, kind_classes, auts):
                rep = od.rep
                vec = eichler_vector(L, rep.x, rep.div,
                                     Frac(rep.norm, rep.div ** 2))
                K = orthogonal_complement(L, vec)
                AK = discriminant_form(K)
                if AK.invariant_factors() != rep.complement_orders:
                    raise InputInvalid(
                        f"{kind}: complement group {AK.invariant_factors()} "
                        f"does not match the classification "
                        f"{rep.complement_orders}")
                o_k_pm = _pm_order(AK, len(orthogonal_group(AK, cap=cap)))
                group_ratio = Frac(o_k_pm, o_l_pm)
                volume_ratio = vol_hm(K) / vol_l
                orbit_sum += od.signed_count * group_ratio
                value += od.signed_count * group_ratio * volume_ratio
                contribs.append(OrbitContribution(
                    rep, od.size, od.signed_count, od.delta,
                    group_ratio, volume_ratio, abs(K.det)))
            reports.append(KindReport(kind, "exact", len(kind_classes),
                                      len(contribs), orbit_sum,
                                      RationalInterval.exact(value),
                                      tuple(contribs)))
            total = total + RationalInterval.exact(value)
        except CapExceeded as exc:
            hybrid = True
            warnings.append(f"{kind}: {exc}; "
                            "falling back to the closed-form bound")
            report = _bound_report(kind, n, inv_sqrt, len(kind_classes))
            reports.append(report)
            total = total + report.contribution
    label = "hybrid" if hybrid else "exact"
    return ObstructionResult(label, total, n, det_size, vol_l,
                             tuple(reports), tuple(warnings))
