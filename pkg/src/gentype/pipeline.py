"""End-to-end certification and range scans.

certify() decides whether the orthogonal modular variety attached to
L = 2U + M (signature (2, n)) is of general type by combining three
exact-arithmetic steps:

  1. existence of a cusp form of some admissible weight l < n/2 + 1 for the
     Weil representation of the discriminant form (exact dimension formula),
     splitting n = k + a with k = n/2 - 1 + l and a = n - k >= 1;
  2. an upper bound S for the reflective obstruction sum (exact per-orbit
     volume ratios under the enumeration cap, closed-form bounds otherwise);
  3. the bigness test  S < (1 + 1/a)^(1-n) * 2a/n,  which makes the relevant
     Q-divisor big and hence the variety of general type.

Since the test's right-hand side is strictly increasing in a, the smallest
weight carrying a cusp form (the largest a) is the best division; searching
the weights in increasing order therefore certifies exactly when some
admissible division does.

Every certificate is self-contained JSON with exact fraction strings and can
be re-validated without re-running the pipeline.  range_scan() evaluates the
lattice-free variant: per n, the least discriminant-group order whose square
root beats the closed-form obstruction bound while the worst-case form of
the dimension bound still guarantees a cusp form; where that order is 1 the
certification is universal for the signature.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction as Frac
from math import floor

from .errors import InputInvalid
from .exactnum import RationalInterval, int_to_str, str_to_int
from .fqf import DEFAULT_CAP, is_quasi_cyclic, quasi_cyclic_reduction
from .lattice import (EvenLattice, _check_two_u_prefix, discriminant_form,
                      hyperbolic_plane, lattice_from_json, overlattice)
from .reflect import obstruction_sum, universal_bound_sum
from .weil import min_cusp_weight

CERTIFICATE_FORMAT = "gentype-certificate/1"

#: Error-term floor in the worst-case cusp-dimension bound used by scans:
#: sqrt(2) + 10/sqrt(27), covering both Gauss-sum correction terms.
EPSILON = RationalInterval.exact(2).sqrt() \
    + Frac(10, 27) * RationalInterval.exact(27).sqrt()

#: Comparison point quoted informationally in scan reports.
REFERENCE_N0 = 42

_SEARCH_CEILING = 1 << 512


# ---------------------------------------------------------------------------
# the bigness inequality


def bigness_rhs(a, n: int) -> Frac:
    """Exact right-hand side (1 + 1/a)^(1-n) * 2a/n of the bigness test."""
    a = Frac(a)
    if a <= 0:
        raise InputInvalid(f"need a > 0, got {a}")
    if n < 3:
        raise InputInvalid(f"need n >= 3, got {n}")
    return (1 + 1 / a) ** (1 - n) * 2 * a / n


def bigness_inequality(a, n: int, S) -> bool:
    """Whether the obstruction bound S certifies bigness at the division a.

    S may be a RationalInterval (its upper endpoint is compared) or an exact
    rational; the comparison itself is exact either way.
    """
    upper = S.hi if isinstance(S, RationalInterval) else Frac(S)
    return upper < bigness_rhs(a, n)


def final_estimate(n: int, a, det_size: int) -> bool:
    """Lattice-free certification from the discriminant order alone.

    Interval-rigorous strict form of

        sqrt|A_L| >= n/(2a) * (1 + 1/a)^(n-1) * sum over kinds of e * f,

    which is the bigness test applied to the closed-form obstruction bound.
    """
    a = Frac(a)
    if a <= 0 or n < 3 or det_size < 1:
        raise InputInvalid("final_estimate wants a > 0, n >= 3, |A_L| >= 1")
    prefactor = Frac(n, 2) / a * (1 + 1 / a) ** (n - 1)
    rhs = prefactor * universal_bound_sum(n)
    return RationalInterval.exact(det_size).sqrt().surely_greater(rhs)


# ---------------------------------------------------------------------------
# certificates


def _frac_str(x) -> str:
    x = Frac(x)
    return f"{int_to_str(x.numerator)}/{int_to_str(x.denominator)}"


def _parse_frac(s: str) -> Frac:
    num, _, den = str(s).partition("/")
    return Frac(str_to_int(num), str_to_int(den or "1"))


def _interval_json(iv: RationalInterval) -> dict:
    return {"lower": _frac_str(iv.lo), "upper": _frac_str(iv.hi)}


def _digest(gram) -> str:
    payload = json.dumps({"gram": [[int(x) for x in row] for row in gram]},
                         separators=(",", ":"), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


_CERT_KEYS = frozenset({
    "format", "digest", "input", "n", "discriminant_order", "quasi_cyclic",
    "reduction", "cusp", "a", "obstruction", "inequality", "verdict",
    "warnings",
})


@dataclass(frozen=True)
class Certificate:
    """Self-contained certification record.

    ``data`` holds only JSON types, with every exact rational serialized as
    a "numerator/denominator" string, so certificates round-trip through
    JSON bit-exactly.  revalidate() re-checks all recorded relations (the
    digest, the weight split, the inequality, and the per-orbit sums) from
    the stored values alone.
    """

    data: dict

    @property
    def verdict(self) -> str:
        return self.data["verdict"]

    @property
    def n(self) -> int:
        return self.data["n"]

    @property
    def digest(self) -> str:
        return self.data["digest"]

    @property
    def det_size(self) -> int:
        return self.data["discriminant_order"]

    @property
    def warnings(self) -> list[str]:
        return list(self.data["warnings"])

    @property
    def cusp_weight(self) -> Frac | None:
        cusp = self.data["cusp"]
        return None if cusp is None else _parse_frac(cusp["weight"])

    @property
    def cusp_k(self) -> int | None:
        cusp = self.data["cusp"]
        return None if cusp is None else cusp["k"]

    @property
    def a(self) -> int | None:
        return self.data["a"]

    @property
    def obstruction_mode(self) -> str | None:
        obs = self.data["obstruction"]
        return None if obs is None else obs["mode"]

    def to_json(self) -> dict:
        return json.loads(json.dumps(self.data))

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        if not isinstance(obj, dict) or set(obj) != _CERT_KEYS:
            raise InputInvalid("not a certificate object")
        return cls(json.loads(json.dumps(obj)))

    def revalidate(self) -> bool:
        """Re-check every recorded relation from the stored exact values."""
        d = self.data
        try:
            ok = d["format"] == CERTIFICATE_FORMAT
            ok = ok and d["digest"] == _digest(d["input"]["gram"])
            n = d["n"]
            red = d["reduction"]
            if red is not None and red["applied"]:
                ok = ok and red["overlattice_digest"] == _digest(
                    red["overlattice"]["gram"])
                ok = ok and (red["det_after"] * red["subgroup_order"] ** 2
                             == red["det_before"])
                ok = ok and d["discriminant_order"] == red["det_after"]
            cusp, a = d["cusp"], d["a"]
            obs, ineq = d["obstruction"], d["inequality"]
            if cusp is None:
                ok = ok and a is None and obs is None and ineq is None
                return bool(ok and d["verdict"] == "Inconclusive")
            weight = _parse_frac(cusp["weight"])
            k = cusp["k"]
            ok = ok and Frac(k) == weight + Frac(n, 2) - 1
            ok = ok and a == n - k
            ok = ok and obs is not None and ineq is not None
            left = ineq["left"]
            ok = ok and obs["total"] == left
            right = _parse_frac(ineq["right"])
            ok = ok and right == bigness_rhs(a, n)
            holds = _parse_frac(left["upper"]) < right
            ok = ok and ineq["holds"] == holds
            lo = sum((_parse_frac(kd["contribution"]["lower"])
                      for kd in obs["kinds"]), Frac(0))
            hi = sum((_parse_frac(kd["contribution"]["upper"])
                      for kd in obs["kinds"]), Frac(0))
            ok = ok and lo == _parse_frac(left["lower"])
            ok = ok and hi == _parse_frac(left["upper"])
            for kd in obs["kinds"]:
                if kd["mode"] != "exact":
                    continue
                osum = Frac(0)
                value = Frac(0)
                for orb in kd.get("orbits", ()):
                    gr = _parse_frac(orb["group_ratio"])
                    vr = _parse_frac(orb["volume_ratio"])
                    osum += orb["signed_count"] * gr
                    value += orb["signed_count"] * gr * vr
                ok = ok and osum == _parse_frac(kd["orbit_sum"])
                ok = ok and value == _parse_frac(kd["contribution"]["lower"])
                ok = ok and value == _parse_frac(kd["contribution"]["upper"])
            expected = "GeneralType" if (holds and k < n) else "Inconclusive"
            return bool(ok and d["verdict"] == expected)
        except (KeyError, TypeError, ValueError, ZeroDivisionError,
                InputInvalid):
            return False


# ---------------------------------------------------------------------------
# input handling


def ambient_lattice(obj) -> EvenLattice:
    """Build the ambient lattice L = 2U + M from certify input.

    Accepts a negative definite M (an EvenLattice, {"gram": ...} or
    {"blocks": ...}), or a block list containing at least two "U" blocks
    (the first two are moved to the front; the remainder must be negative
    definite).  A lattice of signature (2, n) is accepted only when its
    first four basis vectors literally span two orthogonal hyperbolic
    planes: splitting hyperbolic planes off a general Gram matrix is an
    isometry problem this tool does not attempt.
    """
    if isinstance(obj, EvenLattice):
        lat = obj
    elif isinstance(obj, dict):
        if "blocks" in obj and list(obj["blocks"]).count("U") >= 2:
            rest = list(obj["blocks"])
            rest.remove("U")
            rest.remove("U")
            lat = lattice_from_json({"blocks": ["U", "U"] + rest})
        else:
            lat = lattice_from_json(obj)
    else:
        raise InputInvalid("certify input must be an EvenLattice or "
                           "a lattice JSON object")
    pos, _ = lat.signature
    if pos == 0:
        return hyperbolic_plane().direct_sum(hyperbolic_plane()) \
            .direct_sum(lat)
    if pos == 2:
        _check_two_u_prefix(lat)
        return lat
    raise InputInvalid(
        f"input must be negative definite or of signature (2, n) with an "
        f"explicit 2U prefix; got signature {lat.signature}")


# ---------------------------------------------------------------------------
# certify


def certify(obj, mode: str = "auto", quasi_cyclic_reduce: bool = False,
            cap: int = DEFAULT_CAP) -> Certificate:
    """Certify general type for the modular variety of L = 2U + M.

    Returns a Certificate whose verdict is "GeneralType" or "Inconclusive";
    the latter never claims the variety is NOT of general type.  ``mode``
    selects the obstruction evaluation ("exact"/"auto" fall back kind by
    kind to the closed-form bound when an enumeration cap is hit; "bound"
    skips enumeration entirely).  ``quasi_cyclic_reduce`` replaces L by the
    overlattice defined by an isotropic subgroup of A_L with quasi-cyclic
    quotient; the inclusion induces a finite morphism of the modular
    varieties, so a general-type verdict for the overlattice carries over
    to the input lattice.
    """
    L0 = ambient_lattice(obj)
    _, n = L0.signature
    if n < 3:
        raise InputInvalid(f"need n >= 3, got n = {n}")
    input_gram = [list(row) for row in L0.gram]
    warnings: list[str] = []

    L = L0
    A = discriminant_form(L)
    reduction = None
    if quasi_cyclic_reduce:
        sub = quasi_cyclic_reduction(A)
        if sub.order > 1:
            L = overlattice(L, sub)
            A = discriminant_form(L)
            reduction = {
                "applied": True,
                "subgroup_order": sub.order,
                "det_before": abs(L0.det),
                "det_after": abs(L.det),
                "overlattice": {"gram": [list(row) for row in L.gram]},
                "overlattice_digest": _digest(L.gram),
                "note": ("certifying the quasi-cyclic overlattice; the "
                         "inclusion induces a finite morphism of modular "
                         "varieties, so a general-type verdict carries over "
                         "to the input lattice"),
            }
        else:
            reduction = {"applied": False, "subgroup_order": 1,
                         "det_before": abs(L0.det),
                         "det_after": abs(L0.det)}
    qc = is_quasi_cyclic(A)

    weight = None
    if not qc:
        warnings.append(
            "discriminant form is not quasi-cyclic, so the cusp-form "
            "lifting step does not apply; re-run with quasi-cyclic "
            "reduction enabled")
    else:
        weight = min_cusp_weight(L, require_quasi_cyclic=True)
        if weight is None:
            warnings.append("no admissible weight below n/2 + 1 carries a "
                            "nonzero cusp-form space")

    cusp = None
    a = None
    obstruction = None
    inequality = None
    verdict = "Inconclusive"
    if weight is not None:
        l, k = weight
        a = n - k
        cusp = {"weight": _frac_str(l), "k": k}
        S = obstruction_sum(L, mode=mode, cap=cap)
        warnings.extend(S.warnings)
        obstruction = S.to_json()
        right = bigness_rhs(a, n)
        holds = bigness_inequality(a, n, S.total)
        inequality = {"left": _interval_json(S.total),
                      "right": _frac_str(right),
                      "holds": holds}
        if holds and k < n:
            verdict = "GeneralType"
        elif not holds:
            warnings.append(f"obstruction bound does not satisfy the "
                            f"bigness inequality at a = {a}")

    data = {
        "format": CERTIFICATE_FORMAT,
        "digest": _digest(input_gram),
        "input": {"gram": input_gram},
        "n": n,
        "discriminant_order": A.order,
        "quasi_cyclic": qc,
        "reduction": reduction,
        "cusp": cusp,
        "a": a,
        "obstruction": obstruction,
        "inequality": inequality,
        "verdict": verdict,
        "warnings": warnings,
    }
    cert = Certificate(json.loads(json.dumps(data)))
    assert cert.revalidate(), "internal: fresh certificate must revalidate"
    return cert


# ---------------------------------------------------------------------------
# range scan


@dataclass(frozen=True)
class ScanRow:
    """Certification threshold for one n.

    ``min_order`` is the least |A_L| from which the closed-form bounds
    certify every quasi-cyclic lattice of signature (2, n) (None if even
    the search ceiling fails); ``threshold`` is its square root; ``weight``
    and ``a`` witness the division used at the threshold order.
    """

    n: int
    min_order: int | None
    threshold: RationalInterval | None
    universal: bool
    weight: Frac | None
    a: int | None


@dataclass(frozen=True)
class ScanResult:
    """Scan table plus the least n from which certification is universal."""

    n_min: int
    n_max: int
    rows: tuple[ScanRow, ...]
    n0: int | None
    reference_n0: int

    def to_json(self) -> dict:
        rows = []
        for r in self.rows:
            rows.append({
                "n": r.n,
                "min_discriminant_order": r.min_order,
                "threshold": (None if r.threshold is None
                              else _interval_json(r.threshold)),
                "universal": r.universal,
                "weight": None if r.weight is None else _frac_str(r.weight),
                "a": r.a,
            })
        return {"from": self.n_min, "to": self.n_max, "rows": rows,
                "n0": self.n0, "reference_n0": self.reference_n0}


def _cusp_division(n: int, order: int) -> int | None:
    """Largest a = n - k with a guaranteed cusp form at weight n/2 + 1 - a.

    Worst-case over all quasi-cyclic discriminant forms of the given order:
    the cusp space at weight l is nonzero once dim * (l - 7) > 12 * epsilon,
    where dim is the smallest possible dimension of the relevant eigenspace,
    (|A| + 1)/2 when k = l + n/2 - 1 is even and (|A| - 32)/2 when k is odd
    (the 2-torsion of a quasi-cyclic form has order at most 32).
    """
    bound = (EPSILON * 12).hi
    best = None
    for k_even, dim_lb in ((True, Frac(order + 1, 2)),
                           (False, Frac(max(order - 32, 0), 2))):
        if dim_lb <= 0:
            continue
        # l - 7 > bound/dim at l = n/2 + 1 - a, i.e. a < n/2 - 6 - bound/dim
        limit = Frac(n, 2) - 6 - bound / dim_lb
        a = floor(limit)
        if a == limit:
            a -= 1
        want = n % 2 if k_even else (n + 1) % 2
        if a % 2 != want:
            a -= 1
        if a >= 1 and (best is None or a > best):
            best = a
    return best


def _scan_rhs(n: int, ubs: RationalInterval, cache: dict,
              a: int) -> RationalInterval:
    if a not in cache:
        prefactor = Frac(n, 2) / a * Frac(a + 1, a) ** (n - 1)
        cache[a] = prefactor * ubs
    return cache[a]


def _scan_pass(n: int, order: int, ubs: RationalInterval,
               cache: dict) -> tuple[bool, int | None]:
    """Whether every quasi-cyclic form of this order is certified at n.

    Checks the largest guaranteed division a only: the bigness right-hand
    side is strictly increasing in a, so that division is the easiest.
    """
    a = _cusp_division(n, order)
    if a is None:
        return False, None
    left = RationalInterval.exact(order).sqrt()
    return left.surely_greater(_scan_rhs(n, ubs, cache, a)), a


def _least_passing_order(n: int, ubs: RationalInterval,
                         cache: dict) -> int | None:
    """Least order passing _scan_pass (monotone in the order), else None."""
    if _scan_pass(n, 1, ubs, cache)[0]:
        return 1
    hi = 2
    while hi <= _SEARCH_CEILING:
        if _scan_pass(n, hi, ubs, cache)[0]:
            break
        hi *= 2
    else:
        return None
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _scan_pass(n, mid, ubs, cache)[0]:
            hi = mid
        else:
            lo = mid
    return hi


def range_scan(n_min: int, n_max: int) -> ScanResult:
    """Certification thresholds for every signature (2, n) in a range.

    Both certification steps are monotone in the discriminant order (the
    worst-case eigenspace dimensions grow, and so does sqrt|A_L| against a
    fixed closed-form bound), so each row's threshold is found by doubling
    and bisection.  A row is universal when even order 1 passes; n0 is the
    least n from which universality holds through n_max, reported next to
    the reference value for comparison.
    """
    if not 15 <= n_min <= n_max:
        raise InputInvalid("range_scan wants 15 <= n_min <= n_max")
    rows = []
    for n in range(n_min, n_max + 1):
        ubs = universal_bound_sum(n)
        cache: dict[int, RationalInterval] = {}
        first = _least_passing_order(n, ubs, cache)
        if first is None:
            rows.append(ScanRow(n, None, None, False, None, None))
            continue
        _, a = _scan_pass(n, first, ubs, cache)
        weight = Frac(n, 2) + 1 - a
        rows.append(ScanRow(n, first, RationalInterval.exact(first).sqrt(),
                            first == 1, weight, a))
    n0 = None
    for row in reversed(rows):
        if row.universal:
            n0 = row.n
        else:
            break
    return ScanResult(n_min, n_max, tuple(rows), n0, REFERENCE_N0)
