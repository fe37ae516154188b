"""Divisor singularities, the equivalence verdict and the return-map test.

Every compactified chart field leaves the divisor invariant, so its
singularities at infinity are the zeros of the one-variable restriction of
the chart field to the divisor branch.  This module isolates those zeros
exactly, classifies them through the (triangular) on-divisor Jacobian,
assembles the per-chart inventories for a field and for its upper principal
part, decides the three hypotheses of the equivalence criterion, and
evaluates the linear-order return map along the divisor cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from itertools import zip_longest
from typing import Optional

from scipy.integrate import quad

from .charts import (
    DIRECTIONS,
    ChartField,
    directional_plc,
    fan_chart_field,
    polar_field,
)
from .fans import SimpleFan, build_fan
from .fields import (
    FieldError,
    InternalConsistencyError,
    PlanarField,
    WeightVector,
    format_field,
    make_favorable,
)
from .polys import (
    RealRoot,
    bp_gcd,
    bp_strip_monomial,
    count_real_roots,
    has_real_branch,
    real_roots,
    up,
    up_deriv,
    up_eval,
    up_gcd,
    up_is_zero,
)
from .polytope import (
    Segment,
    UpperPrincipalPart,
    build_polytope,
    plc_weight,
    upper_principal_part,
)
from .trig import build_trig

HYPERBOLIC = "Hyperbolic"
SEMI_HYPERBOLIC = "SemiHyperbolic"
DEGENERATE = "Degenerate"
CURVE = "CurveOfSingularities"


# ---------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class Eigenvalue:
    """One eigenvalue of the on-divisor Jacobian.

    The sign is decided exactly; ``exact`` is filled when the base point is
    rational, and ``approx`` is a float for reporting.
    """

    sign: int
    approx: float
    exact: Optional[Fraction] = None

    def to_json(self) -> dict:
        return {
            "sign": self.sign,
            "approx": self.approx,
            "exact": None if self.exact is None else str(self.exact),
        }


def _realroot_json(r: RealRoot) -> dict:
    return {
        "poly": [str(c) for c in r.poly],
        "interval": [str(r.lo), str(r.hi)],
        "approx": float(r),
    }


@dataclass(frozen=True)
class SingularityRecord:
    """A singularity on the divisor of one chart (or a whole singular branch).

    ``position`` is the exact coordinate along the divisor branch; it is
    None exactly when the branch restriction vanishes identically and the
    record stands for the entire branch (classification CurveOfSingularities).
    """

    chart: str
    branch: str
    position: Optional[RealRoot]
    classification: str = ""
    tangent: Optional[Eigenvalue] = None
    transverse: Optional[Eigenvalue] = None
    characteristic_orbit: bool = False

    @property
    def is_curve(self) -> bool:
        return self.position is None

    @property
    def at_chart_origin(self) -> bool:
        return (self.position is not None and self.position.is_rational
                and self.position.exact == 0)

    def to_json(self) -> dict:
        return {
            "chart": self.chart,
            "branch": self.branch,
            "position": None if self.position is None else _realroot_json(self.position),
            "classification": self.classification,
            "tangent": None if self.tangent is None else self.tangent.to_json(),
            "transverse": None if self.transverse is None else self.transverse.to_json(),
            "characteristic_orbit": self.characteristic_orbit,
        }


# ---------------------------------------------------------------------------
# locating and classifying divisor singularities


def _poly_from_comp(comp: dict, picker) -> tuple[Fraction, ...]:
    """Collect ``picker(key) -> exponent or None`` entries into a polynomial."""
    coeffs: dict[int, Fraction] = {}
    for key, c in comp.items():
        e = picker(key)
        if e is not None:
            coeffs[e] = coeffs.get(e, Fraction(0)) + c
    if not coeffs:
        return ()
    out = [Fraction(0)] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c
    return up(out)


def _branch_polys(cf: ChartField, branch: str):
    """Restriction and transverse polynomials along one divisor branch.

    On {v = 0} the restriction is u' at v = 0 and the transverse eigenvalue
    polynomial is the v-linear part of v'; the {u = 0} branch mirrors the
    roles.  The off-diagonal Jacobian entry vanishes identically on the
    branch; that structural fact is re-checked here rather than assumed.
    """
    if branch == "v=0":
        if any(j == 0 for _, j in cf.v_comp):
            raise InternalConsistencyError(
                f"{cf.label}: divisor branch v=0 is not invariant")
        restriction = _poly_from_comp(cf.u_comp, lambda k: k[0] if k[1] == 0 else None)
        transverse = _poly_from_comp(cf.v_comp, lambda k: k[0] if k[1] == 1 else None)
    elif branch == "u=0":
        if any(i == 0 for i, _ in cf.u_comp):
            raise InternalConsistencyError(
                f"{cf.label}: divisor branch u=0 is not invariant")
        restriction = _poly_from_comp(cf.v_comp, lambda k: k[1] if k[0] == 0 else None)
        transverse = _poly_from_comp(cf.u_comp, lambda k: k[1] if k[0] == 1 else None)
    else:
        raise ValueError(f"unknown divisor branch {branch!r}")
    return restriction, transverse


def _eigenvalue_at(root: RealRoot, poly) -> Eigenvalue:
    sign = root.sign_of(poly)
    if root.is_rational:
        val = up_eval(poly, root.lo)
        return Eigenvalue(sign=sign, approx=float(val), exact=val)
    if sign == 0:
        return Eigenvalue(sign=0, approx=0.0)
    r = root.refine(Fraction(1, 10**15))
    return Eigenvalue(sign=sign, approx=float(up_eval(poly, (r.lo + r.hi) / 2)))


def classify(cf: ChartField, rec: SingularityRecord) -> SingularityRecord:
    """Fill in eigenvalues, classification and the characteristic-orbit flag.

    The on-divisor Jacobian is triangular, so the eigenvalues are the
    derivative of the branch restriction (tangent) and the linear transverse
    coefficient, both evaluated at the singularity.  A point admits a
    characteristic orbit when it is hyperbolic, or semi-hyperbolic with its
    nonzero eigenvalue transverse to the divisor.
    """
    restriction, transverse = _branch_polys(cf, rec.branch)
    if rec.position is None:
        return SingularityRecord(
            chart=cf.label,
            branch=rec.branch,
            position=None,
            classification=CURVE,
            characteristic_orbit=not up_is_zero(transverse),
        )
    tangent = _eigenvalue_at(rec.position, up_deriv(restriction))
    trans = _eigenvalue_at(rec.position, transverse)
    zeros = (tangent.sign == 0) + (trans.sign == 0)
    if zeros == 0:
        cls = HYPERBOLIC
    elif zeros == 1:
        cls = SEMI_HYPERBOLIC
    else:
        cls = DEGENERATE
    orbit = cls == HYPERBOLIC or (cls == SEMI_HYPERBOLIC and trans.sign != 0)
    return SingularityRecord(
        chart=cf.label,
        branch=rec.branch,
        position=rec.position,
        classification=cls,
        tangent=tangent,
        transverse=trans,
        characteristic_orbit=orbit,
    )


def _scan_branch(cf: ChartField, branch: str) -> list[SingularityRecord]:
    restriction, _ = _branch_polys(cf, branch)
    if up_is_zero(restriction):
        bare = SingularityRecord(chart=cf.label, branch=branch, position=None)
        return [classify(cf, bare)]
    out = []
    for root in real_roots(restriction):
        bare = SingularityRecord(chart=cf.label, branch=branch, position=root)
        out.append(classify(cf, bare))
    return out


def divisor_singularities(cf: ChartField) -> list[SingularityRecord]:
    """All singularities on the divisor of a directional or fan chart field.

    Interior fan charts carry two divisor branches meeting at the chart
    origin; the origin is reported once, on the {v = 0} branch (where it is
    always a zero of the restriction).
    """
    if cf.divisor == "v":
        return _scan_branch(cf, "v=0")
    if cf.divisor == "u":
        return _scan_branch(cf, "u=0")
    if cf.divisor == "uv":
        recs = _scan_branch(cf, "v=0")
        for rec in _scan_branch(cf, "u=0"):
            if not rec.is_curve and rec.at_chart_origin:
                continue
            recs.append(rec)
        return recs
    raise ValueError(f"chart {cf.label!r} has no polynomial divisor branch")


# ---------------------------------------------------------------------------
# hypothesis (a): the upper principal part has no zero in (R*)^2


def _bezout(dx: int, dy: int) -> tuple[int, int]:
    """Integers (wu, wv) with dx*wu + dy*wv = 1, for coprime inputs."""
    old_r, r = dx, dy
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


@dataclass(frozen=True)
class DegeneracyWitness:
    """A common zero of one upper-segment restriction off the axes."""

    segment_normal: tuple[int, int]
    quadrant: tuple[int, int]
    parameter: RealRoot
    point: tuple[float, float]
    point_exact: Optional[tuple[Fraction, Fraction]]

    def to_json(self) -> dict:
        return {
            "segment_normal": list(self.segment_normal),
            "quadrant": list(self.quadrant),
            "parameter": _realroot_json(self.parameter),
            "point": [self.point[0], self.point[1]],
            "point_exact": None if self.point_exact is None else
            [str(self.point_exact[0]), str(self.point_exact[1])],
        }


def _segment_parameter_polys(seg: Segment, field: PlanarField):
    """Coefficient polynomials along a segment, indexed by primitive steps."""
    dx, dy = seg.direction
    start = seg.points[0]
    acoef: dict[int, Fraction] = {}
    bcoef: dict[int, Fraction] = {}
    for p in seg.points:
        if dx != 0:
            k = (p[0] - start[0]) // dx
        else:
            k = (p[1] - start[1]) // dy
        a, b = field.coeffs(p)
        if a:
            acoef[k] = a
        if b:
            bcoef[k] = b
    if not acoef and not bcoef:
        return (), ()
    deg = max(acoef | bcoef)
    pa = up(acoef.get(k, 0) for k in range(deg + 1))
    pb = up(bcoef.get(k, 0) for k in range(deg + 1))
    return pa, pb


def check_nondegenerate(upp: UpperPrincipalPart):
    """Decide whether the upper principal part vanishes anywhere off the axes.

    Each upper segment restricts the field to a one-parameter family:
    writing the support points as start + k * direction, both coefficient
    sequences become polynomials in t = x**dx * y**dy.  A common positive
    root of their gcd in any of the four quadrant sign charts is a
    singularity of the segment field in (R*)^2.  Returns ``(ok, witnesses)``.
    """
    witnesses: list[DegeneracyWitness] = []
    for seg, part in upp.per_segment:
        pa, pb = _segment_parameter_polys(seg, part)
        if up_is_zero(pa) and up_is_zero(pb):
            raise InternalConsistencyError(
                "an upper segment with empty coefficient data")
        dx, dy = seg.direction
        wu, wv = _bezout(dx, dy)
        for s1 in (1, -1):
            for s2 in (1, -1):
                eps = (s1 if dx % 2 else 1) * (s2 if dy % 2 else 1)
                pc = up(c * eps**k for k, c in enumerate(pa))
                qc = up(c * eps**k for k, c in enumerate(pb))
                g = up_gcd(pc, qc)
                # roots at t = 0 sit on the axes and do not count
                shift = 0
                while shift < len(g) and g[shift] == 0:
                    shift += 1
                g = g[shift:]
                for root in real_roots(g):
                    if root.sign_of((Fraction(0), Fraction(1))) <= 0:
                        continue
                    if root.is_rational:
                        sval = root.exact
                        exact = (s1 * sval**wu, s2 * sval**wv)
                        point = (float(exact[0]), float(exact[1]))
                    else:
                        exact = None
                        sf = float(root)
                        point = (s1 * sf**wu, s2 * sf**wv)
                    witnesses.append(DegeneracyWitness(
                        segment_normal=seg.inward_normal,
                        quadrant=(s1, s2),
                        parameter=root,
                        point=point,
                        point_exact=exact,
                    ))
    return not witnesses, tuple(witnesses)


# ---------------------------------------------------------------------------
# hypothesis (b): no curve of singularities


def check_no_singularity_curve(upp: UpperPrincipalPart) -> bool:
    """True when the components of the upper principal part share no
    nonconstant factor whose zero set meets the plane off the axes."""
    P, Q = upp.field.components()
    g = bp_gcd(P, Q)
    g, _, _ = bp_strip_monomial(g)
    if not g or all(k == (0, 0) for k in g):
        return True
    return not has_real_branch(g)


# ---------------------------------------------------------------------------
# inventories and the equivalence verdict


def singularity_inventory(f: PlanarField, fan: SimpleFan,
                          w: WeightVector) -> dict[str, list[SingularityRecord]]:
    """Per-chart divisor singularities across all fan and directional charts."""
    inv: dict[str, list[SingularityRecord]] = {}
    for j in range(1, len(fan.vectors)):
        cf = fan_chart_field(f, fan, j)
        inv[cf.label] = divisor_singularities(cf)
    for direction in DIRECTIONS:
        cf = directional_plc(f, w, direction)
        inv[direction] = divisor_singularities(cf)
    return inv


def _cmp_records(r1: SingularityRecord, r2: SingularityRecord) -> int:
    if r1.branch != r2.branch:
        return -1 if r1.branch < r2.branch else 1
    if r1.is_curve or r2.is_curve:
        return (not r1.is_curve) - (not r2.is_curve)
    if r1.position.equals(r2.position):
        return 0
    return -1 if r1.position < r2.position else 1


def _chart_order(label: str):
    if label.startswith("fan:"):
        return (0, int(label.split(":")[1]))
    return (1, DIRECTIONS.index(label))


@dataclass(frozen=True)
class MatchRow:
    chart: str
    branch: str
    position: Optional[float]
    classification_field: Optional[str]
    classification_principal: Optional[str]
    matched: bool

    def to_json(self) -> dict:
        return {
            "chart": self.chart,
            "branch": self.branch,
            "position": self.position,
            "field": self.classification_field,
            "principal_part": self.classification_principal,
            "matched": self.matched,
        }


def _pair_inventories(inv_full, inv_prin):
    rows: list[MatchRow] = []
    all_matched = True
    key = cmp_to_key(_cmp_records)
    for chart in sorted(set(inv_full) | set(inv_prin), key=_chart_order):
        a = sorted(inv_full.get(chart, []), key=key)
        b = sorted(inv_prin.get(chart, []), key=key)
        for ra, rb in zip_longest(a, b):
            if ra is None or rb is None:
                some = ra or rb
                rows.append(MatchRow(
                    chart=chart, branch=some.branch,
                    position=None if some.is_curve else float(some.position),
                    classification_field=ra.classification if ra else None,
                    classification_principal=rb.classification if rb else None,
                    matched=False))
                all_matched = False
                continue
            same_place = (ra.branch == rb.branch and
                          (ra.is_curve == rb.is_curve) and
                          (ra.is_curve or ra.position.equals(rb.position)))
            matched = same_place and ra.classification == rb.classification
            rows.append(MatchRow(
                chart=chart, branch=ra.branch,
                position=None if ra.is_curve else float(ra.position),
                classification_field=ra.classification,
                classification_principal=rb.classification,
                matched=matched))
            all_matched = all_matched and matched
    return tuple(rows), all_matched


@dataclass(frozen=True)
class EquivalenceReport:
    verdict: str
    reasons: tuple[str, ...]
    hypotheses: dict[str, bool]
    shear: Fraction
    field_after_shear: PlanarField
    weight: Optional[WeightVector]
    inventory_full: dict[str, list[SingularityRecord]]
    inventory_principal: dict[str, list[SingularityRecord]]
    match_table: tuple[MatchRow, ...]
    witnesses: tuple[DegeneracyWitness, ...]

    def to_json(self) -> dict:
        def inv_json(inv):
            return {chart: [r.to_json() for r in recs]
                    for chart, recs in sorted(inv.items())}

        return {
            "verdict": self.verdict,
            "reasons": list(self.reasons),
            "hypotheses": dict(self.hypotheses),
            "shear": str(self.shear),
            "field_after_shear": format_field(self.field_after_shear),
            "weight": None if self.weight is None else list(self.weight.as_tuple()),
            "inventory": {
                "field": inv_json(self.inventory_full),
                "principal_part": inv_json(self.inventory_principal),
            },
            "match_table": [row.to_json() for row in self.match_table],
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def equivalence_verdict(field: PlanarField) -> EquivalenceReport:
    """Run the whole pipeline and decide topological equivalence at infinity.

    The field is sheared until its polytope is favorable; the three
    hypotheses (non-degenerate upper part, no curve of singularities,
    at least one characteristic orbit) are decided exactly; and the
    singularity inventories of the field and of its upper principal part
    are paired chart by chart.  When every hypothesis holds, a pairing
    mismatch is impossible and is therefore raised as an internal error
    rather than reported.
    """
    if field.is_zero:
        raise FieldError("the zero field has no behaviour at infinity")
    try:
        sheared, lam = make_favorable(field)
    except FieldError:
        return EquivalenceReport(
            verdict="HypothesesFail",
            reasons=("no upper boundary",),
            hypotheses={},
            shear=Fraction(0),
            field_after_shear=field,
            weight=None,
            inventory_full={},
            inventory_principal={},
            match_table=(),
            witnesses=(),
        )
    p = build_polytope(sheared)
    upp = upper_principal_part(sheared)
    w, _ = plc_weight(p)
    fan = build_fan(p)

    hyp_a, witnesses = check_nondegenerate(upp)
    hyp_b = check_no_singularity_curve(upp)
    inv_full = singularity_inventory(sheared, fan, w)
    inv_prin = singularity_inventory(upp.field, fan, w)
    hyp_c = any(r.characteristic_orbit
                for recs in inv_full.values() for r in recs)

    hypotheses = {
        "non_degenerate_upper_part": hyp_a,
        "no_curve_of_singularities": hyp_b,
        "has_characteristic_orbit": hyp_c,
    }
    reasons = tuple(name for name, ok in hypotheses.items() if not ok)
    match_table, all_matched = _pair_inventories(inv_full, inv_prin)
    if not reasons and not all_matched:
        raise InternalConsistencyError(
            "hypotheses hold but the singularity inventories of the field "
            "and its upper principal part disagree")
    return EquivalenceReport(
        verdict="HypothesesFail" if reasons else "Equivalent",
        reasons=reasons,
        hypotheses=hypotheses,
        shear=lam,
        field_after_shear=sheared,
        weight=w,
        inventory_full=inv_full,
        inventory_principal=inv_prin,
        match_table=match_table,
        witnesses=witnesses,
    )


# ---------------------------------------------------------------------------
# the return-map test


@dataclass(frozen=True)
class ReturnMapResult:
    weight: WeightVector
    period: float
    integral_full: float
    integral_principal: float
    sign_full: int
    sign_principal: int
    agreement: bool
    conclusion: str

    def to_json(self) -> dict:
        return {
            "weight": list(self.weight.as_tuple()),
            "period": self.period,
            "integral_full": self.integral_full,
            "integral_principal": self.integral_principal,
            "sign_full": self.sign_full,
            "sign_principal": self.sign_principal,
            "agreement": self.agreement,
            "conclusion": self.conclusion,
        }


def _assert_no_divisor_singularities(f: PlanarField, w: WeightVector) -> None:
    """The return map exists only when the divisor carries no singularity.

    The four directional charts cover the divisor cycle, so exact
    root-freeness of their four branch restrictions is both necessary and
    sufficient.
    """
    for direction in DIRECTIONS:
        cf = directional_plc(f, w, direction)
        restriction, _ = _branch_polys(cf, "v=0")
        if up_is_zero(restriction):
            raise FieldError(
                f"{direction}: the divisor is a curve of singularities; "
                "the return-map test does not apply")
        if count_real_roots(restriction) > 0:
            spot = float(real_roots(restriction)[0])
            raise FieldError(
                f"{direction}: divisor singularity near u = {spot:.6g}; "
                "the return-map test does not apply")


def _linear_return_integrand(pf: ChartField):
    """G(theta) = (r-linear radial coefficient) / (on-divisor angular speed)."""
    theta0 = {(i, j): c for (i, j, k), c in pf.theta_comp.items() if k == 0}
    r1 = {(i, j): c for (i, j, k), c in pf.r_comp.items() if k == 1}
    if not r1:
        return None

    def g(cs: float, sn: float) -> float:
        num = sum(float(c) * cs**i * sn**j for (i, j), c in r1.items())
        den = sum(float(c) * cs**i * sn**j for (i, j), c in theta0.items())
        return num / den

    return g


def return_map_test(field: PlanarField, w: WeightVector) -> ReturnMapResult:
    """Integrate the linear-order return map over one divisor cycle for the
    field and for its upper principal part, and compare the signs.

    The displacement of the return map at linear order is exp(integral) - 1,
    so the two fields agree when both integrals carry the same strict sign;
    a vanishing integral is reported as inconclusive.
    """
    if field.is_zero:
        raise FieldError("the zero field has no return map")
    _assert_no_divisor_singularities(field, w)
    upp = upper_principal_part(field)
    table = build_trig(w)
    period = table.period

    integrals = []
    for f in (field, upp.field):
        g = _linear_return_integrand(polar_field(f, w))
        if g is None:
            integrals.append(0.0)
            continue
        val, err = quad(lambda th: g(*table.eval(th)), 0.0, period,
                        epsabs=1e-11, epsrel=1e-11, limit=200)
        if err > 1e-8:
            raise FieldError(f"return-map quadrature error {err:g} too large")
        integrals.append(val)

    def strict_sign(v: float) -> int:
        if abs(v) <= 1e-9:
            return 0
        return 1 if v > 0 else -1

    s_full = strict_sign(integrals[0])
    s_prin = strict_sign(integrals[1])
    agreement = s_full == s_prin and s_full != 0
    if s_full == 0 or s_prin == 0:
        conclusion = "inconclusive: zero integral"
    elif agreement:
        side = "expands" if s_full > 0 else "contracts"
        conclusion = (f"sign agreement at linear order: the return map {side} "
                      "for both fields, so no periodic orbit survives near "
                      "the divisor")
    else:
        conclusion = "the linear-order displacements disagree in sign"
    return ReturnMapResult(
        weight=w,
        period=period,
        integral_full=integrals[0],
        integral_principal=integrals[1],
        sign_full=s_full,
        sign_principal=s_prin,
        agreement=agreement,
        conclusion=conclusion,
    )
