"""Exact compactified vector fields in directional, fan and polar charts.

Everything here is symbolic: chart components are dictionaries mapping
exponent tuples to rational coefficients.  Directional and fan charts use
keys (i, j) for u**i * v**j; the polar chart uses keys (c, s, k) for
Cs(theta)**c * Sn(theta)**s * r**k, where Cs/Sn are the generalized
trigonometric functions attached to the weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .fans import ChartMap, SimpleFan, chart_maps
from .fields import (
    FieldError,
    InternalConsistencyError,
    PlanarField,
    WeightVector,
    max_level,
)
from .polytope import Polytope

UVKey = tuple[int, int]
TrigKey = tuple[int, int, int]

DIRECTIONS = ("Xpos", "Xneg", "Ypos", "Yneg")


@dataclass
class ChartField:
    """A compactified field in one chart.

    For directional and fan charts ``u_comp``/``v_comp`` are the du/dv
    polynomial components.  For the polar chart they hold the theta and r
    components as trig-polynomials.  ``normalization`` records the monomial
    the raw pullback was multiplied by to clear denominators.
    """

    label: str
    u_comp: dict
    v_comp: dict
    divisor: str
    normalization: dict[str, int]
    weight: Optional[WeightVector] = None
    chart: Optional[ChartMap] = None
    delta: Optional[int] = None

    @property
    def theta_comp(self) -> dict:
        return self.u_comp

    @property
    def r_comp(self) -> dict:
        return self.v_comp

    def to_json(self) -> dict:
        def enc(comp):
            return [
                [list(k), str(c)]
                for k, c in sorted(comp.items())
            ]

        blob = {
            "label": self.label,
            "divisor": self.divisor,
            "normalization": dict(self.normalization),
            "u_component": enc(self.u_comp),
            "v_component": enc(self.v_comp),
        }
        if self.weight is not None:
            blob["weight"] = list(self.weight.as_tuple())
        if self.delta is not None:
            blob["delta"] = self.delta
        if self.chart is not None:
            blob["chart_index"] = self.chart.index
        return blob

    def pretty(self) -> str:
        if self.label == "Polar":
            t = _format_trig_poly(self.u_comp)
            r = _format_trig_poly(self.v_comp)
            return f"({t}) dtheta + ({r}) dr"
        u = _format_uv_poly(self.u_comp)
        v = _format_uv_poly(self.v_comp)
        return f"({u}) du + ({v}) dv"


def _strip_zeros(comp: dict) -> dict:
    return {k: c for k, c in comp.items() if c != 0}


def _format_monomial(names: tuple[str, ...], exps: tuple[int, ...]) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 0:
            continue
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _format_poly_generic(comp: dict, names: tuple[str, ...]) -> str:
    if not comp:
        return "0"
    out = []
    for key in sorted(comp, reverse=True):
        c = comp[key]
        mono = _format_monomial(names, key)
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = str(mag)
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(out)


def _format_uv_poly(comp: dict) -> str:
    return _format_poly_generic(comp, ("u", "v"))


def _format_trig_poly(comp: dict) -> str:
    return _format_poly_generic(comp, ("Cs", "Sn", "r"))


# ---------------------------------------------------------------------------
# directional charts


def directional_plc(f: PlanarField, w: WeightVector, direction: str) -> ChartField:
    """Compactify toward one of the four axis directions.

    In the x-positive chart the substitution is x = 1/v**alpha,
    y = u/v**beta; the y-positive chart swaps the roles of the variables;
    negative charts flip the sign of the compactified axis.  After clearing
    denominators with v**(delta-1), where delta is one more than the top
    weighted level, both components are polynomials and {v = 0} is the
    divisor at infinity.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    if f.is_zero:
        raise FieldError("cannot compactify the zero field")
    alpha, beta = w.as_tuple()
    delta = max_level(f, w) + 1
    u_comp: dict[UVKey, Fraction] = {}
    v_comp: dict[UVKey, Fraction] = {}
    along_x = direction in ("Xpos", "Xneg")
    for (m, n), (a, b) in f.items():
        d = alpha * m + beta * n
        if along_x:
            sigma = -1 if (direction == "Xneg" and m % 2) else 1
            swirl = b - Fraction(beta, alpha) * a
            radial = -Fraction(a, alpha)
            uk, vk = (n + 1, delta - d - 1), (n, delta - d)
        else:
            sigma = -1 if (direction == "Yneg" and n % 2) else 1
            swirl = a - Fraction(alpha, beta) * b
            radial = -Fraction(b, beta)
            uk, vk = (m + 1, delta - d - 1), (m, delta - d)
        if swirl:
            u_comp[uk] = u_comp.get(uk, Fraction(0)) + sigma * swirl
        if radial:
            v_comp[vk] = v_comp.get(vk, Fraction(0)) + sigma * radial
    u_comp = _strip_zeros(u_comp)
    v_comp = _strip_zeros(v_comp)
    for (i, j) in list(u_comp) + list(v_comp):
        if i < 0 or j < 0:
            raise InternalConsistencyError(
                f"negative exponent ({i},{j}) in {direction} chart")
    return ChartField(direction, u_comp, v_comp, divisor="v",
                      normalization={"v": delta - 1}, weight=w, delta=delta)


# ---------------------------------------------------------------------------
# fan charts


@dataclass(frozen=True)
class LevelData:
    """Per-fan-vector minima of the weighting functional over the support.

    ``minima[j]`` is min over the support of <xi_j, (m,n)>, except at the
    two endpoint rays where it is fixed to 0 by convention; ``argmins[j]``
    is the set of support points achieving the true minimum.
    """

    minima: tuple[int, ...]
    argmins: tuple[tuple[tuple[int, int], ...], ...]


def _support_minima(support, vectors) -> tuple[list[int], list[tuple]]:
    minima = []
    argmins = []
    for j, (x, y) in enumerate(vectors):
        vals = {p: x * p[0] + y * p[1] for p in support}
        m = min(vals.values())
        argmins.append(tuple(sorted(p for p, v in vals.items() if v == m)))
        if j == 0 or j == len(vectors) - 1:
            m = 0
        minima.append(m)
    return minima, argmins


def level_data(p: Polytope, fan: SimpleFan) -> LevelData:
    minima, argmins = _support_minima(p.support, fan.vectors)
    return LevelData(tuple(minima), tuple(argmins))


def fan_chart_field(f: PlanarField, fan: SimpleFan, j: int) -> ChartField:
    """The compactified field in fan chart j (1 <= j <= s).

    The pullback of x**m y**n (a x dx + b y dy) under the chart map is
    u**<xi_{j-1},p> v**<xi_j,p> (A u du + B v dv) with A = beta_j a -
    alpha_j b and B = alpha_{j-1} b - beta_{j-1} a; multiplying by
    u**e_{j-1} v**e_j with e = max(0, -M) clears all denominators.
    """
    s = len(fan.vectors) - 1
    if not 1 <= j <= s:
        raise ValueError(f"chart index {j} out of range 1..{s}")
    if f.is_zero:
        raise FieldError("cannot compactify the zero field")
    minima, _ = _support_minima(f.support(), fan.vectors)
    eu = max(0, -minima[j - 1])
    ev = max(0, -minima[j])
    (a0, b0), (a1, b1) = fan.vectors[j - 1], fan.vectors[j]
    u_comp: dict[UVKey, Fraction] = {}
    v_comp: dict[UVKey, Fraction] = {}
    for (m, n), (a, b) in f.items():
        pu = eu + a0 * m + b0 * n
        pv = ev + a1 * m + b1 * n
        swirl = b1 * a - a1 * b
        radial = a0 * b - b0 * a
        if swirl:
            key = (pu + 1, pv)
            u_comp[key] = u_comp.get(key, Fraction(0)) + swirl
        if radial:
            key = (pu, pv + 1)
            v_comp[key] = v_comp.get(key, Fraction(0)) + radial
    u_comp = _strip_zeros(u_comp)
    v_comp = _strip_zeros(v_comp)
    for (i, k) in list(u_comp) + list(v_comp):
        if i < 0 or k < 0:
            raise InternalConsistencyError(
                f"negative exponent ({i},{k}) in fan chart {j}")
    cmap = chart_maps(fan)[j]
    return ChartField(f"fan:{j}", u_comp, v_comp, divisor=cmap.divisor,
                      normalization={"u": eu, "v": ev}, chart=cmap)


# ---------------------------------------------------------------------------
# polar chart


def polar_field(f: PlanarField, w: WeightVector) -> ChartField:
    """The global compactified field in weighted polar coordinates.

    Substituting x = Cs(theta) r**(-alpha), y = Sn(theta) r**(-beta) and
    multiplying by r**(delta-1) yields

        theta' = sum_d r**(delta-d-1) (Cs Q_d - (beta/alpha) Sn P_d),
        r'     = -sum_d r**(delta-d)/alpha (Cs**(2 beta - 1) P_d
                                            + Sn**(2 alpha - 1) Q_d),

    where P_d, Q_d collect the terms of weighted level d.  Every r' term
    carries at least one power of r, so the divisor {r = 0} is invariant.
    """
    if f.is_zero:
        raise FieldError("cannot compactify the zero field")
    alpha, beta = w.as_tuple()
    delta = max_level(f, w) + 1
    theta: dict[TrigKey, Fraction] = {}
    rad: dict[TrigKey, Fraction] = {}
    for (m, n), (a, b) in f.items():
        d = alpha * m + beta * n
        c = b - Fraction(beta, alpha) * a
        if c:
            key = (m + 1, n + 1, delta - d - 1)
            theta[key] = theta.get(key, Fraction(0)) + c
        if a:
            key = (m + 2 * beta, n, delta - d)
            rad[key] = rad.get(key, Fraction(0)) - Fraction(a, alpha)
        if b:
            key = (m, n + 2 * alpha, delta - d)
            rad[key] = rad.get(key, Fraction(0)) - Fraction(b, alpha)
    theta = _strip_zeros(theta)
    rad = _strip_zeros(rad)
    for (ce, se, re) in theta:
        if ce < 0 or se < 0 or re < 0:
            raise InternalConsistencyError("negative exponent in polar chart")
    for (ce, se, re) in rad:
        if ce < 0 or se < 0 or re < 1:
            raise InternalConsistencyError(
                "polar radial component must vanish on the divisor")
    return ChartField("Polar", theta, rad, divisor="r",
                      normalization={"r": delta - 1}, weight=w, delta=delta)


# ---------------------------------------------------------------------------
# evaluation helpers shared by tests and downstream analysis


def eval_uv(comp: dict, u, v):
    """Evaluate a u/v exponent dictionary at a point."""
    total = 0
    for (i, j), c in comp.items():
        total += c * (u ** i) * (v ** j)
    return total


def uv_support(cf: ChartField) -> set[UVKey]:
    """Log-support of a directional/fan chart field.

    A u-component monomial u**i v**j du contributes (i-1, j); a
    v-component monomial contributes (i, j-1); this is the lattice image
    the compactification acts on.
    """
    pts = {(i - 1, j) for (i, j) in cf.u_comp}
    pts |= {(i, j - 1) for (i, j) in cf.v_comp}
    return pts
