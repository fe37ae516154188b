"""Render the Poincare-Lyapunov disk as a deterministic SVG document.

The weighted polar compactification puts infinity at r = 0, so the picture
inverts the radius: a point (theta, r) of the polar field is drawn at plot
radius rho = 1/(1+r) and plot angle 2*pi*theta/T, where T is the period of
the generalized trigonometric pair.  The divisor at infinity is then the
unit circle, the origin of the plane is compressed towards the centre, and
trajectories of the compactified field become curves inside the disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .analysis import CURVE, divisor_singularities
from .charts import DIRECTIONS, directional_plc, polar_field
from .fields import FieldError, PlanarField, WeightVector
from .trig import TrigTable, build_trig

_MARKER_FILL = {
    "Hyperbolic": "#d62728",
    "SemiHyperbolic": "#ff7f0e",
    "Degenerate": "#9467bd",
}

_RADIAL_RING = (0.25, 0.45, 0.65, 0.85)


@dataclass(frozen=True)
class PortraitSpec:
    """Rendering options for the disk portrait.

    Seeds are (theta, r) pairs of the polar field with r in (0, 1]: r = 1 is
    a finite-radius rim well inside the plane and r -> 0 approaches the
    divisor at infinity.  ``seeds=None`` selects the default grid of twelve
    angular positions on four rings.
    """

    weight: WeightVector
    seeds: Optional[Sequence[tuple[float, float]]] = None
    horizon: float = 8.0
    tolerance: float = 1e-9
    size: int = 640
    markers: bool = True

    def validate(self) -> None:
        if self.horizon <= 0:
            raise ValueError("integration horizon must be positive")
        if not 0 < self.tolerance <= 1e-3:
            raise ValueError("step tolerance must lie in (0, 1e-3]")
        if self.size < 64:
            raise ValueError("image size must be at least 64 pixels")
        for seed in self.seeds or ():
            _, r = seed
            if not 0 < r <= 1:
                raise ValueError(
                    f"seed radius {r!r} outside (0, 1]: r=1 is the finite "
                    "rim, r->0 the divisor")


def default_seeds(period: float) -> tuple[tuple[float, float], ...]:
    out = []
    for i in range(12):
        theta = period * i / 12.0
        for r in _RADIAL_RING:
            out.append((theta, r))
    return tuple(out)


# ---------------------------------------------------------------------------
# singularity markers: chart coordinates -> theta on the divisor


def marker_theta(table: TrigTable, chart: str, u: float) -> float:
    """The divisor angle of the point with coordinate ``u`` in a chart.

    On the divisor the chart coordinate of the x-charts is
    u = Sn * Cs**(-beta/alpha) (with -Cs in Xneg), which increases
    monotonically across the half-circle the chart covers, so the equivalent
    equation Sn = u * Cs**(beta/alpha) has exactly one root there; the
    y-charts swap the roles of Cs and Sn.
    """
    alpha, beta = table.weight
    c1, c2, c3, c4 = table.axis_crossings
    period = table.period
    if chart == "Xpos":
        lo, hi, px = c3, c4 + c1, beta / alpha

        def h(t: float) -> float:
            cs, sn = table.eval(t)
            return sn - u * max(cs, 0.0) ** px
    elif chart == "Xneg":
        lo, hi, px = c1, c3, beta / alpha

        def h(t: float) -> float:
            cs, sn = table.eval(t)
            return sn - u * max(-cs, 0.0) ** px
    elif chart == "Ypos":
        lo, hi, px = 0.0, c2, alpha / beta

        def h(t: float) -> float:
            cs, sn = table.eval(t)
            return cs - u * max(sn, 0.0) ** px
    elif chart == "Yneg":
        lo, hi, px = c2, c4, alpha / beta

        def h(t: float) -> float:
            cs, sn = table.eval(t)
            return cs - u * max(-sn, 0.0) ** px
    else:
        raise ValueError(f"unknown directional chart {chart!r}")
    root = brentq(h, lo, hi, xtol=1e-13)
    return root % period


@dataclass(frozen=True)
class DiskMarker:
    theta: float
    classification: str
    chart: str
    chart_position: float


def divisor_markers(field: PlanarField, w: WeightVector,
                    ) -> tuple[tuple[DiskMarker, ...], bool]:
    """All divisor singularities as (theta, class) markers, deduplicated.

    Returns the markers sorted by angle together with a flag telling whether
    some chart saw the whole divisor as a curve of singularities.
    """
    table = build_trig(w)
    curve = False
    raw: list[DiskMarker] = []
    for chart in DIRECTIONS:
        for rec in divisor_singularities(directional_plc(field, w, chart)):
            if rec.classification == CURVE:
                curve = True
                continue
            u = float(rec.position)
            theta = marker_theta(table, chart, u)
            raw.append(DiskMarker(theta, rec.classification, chart, u))
    raw.sort(key=lambda m: m.theta)
    out: list[DiskMarker] = []
    for m in raw:
        if out and abs(m.theta - out[-1].theta) < 1e-6 * table.period:
            continue
        out.append(m)
    # the two ends of [0, T) meet on the circle
    if len(out) > 1 and abs(out[0].theta + table.period - out[-1].theta) \
            < 1e-6 * table.period:
        out.pop()
    return tuple(out), curve


# ---------------------------------------------------------------------------
# trajectories


def _compiled_terms(comp: dict) -> tuple[tuple[float, int, int, int], ...]:
    return tuple((float(c), i, j, k)
                 for (i, j, k), c in sorted(comp.items()))


def _trajectory(terms_theta, terms_r, table: TrigTable, seed, horizon: float,
                tol: float, sign: float) -> tuple[list[tuple[float, float]], bool]:
    """Integrate one branch of an orbit; returns samples and a truncation flag."""

    def rhs(t, y):
        cs, sn = table.eval(y[0])
        r = y[1]
        td = 0.0
        for c, i, j, k in terms_theta:
            td += c * cs ** i * sn ** j * r ** k
        rd = 0.0
        for c, i, j, k in terms_r:
            rd += c * cs ** i * sn ** j * r ** k
        return (sign * td, sign * rd)

    def hit_centre(t, y):
        return y[1] - 49.0

    hit_centre.terminal = True

    def hit_divisor(t, y):
        return y[1] - 1e-7

    hit_divisor.terminal = True

    sol = solve_ivp(rhs, (0.0, horizon), list(seed), method="DOP853",
                    rtol=tol, atol=tol, dense_output=True,
                    events=[hit_centre, hit_divisor])
    end = float(sol.t[-1])
    if end <= 0.0:
        return [tuple(seed)], sol.status != 0
    samples = []
    steps = 240
    for i in range(steps + 1):
        th, r = sol.sol(end * i / steps)
        samples.append((float(th), float(r)))
    return samples, sol.status != 0


# ---------------------------------------------------------------------------
# SVG assembly


def _disk_xy(theta: float, r: float, period: float, centre: float,
             radius: float) -> tuple[float, float]:
    rho = 1.0 / (1.0 + max(r, 0.0))
    phi = 2.0 * math.pi * theta / period
    return (centre + radius * rho * math.cos(phi),
            centre - radius * rho * math.sin(phi))


def _fmt(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def render_portrait(field: PlanarField, spec: PortraitSpec) -> str:
    """The phase portrait of the compactified field as an SVG 1.1 document."""
    spec.validate()
    if field.is_zero:
        raise FieldError("empty support: the zero field has no portrait")
    w = spec.weight
    pf = polar_field(field, w)
    table = build_trig(w)
    period = table.period
    terms_theta = _compiled_terms(pf.theta_comp)
    terms_r = _compiled_terms(pf.r_comp)

    seeds = tuple(spec.seeds) if spec.seeds is not None \
        else default_seeds(period)
    centre = spec.size / 2.0
    radius = spec.size / 2.0 - 12.0

    paths = []
    for seed in seeds:
        theta0 = seed[0] % period
        back, cut_b = _trajectory(terms_theta, terms_r, table,
                                  (theta0, seed[1]), spec.horizon,
                                  spec.tolerance, -1.0)
        fore, cut_f = _trajectory(terms_theta, terms_r, table,
                                  (theta0, seed[1]), spec.horizon,
                                  spec.tolerance, 1.0)
        pts = list(reversed(back)) + fore[1:]
        coords = " ".join(
            f"{_fmt(x)},{_fmt(y)}"
            for x, y in (_disk_xy(th, r, period, centre, radius)
                         for th, r in pts))
        cls = "trajectory truncated" if (cut_b or cut_f) else "trajectory"
        paths.append(f'    <polyline class="{cls}" points="{coords}"/>')

    marker_elems = []
    curve = False
    if spec.markers:
        markers, curve = divisor_markers(field, w)
        for m in markers:
            x, y = _disk_xy(m.theta, 0.0, period, centre, radius)
            fill = _MARKER_FILL.get(m.classification, "#333333")
            marker_elems.append(
                f'    <circle class="singularity" cx="{_fmt(x)}" '
                f'cy="{_fmt(y)}" r="4" fill="{fill}">'
                f'<title>{m.classification} ({m.chart} chart, '
                f'u={m.chart_position:.6g})</title></circle>')

    divisor_stroke = "#b22222" if curve else "#222222"
    alpha, beta = w.as_tuple()
    note = (f"Poincare-Lyapunov disk for weight ({alpha},{beta}): plot "
            f"radius rho = 1/(1+r), so the unit circle is the divisor at "
            f"infinity (r=0); plot angle is 2*pi*theta/T with "
            f"T={period:.12g}; marker colours: red Hyperbolic, orange "
            f"SemiHyperbolic, purple Degenerate"
            + ("; red rim: curve of singularities" if curve else ""))

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.size}" height="{spec.size}" '
        f'viewBox="0 0 {spec.size} {spec.size}">',
        f'  <metadata>{note}</metadata>',
        f'  <rect width="{spec.size}" height="{spec.size}" fill="#ffffff"/>',
        f'  <circle class="divisor" cx="{_fmt(centre)}" cy="{_fmt(centre)}" '
        f'r="{_fmt(radius)}" fill="none" stroke="{divisor_stroke}" '
        f'stroke-width="1.5"/>',
        '  <g fill="none" stroke="#1f77b4" stroke-width="1.1" '
        'stroke-linejoin="round">',
        *paths,
        '  </g>',
        '  <g class="markers" stroke="none">',
        *marker_elems,
        '  </g>',
        '</svg>',
    ]
    return "\n".join(lines) + "\n"
