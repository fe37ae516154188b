"""Generalized sine/cosine pairs attached to a weight vector.

For a weight (alpha, beta) the functions Cs, Sn solve

    Cs' = -Sn**(2*alpha - 1),   Sn' = Cs**(2*beta - 1),
    Cs(0) = 1, Sn(0) = 0,

conserve beta*Sn**(2*alpha) + alpha*Cs**(2*beta) = alpha, and are periodic.
The period is computed by quadrature of the closed-form integral (with the
endpoint power singularities removed by substitution) and cross-checked
against the orbit return time of the integrated Cauchy problem.
"""

from __future__ import annotations

from dataclasses import dataclass

from scipy.integrate import quad, solve_ivp

from .fields import WeightVector


class QuadratureError(ArithmeticError):
    """Period quadrature failed to reach the requested accuracy."""


@dataclass(frozen=True)
class TrigTable:
    weight: tuple[int, int]
    period: float
    #: theta values in (0, period] where Cs or Sn crosses zero; the last
    #: entry is the return time, an independent estimate of the period
    axis_crossings: tuple[float, ...]
    _solution: object

    def eval(self, theta: float) -> tuple[float, float]:
        cs, sn = self._solution.sol(theta % self.period)
        return float(cs), float(sn)

    def eval_array(self, thetas):
        import numpy as np

        reduced = np.asarray(thetas, dtype=float) % self.period
        return self._solution.sol(reduced)


def _period_by_quadrature(alpha: int, beta: int) -> tuple[float, float]:
    """Evaluate the closed-form period integral; returns (T, error estimate).

    The raw integrand (1-t)**(1/(2a)-1) * t**(1/(2b)-1) blows up at both
    endpoints; substituting t = s**(2*beta) on [0, 1/2] and 1-t = s**(2*alpha)
    on [1/2, 1] bounds it, after which ordinary adaptive quadrature applies.
    """
    qa = 1.0 / (2.0 * alpha)
    qb = 1.0 / (2.0 * beta)
    prefactor = 2.0 * alpha ** ((1.0 - 2.0 * alpha) / (2.0 * alpha)) \
        / beta ** (1.0 / (2.0 * alpha))
    i0, e0 = quad(lambda s: 2.0 * beta * (1.0 - s ** (2 * beta)) ** (qa - 1.0),
                  0.0, 0.5 ** (1.0 / (2 * beta)), epsabs=1e-13, epsrel=1e-12)
    i1, e1 = quad(lambda s: 2.0 * alpha * (1.0 - s ** (2 * alpha)) ** (qb - 1.0),
                  0.0, 0.5 ** (1.0 / (2 * alpha)), epsabs=1e-13, epsrel=1e-12)
    err = prefactor * (e0 + e1)
    if err > 1e-9:
        raise QuadratureError(
            f"period quadrature for weight ({alpha},{beta}) reached only "
            f"{err:.3e}")
    return prefactor * (i0 + i1), err


_CACHE: dict[tuple[int, int], tuple[float, TrigTable]] = {}


def build_trig(w: WeightVector, tol: float = 1e-12) -> TrigTable:
    """Integrate the Cauchy problem and package a dense-output table."""
    if not 0.0 < tol <= 1e-6:
        raise ValueError("tol must lie in (0, 1e-6]")
    key = w.as_tuple()
    hit = _CACHE.get(key)
    if hit is not None and hit[0] <= tol:
        return hit[1]
    alpha, beta = key
    period, _ = _period_by_quadrature(alpha, beta)

    def rhs(_, y):
        cs, sn = y
        return [-(sn ** (2 * alpha - 1)), cs ** (2 * beta - 1)]

    def cs_zero(_, y):
        return y[0]

    def sn_zero(_, y):
        return y[1]

    sol = solve_ivp(rhs, (0.0, 1.5 * period), [1.0, 0.0], method="DOP853",
                    dense_output=True, rtol=max(min(tol, 1e-12), 1e-13),
                    atol=1e-14, events=[cs_zero, sn_zero])
    if not sol.success:
        raise QuadratureError(f"trig integration failed: {sol.message}")
    crossings = sorted(t for ev in sol.t_events for t in ev if t > 1e-12)
    # the oval meets {Sn = 0, Cs > 0} only at (1, 0), so the first such
    # crossing is the orbit's own measurement of the period
    returns = [t for t in sol.t_events[1] if t > 1e-9 and sol.sol(t)[0] > 0]
    if not returns or abs(returns[0] - period) > 1e-7:
        raise QuadratureError(
            f"orbit return time disagrees with the period integral for {key}")
    inside = tuple(t for t in crossings if t <= returns[0])
    table = TrigTable(key, period, inside, sol)
    _CACHE[key] = (tol, table)
    return table


def eval_trig(table: TrigTable, theta: float) -> tuple[float, float]:
    return table.eval(theta)
