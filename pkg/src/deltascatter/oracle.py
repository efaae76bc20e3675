"""
Quadrature oracles for the closed forms used elsewhere.

These evaluate the defining integrals numerically (QUADPACK adaptive
Gauss-Kronrod through ``scipy.integrate.quad``) and never call the closed
forms they check. The i*epsilon prescription is applied literally: each
integral is computed on a decreasing epsilon grid and extrapolated to
epsilon -> 0+ by polynomial (Richardson) extrapolation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, List, Sequence

import numpy as np
from scipy import integrate

from . import specfun
from .errors import DomainError, OracleFailure

EVAL_BUDGET = 1_000_000
DEFAULT_EPS_FACTORS = (1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    est_error: float
    evaluations: int


class _Counter:
    def __init__(self, budget):
        self.count = 0
        self.error = 0.0
        self.budget = budget

    def quad(self, func, a, b, points=None, **kw):
        limit = kw.pop("limit", 2000)
        opts = dict(epsabs=1e-13, epsrel=1e-13, limit=limit, full_output=1)
        opts.update(kw)
        if points is not None:
            points = [p for p in points if a < p < b] or None
        res = integrate.quad(func, a, b, points=points, **opts)
        value, err, info = res[0], res[1], res[2]
        self.count += info["neval"]
        self.error += err
        if self.count > self.budget:
            raise OracleFailure(f"quadrature budget of {self.budget} evaluations exceeded")
        return value


def _richardson(eps, values):
    """Extrapolate values(eps) to eps = 0 with Neville's scheme.

    Returns ``(full, coarser)`` where ``coarser`` drops the largest epsilon;
    their difference is the extrapolation error estimate.
    """
    eps = np.asarray(eps, dtype=float)
    values = np.asarray(values, dtype=complex)

    def neville(xs, ys):
        p = list(ys)
        n = len(xs)
        for m in range(1, n):
            for i in range(n - m):
                p[i] = ((0 - xs[i + m]) * p[i] + (xs[i] - 0) * p[i + 1]) / (xs[i] - xs[i + m])
        return p[0]

    full = neville(eps, values)
    coarser = neville(eps[1:], values[1:]) if len(eps) > 1 else values[-1]
    return full, coarser


def _eps_grid(eps_grid, k):
    if eps_grid is None:
        eps_grid = [f * k * k for f in DEFAULT_EPS_FACTORS]
    eps_grid = np.asarray(eps_grid, dtype=float)
    if np.any(eps_grid <= 0) or np.any(np.diff(eps_grid) >= 0):
        raise DomainError("eps_grid must be positive and strictly decreasing")
    return eps_grid


def _resonant_integral(counter, power, k, Lambda, eps):
    """int_0^Lambda p^power / (k^2 - p^2 + i eps) dp, split at the resonance."""
    width = eps / (2 * k)
    pts = sorted({k - 50 * width, k - width, k, k + width, k + 50 * width})

    def denom(p):
        return (k * k - p * p) ** 2 + eps * eps

    def re(p):
        return p ** power * (k * k - p * p) / denom(p)

    def im(p):
        return -(p ** power) * eps / denom(p)

    return complex(
        counter.quad(re, 0.0, Lambda, points=pts), counter.quad(im, 0.0, Lambda, points=pts)
    )


def _extrapolated(power, prefactor, Lambda, k, eps_grid, tolerance):
    counter = _Counter(EVAL_BUDGET)
    values = [prefactor * _resonant_integral(counter, power, k, Lambda, e) for e in eps_grid]
    full, coarser = _richardson(eps_grid, values)
    extrap_err = abs(full - coarser)
    if extrap_err > tolerance:
        raise OracleFailure(
            f"epsilon extrapolation did not settle: change {extrap_err:.3e} > {tolerance:.1e}"
        )
    return QuadratureResult(complex(full), extrap_err + abs(prefactor) * counter.error,
                            counter.count)


def quad_g_lambda_2d(Lambda, k, eps_grid=None, tolerance=1e-6) -> QuadratureResult:
    """int_0^Lambda p/(k^2 - p^2 + i eps) dp/(2 pi), extrapolated to eps -> 0+."""
    if not (k > 0 and Lambda > k):
        raise DomainError(f"need Lambda > k > 0, got Lambda = {Lambda!r}, k = {k!r}")
    return _extrapolated(1, 1 / (2 * math.pi), Lambda, k, _eps_grid(eps_grid, k), tolerance)


def quad_g_lambda_3d(Lambda, k, eps_grid=None, tolerance=1e-6) -> QuadratureResult:
    """(1/2 pi^2) int_0^Lambda p^2/(k^2 - p^2 + i eps) dp, extrapolated to eps -> 0+."""
    if not k > 0:
        raise DomainError("k must be positive")
    if Lambda < 10 * k:
        raise DomainError(f"need Lambda >= 10 k, got Lambda = {Lambda!r}, k = {k!r}")
    return _extrapolated(2, 1 / (2 * math.pi ** 2), Lambda, k, _eps_grid(eps_grid, k), tolerance)


def disk_integral(a, k) -> QuadratureResult:
    """int over |q| < k of exp(i a q_x) / sqrt(k^2 - |q|^2) d^2 q.

    Polar coordinates q = k sin(tau) (cos phi, sin phi) remove the
    inverse-square-root edge: the measure becomes k sin(tau) dtau dphi.
    """
    if not (a > 0 and k > 0):
        raise DomainError("a and k must be positive")
    counter = _Counter(EVAL_BUDGET)
    ak = a * k

    def inner(tau, part):
        s = ak * math.sin(tau)
        f = math.cos if part == 0 else math.sin
        return k * math.sin(tau) * counter.quad(
            lambda phi: f(s * math.cos(phi)), 0.0, 2 * math.pi, epsabs=1e-14, epsrel=1e-13
        )

    re = counter.quad(lambda t: inner(t, 0), 0.0, 0.5 * math.pi, epsabs=1e-13, epsrel=1e-12)
    im = counter.quad(lambda t: inner(t, 1), 0.0, 0.5 * math.pi, epsabs=1e-13, epsrel=1e-12)
    return QuadratureResult(complex(re, im), counter.error, counter.count)


def disk_identity(a, k) -> float:
    """Closed form 2 pi sin(a k)/a of ``disk_integral``."""
    return 2 * math.pi * math.sin(a * k) / a


def _quiet_quad(func, a, b):
    # tolerances sit at rounding level, so QUADPACK may report roundoff
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(func, a, b, epsabs=1e-15, epsrel=1e-14, limit=500)[0]


def j0_integral(x) -> float:
    """(1/pi) int_0^pi cos(x sin theta) d theta."""
    return _quiet_quad(lambda t: math.cos(x * math.sin(t)), 0.0, math.pi) / math.pi


def y0_integral(x) -> float:
    """(1/pi) int_0^pi sin(x sin t) dt - (2/pi) int_0^inf exp(-x sinh t) dt."""
    first = _quiet_quad(lambda t: math.sin(x * math.sin(t)), 0.0, math.pi)
    # exp(-x sinh t) < 1e-300 beyond this point
    upper = math.asinh(700.0 / x)
    second = _quiet_quad(lambda t: math.exp(-x * math.sinh(t)), 0.0, upper)
    return first / math.pi - 2.0 * second / math.pi


@dataclass
class CheckReport:
    name: str
    tolerance: float
    deviations: List[float] = field(default_factory=list)
    points: List[float] = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max(self.deviations) if self.deviations else 0.0

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def as_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "max_deviation": self.max_deviation,
            "points": list(self.points),
            "deviations": list(self.deviations),
        }


def j0_check(x_grid: Sequence[float], j0: Callable[[float], float] = specfun.bessel_j0,
             tolerance=1e-11) -> CheckReport:
    """Compare J0 against its integral representation on ``x_grid``."""
    report = CheckReport("j0_check", tolerance)
    for x in x_grid:
        report.points.append(float(x))
        report.deviations.append(abs(j0(x) - j0_integral(x)))
    return report


def y0_check(x_grid: Sequence[float], y0: Callable[[float], float] = specfun.bessel_y0,
             tolerance=1e-10) -> CheckReport:
    report = CheckReport("y0_check", tolerance)
    for x in x_grid:
        report.points.append(float(x))
        report.deviations.append(abs(y0(x) - y0_integral(x)))
    return report
