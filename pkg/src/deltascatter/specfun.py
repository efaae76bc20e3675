"""
Zero-order Bessel and Hankel functions of real argument, and sinc.

Three evaluation regimes are used for J0 and Y0:

- ``x <= 2``: power series (and the logarithmic series for Y0). No
  cancellation problem in this range.
- ``2 < x < 17``: Miller backward recurrence for J_n, normalised with
  J0 + 2 sum J_2k = 1. Y0 follows from the Neumann series
  Y0 = (2/pi)[(ln(x/2) + gamma) J0 - 2 sum (-1)^k J_2k / k].
- ``x >= 17``: Hankel asymptotic expansion. Its optimally truncated error
  behaves like exp(-2x), which is below 1e-15 from x = 17 on.

All functions are scalar, pure and thread safe.
"""

import math

from .errors import DomainError

EULER_GAMMA = 0.5772156649015329

_SERIES_MAX = 2.0
_ASYMPTOTIC_MIN = 17.0
_SINC_TAYLOR_MAX = 1e-4
_RESCALE = 1e200


def _check_finite(x):
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"non-finite argument {x!r}")
    return x


def _j0_series(x):
    q = -0.25 * x * x
    term = 1.0
    total = 1.0
    m = 0
    while True:
        m += 1
        term *= q / (m * m)
        total += term
        if abs(term) < 1e-17 * abs(total):
            return total


def _y0_series(x):
    # sum_{m>=1} (-1)^(m+1) H_m (x^2/4)^m / (m!)^2
    q = 0.25 * x * x
    term = 1.0
    harmonic = 0.0
    total = 0.0
    m = 0
    while True:
        m += 1
        term *= -q / (m * m)
        harmonic += 1.0 / m
        contrib = -term * harmonic
        total += contrib
        if abs(contrib) < 1e-18:
            break
    return (2.0 / math.pi) * ((math.log(0.5 * x) + EULER_GAMMA) * _j0_series(x) + total)


def _miller(x):
    """Return (J0(x), sum_{k>=1} (-1)^k J_2k(x) / k) by backward recurrence."""
    start = 2 * ((int(1.2 * x) + 44) // 2)
    j_next = 0.0
    j_cur = 1e-300
    norm = 0.0
    alt = 0.0
    two_over_x = 2.0 / x
    for n in range(start, 0, -1):
        j_prev = n * two_over_x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        # j_cur now holds the unnormalised J_{n-1}
        m = n - 1
        if m > 0 and m % 2 == 0:
            norm += j_cur
            kk = m // 2
            alt += (-1.0 if kk % 2 else 1.0) * j_cur / kk
        if abs(j_cur) > _RESCALE:
            j_cur /= _RESCALE
            j_next /= _RESCALE
            norm /= _RESCALE
            alt /= _RESCALE
    scale = j_cur + 2.0 * norm
    return j_cur / scale, alt / scale


def _hankel_asymptotic(x):
    """Return (P, Q) of the large-argument expansion for order zero."""
    p = 1.0
    q = 0.0
    term = 1.0
    k = 0
    eightx = 8.0 * x
    prev = math.inf
    while True:
        k += 1
        term *= -((2 * k - 1) ** 2) / (k * eightx)
        if abs(term) >= prev or abs(term) < 1e-18:
            break
        prev = abs(term)
        if k % 2 == 0:
            p += term if (k // 2) % 2 == 0 else -term
        else:
            q += term if ((k - 1) // 2) % 2 == 0 else -term
    return p, q


def _j0_y0_asymptotic(x):
    p, q = _hankel_asymptotic(x)
    s, c = math.sin(x), math.cos(x)
    # cos(x - pi/4), sin(x - pi/4) without forming x - pi/4
    cos_chi = (c + s) / math.sqrt(2.0)
    sin_chi = (s - c) / math.sqrt(2.0)
    amp = math.sqrt(2.0 / (math.pi * x))
    return amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi)


def bessel_j0(x):
    """Bessel function of the first kind of order zero, J0(x), for real x."""
    x = abs(_check_finite(x))
    if x <= _SERIES_MAX:
        return _j0_series(x)
    if x < _ASYMPTOTIC_MIN:
        return _miller(x)[0]
    return _j0_y0_asymptotic(x)[0]


def bessel_y0(x):
    """Bessel function of the second kind of order zero, Y0(x), for x > 0.

    Raises
    ------
    DomainError
        If ``x <= 0`` or ``x`` is not finite.
    """
    x = _check_finite(x)
    if x <= 0.0:
        raise DomainError(f"Y0 is undefined for x = {x!r} <= 0")
    if x <= _SERIES_MAX:
        return _y0_series(x)
    if x < _ASYMPTOTIC_MIN:
        j0, alt = _miller(x)
        return (2.0 / math.pi) * ((math.log(0.5 * x) + EULER_GAMMA) * j0 - 2.0 * alt)
    return _j0_y0_asymptotic(x)[1]


def hankel1_0(x):
    """H0^(1)(x) = J0(x) + i Y0(x) for x > 0."""
    x = _check_finite(x)
    if x <= 0.0:
        raise DomainError(f"H0^(1) is singular at x = {x!r} <= 0")
    if x >= _ASYMPTOTIC_MIN:
        j0, y0 = _j0_y0_asymptotic(x)
        return complex(j0, y0)
    return complex(bessel_j0(x), bessel_y0(x))


def sinc(x):
    """Unnormalised sinc, sin(x)/x, with sinc(0) = 1."""
    x = _check_finite(x)
    if abs(x) <= _SINC_TAYLOR_MAX:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return math.sin(x) / x
