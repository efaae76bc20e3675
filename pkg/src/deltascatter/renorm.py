"""
Green's functions, cut-off regularization and coupling-constant maps.

Renormalized couplings are ordinary complex inputs of the standard
formulation. The functions here turn them into explicit maps: bare ->
renormalized under a momentum cut-off, and physical (DFSS) -> renormalized
couplings that make the two formulations agree for a double delta.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import specfun
from .errors import (
    AccuracyError,
    DomainError,
    InfiniteCoupling,
    KernelSingularity,
    MatchingSingularity,
    SpectralSingularity,
)
from .model import Dimension, DirectionPair, SceneConfig, wave_vectors

_ZERO_RTOL = 1e-13


@dataclass(frozen=True)
class GreenValue:
    value: complex
    regularized: bool = False
    cutoff: Optional[float] = None


@dataclass(frozen=True)
class AppendixBState:
    """Intermediate quantities of the small-separation analysis.

    ``f_reduced`` is (f1, f2) written through h, xi and mu; ``f_direct`` is
    the same pair from the closed forms; ``phi`` is only available when the
    physical couplings are supplied.
    """

    h: complex
    xi: Tuple[complex, complex]
    mu: Tuple[complex, complex]
    phi: Optional[Tuple[complex, complex]]
    f_reduced: Tuple[complex, complex]
    f_direct: Tuple[complex, complex]

    @property
    def mismatch(self) -> float:
        return max(
            abs(a - b) / max(abs(b), 1e-300) for a, b in zip(self.f_reduced, self.f_direct)
        )


def _expm1_i(y):
    """exp(iy) - 1 without cancellation for small y."""
    s = math.sin(0.5 * y)
    return complex(-2.0 * s * s, math.sin(y))


def _j0_minus_one(x):
    if abs(x) < 0.5:
        q = -0.25 * x * x
        term, total, m = 1.0, 0.0, 0
        while True:
            m += 1
            term *= q / (m * m)
            total += term
            if abs(term) < 1e-18 * abs(total):
                return total
    return specfun.bessel_j0(x) - 1.0


def _x_minus_sin(x):
    if abs(x) < 0.1:
        x2 = x * x
        return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    return x - math.sin(x)


def green_free(dimension, k, x) -> GreenValue:
    """Outgoing free Green's function of the Helmholtz operator.

    2D: -(i/4) H0^(1)(k r); 3D: -exp(i k r)/(4 pi r).
    """
    r = float(np.linalg.norm(np.atleast_1d(np.asarray(x, dtype=float))))
    if r == 0.0:
        raise KernelSingularity("free Green's function is singular at r = 0")
    if Dimension(dimension) == Dimension.TWO:
        return GreenValue(-0.25j * specfun.hankel1_0(k * r))
    return GreenValue(-cmath.exp(1j * k * r) / (4 * math.pi * r))


def g_lambda_zero_2d(Lambda, k) -> GreenValue:
    """Cut-off Green's function at the origin in 2D (exact in Lambda)."""
    if not (k > 0 and Lambda > k):
        raise DomainError(f"need Lambda > k > 0, got Lambda = {Lambda!r}, k = {k!r}")
    value = -math.log(Lambda * Lambda / (k * k) - 1.0) / (4 * math.pi) - 0.25j
    return GreenValue(value, True, float(Lambda))


def g_lambda_zero_3d(Lambda, k) -> GreenValue:
    """Leading large-cut-off form -Lambda/2pi^2 - ik/4pi; needs Lambda >= 10 k."""
    if not k > 0:
        raise DomainError(f"need k > 0, got {k!r}")
    if Lambda < 10 * k:
        raise AccuracyError(
            f"truncated expansion needs Lambda >= 10 k (Lambda = {Lambda!r}, k = {k!r})"
        )
    return GreenValue(-Lambda / (2 * math.pi ** 2) - 1j * k / (4 * math.pi), True, float(Lambda))


def _invert_coupling(inverse, *terms):
    scale = sum(abs(t) for t in terms)
    if abs(inverse) <= _ZERO_RTOL * scale:
        raise InfiniteCoupling("renormalized coupling diverges (its inverse vanishes)")
    return 1.0 / inverse


def renormalized_coupling_2d(bare, Lambda, mu, c=0.0) -> complex:
    """(1/bare + ln(Lambda/mu)/2pi - c)^-1."""
    if not (Lambda > 0 and mu > 0):
        raise DomainError("Lambda and mu must be positive")
    inv_bare = 1.0 / complex(bare)
    shift = math.log(Lambda / mu) / (2 * math.pi)
    return _invert_coupling(inv_bare + shift - c, inv_bare, shift, c)


def renormalized_coupling_3d(bare, Lambda, c=0.0) -> complex:
    """(1/bare + Lambda/2pi^2 - c)^-1."""
    if not Lambda > 0:
        raise DomainError("Lambda must be positive")
    inv_bare = 1.0 / complex(bare)
    shift = Lambda / (2 * math.pi ** 2)
    return _invert_coupling(inv_bare + shift - c, inv_bare, shift, c)


def eta(z1, z2) -> complex:
    """Ratio f02/f01 of the coincident coefficients, equal to z2/z1."""
    return complex(z2) / complex(z1)


def coincidence_f0(z1, z2, k, dimension):
    """Limits f0n of the DFSS coefficients f_n as the two centers merge.

    2D: 4 z_n / (4 + i (z1 + z2)); 3D: 4 pi z_n / (4 pi + i k (z1 + z2)).
    """
    z1, z2 = complex(z1), complex(z2)
    if z1 == 0 or z2 == 0:
        raise DomainError("couplings must be nonzero")
    if Dimension(dimension) == Dimension.TWO:
        num, den, t = 4.0, 4 + 1j * (z1 + z2), (4.0, abs(z1 + z2))
    else:
        num, den, t = 4 * math.pi, 4 * math.pi + 1j * k * (z1 + z2), (4 * math.pi, k * abs(z1 + z2))
    if abs(den) <= _ZERO_RTOL * sum(t):
        raise SpectralSingularity("the merged scatterer sits on a spectral singularity")
    return num * z1 / den, num * z2 / den


def coincident_coupling(f01, f02, k, dimension) -> complex:
    """Single-delta coupling whose amplitude is reproduced by f01 + f02.

    2D: f01 + f02 = 1/(1/z + i/4); 3D: f01 + f02 = 4 pi/(4 pi/z + i k).
    """
    total = complex(f01) + complex(f02)
    if Dimension(dimension) == Dimension.TWO:
        return 1.0 / (1.0 / total - 0.25j)
    return 4 * math.pi / (4 * math.pi / total - 1j * k)


def _check_matching(den, *terms):
    scale = sum(abs(t) for t in terms)
    if abs(den) <= _ZERO_RTOL * scale:
        raise MatchingSingularity("matched-coupling denominator vanishes")


def matched_from_phase_2d(z1, z2, kl, phase_m1):
    """Matched 2D couplings from k*l and exp(i k.(a2 - a1)) - 1."""
    z1, z2 = complex(z1), complex(z2)
    if not kl > 0:
        raise DomainError("matching needs a positive separation")
    j = specfun.bessel_j0(kl)
    jm1 = _j0_minus_one(kl)
    y = specfun.bessel_y0(kl)
    h = complex(j, y)
    e = 1.0 + phase_m1
    # exp(+i..) for the first coupling, exp(-i..) for the second
    e_inv = 1.0 / e
    em1_inv = -phase_m1 * e_inv

    def one(za, zb, ee, eem1):
        # ee*J - 1 = (ee - 1) J + (J - 1); J - ee = (J - 1) - (ee - 1)
        num = 4 * za * (zb * (eem1 * j + jm1) + 4j)
        t1 = za * zb * y * (jm1 - eem1)
        t2 = 4 * zb * (ee * h - 1)
        den = t1 + t2 + 16j
        _check_matching(den, t1, t2, 16)
        return num / den

    return one(z1, z2, e, phase_m1), one(z2, z1, e_inv, em1_inv)


def matched_coupling_2d(z1, z2, k, ell, theta0):
    """Renormalized couplings making the standard 2D double delta equal DFSS.

    Geometry: a1 = 0, a2 = ell * e_y, incident angle theta0.
    """
    kl = k * ell
    return matched_from_phase_2d(z1, z2, kl, _expm1_i(kl * math.sin(theta0)))


def matched_from_phase_3d(z1, z2, k, ell, phase_m1):
    """Matched 3D couplings from exp(i k.(a2 - a1)) - 1."""
    z1, z2 = complex(z1), complex(z2)
    if not ell > 0:
        raise DomainError("matching needs a positive separation")
    kl = k * ell
    s = math.sin(kl)
    c = math.cos(kl)
    xms = _x_minus_sin(kl)
    eikl = cmath.exp(1j * kl)
    e = 1.0 + phase_m1
    e_inv = 1.0 / e
    em1_inv = -phase_m1 * e_inv
    four_pi = 4 * math.pi

    def one(za, zb, ee, eem1):
        # kl - ee sin(kl) = (kl - sin kl) - (ee - 1) sin kl
        num = four_pi * za * (zb / ell * (xms - eem1 * s) - four_pi * 1j)
        # sin(kl) - kl ee = -(kl - sin kl) - kl (ee - 1)
        t1 = za * zb / ell ** 2 * c * (-xms - kl * eem1)
        t2 = four_pi * zb / ell * (kl + 1j * ee * eikl)
        t3 = -16j * math.pi ** 2
        den = t1 + t2 + t3
        _check_matching(den, t1, t2, t3)
        return num / den

    return one(z1, z2, e, phase_m1), one(z2, z1, e_inv, em1_inv)


def matched_coupling_3d(z1, z2, k, ell, theta0, phi0):
    """3D analog; geometry a1 = 0, a2 = ell * e_x, alpha0 = sin(theta0) cos(phi0)."""
    alpha0 = math.sin(theta0) * math.cos(phi0)
    return matched_from_phase_3d(z1, z2, k, ell, _expm1_i(k * ell * alpha0))


def matched_couplings_for_scene(config: SceneConfig, dirs: DirectionPair):
    """Matched renormalized couplings for an arbitrary two-scatterer scene.

    The scene couplings are read as the DFSS ones; only the separation and
    the incident phase difference between the two centers enter.
    """
    if config.n != 2:
        raise DomainError(f"matching needs exactly two scatterers, got {config.n}")
    k_in, _ = wave_vectors(config, dirs)
    delta = config.positions[1] - config.positions[0]
    ell = float(np.linalg.norm(delta))
    z1, z2 = config.couplings
    phase_m1 = _expm1_i(float(delta @ k_in))
    if config.dimension == Dimension.TWO:
        return matched_from_phase_2d(z1, z2, config.k * ell, phase_m1)
    return matched_from_phase_3d(z1, z2, config.k, ell, phase_m1)


def asymptotic_coupling(z1, z2, k, ell, dimension):
    """Leading small-separation form of the matched couplings.

    2D: 2 pi eta^(2n-3) / ln(k l); 3D: -4 pi eta^(2n-3) l.
    """
    e = eta(z1, z2)
    if Dimension(dimension) == Dimension.TWO:
        lead = 2 * math.pi / math.log(k * ell)
    else:
        lead = -4 * math.pi * ell
    return lead / e, lead * e


def appendix_b_state(z1t, z2t, k, ell, dimension, theta0=0.0, phi0=0.0,
                     couplings=None) -> AppendixBState:
    """Evaluate h, xi_n, mu_n (and phi_n) for a standard double delta.

    ``z1t, z2t`` are renormalized couplings. ``couplings=(z1, z2)`` gives
    the physical couplings that fix f0n and eta, needed for phi_n. The
    geometry follows the closed forms: a2 = ell e_y in 2D (phase angle
    theta0) and a2 = ell e_x in 3D (alpha0 = sin theta0 cos phi0).
    """
    from .amplitude import closed_form_double_2d, closed_form_double_3d
    from .model import Formulation

    dimension = Dimension(dimension)
    if not ell > 0:
        raise DomainError("ell must be positive")
    kl = k * ell
    inv1, inv2 = 1.0 / complex(z1t), 1.0 / complex(z2t)
    if dimension == Dimension.TWO:
        h = 0.25j * specfun.hankel1_0(kl)
        g = 0.25j
        em1 = _expm1_i(kl * math.sin(theta0))
    else:
        h = cmath.exp(1j * kl) / (4 * math.pi * ell)
        g = 1j * k / (4 * math.pi)
        em1 = _expm1_i(kl * math.sin(theta0) * math.cos(phi0))
    xi1 = inv1 - h + g
    xi2 = inv2 - h + g
    mu1 = -em1 * h
    mu2 = em1 * (xi1 + h)
    den = xi1 * xi2 + (xi1 + xi2) * h
    if den == 0:
        raise SpectralSingularity("reduced denominator vanishes")
    f_reduced = ((xi2 + mu1) / den, (xi1 + mu2) / den)
    if dimension == Dimension.TWO:
        f1, f2, _ = closed_form_double_2d(z1t, z2t, ell, k, theta0, 0.0, Formulation.STANDARD)
    else:
        f1, f2, _ = closed_form_double_3d(
            z1t, z2t, ell, k, theta0, phi0, 0.0, 0.0, Formulation.STANDARD
        )
    phi = None
    if couplings is not None:
        za, zb = couplings
        f01, f02 = coincidence_f0(za, zb, k, dimension)
        et = eta(za, zb)
        phi = (xi1 + (et + 1) * h - 1 / f01, xi2 + (1 / et + 1) * h - 1 / f02)
    return AppendixBState(h, (xi1, xi2), (mu1, mu2), phi, f_reduced, (f1, f2))
