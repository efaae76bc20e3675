"""
Scattering amplitudes.

The matrix path solves A f = b once per incident direction and sums

    f(k', k) = c_d / sqrt(k^(3-d)) * sum_m f_m exp(-i a_m . k')

with c_2 = -sqrt(i / 8 pi) (principal root, sqrt(i) = exp(i pi/4)) and
c_3 = -1/(4 pi). The closed forms for one and two scatterers are written
out independently and serve as cross-checks of the matrix path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import specfun
from .errors import DomainError, EvaluationAtCenter, KernelSingularity, SpectralSingularity
from .kernel import STANDARD_MIN_KL, build_interaction_matrix
from .model import (
    Dimension,
    DirectionPair,
    Formulation,
    SceneConfig,
    validate_scene,
    wave_vectors,
)
from .renorm import green_free
from .solve import CoefficientVector, SolveDiagnostics, solve_coefficients

C2 = -cmath.sqrt(1j / (8 * math.pi))
C3 = -1.0 / (4 * math.pi)

# relative size below which a closed-form denominator counts as zero
_POLE_RTOL = 1e-12


@dataclass(frozen=True)
class AmplitudeResult:
    f: complex
    dimension: Dimension
    formulation: Formulation
    dirs: DirectionPair
    diagnostics: Optional[SolveDiagnostics] = None

    @property
    def dcs(self) -> float:
        return differential_cross_section(self)


def prefactor(dimension, k) -> complex:
    """c_d / sqrt(k^(3-d))."""
    if Dimension(dimension) == Dimension.TWO:
        return C2 / math.sqrt(k)
    return C3


def differential_cross_section(result) -> float:
    """|f|^2. Accepts an ``AmplitudeResult`` or a bare complex number."""
    f = result.f if isinstance(result, AmplitudeResult) else complex(result)
    return f.real * f.real + f.imag * f.imag


def far_field(config: SceneConfig, coeffs: CoefficientVector, k_out) -> complex:
    """Combine solved coefficients into f for one scattered wave vector."""
    phases = np.exp(-1j * (config.positions @ np.asarray(k_out, dtype=float)))
    return complex(prefactor(config.dimension, config.k) * np.sum(coeffs.f * phases))


def solve_scene(config: SceneConfig, incident: DirectionPair):
    """Validate, build A and solve; returns ``(CoefficientVector, SolveDiagnostics)``."""
    validate_scene(config)
    A = build_interaction_matrix(config)
    return solve_coefficients(A, config, incident)


def scattering_amplitude(config: SceneConfig, dirs: DirectionPair) -> AmplitudeResult:
    """Scattering amplitude f(k', k) through the interaction matrix.

    Raises
    ------
    SpectralSingularity
        When A is not invertible.
    KernelSingularity
        When two standard-formulation centers (nearly) coincide.
    """
    coeffs, diag = solve_scene(config, dirs)
    _, k_out = wave_vectors(config, dirs)
    return AmplitudeResult(
        far_field(config, coeffs, k_out), config.dimension, config.formulation, dirs, diag
    )


def _check_pole(denominator, *terms):
    scale = sum(abs(t) for t in terms)
    if abs(denominator) <= _POLE_RTOL * scale:
        raise SpectralSingularity(
            f"closed-form denominator vanishes ({abs(denominator):.3e} vs scale {scale:.3e})"
        )


def closed_form_single(dimension, formulation, coupling, position, k, dirs) -> AmplitudeResult:
    """Closed-form amplitude of one delta scatterer.

    2D: -sqrt(i/8 pi k) exp(i a.(k - k')) / (1/z + i/4)
    3D: -exp(i a.(k - k')) / (4 pi / z + i k)
    """
    dimension = Dimension(dimension)
    z = complex(coupling)
    a = np.asarray(position, dtype=float)
    if dimension == Dimension.TWO:
        k_in = k * np.array([math.cos(dirs.theta0), math.sin(dirs.theta0)])
        k_out = k * np.array([math.cos(dirs.theta), math.sin(dirs.theta)])
    else:
        k_in = k * np.array([
            math.sin(dirs.theta0) * math.cos(dirs.phi0),
            math.sin(dirs.theta0) * math.sin(dirs.phi0),
            math.cos(dirs.theta0),
        ])
        k_out = k * np.array([
            math.sin(dirs.theta) * math.cos(dirs.phi),
            math.sin(dirs.theta) * math.sin(dirs.phi),
            math.cos(dirs.theta),
        ])
    phase = cmath.exp(1j * float(a @ (k_in - k_out)))
    if dimension == Dimension.TWO:
        den = 1 / z + 0.25j
        _check_pole(den, 1 / z, 0.25)
        f = -cmath.sqrt(1j / (8 * math.pi * k)) * phase / den
    else:
        den = 4 * math.pi / z + 1j * k
        _check_pole(den, 4 * math.pi / z, k)
        f = -phase / den
    return AmplitudeResult(f, dimension, Formulation(formulation), dirs)


def _check_separation(formulation, kl):
    if not kl >= 0:
        raise DomainError("separation must be non-negative")
    if formulation == Formulation.STANDARD and kl < STANDARD_MIN_KL:
        raise KernelSingularity(f"standard kernel diverges at k*l = {kl:.3e}")


def closed_form_double_2d(z1, z2, ell, k, theta0, theta, formulation):
    """Two scatterers at a1 = 0 and a2 = ell * e_y in 2D.

    Returns ``(f1, f2, AmplitudeResult)`` where f = -sqrt(i/8 pi k)
    [f1 + f2 exp(-i k ell sin(theta))]. The standard formulation uses
    H0^(1)(k ell) off the diagonal (couplings are renormalized ones); DFSS
    uses J0(k ell).
    """
    formulation = Formulation(formulation)
    kl = k * ell
    _check_separation(formulation, kl)
    if formulation == Formulation.STANDARD:
        kern = specfun.hankel1_0(kl)
    else:
        kern = specfun.bessel_j0(kl)
    p1 = 4 / complex(z1) + 1j
    p2 = 4 / complex(z2) + 1j
    e0 = cmath.exp(1j * kl * math.sin(theta0))
    den = p1 * p2 + kern * kern
    _check_pole(den, abs(p1 * p2), abs(kern) ** 2)
    f1 = 4 * (p2 - 1j * kern * e0) / den
    f2 = 4 * (p1 * e0 - 1j * kern) / den
    f = -cmath.sqrt(1j / (8 * math.pi * k)) * (f1 + f2 * cmath.exp(-1j * kl * math.sin(theta)))
    dirs = DirectionPair(theta0=theta0, theta=theta)
    return f1, f2, AmplitudeResult(f, Dimension.TWO, formulation, dirs)


def closed_form_double_3d(z1, z2, ell, k, theta0, phi0, theta, phi, formulation):
    """Two scatterers at a1 = 0 and a2 = ell * e_x in 3D.

    Returns ``(f1, f2, AmplitudeResult)`` with f = -(1/4 pi)
    [f1 + f2 exp(-i k ell sin(theta) cos(phi))].
    """
    formulation = Formulation(formulation)
    kl = k * ell
    _check_separation(formulation, kl)
    alpha0 = math.sin(theta0) * math.cos(phi0)
    p1 = 4 * math.pi / complex(z1) + 1j * k
    p2 = 4 * math.pi / complex(z2) + 1j * k
    e0 = cmath.exp(1j * kl * alpha0)
    if formulation == Formulation.STANDARD:
        # 4 pi * A_12 = exp(ikl)/l, and (4 pi A_12)^2 enters with a minus sign
        off = cmath.exp(1j * kl) / ell
        den = p1 * p2 - off * off
        _check_pole(den, abs(p1 * p2), abs(off) ** 2)
        f1 = 4 * math.pi * (p2 - off * e0) / den
        f2 = 4 * math.pi * (p1 * e0 - off) / den
    else:
        # 4 pi * A_12 = i sin(kl)/l = i k sinc(kl)
        s = k * specfun.sinc(kl)
        den = p1 * p2 + s * s
        _check_pole(den, abs(p1 * p2), s * s)
        f1 = 4 * math.pi * (p2 - 1j * s * e0) / den
        f2 = 4 * math.pi * (p1 * e0 - 1j * s) / den
    out = cmath.exp(-1j * kl * math.sin(theta) * math.cos(phi))
    f = -(f1 + f2 * out) / (4 * math.pi)
    dirs = DirectionPair(theta0=theta0, phi0=phi0, theta=theta, phi=phi)
    return f1, f2, AmplitudeResult(f, Dimension.THREE, formulation, dirs)


def wavefunction_at(config: SceneConfig, incident: DirectionPair, x) -> complex:
    """psi(x) = (2 pi)^(-d/2) exp(i k.x) + sum_n G(x - a_n) X_n.

    The same template is applied with the DFSS matrix, which is an
    extrapolation: the DFSS treatment itself only supplies the far field.

    Raises
    ------
    EvaluationAtCenter
        If ``x`` coincides with a scatterer center.
    """
    x = np.asarray(x, dtype=float)
    d = int(config.dimension)
    offsets = x[None, :] - config.positions
    if np.any(np.all(offsets == 0.0, axis=1)):
        raise EvaluationAtCenter(f"psi is singular at the scatterer center {tuple(x)}")
    coeffs, _ = solve_scene(config, incident)
    k_in, _ = wave_vectors(config, incident)
    psi = (2 * math.pi) ** (-d / 2) * cmath.exp(1j * float(k_in @ x))
    for off, xn in zip(offsets, coeffs.X):
        psi += green_free(config.dimension, config.k, off).value * xn
    return complex(psi)
