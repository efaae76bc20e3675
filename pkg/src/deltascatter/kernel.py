"""
Interaction matrices A for the four (dimension, formulation) pairs.

Every builder fills the diagonal and the upper triangle and mirrors it, so
A is symmetric bit for bit. Besides the entries, each matrix carries an
entrywise ``magnitude`` bound (sum of the moduli of the terms that were
added to form the entry). The solver uses it to detect cancellation on the
diagonal, which an ordinary condition number cannot see for N = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import ConfigurationError, KernelSingularity
from .model import Dimension, Formulation, SceneConfig, distance_matrix

# standard off-diagonal entries are refused below this k*l
STANDARD_MIN_KL = 1e-12


@dataclass(frozen=True)
class InteractionMatrix:
    entries: np.ndarray
    formulation: Formulation
    dimension: Dimension
    k: float
    magnitude: np.ndarray = None

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        if self.magnitude is None:
            object.__setattr__(self, "magnitude", np.abs(entries))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class UnifiedKernelParams:
    """gamma_d and the off-diagonal profile Q_d ("J0" in 2D, "Sinc" in 3D)."""

    gamma_d: complex
    q_d: str

    @classmethod
    def for_dimension(cls, dimension, k) -> "UnifiedKernelParams":
        if Dimension(dimension) == Dimension.TWO:
            return cls(0.25j, "J0")
        return cls(1j * k / (4 * math.pi), "Sinc")


def gamma_d(dimension, k) -> complex:
    """Diagonal constant: i/4 in 2D, ik/4pi in 3D."""
    return UnifiedKernelParams.for_dimension(dimension, k).gamma_d


def _diagonal(config: SceneConfig, use_constants: bool):
    g = gamma_d(config.dimension, config.k)
    inv = 1.0 / config.couplings
    diag = inv + g
    mag = np.abs(inv) + abs(g)
    if use_constants:
        c = config.constants()
        diag = diag + c
        mag = mag + np.abs(c)
    return diag, mag


def _assemble(config, diag, diag_mag, offdiag):
    """Fill a symmetric matrix from the diagonal and an off-diagonal rule.

    ``offdiag(k*l, l)`` is called once per pair m < n.
    """
    n = config.n
    a = np.zeros((n, n), dtype=complex)
    a[np.diag_indices(n)] = diag
    dist = distance_matrix(config.positions)
    for m in range(n):
        for j in range(m + 1, n):
            ell = dist[m, j]
            a[m, j] = a[j, m] = offdiag(config.k * ell, ell)
    mag = np.abs(a)
    mag[np.diag_indices(n)] = diag_mag
    return a, mag


def _require(config, dimension, formulation):
    if config.dimension != dimension or config.formulation != formulation:
        raise ConfigurationError(
            f"builder for {dimension.value}D/{formulation.value} got a "
            f"{config.dimension.value}D/{config.formulation.value} scene"
        )


def _standard_guard(kl, ell):
    if kl < STANDARD_MIN_KL:
        raise KernelSingularity(
            f"standard off-diagonal kernel diverges at separation {ell!r} (k*l = {kl:.3e})"
        )


def build_standard_2d(config: SceneConfig) -> InteractionMatrix:
    """A_nn = 1/z_n + c_n + i/4, A_mn = (i/4) H0^(1)(k l_mn)."""
    _require(config, Dimension.TWO, Formulation.STANDARD)
    diag, mag = _diagonal(config, use_constants=True)

    def off(kl, ell):
        _standard_guard(kl, ell)
        return 0.25j * specfun.hankel1_0(kl)

    a, m = _assemble(config, diag, mag, off)
    return InteractionMatrix(a, Formulation.STANDARD, Dimension.TWO, config.k, m)


def build_standard_3d(config: SceneConfig) -> InteractionMatrix:
    """A_nn = 1/z_n + c_n + ik/4pi, A_mn = exp(ik l)/(4 pi l)."""
    _require(config, Dimension.THREE, Formulation.STANDARD)
    diag, mag = _diagonal(config, use_constants=True)

    def off(kl, ell):
        _standard_guard(kl, ell)
        return complex(math.cos(kl), math.sin(kl)) / (4 * math.pi * ell)

    a, m = _assemble(config, diag, mag, off)
    return InteractionMatrix(a, Formulation.STANDARD, Dimension.THREE, config.k, m)


def build_dfss_2d(config: SceneConfig) -> InteractionMatrix:
    """A_nn = 1/z_n + i/4, A_mn = (i/4) J0(k l_mn); finite at l = 0."""
    _require(config, Dimension.TWO, Formulation.DFSS)
    diag, mag = _diagonal(config, use_constants=False)
    a, m = _assemble(config, diag, mag, lambda kl, ell: 0.25j * specfun.bessel_j0(kl))
    return InteractionMatrix(a, Formulation.DFSS, Dimension.TWO, config.k, m)


def build_dfss_3d(config: SceneConfig) -> InteractionMatrix:
    """A_nn = 1/z_n + ik/4pi, A_mn = (ik/4pi) sinc(k l_mn)."""
    _require(config, Dimension.THREE, Formulation.DFSS)
    diag, mag = _diagonal(config, use_constants=False)
    g = 1j * config.k / (4 * math.pi)
    a, m = _assemble(config, diag, mag, lambda kl, ell: g * specfun.sinc(kl))
    return InteractionMatrix(a, Formulation.DFSS, Dimension.THREE, config.k, m)


_PROFILES = {"J0": specfun.bessel_j0, "Sinc": specfun.sinc}


def build_unified(params: UnifiedKernelParams, config: SceneConfig) -> InteractionMatrix:
    """DFSS matrix in the dimension-independent form gamma_d * Q_d(k l)."""
    if config.formulation != Formulation.DFSS:
        raise ConfigurationError("the unified kernel describes DFSS scenes only")
    expected = UnifiedKernelParams.for_dimension(config.dimension, config.k)
    if params.q_d != expected.q_d or not np.isclose(
        params.gamma_d, expected.gamma_d, rtol=1e-14, atol=0.0
    ):
        raise ConfigurationError(
            f"kernel parameters {params} do not match a {int(config.dimension)}D scene "
            f"with k = {config.k}"
        )
    g = params.gamma_d
    inv = 1.0 / config.couplings
    profile = _PROFILES[params.q_d]
    a, m = _assemble(
        config, inv + g, np.abs(inv) + abs(g), lambda kl, ell: g * profile(kl)
    )
    return InteractionMatrix(a, Formulation.DFSS, config.dimension, config.k, m)


_BUILDERS = {
    (Dimension.TWO, Formulation.STANDARD): build_standard_2d,
    (Dimension.THREE, Formulation.STANDARD): build_standard_3d,
    (Dimension.TWO, Formulation.DFSS): build_dfss_2d,
    (Dimension.THREE, Formulation.DFSS): build_dfss_3d,
}


def build_interaction_matrix(config: SceneConfig) -> InteractionMatrix:
    """Dispatch on the scene's dimension and formulation."""
    return _BUILDERS[(config.dimension, config.formulation)](config)
