"""
Dense complex solves of sum_n A_mn f_n = exp(i a_m . k).

A is complex symmetric but not Hermitian, so a plain LU with partial
pivoting (LAPACK ``zgetrf``) is used. The singularity test is a reciprocal
condition estimate measured against ``InteractionMatrix.magnitude``:

    rcond = 1 / (||M||_1 * ||A^-1||_1),    M_ij = sum of |terms| of A_ij

This equals LAPACK's rcond when no entry suffers cancellation, and drops
to rounding level when 1/z + gamma_d cancels (a single-scatterer pole).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .errors import SpectralSingularity
from .kernel import InteractionMatrix
from .model import DirectionPair, SceneConfig, wave_vectors

SINGULAR_RCOND = 1e-12


@dataclass(frozen=True)
class SolveDiagnostics:
    condition_estimate: float
    singular: bool
    residual_norm: float = math.nan

    def as_dict(self):
        return {
            "condition_estimate": self.condition_estimate,
            "singular": self.singular,
            "residual_norm": self.residual_norm,
        }


@dataclass(frozen=True)
class CoefficientVector:
    """f_m(k) and X_m = (2 pi)^(-d/2) f_m."""

    f: np.ndarray
    X: np.ndarray


@dataclass(frozen=True)
class Factorization:
    """LU factors of A plus the singularity diagnosis; read-only once built."""

    matrix: InteractionMatrix
    lu: tuple
    rcond: float

    @property
    def singular(self) -> bool:
        return not (self.rcond >= SINGULAR_RCOND)

    def diagnostics(self, residual_norm=math.nan) -> SolveDiagnostics:
        cond = math.inf if self.rcond == 0 else 1.0 / self.rcond
        return SolveDiagnostics(cond, self.singular, residual_norm)

    def solve(self, rhs) -> np.ndarray:
        if self.singular:
            raise SpectralSingularity(
                f"interaction matrix is singular (rcond = {self.rcond:.3e})",
                self.diagnostics(),
            )
        return sla.lu_solve(self.lu, np.asarray(rhs, dtype=complex))


def factorize(A: InteractionMatrix) -> Factorization:
    a = A.entries
    if not np.all(np.isfinite(a)):
        raise ValueError("interaction matrix has non-finite entries")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=False)
    anorm = np.abs(a).sum(axis=0).max()
    mnorm = np.asarray(A.magnitude).sum(axis=0).max()
    if anorm == 0.0 or np.any(np.diag(lu) == 0):
        rcond = 0.0
    else:
        rcond_a, info = lapack.zgecon(lu, anorm, norm="1")
        if info != 0:
            raise RuntimeError(f"zgecon failed with info = {info}")
        rcond = float(rcond_a) * anorm / mnorm
    return Factorization(A, (lu, piv), rcond)


def detect_spectral_singularity(A: InteractionMatrix) -> SolveDiagnostics:
    """Diagnose invertibility of A without solving anything."""
    return factorize(A).diagnostics()


def incident_phases(config: SceneConfig, incident: DirectionPair) -> np.ndarray:
    """b_m = exp(i a_m . k) for the incident wave vector."""
    k_in, _ = wave_vectors(config, incident)
    return np.exp(1j * (config.positions @ k_in))


def solve_coefficients(A: InteractionMatrix, config: SceneConfig, incident: DirectionPair):
    """Solve A f = b and return ``(CoefficientVector, SolveDiagnostics)``.

    Raises
    ------
    SpectralSingularity
        If the reciprocal condition estimate is below ``SINGULAR_RCOND``.
    """
    fac = factorize(A)
    b = incident_phases(config, incident)
    f = fac.solve(b)
    residual = float(np.linalg.norm(A.entries @ f - b) / np.linalg.norm(b))
    scale = (2 * math.pi) ** (-int(config.dimension) / 2)
    return CoefficientVector(f, scale * f), fac.diagnostics(residual)
