"""
Scene description: scatterers, wavenumber, formulation and directions.

A scene is immutable once built. ``validate_scene`` checks the invariants
the kernels rely on and returns the scene unchanged.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .errors import (
    DomainError,
    DuplicatePositionStandard,
    NonCollinearDFSS,
    NonPositiveWavenumber,
    SceneValidationError,
    ZeroCoupling,
)

# relative to the largest pairwise distance
COLLINEAR_RTOL = 1e-9


class Dimension(enum.IntEnum):
    TWO = 2
    THREE = 3


class Formulation(enum.Enum):
    """How couplings are read.

    ``STANDARD`` takes them as renormalized couplings of the cut-off
    treatment; ``DFSS`` takes them as the physical couplings.
    """

    STANDARD = "standard"
    DFSS = "dfss"


@dataclass(frozen=True)
class Scatterer:
    position: Tuple[float, ...]
    coupling: complex

    def __post_init__(self):
        object.__setattr__(self, "position", tuple(float(c) for c in self.position))
        object.__setattr__(self, "coupling", complex(self.coupling))


@dataclass(frozen=True)
class SceneConfig:
    dimension: Dimension
    k: float
    scatterers: Tuple[Scatterer, ...]
    formulation: Formulation = Formulation.DFSS
    subtraction_constants: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "dimension", Dimension(self.dimension))
        object.__setattr__(self, "formulation", Formulation(self.formulation))
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "scatterers", tuple(self.scatterers))
        if self.subtraction_constants is not None:
            object.__setattr__(
                self,
                "subtraction_constants",
                tuple(float(c) for c in self.subtraction_constants),
            )

    @property
    def n(self) -> int:
        return len(self.scatterers)

    @property
    def positions(self) -> np.ndarray:
        """Positions as an (N, d) float array."""
        return np.array([s.position for s in self.scatterers], dtype=float).reshape(
            self.n, int(self.dimension)
        )

    @property
    def couplings(self) -> np.ndarray:
        return np.array([s.coupling for s in self.scatterers], dtype=complex)

    def constants(self) -> np.ndarray:
        """Diagonal subtraction constants, zero unless configured."""
        if self.subtraction_constants is None:
            return np.zeros(self.n)
        return np.asarray(self.subtraction_constants, dtype=float)

    def with_positions(self, positions) -> "SceneConfig":
        positions = np.asarray(positions, dtype=float)
        scatterers = tuple(
            Scatterer(tuple(p), s.coupling) for p, s in zip(positions, self.scatterers)
        )
        return replace(self, scatterers=scatterers)

    def with_formulation(self, formulation) -> "SceneConfig":
        formulation = Formulation(formulation)
        constants = self.subtraction_constants if formulation == Formulation.STANDARD else None
        return replace(self, formulation=formulation, subtraction_constants=constants)


def make_scene(dimension, k, positions, couplings, formulation=Formulation.DFSS,
               subtraction_constants=None) -> SceneConfig:
    """Convenience constructor from parallel position/coupling sequences."""
    scatterers = tuple(Scatterer(tuple(p), z) for p, z in zip(positions, couplings))
    return SceneConfig(
        Dimension(dimension), k, scatterers, Formulation(formulation),
        None if subtraction_constants is None else tuple(subtraction_constants),
    )


@dataclass(frozen=True)
class DirectionPair:
    """Incident and scattered directions in radians.

    In 2D only ``theta0`` (incident) and ``theta`` (scattered) are used and
    measured from the x axis. In 3D ``theta*`` are polar and ``phi*``
    azimuthal angles.
    """

    theta0: float = 0.0
    theta: float = 0.0
    phi0: float = 0.0
    phi: float = 0.0

    def reversed(self, dimension) -> "DirectionPair":
        """Directions of the reciprocal process: k_in -> -k_out, k_out -> -k_in."""
        if Dimension(dimension) == Dimension.TWO:
            return DirectionPair(theta0=self.theta + math.pi, theta=self.theta0 + math.pi)
        return DirectionPair(
            theta0=math.pi - self.theta, phi0=self.phi + math.pi,
            theta=math.pi - self.theta0, phi=self.phi0 + math.pi,
        )


def unit_vector(dimension, theta, phi=0.0) -> np.ndarray:
    if Dimension(dimension) == Dimension.TWO:
        return np.array([math.cos(theta), math.sin(theta)])
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


def _check_directions(config, dirs):
    angles = (dirs.theta0, dirs.theta, dirs.phi0, dirs.phi)
    if not all(math.isfinite(a) for a in angles):
        raise DomainError("direction angles must be finite")
    if config.dimension == Dimension.THREE:
        for a in (dirs.theta0, dirs.theta):
            if not -1e-12 <= a <= math.pi + 1e-12:
                raise DomainError(f"polar angle {a!r} outside [0, pi]")


def wave_vectors(config: SceneConfig, dirs: DirectionPair):
    """Return the incident and scattered wave vectors, both of length k."""
    _check_directions(config, dirs)
    k_in = config.k * unit_vector(config.dimension, dirs.theta0, dirs.phi0)
    k_out = config.k * unit_vector(config.dimension, dirs.theta, dirs.phi)
    return k_in, k_out


def distance_matrix(positions) -> np.ndarray:
    positions = np.asarray(positions, dtype=float)
    diff = positions[:, None, :] - positions[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def line_fit(positions):
    """Best-fit line through the points.

    Returns ``(origin, direction, max_deviation)`` where ``origin`` is the
    centroid and ``max_deviation`` the largest perpendicular distance.
    """
    positions = np.asarray(positions, dtype=float)
    origin = positions.mean(axis=0)
    centered = positions - origin
    d = positions.shape[1]
    if len(positions) < 2 or not np.any(centered):
        direction = np.zeros(d)
        direction[0] = 1.0
        return origin, direction, 0.0
    _, _, vt = np.linalg.svd(centered)
    direction = vt[0]
    # fix the sign so the direction is reproducible
    lead = np.flatnonzero(np.abs(direction) > 1e-12)[0]
    if direction[lead] < 0:
        direction = -direction
    along = centered @ direction
    perp = centered - np.outer(along, direction)
    return origin, direction, float(np.max(np.linalg.norm(perp, axis=1)))


def canonical_frame(config: SceneConfig):
    """Rigid motion putting collinear centers on the x axis.

    Returns ``(origin, rotation, coordinates)``: ``rotation`` is orthogonal
    with first row equal to the line direction, so ``rotation @ (a - origin)``
    has all components but the first equal to zero (up to the collinearity
    tolerance). ``coordinates`` are the resulting x positions.
    """
    origin, direction, _ = line_fit(config.positions)
    d = int(config.dimension)
    # complete the direction to an orthonormal basis
    basis = np.linalg.qr(np.column_stack([direction, np.eye(d)]))[0][:, :d]
    if basis[:, 0] @ direction < 0:
        basis[:, 0] = -basis[:, 0]
    if np.linalg.det(basis) < 0:
        basis[:, -1] = -basis[:, -1]
    rotation = basis.T
    coords = (config.positions - origin) @ rotation.T
    return origin, rotation, coords[:, 0]


def validate_scene(config: SceneConfig) -> SceneConfig:
    """Check scene invariants and return the scene unchanged.

    Raises
    ------
    NonPositiveWavenumber, ZeroCoupling, NonCollinearDFSS,
    DuplicatePositionStandard, SceneValidationError
    """
    if not (math.isfinite(config.k) and config.k > 0):
        raise NonPositiveWavenumber(f"wavenumber must be positive, got {config.k!r}")
    if config.n < 1:
        raise SceneValidationError("scene needs at least one scatterer")
    d = int(config.dimension)
    for i, s in enumerate(config.scatterers):
        if len(s.position) != d:
            raise SceneValidationError(
                f"scatterer {i} has a {len(s.position)}-component position in {d}D"
            )
        if not all(math.isfinite(c) for c in s.position):
            raise SceneValidationError(f"scatterer {i} has a non-finite position")
        if not (math.isfinite(s.coupling.real) and math.isfinite(s.coupling.imag)):
            raise SceneValidationError(f"scatterer {i} has a non-finite coupling")
        if s.coupling == 0:
            raise ZeroCoupling(i)
    if config.subtraction_constants is not None:
        if len(config.subtraction_constants) != config.n:
            raise SceneValidationError(
                "subtraction_constants must have one entry per scatterer"
            )
        if config.formulation != Formulation.STANDARD and any(config.subtraction_constants):
            raise SceneValidationError(
                "subtraction constants only apply to the standard formulation"
            )
    positions = config.positions
    if config.formulation == Formulation.DFSS and config.n > 2:
        dist = distance_matrix(positions)
        _, _, dev = line_fit(positions)
        # floor: rounding noise of the stored coordinates themselves
        floor = 64 * np.finfo(float).eps * np.abs(positions).max()
        if dev > COLLINEAR_RTOL * dist.max() + floor:
            raise NonCollinearDFSS(dev)
    if config.formulation == Formulation.STANDARD:
        for i in range(config.n):
            for j in range(i + 1, config.n):
                if np.array_equal(positions[i], positions[j]):
                    raise DuplicatePositionStandard((i, j))
    return config
