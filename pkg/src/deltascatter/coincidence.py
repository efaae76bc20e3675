"""
Merging of coincident scatterers and coincidence-limit studies.

For collinear DFSS scenes the amplitude is continuous as centers merge and
tends to the amplitude of the scene in which each merged group is one delta
with the summed coupling. For the standard formulation with fixed
renormalized couplings it tends to zero instead. The sweeps here make both
behaviours measurable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Sequence, Tuple

import numpy as np
from scipy.sparse.csgraph import connected_components

from .amplitude import scattering_amplitude
from .errors import DeltaScatterError, SceneValidationError
from .model import (
    DirectionPair,
    Formulation,
    SceneConfig,
    Scatterer,
    distance_matrix,
    line_fit,
    validate_scene,
)

# near-coincidence used in place of an exact merge
MERGE_TEST_KL = 1e-8


@dataclass(frozen=True)
class MergePlan:
    groups: Tuple[Tuple[int, ...], ...]
    merged_scene: SceneConfig

    @property
    def is_identity(self) -> bool:
        return all(len(g) == 1 for g in self.groups)


@dataclass
class LimitStudy:
    ell_grid: np.ndarray
    k: float
    amplitudes: np.ndarray
    reference: complex
    flags: List[str]
    convergence_rate: float = math.nan

    @property
    def k_ell(self) -> np.ndarray:
        return self.k * self.ell_grid

    @property
    def rel_err(self) -> np.ndarray:
        """|f - ref| / |ref|, or |f| when the reference is zero."""
        diff = np.abs(self.amplitudes - self.reference)
        if self.reference == 0:
            return diff
        return diff / abs(self.reference)

    def rows(self):
        """CSV rows: ell, k_ell, re_f, im_f, abs_f, ref_abs_f, rel_err, flag."""
        ref_abs = abs(self.reference)
        for ell, kl, f, err, flag in zip(
            self.ell_grid, self.k_ell, self.amplitudes, self.rel_err, self.flags
        ):
            yield [ell, kl, f.real, f.imag, abs(f), ref_abs, err, flag]

    def fit_inverse_log(self):
        """Least-squares fit |f| ~ C/|ln(k l)|; returns (C, max relative residual)."""
        return _fit_basis(self.amplitudes, 1.0 / np.abs(np.log(self.k_ell)))

    def fit_linear(self):
        """Least-squares fit |f| ~ C k l; returns (C, max relative residual)."""
        return _fit_basis(self.amplitudes, self.k_ell)


def _fit_basis(amplitudes, basis):
    ok = np.isfinite(amplitudes)
    y = np.abs(amplitudes[ok])
    b = basis[ok]
    # relative least squares: minimise sum (C b / y - 1)^2
    w = b / y
    c = float(np.sum(w) / np.sum(w * w))
    resid = np.abs(c * b - y) / (c * b)
    return c, float(resid.max())


def _fit_rate(k_ell, values):
    ok = np.isfinite(values) & (values > 0)
    if ok.sum() < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(k_ell[ok]), np.log(values[ok]), 1)
    return float(slope)


def _representative(positions, couplings):
    if np.all(couplings.imag == 0) and np.all(couplings.real > 0):
        w = couplings.real
        return (w[:, None] * positions).sum(axis=0) / w.sum()
    return positions.mean(axis=0)


def merge_scatterers(config: SceneConfig, tolerance: float) -> MergePlan:
    """Single-linkage clustering of centers closer than ``tolerance``.

    Each cluster becomes one scatterer carrying the sum of the cluster's
    couplings. It sits at the coupling-weighted centroid when all weights
    are real and positive, otherwise at the unweighted centroid. Groups are
    ordered by their lowest index, members in increasing index order.
    """
    validate_scene(config)
    adjacency = distance_matrix(config.positions) <= tolerance
    _, labels = connected_components(adjacency, directed=False)
    groups = {}
    for i, lab in enumerate(labels):
        groups.setdefault(lab, []).append(i)
    ordered = sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])
    positions = config.positions
    merged = []
    for g in ordered:
        centroid = _representative(positions[list(g)], config.couplings[list(g)])
        merged.append(Scatterer(tuple(centroid), sum(config.scatterers[i].coupling for i in g)))
    constants = None
    if config.subtraction_constants is not None:
        # a merged group keeps the constant of its first member
        constants = tuple(config.subtraction_constants[g[0]] for g in ordered)
    scene = replace(config, scatterers=tuple(merged), subtraction_constants=constants)
    return MergePlan(tuple(ordered), scene)


def merge_group(config: SceneConfig, group: Sequence[int]) -> SceneConfig:
    """Collapse ``group`` onto its first member (position of the first member)."""
    group = list(group)
    if len(set(group)) != len(group) or not group:
        raise SceneValidationError("group must list distinct indices")
    first = group[0]
    total = sum(config.scatterers[i].coupling for i in group)
    out = []
    for i, s in enumerate(config.scatterers):
        if i == first:
            out.append(Scatterer(s.position, total))
        elif i not in group:
            out.append(s)
    return replace(config, scatterers=tuple(out), subtraction_constants=None)


def merge_sequential(config: SceneConfig, group: Sequence[int]) -> SceneConfig:
    """Same as ``merge_group`` but merging one pair at a time."""
    group = list(group)
    scene = config
    indices = list(range(config.n))
    for member in group[1:]:
        a, b = indices.index(group[0]), indices.index(member)
        scene = merge_group(scene, [a, b])
        indices.pop(b)
    return scene


def _line_direction(config: SceneConfig, i: int, j: int) -> np.ndarray:
    pos = config.positions
    delta = pos[j] - pos[i]
    norm = np.linalg.norm(delta)
    if norm > 0:
        return delta / norm
    return line_fit(pos)[1]


def place_pair(config: SceneConfig, pair, ell) -> SceneConfig:
    """Move scatterer ``pair[1]`` to distance ``ell`` from ``pair[0]`` along their line."""
    i, j = pair
    u = _line_direction(config, i, j)
    pos = config.positions.copy()
    pos[j] = pos[i] + ell * u
    return config.with_positions(pos)


def coincidence_sweep(config: SceneConfig, pair, ell_grid, dirs: DirectionPair) -> LimitStudy:
    """Amplitude along a shrinking separation of one pair.

    DFSS scenes are compared against the scene with the pair merged onto
    ``pair[0]``; for the standard formulation the reference is 0, the limit
    it actually has with fixed renormalized couplings. Singular grid points
    are recorded with a flag and a NaN amplitude.
    """
    ell_grid = np.asarray(ell_grid, dtype=float)
    if np.any(ell_grid <= 0) or np.any(np.diff(ell_grid) >= 0):
        raise ValueError("ell_grid must be positive and strictly decreasing")
    i, j = pair
    if i == j:
        raise ValueError("pair must name two different scatterers")
    validate_scene(config)
    if config.formulation == Formulation.DFSS:
        reference = scattering_amplitude(merge_group(config, [i, j]), dirs).f
    else:
        reference = 0j
    amps = np.empty(len(ell_grid), dtype=complex)
    flags = []
    for n, ell in enumerate(ell_grid):
        try:
            amps[n] = scattering_amplitude(place_pair(config, pair, ell), dirs).f
            flags.append("")
        except DeltaScatterError as exc:
            amps[n] = complex(math.nan, math.nan)
            flags.append(type(exc).__name__)
    study = LimitStudy(ell_grid, config.k, amps, reference, flags)
    study.convergence_rate = _fit_rate(study.k_ell, study.rel_err)
    return study


@dataclass(frozen=True)
class MergeReport:
    near_amplitude: complex
    merged_amplitude: complex
    rel_err: float
    k_ell: float


def collapse_group(config: SceneConfig, group: Sequence[int], k_ell=MERGE_TEST_KL) -> SceneConfig:
    """Place the group members at spacing k_ell/k along the line, next to the first."""
    group = list(group)
    _, u, _ = line_fit(config.positions)
    pos = config.positions.copy()
    step = k_ell / config.k
    for m, idx in enumerate(group[1:], start=1):
        pos[idx] = pos[group[0]] + m * step * u
    return config.with_positions(pos)


def verify_merge_invariance(config: SceneConfig, group: Sequence[int], dirs: DirectionPair,
                            k_ell=MERGE_TEST_KL) -> MergeReport:
    """Compare a nearly coincident group against the explicitly merged scene."""
    if config.formulation != Formulation.DFSS:
        raise SceneValidationError("merge invariance holds for DFSS scenes only")
    near = scattering_amplitude(collapse_group(config, group, k_ell), dirs).f
    merged = scattering_amplitude(merge_group(config, group), dirs).f
    return MergeReport(near, merged, abs(near - merged) / abs(merged), k_ell)
