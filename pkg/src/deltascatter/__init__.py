"""Point-scatterer (multi-delta) scattering in two and three dimensions."""

from .amplitude import (
    AmplitudeResult,
    closed_form_double_2d,
    closed_form_double_3d,
    closed_form_single,
    differential_cross_section,
    scattering_amplitude,
    wavefunction_at,
)
from .coincidence import (
    LimitStudy,
    MergePlan,
    coincidence_sweep,
    merge_scatterers,
    verify_merge_invariance,
)
from .errors import (
    DeltaScatterError,
    KernelSingularity,
    SceneValidationError,
    SpectralSingularity,
)
from .kernel import InteractionMatrix, UnifiedKernelParams, build_interaction_matrix
from .model import (
    Dimension,
    DirectionPair,
    Formulation,
    SceneConfig,
    Scatterer,
    make_scene,
    validate_scene,
    wave_vectors,
)
from .solve import SolveDiagnostics, detect_spectral_singularity, solve_coefficients

__version__ = "0.1.0"

__all__ = [
    "AmplitudeResult",
    "DeltaScatterError",
    "Dimension",
    "DirectionPair",
    "Formulation",
    "InteractionMatrix",
    "KernelSingularity",
    "LimitStudy",
    "MergePlan",
    "SceneConfig",
    "SceneValidationError",
    "Scatterer",
    "SolveDiagnostics",
    "SpectralSingularity",
    "UnifiedKernelParams",
    "build_interaction_matrix",
    "closed_form_double_2d",
    "closed_form_double_3d",
    "closed_form_single",
    "coincidence_sweep",
    "detect_spectral_singularity",
    "differential_cross_section",
    "make_scene",
    "merge_scatterers",
    "scattering_amplitude",
    "solve_coefficients",
    "validate_scene",
    "verify_merge_invariance",
    "wave_vectors",
    "wavefunction_at",
]
