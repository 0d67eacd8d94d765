"""Two-mode Gaussian states: invariants from single-mode measurements.

The package simulates an optical bench that mixes two modes of a Gaussian
state on a tunable beam splitter and reads out only one output port.
From a handful of photon-number and purity readings it reconstructs the
four symplectic invariants of the state, and from those the separability
verdict, the entanglement of formation (exact for symmetric states, a
lower bound otherwise) and the logarithmic negativity.  Everything is
cross-checkable against direct covariance-matrix computations.
"""

from .bench import (
    BenchSetting,
    DetectorModel,
    LossInversion,
    Mode1Observation,
    TransmittanceRescale,
    apply_loss,
    bogoliubov,
    invert_loss_homodyne,
    observe_mode1,
    output_mode1_covariance,
    rescale_transmittance,
    sample_quadratures,
    transform_covariance,
)
from .entanglement import (
    EntanglementReport,
    entanglement_report,
    eof_lower_bound,
    eof_symmetric,
    log_negativity,
    simon_separable,
)
from .errors import (
    ConfigError,
    GaussBenchError,
    NotSymmetricError,
    NumericalDomainError,
    ReconstructionError,
    UnphysicalMeasurementError,
    UnphysicalStateError,
)
from .generators import (
    random_state,
    special_form_state,
    thermal_state,
    tmsv_state,
    two_mode_squeezed_thermal,
    vacuum_state,
)
from .schemes import (
    ConsistencyReport,
    MeasurementPlan,
    SchemeResult,
    TranscriptRecord,
    consistency_check,
    reconstruct_from_transcript,
    reconstruct_scheme1,
    reconstruct_scheme2,
    scheme1,
    scheme1_plan,
    scheme2,
    scheme2_plan,
)
from .stateio import load_state, save_state, state_from_dict, state_to_dict
from .states import (
    InvariantSet,
    ModeCovariance,
    PhysicalityReport,
    QuadCovariance,
    SingleModeSymplectic,
    StandardFormResult,
    detect_special_form,
    invariants_mode,
    invariants_quad,
    mode_to_quad,
    quad_to_mode,
    standard_form_prep,
    symplectic_eigenvalues,
    validate_physical,
)

__version__ = "0.1.0"

__all__ = [
    "BenchSetting",
    "ConfigError",
    "ConsistencyReport",
    "DetectorModel",
    "EntanglementReport",
    "GaussBenchError",
    "InvariantSet",
    "LossInversion",
    "MeasurementPlan",
    "Mode1Observation",
    "ModeCovariance",
    "NotSymmetricError",
    "NumericalDomainError",
    "PhysicalityReport",
    "QuadCovariance",
    "ReconstructionError",
    "SchemeResult",
    "SingleModeSymplectic",
    "StandardFormResult",
    "TransmittanceRescale",
    "TranscriptRecord",
    "UnphysicalMeasurementError",
    "UnphysicalStateError",
    "apply_loss",
    "bogoliubov",
    "consistency_check",
    "detect_special_form",
    "entanglement_report",
    "eof_lower_bound",
    "eof_symmetric",
    "invariants_mode",
    "invariants_quad",
    "invert_loss_homodyne",
    "load_state",
    "log_negativity",
    "mode_to_quad",
    "observe_mode1",
    "output_mode1_covariance",
    "quad_to_mode",
    "random_state",
    "reconstruct_from_transcript",
    "reconstruct_scheme1",
    "reconstruct_scheme2",
    "rescale_transmittance",
    "sample_quadratures",
    "save_state",
    "scheme1",
    "scheme1_plan",
    "scheme2",
    "scheme2_plan",
    "simon_separable",
    "special_form_state",
    "standard_form_prep",
    "state_from_dict",
    "state_to_dict",
    "thermal_state",
    "tmsv_state",
    "transform_covariance",
    "two_mode_squeezed_thermal",
    "vacuum_state",
    "validate_physical",
]
