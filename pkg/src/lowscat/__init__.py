"""Low-energy two-body scattering: scattering length, effective range and phase shifts."""
from .errors import ScatteringError
from .observables import (
    ScatteringObservables,
    bound_state_energies,
    compute_observables,
    effective_range,
    kcot_expansion,
    normalize,
    phase_shift,
    phase_shift_scan,
    scattering_length,
)
from .potentials import (
    PotentialSpec,
    RangeInfo,
    derive_range,
    evaluate,
    gaussian,
    lennard_jones,
    make_potential,
    poschl_teller,
    spherical_well,
    tabulated,
)
from .solver import RadialSolution, integrate
from .tuner import SolverConfig, TuneResult, TuneTarget, scan, tune
from .units import UnitScale, make_scale, preset_scale

__version__ = "0.1.0"

__all__ = [
    "PotentialSpec",
    "RadialSolution",
    "RangeInfo",
    "ScatteringError",
    "ScatteringObservables",
    "SolverConfig",
    "TuneResult",
    "TuneTarget",
    "UnitScale",
    "bound_state_energies",
    "compute_observables",
    "derive_range",
    "effective_range",
    "evaluate",
    "gaussian",
    "integrate",
    "kcot_expansion",
    "lennard_jones",
    "make_potential",
    "make_scale",
    "normalize",
    "phase_shift",
    "phase_shift_scan",
    "poschl_teller",
    "preset_scale",
    "scan",
    "scattering_length",
    "spherical_well",
    "tabulated",
    "tune",
]
