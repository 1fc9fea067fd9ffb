"""Plasmon-mediated entanglement of two quantum dots near a metal nanoparticle.

A driven metal nanosphere couples two quantum-dot qubits through its
multipolar plasmon modes. The package computes the local and hydrodynamic
nonlocal plasmon parameters, eliminates the plasmons adiabatically, evolves
the resulting two-qubit master equation and evaluates concurrence and
quantum Fisher information over distance and size sweeps.
"""

__version__ = "0.1.0"

from .config import RunConfig, parse_config  # noqa: E402
from .effective import (  # noqa: E402
    DickeParams,
    EffectiveParams,
    QubitParams,
    dicke_parameters,
    dicke_rate_evolution,
    effective_parameters,
    symmetric_qubits,
)
from .lindblad import build_superoperator, evolve, rhs_explicit, steady_state  # noqa: E402
from .material import (  # noqa: E402
    MaterialParams,
    PlasmonMode,
    SystemGeometry,
    corrected_mode,
    material_preset,
    plasmon_modes,
)
from .metrics import concurrence, qfi, relative_phase_generator, spin_flip  # noqa: E402

__all__ = [
    "DickeParams",
    "EffectiveParams",
    "MaterialParams",
    "PlasmonMode",
    "QubitParams",
    "RunConfig",
    "SystemGeometry",
    "__version__",
    "build_superoperator",
    "concurrence",
    "corrected_mode",
    "dicke_parameters",
    "dicke_rate_evolution",
    "effective_parameters",
    "evolve",
    "material_preset",
    "parse_config",
    "plasmon_modes",
    "qfi",
    "relative_phase_generator",
    "rhs_explicit",
    "spin_flip",
    "steady_state",
    "symmetric_qubits",
]
