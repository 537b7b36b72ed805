"""CHSH values of two qubits under a thermal bosonic dephasing bath."""

from ._validation import (
    BellBathError,
    DomainError,
    ModelMismatchError,
    NumericalError,
    TruncationError,
    ValidationError,
)
from .dephasing import (
    CALIBRATIONS,
    BathMode,
    DiscreteBath,
    EvolutionContext,
    chsh_evolved,
    element_decay,
    evolve,
)
from .qstate import ChshSetting, bell_state, chsh, correlator
from .spectral import OhmicDensity, TabulatedDensity, s_continuum, tc_numeric, tc_paper

__version__ = "0.1.0"
