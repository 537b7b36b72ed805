"""Exception types and array validation helpers shared across the package."""

import numpy as np

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
PSD_TOL = -1e-10
IMAG_ATOL = 1e-10


class BellBathError(Exception):
    """Base class for all package errors."""


class ValidationError(BellBathError, ValueError):
    """Input does not satisfy the documented contract."""


class DomainError(BellBathError, ValueError):
    """The requested quantity does not exist for these inputs."""


class NumericalError(BellBathError, RuntimeError):
    """A numerical routine failed to reach its accuracy target."""


class TruncationError(NumericalError):
    """Fock-space cutoff too small for the requested temperature."""


class ModelMismatchError(NumericalError):
    """No calibration candidate reproduces the brute-force dynamics."""

    def __init__(self, message, deviations=None, best_fit=None):
        super().__init__(message)
        self.deviations = deviations or {}
        self.best_fit = best_fit


def check_density_matrix(rho, dim=4, name="rho"):
    """Return `rho` as a complex ndarray after checking it is a valid state.

    Checks shape, Hermiticity, unit trace and positive semidefiniteness.
    Raises ValidationError otherwise.
    """
    arr = np.asarray(rho, dtype=complex)
    if arr.shape != (dim, dim):
        raise ValidationError(f"{name} must have shape ({dim}, {dim}), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    if np.max(np.abs(arr - arr.conj().T)) > HERMITIAN_ATOL:
        raise ValidationError(f"{name} is not Hermitian")
    if abs(np.trace(arr) - 1.0) > TRACE_ATOL:
        raise ValidationError(f"{name} does not have unit trace (trace={np.trace(arr).real:.3e})")
    if np.linalg.eigvalsh(arr).min() < PSD_TOL:
        raise ValidationError(f"{name} is not positive semidefinite")
    return arr


def real_part(value, name="value"):
    """Drop the imaginary residue of a quantity that must be real."""
    value = complex(value)
    if abs(value.imag) > IMAG_ATOL:
        raise ValidationError(f"{name} has imaginary part {value.imag:.3e}")
    return value.real


def check_nonnegative(value, name):
    value = float(value)
    if not np.isfinite(value) or value < 0:
        raise ValidationError(f"{name} must be finite and >= 0, got {value}")
    return value
