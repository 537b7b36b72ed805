"""Exact pure-dephasing evolution of two qubits in a common bosonic bath.

Both qubits couple through ``sigma_z`` to the same set of oscillators, so
each density-matrix element ``<a|rho|b>`` only picks up a thermal
displacement factor that depends on the collective spin values ``p_a`` and
``p_b`` of the two basis states. Populations never change.

Units: hbar = 1, Boltzmann constant configurable through
:class:`EvolutionContext`.
"""

from dataclasses import dataclass
import logging

import numpy as np

from . import qstate
from ._validation import ValidationError, check_density_matrix, check_nonnegative

logger = logging.getLogger(__name__)

#: Prefactor choices for the decoherence exponent. "paper" gives the
#: ``exp(-8 sum |alpha|^2 coth)`` coherence decay, "derived" evaluates the
#: bath trace with unit-strength displacements ``exp(-2 ...)``, and
#: "hamiltonian" is what exact evolution of the coupling Hamiltonian
#: (with its factor 1/2) produces, ``exp(-sum/2 ...)``.
CALIBRATIONS = {"paper": 4.0, "derived": 1.0, "hamiltonian": 0.25}
UNDERFLOW = 1e-300


@dataclass(frozen=True)
class BathMode:
    """One oscillator: angular frequency `omega` > 0 and complex coupling `g`."""

    omega: float
    g: complex

    def __post_init__(self):
        omega, g = float(self.omega), complex(self.g)
        if not np.isfinite(omega) or omega <= 0:
            raise ValidationError(f"mode frequency must be > 0, got {omega}")
        if not np.isfinite(abs(g)):
            raise ValidationError("mode coupling must be finite")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "g", g)


@dataclass(frozen=True)
class DiscreteBath:
    """A finite set of bath modes with distinct frequencies."""

    modes: tuple

    def __post_init__(self):
        modes = tuple(self.modes)
        if not modes:
            raise ValidationError("a bath needs at least one mode")
        for m in modes:
            if not isinstance(m, BathMode):
                raise ValidationError("bath modes must be BathMode instances")
        omegas = [m.omega for m in modes]
        if len(set(omegas)) != len(omegas):
            raise ValidationError("bath mode frequencies must be distinct")
        object.__setattr__(self, "modes", modes)

    @classmethod
    def from_arrays(cls, omegas, couplings):
        omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
        couplings = np.atleast_1d(np.asarray(couplings, dtype=complex))
        if omegas.shape != couplings.shape:
            raise ValidationError("omegas and couplings must have equal length")
        return cls(tuple(BathMode(w, g) for w, g in zip(omegas, couplings)))

    @property
    def omegas(self):
        return np.array([m.omega for m in self.modes])

    @property
    def couplings(self):
        return np.array([m.g for m in self.modes])

    def alpha_coth_sum(self, t, T, k_B=1.0):
        """``sum_s |alpha_s(t)|^2 coth(omega_s / (2 k_B T))``."""
        a2 = np.abs(alphas(self, t)) ** 2
        return float(np.sum(a2 * coth_factor(self.omegas, T, k_B)))


@dataclass(frozen=True)
class EvolutionContext:
    """Time, temperature and conventions for one evolution.

    `c` scales the decoherence exponent (see :data:`CALIBRATIONS`); the
    default 4 gives the ``exp(-8 sum |alpha|^2 coth)`` closed forms. The qubit splittings
    only enter in the ``"lab"`` picture.
    """

    t: float = 0.0
    T: float = 0.0
    k_B: float = 1.0
    c: float = CALIBRATIONS["paper"]
    picture: str = "interaction"
    omega0_A: float = 0.0
    omega0_B: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "t", check_nonnegative(self.t, "t"))
        object.__setattr__(self, "T", check_nonnegative(self.T, "T"))
        k_B = float(self.k_B)
        if not np.isfinite(k_B) or k_B <= 0:
            raise ValidationError("k_B must be > 0")
        object.__setattr__(self, "k_B", k_B)
        if float(self.c) not in CALIBRATIONS.values():
            raise ValidationError(f"c must be one of {sorted(CALIBRATIONS.values())}")
        object.__setattr__(self, "c", float(self.c))
        if self.picture not in ("interaction", "lab"):
            raise ValidationError("picture must be 'interaction' or 'lab'")
        for name in ("omega0_A", "omega0_B"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValidationError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    @property
    def beta(self):
        return np.inf if self.T == 0 else 1.0 / (self.k_B * self.T)


def alpha(mode, t):
    """Displacement amplitude ``2 g (1 - exp(i omega t)) / omega``."""
    return 2 * mode.g * (1 - np.exp(1j * mode.omega * t)) / mode.omega


def alphas(bath, t):
    w = bath.omegas
    return 2 * bath.couplings * (1 - np.exp(1j * w * t)) / w


def coth_factor(omega, T, k_B=1.0):
    """``coth(omega / (2 k_B T))``, equal to 1 at T = 0."""
    omega = np.asarray(omega, dtype=float)
    if T == 0:
        return np.ones_like(omega)
    return 1.0 / np.tanh(omega / (2.0 * k_B * T))


def p_index(i, j):
    """Collective spin value ``(-1)^i + (-1)^j`` of the basis state ``|ij>``."""
    if i not in (0, 1) or j not in (0, 1):
        raise ValidationError(f"bits must be 0 or 1, got ({i}, {j})")
    return (-1) ** i + (-1) ** j


P_VALUES = np.array([p_index(j, k) for j in (0, 1) for k in (0, 1)])
CROSS_SECTOR = P_VALUES[:, None] != P_VALUES[None, :]


def decay_from_sum(p_bra, p_ket, alpha_coth_sum, c):
    """Element decay factor given a precomputed ``sum |alpha|^2 coth``."""
    q = (p_bra - p_ket) ** 2 / 8.0
    if q == 0:
        return 1.0
    value = float(np.exp(-c * q * alpha_coth_sum))
    if value < UNDERFLOW:
        logger.info("decay factor %.3e below %.0e clamped to 0", value, UNDERFLOW)
        return 0.0
    return value


def element_decay(p_bra, p_ket, bath, ctx):
    """Bath-trace factor multiplying ``<a|rho|b>`` with spin values `p_bra`, `p_ket`.

    Equals ``exp(-c (p_bra - p_ket)^2 / 8 * sum_s |alpha_s|^2 coth(beta omega_s / 2))``.
    `bath` may be a :class:`DiscreteBath` or a spectral density.
    """
    for p in (p_bra, p_ket):
        if p not in (-2, 0, 2):
            raise ValidationError(f"collective spin value must be -2, 0 or 2, got {p}")
    if p_bra == p_ket:
        return 1.0
    return decay_from_sum(p_bra, p_ket, bath.alpha_coth_sum(ctx.t, ctx.T, ctx.k_B), ctx.c)


def decay_matrix(bath, ctx, total=None):
    """4x4 matrix of element decay factors in the computational basis.

    `total` may carry a precomputed ``bath.alpha_coth_sum`` for this context.
    """
    if total is None:
        total = bath.alpha_coth_sum(ctx.t, ctx.T, ctx.k_B)
    return np.array([[decay_from_sum(pa, pb, total, ctx.c) for pb in P_VALUES] for pa in P_VALUES])


def system_energies(ctx):
    """Eigenvalues of the free qubit Hamiltonian in the computational basis."""
    return np.array([
        0.5 * (ctx.omega0_A * (-1) ** j + ctx.omega0_B * (-1) ** k)
        for j in (0, 1) for k in (0, 1)
    ])


def free_phases(ctx):
    """``exp(-i (E_a - E_b) t)`` for every element; all ones in the interaction picture."""
    if ctx.picture == "interaction":
        return np.ones((4, 4), dtype=complex)
    e = system_energies(ctx)
    return np.exp(-1j * (e[:, None] - e[None, :]) * ctx.t)


def evolve(rho0, bath, ctx, total=None):
    """Reduced two-qubit state at time ``ctx.t``.

    Element ``<a|rho|b>`` is multiplied by its decay factor and, in the lab
    picture, by the free phase ``exp(-i (E_a - E_b) t)``.
    """
    rho0 = check_density_matrix(rho0, name="rho0")
    if ctx.t == 0:
        return rho0.copy()
    if total is None and not np.any((rho0 != 0) & CROSS_SECTOR):
        # only equal-sector elements are populated: every decay factor is 1,
        # so the (possibly costly) bath sum is never needed
        return rho0 * free_phases(ctx)
    return rho0 * decay_matrix(bath, ctx, total) * free_phases(ctx)


def chsh_evolved(rho0, bath, ctx, setting=qstate.DEFAULT_SETTING):
    return qstate.chsh(evolve(rho0, bath, ctx), setting)


def decoherence_exponent(bath, ctx):
    """Exponent ``2 c sum |alpha|^2 coth`` of the ``|00><11|`` coherence."""
    return 2.0 * ctx.c * bath.alpha_coth_sum(ctx.t, ctx.T, ctx.k_B)


def s_closed_form_phi_plus(bath, ctx):
    """Closed form ``2 sqrt(2) exp(-2 c sum |alpha|^2 coth)`` for phi_plus.

    This treats the whole correlator as decaying. Under pure dephasing the
    ``sigma_z sigma_z`` correlation is conserved, so the CHSH value of the
    evolved state is :func:`s_phi_plus` instead.
    """
    return qstate.TSIRELSON * np.exp(-decoherence_exponent(bath, ctx))


def s_phi_plus(bath, ctx):
    """CHSH value of evolved phi_plus at the default angles, ``sqrt(2) (1 + D)``."""
    return np.sqrt(2.0) * (1.0 + np.exp(-decoherence_exponent(bath, ctx)))
