"""Brute-force reference: qubits plus truncated oscillators, evolved exactly.

Nothing here uses the closed-form decay factors. The full Hamiltonian

    H = H_S + sum_s w_s b_s^dag b_s + 1/2 (sz_A + sz_B) sum_s (g_s b_s^dag + g_s^* b_s)

is diagonalised densely, the product of the qubit state and the thermal
bath state is propagated, and the bath is traced out.

Memory scales as ``16 * dim^2`` bytes per dense matrix with
``dim = 4 * prod(n_max + 1)``; the dimension guard caps ``dim`` at 16384
(about 4 GB per matrix), and every test here stays far below that.
"""

from dataclasses import dataclass, replace
import math

import numpy as np

from . import dephasing, qstate
from ._validation import (
    ModelMismatchError,
    TruncationError,
    ValidationError,
    check_density_matrix,
)

MAX_DIM = 16384
TAIL_TOL = 1e-10
FIT_TOL = 1e-6
CANDIDATES = (dephasing.CALIBRATIONS["derived"], dephasing.CALIBRATIONS["paper"])

_SZ = np.diag([1.0, -1.0]).astype(complex)
SZ_A = np.kron(_SZ, np.eye(2))
SZ_B = np.kron(np.eye(2), _SZ)


@dataclass(frozen=True)
class TruncatedBathSpec:
    """One or two bath modes, each cut off at Fock level `n_max`."""

    modes: tuple
    n_max: int

    def __post_init__(self):
        modes = tuple(self.modes)
        if not 1 <= len(modes) <= 2:
            raise ValidationError("the oracle supports 1 or 2 bath modes")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValidationError("n_max must be an integer >= 1")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "n_max", int(self.n_max))
        if self.dim > MAX_DIM:
            raise ValidationError(f"Hilbert dimension {self.dim} exceeds {MAX_DIM}")

    @property
    def bath_dim(self):
        return (self.n_max + 1) ** len(self.modes)

    @property
    def dim(self):
        return 4 * self.bath_dim


def choose_n_max(modes, T, k_B=1.0, tail=TAIL_TOL, margin=10):
    """Smallest cutoff whose top-level thermal population is below `tail`,
    plus `margin` levels of headroom when any coupling is nonzero."""
    n = 1
    if T > 0:
        w_min = min(m.omega for m in modes)
        x = w_min / (k_B * T)
        # geometric populations: p_n = (1 - e^-x) e^(-x n)
        while (1 - math.exp(-x)) * math.exp(-x * n) >= tail:
            n += 1
    if any(m.g != 0 for m in modes):
        n += margin
    return n


def annihilation(n_max):
    return np.diag(np.sqrt(np.arange(1, n_max + 1)), 1).astype(complex)


def _mode_operators(spec):
    """Annihilation operator of each mode embedded in the full bath space."""
    a = annihilation(spec.n_max)
    eye = np.eye(spec.n_max + 1)
    if len(spec.modes) == 1:
        return [a]
    return [np.kron(a, eye), np.kron(eye, a)]


def bath_hamiltonian(spec):
    ops = _mode_operators(spec)
    return sum(m.omega * b.conj().T @ b for m, b in zip(spec.modes, ops))


def build_hamiltonian(spec, ctx):
    """Full system-plus-bath Hamiltonian, system factor first."""
    ops = _mode_operators(spec)
    h_s = 0.5 * (ctx.omega0_A * SZ_A + ctx.omega0_B * SZ_B)
    coupling = sum(m.g * b.conj().T + np.conj(m.g) * b for m, b in zip(spec.modes, ops))
    eye_b = np.eye(spec.bath_dim)
    return (np.kron(h_s, eye_b) + np.kron(np.eye(4), bath_hamiltonian(spec))
            + 0.5 * np.kron(SZ_A + SZ_B, coupling))


def thermal_state(spec, T, k_B=1.0):
    """Gibbs state of the truncated free bath.

    Raises
    ------
    TruncationError
        If any mode's top Fock level holds population ``>= 1e-10``.
    """
    if T < 0:
        raise ValidationError("T must be >= 0")
    levels = np.arange(spec.n_max + 1)
    pops = []
    for m in spec.modes:
        if T == 0:
            p = np.zeros(spec.n_max + 1)
            p[0] = 1.0
        else:
            logw = -m.omega * levels / (k_B * T)
            p = np.exp(logw - logw.max())
            p /= p.sum()
        if p[-1] >= TAIL_TOL:
            raise TruncationError(
                f"top Fock level population {p[-1]:.2e} >= {TAIL_TOL:.0e}; increase n_max")
        pops.append(p)
    diag = pops[0] if len(pops) == 1 else np.kron(pops[0], pops[1])
    return np.diag(diag).astype(complex)


def partial_trace_bath(rho_full, bath_dim):
    """Trace out the bath factor of a ``(4 * bath_dim)``-dimensional operator."""
    rho_full = np.asarray(rho_full)
    if isinstance(bath_dim, TruncatedBathSpec):
        bath_dim = bath_dim.bath_dim
    if rho_full.shape != (4 * bath_dim, 4 * bath_dim):
        raise ValidationError(
            f"operator shape {rho_full.shape} does not match bath dimension {bath_dim}")
    return np.einsum("aibi->ab", rho_full.reshape(4, bath_dim, 4, bath_dim))


class Propagator:
    """Spectral decomposition of H, reusable across times."""

    def __init__(self, spec, ctx):
        self.spec = spec
        self.ctx = ctx
        self.hamiltonian = build_hamiltonian(spec, ctx)
        self.energies, self.vectors = np.linalg.eigh(self.hamiltonian)

    def unitary(self, t):
        v = self.vectors
        return (v * np.exp(-1j * self.energies * t)) @ v.conj().T


def evolve_exact(rho0, spec, ctx, propagator=None):
    """Reduced qubit state after exact joint evolution to ``ctx.t``.

    In the interaction picture the free qubit phases are removed so the
    result is comparable with :func:`bellbath.dephasing.evolve`.
    """
    rho0 = check_density_matrix(rho0, name="rho0")
    prop = propagator or Propagator(spec, ctx)
    rho_full = np.kron(rho0, thermal_state(spec, ctx.T, ctx.k_B))
    u = prop.unitary(ctx.t)
    reduced = partial_trace_bath(u @ rho_full @ u.conj().T, spec.bath_dim)
    if ctx.picture == "interaction":
        reduced = reduced * np.conj(dephasing.free_phases(replace(ctx, picture="lab")))
    return 0.5 * (reduced + reduced.conj().T)


@dataclass(frozen=True)
class CalibrationVerdict:
    """Result of :func:`calibrate`.

    `winner` is the matching candidate prefactor, or None when every
    candidate fits (no decoherence in the data). `best_fit` is the
    least-squares prefactor over the whole grid, for reference.
    """

    winner: object
    deviations: dict
    best_fit: float
    status: str


def _phi_plus_coherences(spec, ctx, times, temps):
    rho0 = qstate.bell_state("phi_plus")
    bath = dephasing.DiscreteBath(spec.modes)
    prop = Propagator(spec, ctx)
    exact, sums = [], []
    for t in times:
        for T in temps:
            point = replace(ctx, t=t, T=T, picture="interaction")
            exact.append(evolve_exact(rho0, spec, point, prop)[0, 3])
            sums.append(bath.alpha_coth_sum(t, T, ctx.k_B))
    return np.array(exact), np.array(sums)


def calibration_deviations(spec, ctx, times=(0.7, 1.3, 2.1), temps=(0.0, 0.5, 1.0),
                           candidates=CANDIDATES):
    """Max abs deviation of the exact ``<00|rho|11>`` from ``exp(-2 c S)/2`` per candidate c.

    Also returns the least-squares c from ``-ln(2 |rho_03|) = 2 c S``.
    """
    exact, sums = _phi_plus_coherences(spec, ctx, times, temps)
    devs = {c: float(np.max(np.abs(exact - 0.5 * np.exp(-2 * c * sums)))) for c in candidates}
    y = -np.log(2 * np.abs(exact))
    x = 2 * sums
    best = float(x @ y / (x @ x)) if x @ x > 0 else float("nan")
    return devs, best


def calibrate(spec, ctx, times=(0.7, 1.3, 2.1), temps=(0.0, 0.5, 1.0), tol=FIT_TOL):
    """Decide which decoherence prefactor reproduces the exact dynamics."""
    if len(spec.modes) != 1:
        raise ValidationError("calibration uses a single-mode bath")
    if len(times) * len(temps) < 9:
        raise ValidationError("calibration needs at least 9 grid points")
    devs, best = calibration_deviations(spec, ctx, times, temps)
    fitting = [c for c, d in devs.items() if d < tol]
    if len(fitting) == len(devs):
        return CalibrationVerdict(None, devs, best, "indeterminate, decay-free")
    if len(fitting) == 1:
        return CalibrationVerdict(fitting[0], devs, best, "resolved")
    raise ModelMismatchError(
        "no candidate prefactor fits the exact dynamics "
        + ", ".join(f"c={c:g}: {d:.3e}" for c, d in devs.items())
        + f"; least-squares c={best:.6g}",
        deviations=devs, best_fit=best)
