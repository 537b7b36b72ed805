"""Two-qubit states, x-z plane spin observables and CHSH evaluation.

Density matrices are plain 4x4 complex arrays in the basis
``|00>, |01>, |10>, |11>`` with qubit A as the left tensor factor, so the
row index of ``|jk>`` is ``2*j + k`` (j for A, k for B).
"""

from dataclasses import dataclass
import itertools

import numpy as np

from ._validation import ValidationError, check_density_matrix, real_part

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

BASIS_LABELS = ("00", "01", "10", "11")
TSIRELSON = 2.0 * np.sqrt(2.0)
CLASSICAL_BOUND = 2.0


def basis_index(j, k):
    """Row index of ``|jk>`` (j = qubit A bit, k = qubit B bit)."""
    return 2 * j + k


def bell_state(kind):
    """Projector onto a Bell state.

    Parameters
    ----------
    kind : {"singlet", "phi_plus"}
        ``singlet`` is (|01> - |10>)/sqrt(2), ``phi_plus`` is (|00> + |11>)/sqrt(2).
    """
    psi = np.zeros(4, dtype=complex)
    if kind == "singlet":
        psi[basis_index(0, 1)] = 1.0
        psi[basis_index(1, 0)] = -1.0
    elif kind == "phi_plus":
        psi[basis_index(0, 0)] = 1.0
        psi[basis_index(1, 1)] = 1.0
    else:
        raise ValidationError(f"unknown Bell state {kind!r}")
    psi /= np.sqrt(2.0)
    return np.outer(psi, psi.conj())


def maximally_mixed():
    return np.eye(4, dtype=complex) / 4.0


def random_state(rng, rank=None):
    """Random density matrix from the Ginibre ensemble (test helper)."""
    rank = 4 if rank is None else rank
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def w_observable(theta):
    """Spin observable ``sin(theta) sigma_x + cos(theta) sigma_z``."""
    theta = float(theta)
    if not np.isfinite(theta):
        raise ValidationError("theta must be finite")
    return np.sin(theta) * SIGMA_X + np.cos(theta) * SIGMA_Z


def correlator(rho, theta, phi):
    """Joint expectation ``tr(rho W_theta (x) W_phi)``."""
    rho = check_density_matrix(rho)
    op = np.kron(w_observable(theta), w_observable(phi))
    return real_part(np.trace(rho @ op), "correlator")


def _el(rho, bra, ket):
    # rho^{jk,lm} = <jk|rho|lm>, bra/ket given as two-character bit labels
    return rho[int(bra, 2), int(ket, 2)]


def correlator_expanded(rho, theta, phi):
    """Correlator written out element by element.

    Expands ``W_theta (x) W_phi`` into its four Pauli products and reads the
    contributing density-matrix elements by name. Independent of the matrix
    product route in :func:`correlator`, which it must agree with.
    """
    rho = check_density_matrix(rho)
    e = lambda bra, ket: _el(rho, bra, ket)  # noqa: E731
    xx = e("00", "11") + e("11", "00") + e("01", "10") + e("10", "01")
    # sigma_x on A, sigma_z on B
    xz = e("00", "10") + e("10", "00") - e("01", "11") - e("11", "01")
    # sigma_z on A, sigma_x on B
    zx = e("00", "01") + e("01", "00") - e("10", "11") - e("11", "10")
    zz = e("00", "00") + e("11", "11") - e("01", "01") - e("10", "10")
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    value = st * sp * xx + st * cp * xz + ct * sp * zx + ct * cp * zz
    return real_part(value, "correlator")


@dataclass(frozen=True)
class ChshSetting:
    """Measurement angles (radians): a0, a1 for Alice and b0, b1 for Bob."""

    a0: float = 0.0
    a1: float = np.pi / 2
    b0: float = np.pi / 4
    b1: float = 3 * np.pi / 4

    def __post_init__(self):
        for name in ("a0", "a1", "b0", "b1"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValidationError(f"angle {name} must be finite")
            object.__setattr__(self, name, value)

    def as_tuple(self):
        return (self.a0, self.a1, self.b0, self.b1)


DEFAULT_SETTING = ChshSetting()


def chsh_operator(setting=DEFAULT_SETTING):
    """Bell operator whose expectation is the CHSH combination S."""
    a0, a1 = w_observable(setting.a0), w_observable(setting.a1)
    b0, b1 = w_observable(setting.b0), w_observable(setting.b1)
    return np.kron(a0, b0) - np.kron(a0, b1) + np.kron(a1, b0) + np.kron(a1, b1)


def chsh(rho, setting=DEFAULT_SETTING):
    """Signed CHSH value ``E(a0,b0) - E(a0,b1) + E(a1,b0) + E(a1,b1)``."""
    rho = check_density_matrix(rho)
    return real_part(np.trace(rho @ chsh_operator(setting)), "S")


def violates(s_value):
    """Local realism is violated when ``|S| > 2``."""
    return abs(s_value) > CLASSICAL_BOUND


def xz_correlations(rho):
    """2x2 matrix ``T[u, v] = <sigma_u (x) sigma_v>`` for u, v in (x, z)."""
    rho = check_density_matrix(rho)
    paulis = (SIGMA_X, SIGMA_Z)
    out = np.empty((2, 2))
    for (u, pu), (v, pv) in itertools.product(enumerate(paulis), repeat=2):
        out[u, v] = real_part(np.trace(rho @ np.kron(pu, pv)))
    return out


def _chsh_from_correlations(corr, a0, a1, b0, b1):
    def e(a, b):
        fa = np.array([np.sin(a), np.cos(a)])
        fb = np.array([np.sin(b), np.cos(b)])
        return fa @ corr @ fb

    return e(a0, b0) - e(a0, b1) + e(a1, b0) + e(a1, b1)


def _grid_search(corr, n_grid):
    angles = 2 * np.pi * np.arange(n_grid) / n_grid
    f = np.stack([np.sin(angles), np.cos(angles)])
    e = f.T @ corr @ f  # e[a, b] = E(angles[a], angles[b])
    best = (-1.0, None)
    # S = u[b0] + v[b1] with u = e[a0] + e[a1], v = e[a1] - e[a0]
    for i0 in range(n_grid):
        u = e[i0][None, :] + e  # rows: a1
        v = e - e[i0][None, :]
        cand_pos = u.max(axis=1) + v.max(axis=1)
        cand_neg = -(u.min(axis=1) + v.min(axis=1))
        score = np.maximum(cand_pos, cand_neg)
        i1 = int(np.argmax(score))
        if score[i1] > best[0] + 1e-12:
            if cand_pos[i1] >= cand_neg[i1]:
                j0, j1 = int(np.argmax(u[i1])), int(np.argmax(v[i1]))
            else:
                j0, j1 = int(np.argmin(u[i1])), int(np.argmin(v[i1]))
            best = (score[i1], (angles[i0], angles[i1], angles[j0], angles[j1]))
    return best[1]


def optimal_xz_angles(rho, n_grid=64, min_step=1e-8):
    """Angles in the x-z plane maximising ``|S|`` for `rho`.

    A ``n_grid``-point lattice per angle is searched exhaustively, then
    refined by coordinate descent with step halving down to `min_step`.

    Returns
    -------
    (ChshSetting, float)
        The maximising setting and the achieved ``|S|``.
    """
    corr = xz_correlations(rho)
    x = np.array(_grid_search(corr, n_grid), dtype=float)
    objective = lambda a: abs(_chsh_from_correlations(corr, *a))  # noqa: E731
    best = objective(x)
    step = 2 * np.pi / n_grid
    while step >= min_step:
        improved = False
        for k in range(4):
            for sign in (1.0, -1.0):
                trial = x.copy()
                trial[k] += sign * step
                value = objective(trial)
                if value > best:
                    x, best, improved = trial, value, True
                    break
        if not improved:
            step /= 2
    x = np.mod(x, 2 * np.pi)
    setting = ChshSetting(*x)
    default = abs(_chsh_from_correlations(corr, *DEFAULT_SETTING.as_tuple()))
    if default > best:
        return DEFAULT_SETTING, default
    return setting, best
