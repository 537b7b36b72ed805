"""Decoherence-free-subspace classification under collective dephasing.

The coupling acts through ``sigma_z^A + sigma_z^B``, so the subspace
``span{|01>, |10>}`` (collective spin zero) is untouched by the bath. Two
notions are reported:

* ``in_dfs``: the state is supported inside that subspace;
* ``decay_free``: every populated element connects basis states with
  equal collective spin, which also covers diagonal (classical) states.
"""

from dataclasses import dataclass
import itertools

import numpy as np

from . import qstate
from ._validation import check_density_matrix
from .dephasing import P_VALUES

POPULATED_ATOL = 1e-12
ZERO_SECTOR = tuple(i for i, p in enumerate(P_VALUES) if p == 0)


def _bits(index):
    return (index >> 1, index & 1)


@dataclass(frozen=True)
class DfsReport:
    """Outcome of :func:`is_dfs`.

    `offending_elements` lists ``((j, k), (l, m))`` bit pairs of populated
    elements ``<jk|rho|lm>`` (upper triangle) whose collective spins differ.
    """

    in_dfs: bool
    decay_free: bool
    offending_elements: tuple
    outside_support: tuple
    predicted_t_independent: bool


def is_dfs(rho):
    rho = check_density_matrix(rho)
    populated = np.abs(rho) > POPULATED_ATOL
    offending = tuple(
        (_bits(a), _bits(b))
        for a, b in itertools.combinations(range(4), 2)
        if populated[a, b] and P_VALUES[a] != P_VALUES[b]
    )
    outside = tuple(_bits(a) for a in range(4) if a not in ZERO_SECTOR and populated[a, a])
    decay_free = not offending
    return DfsReport(
        in_dfs=decay_free and not outside,
        decay_free=decay_free,
        offending_elements=offending,
        outside_support=outside,
        predicted_t_independent=decay_free,
    )


def decaying_contributions(rho, setting=qstate.DEFAULT_SETTING):
    """CHSH weight carried by each class of decaying coherences.

    Returns a dict keyed by ``|p_bra - p_ket|`` (2 or 4) with the summed
    contribution ``sum 2 Re(rho_ab B_ba)`` of those elements to S, where B
    is the Bell operator. Elements in one class share the same decay factor.
    """
    rho = check_density_matrix(rho)
    bell = qstate.chsh_operator(setting)
    out = {2: 0.0, 4: 0.0}
    for a, b in itertools.combinations(range(4), 2):
        gap = abs(int(P_VALUES[a] - P_VALUES[b]))
        if gap:
            out[gap] += 2.0 * (rho[a, b] * bell[b, a]).real
    return out


def predict_chsh_temperature_dependence(rho, setting=qstate.DEFAULT_SETTING):
    """``"independent"`` if S cannot change with temperature, else ``"dependent"``.

    S depends on temperature only through coherences between different
    collective-spin sectors; if their net weight in S vanishes for each
    decay class the value is fixed (interaction picture).
    """
    weights = decaying_contributions(rho, setting)
    if all(abs(w) <= POPULATED_ATOL for w in weights.values()):
        return "independent"
    return "dependent"
