"""JSON run configuration for the command-line front end.

Example::

    {
      "state": "phi_plus",
      "bath": {"ohmic": {"eta": 1.0, "omega_c": 1.0, "s_exp": 1.0}},
      "angles": [0.0, 1.5707963267948966, 0.7853981633974483, 2.356194490169345],
      "mode": {"calibration": "paper", "picture": "interaction"},
      "units": {"k_b": 1.0},
      "qubits": {"omega0_A": 0.0, "omega0_B": 0.0}
    }

``state`` is a Bell-state name or a 4x4 matrix of ``[re, im]`` pairs.
``bath`` holds exactly one of ``discrete`` (list of ``{"omega", "g"}`` with
``g`` a number or ``[re, im]``), ``ohmic`` or ``tabulated`` (file path).
"""

from dataclasses import dataclass, field
import json

import numpy as np

from . import dephasing, qstate, spectral
from ._validation import ValidationError, check_density_matrix

TOP_KEYS = {"state", "bath", "angles", "mode", "units", "qubits"}
BATH_KINDS = ("discrete", "ohmic", "tabulated")


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ValidationError(f"{where} must be an object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ValidationError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def _complex(value, where):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        return complex(value[0], value[1])
    raise ValidationError(f"{where} must be a number or an [re, im] pair")


def _pair(z):
    return [z.real, z.imag]


def _float(obj, key, default, where):
    value = obj.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where}.{key} must be a number")
    return float(value)


@dataclass(frozen=True)
class RunConfig:
    state: object = "phi_plus"
    bath_kind: str = "discrete"
    bath_params: object = ()
    angles: tuple = qstate.DEFAULT_SETTING.as_tuple()
    calibration: str = "paper"
    picture: str = "interaction"
    k_b: float = 1.0
    omega0_A: float = 0.0
    omega0_B: float = 0.0
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def rho(self):
        if isinstance(self.state, str):
            return qstate.bell_state(self.state)
        return np.array(self.state, dtype=complex)

    def setting(self):
        return qstate.ChshSetting(*self.angles)

    def bath(self):
        """DiscreteBath or spectral density described by the config."""
        if "bath" not in self._cache:
            if self.bath_kind == "discrete":
                bath = dephasing.DiscreteBath(
                    tuple(dephasing.BathMode(w, g) for w, g in self.bath_params))
            elif self.bath_kind == "ohmic":
                bath = spectral.OhmicDensity(*self.bath_params)
            else:
                bath = spectral.load_tabulated(self.bath_params)
            self._cache["bath"] = bath
        return self._cache["bath"]

    def context(self, t=0.0, T=0.0):
        return dephasing.EvolutionContext(
            t=t, T=T, k_B=self.k_b, c=dephasing.CALIBRATIONS[self.calibration],
            picture=self.picture, omega0_A=self.omega0_A, omega0_B=self.omega0_B)

    def to_dict(self):
        if isinstance(self.state, str):
            state = self.state
        else:
            state = [[_pair(z) for z in row] for row in self.state]
        if self.bath_kind == "discrete":
            bath = {"discrete": [{"omega": w, "g": _pair(g)} for w, g in self.bath_params]}
        elif self.bath_kind == "ohmic":
            eta, wc, s = self.bath_params
            bath = {"ohmic": {"eta": eta, "omega_c": wc, "s_exp": s}}
        else:
            bath = {"tabulated": self.bath_params}
        return {
            "state": state,
            "bath": bath,
            "angles": list(self.angles),
            "mode": {"calibration": self.calibration, "picture": self.picture},
            "units": {"k_b": self.k_b},
            "qubits": {"omega0_A": self.omega0_A, "omega0_B": self.omega0_B},
        }

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def parse_config(obj):
    """Build and validate a :class:`RunConfig` from decoded JSON."""
    _check_keys(obj, TOP_KEYS, "config")
    kwargs = {}

    state = obj.get("state", "phi_plus")
    if isinstance(state, str):
        qstate.bell_state(state)
        kwargs["state"] = state
    else:
        if not isinstance(state, list) or len(state) != 4 or any(
                not isinstance(r, list) or len(r) != 4 for r in state):
            raise ValidationError("state matrix must be 4x4")
        matrix = tuple(tuple(_complex(v, "state entry") for v in row) for row in state)
        check_density_matrix(np.array(matrix), name="state")
        kwargs["state"] = matrix

    if "bath" not in obj:
        raise ValidationError("config needs a 'bath' entry")
    bath = obj["bath"]
    _check_keys(bath, BATH_KINDS, "bath")
    if len(bath) != 1:
        raise ValidationError("bath must contain exactly one of: " + ", ".join(BATH_KINDS))
    (kind, spec), = bath.items()
    kwargs["bath_kind"] = kind
    if kind == "discrete":
        if not isinstance(spec, list) or not spec:
            raise ValidationError("bath.discrete must be a non-empty list")
        modes = []
        for i, m in enumerate(spec):
            _check_keys(m, {"omega", "g"}, f"bath.discrete[{i}]")
            if "omega" not in m or "g" not in m:
                raise ValidationError(f"bath.discrete[{i}] needs 'omega' and 'g'")
            modes.append((_float(m, "omega", None, f"bath.discrete[{i}]"),
                          _complex(m["g"], f"bath.discrete[{i}].g")))
        kwargs["bath_params"] = tuple(modes)
    elif kind == "ohmic":
        _check_keys(spec, {"eta", "omega_c", "s_exp"}, "bath.ohmic")
        if "eta" not in spec:
            raise ValidationError("bath.ohmic needs 'eta'")
        kwargs["bath_params"] = (_float(spec, "eta", None, "bath.ohmic"),
                                 _float(spec, "omega_c", 1.0, "bath.ohmic"),
                                 _float(spec, "s_exp", 1.0, "bath.ohmic"))
    else:
        if not isinstance(spec, str):
            raise ValidationError("bath.tabulated must be a file path")
        kwargs["bath_params"] = spec

    if "angles" in obj:
        angles = obj["angles"]
        if not isinstance(angles, list) or len(angles) != 4:
            raise ValidationError("angles must be a list of four numbers")
        kwargs["angles"] = qstate.ChshSetting(*[
            _float({"a": a}, "a", None, "angles") for a in angles]).as_tuple()

    mode = obj.get("mode", {})
    _check_keys(mode, {"calibration", "picture"}, "mode")
    calibration = mode.get("calibration", "paper")
    if calibration not in dephasing.CALIBRATIONS:
        raise ValidationError(
            "mode.calibration must be one of " + ", ".join(dephasing.CALIBRATIONS))
    picture = mode.get("picture", "interaction")
    if picture not in ("interaction", "lab"):
        raise ValidationError("mode.picture must be 'interaction' or 'lab'")
    kwargs.update(calibration=calibration, picture=picture)

    units = obj.get("units", {})
    _check_keys(units, {"k_b"}, "units")
    kwargs["k_b"] = _float(units, "k_b", 1.0, "units")

    qubits = obj.get("qubits", {})
    _check_keys(qubits, {"omega0_A", "omega0_B"}, "qubits")
    kwargs["omega0_A"] = _float(qubits, "omega0_A", 0.0, "qubits")
    kwargs["omega0_B"] = _float(qubits, "omega0_B", 0.0, "qubits")

    config = RunConfig(**kwargs)
    config.bath()  # validates the bath and loads tabulated files
    config.context()
    return config


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc.msg}") from None
    return parse_config(obj)
