"""Continuum baths: spectral densities, decoherence integrals, thresholds.

A continuum bath enters only through

    I(t, T) = int_0^inf J(w) (sin(w t / 2) / (w / 2))^2 coth(w / (2 k_B T)) dw,

which replaces ``sum_s |alpha_s|^2 coth`` of a discrete bath by ``4 I``.
Spectral densities therefore expose :meth:`alpha_coth_sum` and can be
passed to every routine in :mod:`bellbath.dephasing`.
"""

from dataclasses import dataclass, field, replace
import math
import warnings

import numpy as np
from scipy import integrate, optimize

from . import dephasing, qstate
from ._validation import (
    DomainError,
    NumericalError,
    ValidationError,
    check_nonnegative,
)

QUAD_RTOL = 1e-9
TAIL_EPS = 1e-12
LN_SQRT2 = math.log(math.sqrt(2.0))


class SpectralDensity:
    """Base class. Subclasses implement ``__call__``, ``derivative_at_zero``
    and ``omega_max``."""

    def __call__(self, omega):
        raise NotImplementedError

    def derivative_at_zero(self):
        raise NotImplementedError

    def omega_max(self):
        raise NotImplementedError

    def breakpoints(self):
        return ()

    def alpha_coth_sum(self, t, T, k_B=1.0):
        return 4.0 * base_integral(self, t, T, k_B)


@dataclass(frozen=True)
class OhmicDensity(SpectralDensity):
    """``J(w) = eta w^s omega_c^(1-s) exp(-w / omega_c)`` with s >= 1."""

    eta: float
    omega_c: float = 1.0
    s_exp: float = 1.0

    def __post_init__(self):
        eta, wc, s = float(self.eta), float(self.omega_c), float(self.s_exp)
        if not np.isfinite(eta) or eta < 0:
            raise ValidationError("eta must be >= 0")
        if not np.isfinite(wc) or wc <= 0:
            raise ValidationError("omega_c must be > 0")
        if not np.isfinite(s) or s < 1:
            raise ValidationError("s_exp must be >= 1")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "omega_c", wc)
        object.__setattr__(self, "s_exp", s)

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        return (self.eta * omega**self.s_exp * self.omega_c ** (1 - self.s_exp)
                * np.exp(-omega / self.omega_c))

    def derivative_at_zero(self):
        return self.eta if self.s_exp == 1 else 0.0

    def omega_max(self):
        return self.omega_c * max(50.0, math.log(1 / TAIL_EPS))


@dataclass(frozen=True, eq=False)
class TabulatedDensity(SpectralDensity):
    """Piecewise-linear J through sampled points, zero beyond the last one.

    A leading ``(0, 0)`` point is inserted when the table starts above zero.
    """

    omega: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float).ravel()
        j = np.asarray(self.values, dtype=float).ravel()
        if w.shape != j.shape or w.size == 0:
            raise ValidationError("omega and J columns must be non-empty and equally long")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(j))):
            raise ValidationError("tabulated spectral density has non-finite entries")
        if w[0] < 0:
            raise ValidationError("first omega must be >= 0")
        if np.any(np.diff(w) <= 0):
            raise ValidationError("omega must be strictly increasing")
        if np.any(j < 0):
            raise ValidationError("J must be >= 0")
        if w[0] == 0:
            if j[0] != 0:
                raise ValidationError("spectral density must vanish at omega = 0")
        else:
            w, j = np.concatenate([[0.0], w]), np.concatenate([[0.0], j])
        if w.size < 2:
            raise ValidationError("tabulated spectral density needs a point with omega > 0")
        w.setflags(write=False)
        j.setflags(write=False)
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "values", j)

    @classmethod
    def from_file(cls, path):
        return load_tabulated(path)

    def __call__(self, omega):
        return np.interp(omega, self.omega, self.values, left=0.0, right=0.0)

    def derivative_at_zero(self):
        # forward difference over the first table step
        return float(self.values[1] / self.omega[1])

    def omega_max(self):
        return float(self.omega[-1])

    def breakpoints(self):
        return tuple(self.omega)


def load_tabulated(path):
    """Read a two-column ``omega J`` text file; ``#`` lines are comments."""
    rows = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read tabulated density {path}: {exc.strerror}") from None
    with fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 2:
                raise ValidationError(f"{path}:{lineno}: expected two columns 'omega J'")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: non-numeric entry") from None
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    data = np.array(rows)
    return TabulatedDensity(data[:, 0], data[:, 1])


def _integrand(J, t, T, k_B, omega_small):
    jprime = J.derivative_at_zero()

    def f(w):
        if w < omega_small:
            # small-frequency limit of J coth times t^2
            return t * t * (2.0 * k_B * T * jprime if T > 0 else 0.0)
        kernel = (t * np.sinc(w * t / (2 * np.pi))) ** 2
        jw = float(J(w))
        if T == 0:
            return jw * kernel
        return jw * kernel / math.tanh(w / (2.0 * k_B * T))

    return f


def base_integral(J, t, T, k_B=1.0):
    """Decoherence integral ``I(t, T)`` by panel-wise adaptive quadrature.

    Panels are at most ``pi / t`` wide so each holds at most half an
    oscillation of ``sin^2(w t / 2)``.

    Raises
    ------
    NumericalError
        If the accumulated error estimate exceeds ``QUAD_RTOL`` relative.
    """
    t = check_nonnegative(t, "t")
    T = check_nonnegative(T, "T")
    if t == 0:
        return 0.0
    w_max = J.omega_max()
    omega_small = 1e-8 * max(1.0 / t, getattr(J, "omega_c", w_max))
    f = _integrand(J, t, T, k_B, omega_small)
    width = min(math.pi / t, w_max)
    edges = np.arange(0.0, w_max, width)
    edges = np.unique(np.concatenate([edges, [w_max], J.breakpoints()]))
    edges = edges[edges <= w_max]
    total = err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, e = integrate.quad(f, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)
            total += val
            err += e
    if not np.isfinite(total) or err > QUAD_RTOL * abs(total) and err > 1e-300:
        raise NumericalError(
            f"quadrature did not converge (estimate {total:.6e}, error {err:.2e})")
    return max(total, 0.0)


def decoherence_exponent(J, ctx):
    """Exponent ``8 c I(t, T)`` of the ``|00><11|`` coherence."""
    return 8.0 * ctx.c * base_integral(J, ctx.t, ctx.T, ctx.k_B)


def s_continuum(J, ctx):
    """Closed-form CHSH value ``2 sqrt(2) exp(-8 c I(t, T))`` for phi_plus."""
    return qstate.TSIRELSON * math.exp(-decoherence_exponent(J, ctx))


def discretize(J, n_modes, omega_max=None, rule="midpoint"):
    """Finite bath whose mode sum approximates the continuum integral.

    ``rule="midpoint"`` places modes at the centres of equal bins with
    ``|g_s|^2 = J(w_s) dw``; ``rule="gauss"`` uses Gauss-Legendre nodes
    and weights on ``[0, omega_max]``.
    """
    omega_max = J.omega_max() if omega_max is None else float(omega_max)
    if rule == "midpoint":
        dw = omega_max / n_modes
        w = (np.arange(n_modes) + 0.5) * dw
        weights = np.full(n_modes, dw)
    elif rule == "gauss":
        x, weights = np.polynomial.legendre.leggauss(n_modes)
        w = 0.5 * omega_max * (x + 1.0)
        weights = 0.5 * omega_max * weights
    else:
        raise ValidationError(f"unknown discretization rule {rule!r}")
    return dephasing.DiscreteBath.from_arrays(w, np.sqrt(J(w) * weights))


def _checked_slope(J):
    slope = J.derivative_at_zero()
    if not slope > 0:
        raise ValidationError(f"J'(0) must be > 0, got {slope}")
    return slope


def thermal_limit_rate(J, T, k_B=1.0, c=dephasing.CALIBRATIONS["paper"]):
    """Long-time growth rate of the decoherence exponent.

    For ``t -> inf`` the integral grows as ``I ~ 2 pi k_B T J'(0) t``, so
    the exponent ``8 c I`` grows at ``16 pi c k_B T J'(0)`` per unit time.
    """
    slope = _checked_slope(J)
    T = check_nonnegative(T, "T")
    return 16.0 * math.pi * c * k_B * T * slope


def tc_paper(J, k_B=1.0):
    """Critical temperature ``ln(sqrt 2) / (256 k_B J'(0))`` in its literal form.

    The expression has no time dependence; compare :func:`thermal_limit_rate`
    and :func:`tc_numeric` for time-resolved thresholds.
    """
    return LN_SQRT2 / (256.0 * k_B * _checked_slope(J))


def threshold_bracket(J, t, ctx, max_doublings=200):
    """Temperatures ``(lo, hi)`` with ``s_continuum`` above 2 at lo and below at hi."""
    if not t > 0:
        raise DomainError("threshold search needs t > 0")
    at = lambda T: replace(ctx, t=t, T=T)  # noqa: E731
    if s_continuum(J, at(0.0)) <= 2.0:
        raise DomainError(f"no threshold at t={t}: S(T=0) <= 2")
    hi = 1.0 / ctx.k_B
    lo = 0.0
    for _ in range(max_doublings):
        if s_continuum(J, at(hi)) < 2.0:
            return lo, hi
        lo, hi = hi, 2 * hi
    raise NumericalError("could not bracket the critical temperature")


def tc_numeric(J, t, ctx):
    """Temperature at which ``s_continuum`` falls to 2 at time `t`.

    Bisection on the monotone exponent ``8 c I(t, T) - ln sqrt(2)``.
    """
    lo, hi = threshold_bracket(J, t, ctx)
    f = lambda T: decoherence_exponent(J, replace(ctx, t=t, T=T)) - LN_SQRT2  # noqa: E731
    root = optimize.bisect(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=400)
    if abs(s_continuum(J, replace(ctx, t=t, T=root)) - 2.0) >= 1e-9:
        raise NumericalError("bisection did not reach |S - 2| < 1e-9")
    return root
