from dataclasses import replace
import math

import numpy as np
import pytest

from bellbath import dephasing, qstate, spectral
from bellbath._validation import DomainError, ValidationError
from bellbath.dephasing import EvolutionContext
from bellbath.spectral import OhmicDensity, TabulatedDensity

OHMIC = OhmicDensity(eta=1.0, omega_c=1.0)


def gauss_bath_sum(J, t, T, n=2000, omega_max=60.0):
    # independent route: Gauss-Legendre discretised bath through the discrete engine
    return spectral.discretize(J, n, omega_max, rule="gauss").alpha_coth_sum(t, T) / 4


def test_ohmic_density():
    assert OHMIC(0.0) == 0.0
    assert OHMIC(1.0) == pytest.approx(np.exp(-1))
    assert OHMIC.derivative_at_zero() == 1.0
    assert OhmicDensity(2.0, 1.0, s_exp=3).derivative_at_zero() == 0.0
    with pytest.raises(ValidationError):
        OhmicDensity(1.0, omega_c=0)
    with pytest.raises(ValidationError):
        OhmicDensity(1.0, s_exp=0.5)


def test_base_integral_zero_time():
    assert spectral.base_integral(OHMIC, 0.0, 3.0) == 0.0


@pytest.mark.parametrize("t", [0.3, 1.0, 4.0, 25.0])
@pytest.mark.parametrize("omega_c", [0.5, 2.0])
def test_base_integral_zero_temperature_closed_form(t, omega_c):
    # int_0^inf eta w e^{-w/wc} 4 sin^2(wt/2) / w^2 dw = eta ln(1 + wc^2 t^2)
    J = OhmicDensity(0.7, omega_c)
    assert spectral.base_integral(J, t, 0.0) == pytest.approx(0.7 * np.log1p((omega_c * t) ** 2), rel=1e-10)


@pytest.mark.parametrize("t, T", [(1.0, 1.0), (0.5, 0.1), (3.0, 2.0), (5.0, 5.0)])
def test_base_integral_matches_discretized_bath(t, T):
    assert spectral.base_integral(OHMIC, t, T) == pytest.approx(gauss_bath_sum(OHMIC, t, T), rel=1e-9)


def test_midpoint_discretization_converges_quadratically():
    exact = spectral.base_integral(OHMIC, 1.0, 1.0)
    errs = [abs(spectral.discretize(OHMIC, n, 60.0).alpha_coth_sum(1.0, 1.0) / 4 - exact)
            for n in (500, 1000, 2000)]
    assert errs[0] / errs[1] == pytest.approx(4, rel=0.05)
    assert errs[1] / errs[2] == pytest.approx(4, rel=0.05)
    assert errs[2] / exact < 1e-4


def test_base_integral_monotone_in_temperature():
    for t in (0.5, 2.0, 7.0):
        values = [spectral.base_integral(OHMIC, t, T) for T in np.linspace(0, 5, 15)]
        assert values[0] >= 0
        assert np.all(np.diff(values) >= -1e-12)


def test_s_continuum():
    assert spectral.s_continuum(OHMIC, EvolutionContext(t=0.0, T=1.0)) == pytest.approx(2 * math.sqrt(2))
    ctx = EvolutionContext(t=1.0, T=1.0)
    expected = 2 * math.sqrt(2) * math.exp(-32 * spectral.base_integral(OHMIC, 1.0, 1.0))
    assert spectral.s_continuum(OHMIC, ctx) == pytest.approx(expected, rel=1e-14)
    series = [spectral.s_continuum(OhmicDensity(0.05), EvolutionContext(t=2.0, T=T))
              for T in np.linspace(0, 50, 20)]
    assert np.all(np.diff(series) <= 0)
    assert 0 < series[-1] < 1e-3


def test_spectral_density_drives_discrete_engine():
    ctx = EvolutionContext(t=1.5, T=0.4)
    bath = spectral.discretize(OHMIC, 2000, 60.0, rule="gauss")
    rho = qstate.bell_state("phi_plus")
    np.testing.assert_allclose(dephasing.evolve(rho, OHMIC, ctx), dephasing.evolve(rho, bath, ctx),
                               rtol=1e-9, atol=1e-15)


def test_tabulated_validation(tmp_path):
    with pytest.raises(ValidationError):
        TabulatedDensity([0.0, 1.0], [0.1, 0.2])
    with pytest.raises(ValidationError):
        TabulatedDensity([0.0, 1.0, 0.5], [0.0, 0.2, 0.1])
    with pytest.raises(ValidationError):
        TabulatedDensity([0.0, 1.0], [0.0, -0.2])
    J = TabulatedDensity([0.5, 1.0], [0.5, 0.2])
    assert J(0.25) == pytest.approx(0.25)
    assert J(2.0) == 0.0


def test_tabulated_file_roundtrip(tmp_path):
    path = tmp_path / "j.txt"
    path.write_text("# omega J\n0 0\n0.5 0.25\n\n1.0 0.3\n", encoding="utf-8")
    J = spectral.load_tabulated(path)
    np.testing.assert_array_equal(J.omega, [0.0, 0.5, 1.0])
    assert J.derivative_at_zero() == pytest.approx(0.5)
    path.write_text("0 0 1\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        spectral.load_tabulated(path)
    path.write_text("0 zero\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        spectral.load_tabulated(path)


def _ohmic_table(step, w_max=60.0):
    w = np.arange(0.0, w_max + step / 2, step)
    return TabulatedDensity(w, OHMIC(w))


def test_tabulated_matches_ohmic():
    J = _ohmic_table(1e-2)
    for t, T in [(1.0, 1.0), (2.0, 0.3)]:
        assert spectral.base_integral(J, t, T) == pytest.approx(spectral.base_integral(OHMIC, t, T), rel=1e-3)


def test_thermal_limit_rate_matches_long_time_fit():
    ctx = EvolutionContext(T=1.0)
    exps = {t: spectral.decoherence_exponent(OHMIC, replace(ctx, t=t)) for t in (50.0, 100.0, 200.0)}
    fitted = (exps[200.0] - exps[100.0]) / 100.0
    rate = spectral.thermal_limit_rate(OHMIC, 1.0)
    assert rate == pytest.approx(64 * math.pi)
    assert fitted == pytest.approx(rate, rel=1e-2)
    assert (exps[100.0] - exps[50.0]) / 50.0 == pytest.approx(rate, rel=1e-2)


def test_thermal_limit_rate_simple_cases():
    assert spectral.thermal_limit_rate(OHMIC, 0.0) == 0.0
    r = spectral.thermal_limit_rate(OHMIC, 0.37)
    assert spectral.thermal_limit_rate(OHMIC, 0.74) == pytest.approx(2 * r, rel=1e-12)
    with pytest.raises(ValidationError):
        spectral.thermal_limit_rate(OhmicDensity(1.0, s_exp=2), 1.0)


def test_tc_paper():
    assert spectral.tc_paper(OHMIC) == pytest.approx(math.log(math.sqrt(2)) / 256, rel=1e-15)
    assert spectral.tc_paper(OHMIC) == pytest.approx(1.353803e-3, rel=1e-6)
    assert spectral.tc_paper(OhmicDensity(2.0)) == pytest.approx(spectral.tc_paper(OHMIC) / 2)
    with pytest.raises(ValidationError):
        spectral.tc_paper(OhmicDensity(0.0))


def test_tc_paper_tabulated():
    J = _ohmic_table(5e-4, w_max=5.0)
    assert J.derivative_at_zero() == pytest.approx(1.0, rel=1e-3)
    assert spectral.tc_paper(J) == pytest.approx(spectral.tc_paper(OHMIC), rel=1e-3)


def test_tc_numeric_threshold_identity():
    J = OhmicDensity(0.01)
    ctx = EvolutionContext()
    root = spectral.tc_numeric(J, 1.0, ctx)
    at_root = replace(ctx, t=1.0, T=root)
    assert 8 * ctx.c * spectral.base_integral(J, 1.0, root) == pytest.approx(math.log(math.sqrt(2)), abs=1e-9)
    assert abs(spectral.s_continuum(J, at_root) - 2) < 1e-9


def test_tc_numeric_no_threshold():
    with pytest.raises(DomainError):
        spectral.tc_numeric(OHMIC, 1.0, EvolutionContext())


def test_tc_numeric_monotone_in_time_and_coupling():
    ctx = EvolutionContext()
    J = OhmicDensity(0.01)
    by_time = [spectral.tc_numeric(J, t, ctx) for t in (0.25, 0.5, 1.0, 1.3)]
    assert np.all(np.diff(by_time) < 0)
    by_eta = [spectral.tc_numeric(OhmicDensity(eta), 1.0, ctx) for eta in (0.003, 0.006, 0.012)]
    assert np.all(np.diff(by_eta) < 0)


def test_single_mode_threshold_matches_closed_inversion():
    # discrete analogue: coth(w / (2 k_B T*)) = ln(sqrt 2) / (2 c |alpha|^2)
    from scipy import optimize

    mode = dephasing.BathMode(1.0, 0.01)
    bath = dephasing.DiscreteBath((mode,))
    t, c = 1.0, 4.0
    a2 = abs(dephasing.alpha(mode, t)) ** 2
    rhs = math.log(math.sqrt(2)) / (2 * c * a2)
    assert rhs >= 1
    t_star = mode.omega / (2 * math.atanh(1 / rhs))
    f = lambda T: dephasing.s_closed_form_phi_plus(bath, EvolutionContext(t=t, T=T)) - 2  # noqa: E731
    root = optimize.bisect(f, 1e-6, 100.0, xtol=1e-14)
    assert root == pytest.approx(t_star, rel=1e-10)
