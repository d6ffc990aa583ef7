import math

import numpy as np
import pytest

from psf_matfunc.errors import PrecondError
from psf_matfunc.kernels import (SpectralProfile, TimeKernel,
                                 algebraic_envelope_constant,
                                 algebraic_tail_value, decay_envelope,
                                 envelope_rate, kernel_value, kernel_values,
                                 l1_norm_estimate, saddle_rate)
from psf_matfunc.util import fit_loglog_slope


def gaussian_profile(T=1.0):
    return SpectralProfile(alpha=1.0, T=T, mode="root")   # p = 2


def cauchy_profile(T=1.0):
    return SpectralProfile(alpha=0.5, T=T, mode="root")   # p = 1


class TestSpectralProfile:
    def test_mode_exponent(self):
        assert SpectralProfile(1.0, 1.0, "root").p == 2.0
        assert SpectralProfile(0.75, 1.0, "root").p == 1.5
        assert SpectralProfile(4.0, 1.0, "direct").p == 4.0

    def test_regime_tags(self):
        assert SpectralProfile(1.0, 1.0, "root").regime == "analytic"
        assert SpectralProfile(2.0, 1.0, "root").regime == "analytic"
        assert SpectralProfile(2.0, 1.0, "direct").regime == "analytic"
        assert SpectralProfile(0.75, 1.0, "root").regime == "fractional"
        assert SpectralProfile(3.0, 1.0, "direct").regime == "fractional"
        assert SpectralProfile(1.5, 1.0, "root").regime == "fractional"

    def test_root_mode_floor(self):
        with pytest.raises(PrecondError):
            SpectralProfile(0.3, 1.0, "root")
        SpectralProfile(0.3, 1.0, "direct")  # direct mode has no floor

    def test_bad_inputs(self):
        with pytest.raises(PrecondError):
            SpectralProfile(1.0, -1.0, "root")
        with pytest.raises(PrecondError):
            SpectralProfile(1.0, 1.0, "sideways")


@pytest.mark.parametrize("T", [0.5, 1.0, 4.0])
def test_gaussian_closed_form(T):
    """p = 2 kernel is exactly the heat kernel sqrt(pi/T) e^{-pi^2 x^2/T}."""
    xs = np.linspace(0.0, 20.0, 50)
    vals = kernel_values(TimeKernel(gaussian_profile(T)), xs)
    exact = np.sqrt(np.pi / T) * np.exp(-np.pi**2 * xs**2 / T)
    np.testing.assert_allclose(vals, exact, atol=1e-10, rtol=0)


@pytest.mark.parametrize("T", [0.5, 1.0, 4.0])
def test_cauchy_closed_form(T):
    xs = np.linspace(0.0, 20.0, 50)
    vals = kernel_values(TimeKernel(cauchy_profile(T)), xs)
    exact = 2.0 * T / (T**2 + 4.0 * np.pi**2 * xs**2)
    np.testing.assert_allclose(vals, exact, atol=1e-10, rtol=0)


def test_kernel_value_scalar_matches_batch():
    kern = TimeKernel(SpectralProfile(0.75, 1.0, "root"))
    xs = np.array([0.0, 0.5, 3.0])
    batch = kernel_values(kern, xs)
    for x, v in zip(xs, batch):
        assert kernel_value(kern, float(x)) == pytest.approx(v, abs=1e-14)


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0])
def test_stable_density_nonnegative(p):
    """For p <= 2 the kernel is an alpha-stable density: no negative lobes."""
    kern = TimeKernel(SpectralProfile(p / 2.0, 1.0, "root"))
    xs = np.linspace(0.0, 30.0, 400)
    assert kernel_values(kern, xs).min() >= -1e-10


@pytest.mark.parametrize("p,slope", [(1.5, -2.5), (2.5, -3.5)])
def test_fractional_tail_slope(p, slope):
    """|f| ~ C/x^{p+1} for non-even p: fitted log-log slope on [10, 100]."""
    kern = TimeKernel(SpectralProfile(p / 2.0, 1.0, "root"))
    xs = np.geomspace(10.0, 100.0, 25)
    s = fit_loglog_slope(xs, np.abs(kernel_values(kern, xs)))
    assert abs(s - slope) <= 0.15


def test_envelope_constant_value():
    # (T/pi) Gamma(p+1) |sin(pi p / 2)| at p = 1.5, T = 1
    expected = (1.0 / math.pi) * math.gamma(2.5) * math.sin(0.75 * math.pi)
    assert algebraic_envelope_constant(1.5, 1.0) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(0.2992, abs=5e-5)


def test_fractional_envelope_is_constant_times_power():
    prof = SpectralProfile(0.75, 1.0, "root")
    C = algebraic_envelope_constant(1.5, 1.0)
    for x in (0.5, 2.0, 7.0):
        assert decay_envelope(prof, x) == pytest.approx(C / x**2.5, rel=1e-12)
    with pytest.raises(PrecondError):
        decay_envelope(prof, 0.0)


def test_tail_series_tracks_kernel():
    """The asymptotic series for the tail agrees with quadrature at large x."""
    kern = TimeKernel(SpectralProfile(0.75, 1.0, "root"))
    for x in (30.0, 60.0):
        exact = kernel_value(kern, x)
        series = algebraic_tail_value(1.5, 1.0, x)
        assert series == pytest.approx(exact, rel=1e-4)


def test_gaussian_envelope_is_exact_modulus():
    prof = gaussian_profile()
    lam, beta = envelope_rate(prof)
    assert (lam, beta) == pytest.approx((math.pi**2, 2.0), rel=1e-14)
    for x in (0.3, 1.0, 2.5):
        assert decay_envelope(prof, x) == pytest.approx(math.exp(-math.pi**2 * x**2),
                                                        rel=1e-12)


def test_saddle_rate_matches_envelope_at_p2():
    prof = gaussian_profile()
    assert saddle_rate(prof) == pytest.approx(envelope_rate(prof), rel=1e-14)


def test_saddle_rate_is_observed_decay_p4():
    """The model envelope overstates decay for p > 2; the stationary-phase
    rate (envelope rate times sin(pi/(2(p-1)))) is what |f| actually follows.

    Fit the semilog slope of |f| against x^beta and compare to both rates:
    the saddle rate must match, the raw envelope rate must not."""
    prof = SpectralProfile(4.0, 1.0, "direct")
    lam_env, beta = envelope_rate(prof)
    lam_sad, beta_s = saddle_rate(prof)
    assert beta_s == beta
    assert lam_sad == pytest.approx(lam_env * math.sin(math.pi / 6.0), rel=1e-14)
    kern = TimeKernel(prof)
    xs = np.linspace(1.5, 3.0, 8)
    vals = np.abs(kernel_values(kern, xs))
    fit = -np.polyfit(xs**beta, np.log(vals), 1)[0]
    assert abs(fit - lam_sad) / lam_sad < 0.05
    assert abs(fit - lam_env) / lam_env > 0.4


def test_l1_unit_for_stable_exponents():
    for p in (1.0, 1.5, 2.0):
        est = l1_norm_estimate(TimeKernel(SpectralProfile(p / 2.0, 1.0, "root")))
        assert est.regime == "stable"
        assert est.value == pytest.approx(1.0, abs=1e-6)


def test_l1_regime_tag_above_two():
    est = l1_norm_estimate(TimeKernel(SpectralProfile(1.25, 1.0, "root")))  # p = 2.5
    assert est.regime == "logarithmic"
    assert est.value > 1.0 + 1e-3


def test_kernel_even_in_x():
    kern = TimeKernel(SpectralProfile(0.75, 1.0, "root"))
    xs = np.array([0.7, 1.9])
    np.testing.assert_allclose(kernel_values(kern, -xs), kernel_values(kern, xs),
                               rtol=1e-13)
