"""Likelihood-optimal POVMs: constants, costs, positivity, Hermite machinery."""

import dataclasses
import math

import numpy as np
import pytest
from scipy import integrate

from cavbayes.errors import SinVanishes
from cavbayes.ml import (
    average_cost_quadrature,
    conditional_pdf,
    cosine_hermite_coefficients,
    gaussian_average_estimate_closed_forms,
    gaussian_bound_constants,
    gaussian_bound_constants_erf,
    gaussian_cmax,
    gaussian_cost_max,
    gaussian_ml_povm,
    hermite_function,
    interval_audit,
    ml_average_estimate,
    uniform_cmax,
    uniform_cmax_pointwise,
    uniform_cost_max,
    uniform_ml_povm,
)
from cavbayes.priors import Prior

GAUSS = Prior.gaussian(1.0, 1.0)


def special_case_prior():
    # support exactly [0, 2 g0]; half-swap time makes both phases quarter-period
    return Prior.uniform(1.0, 1.0 / math.sqrt(3.0))


# ---------------------------------------------------------------------------
# Gaussian constants


def test_unconstrained_when_sine_vanishes():
    with pytest.raises(SinVanishes):
        gaussian_cmax(GAUSS, math.pi / 2.0)  # 2 g0 tau_c = pi
    povm = gaussian_ml_povm(GAUSS, math.pi / 2.0, 0.0)
    assert povm.c_max == math.inf
    assert np.all(povm.f_z(np.linspace(-5, 7, 50)) == 0.0)


@pytest.mark.parametrize(
    "g0,sigma,tc", [(1.0, 1.0, math.pi / 4.0), (1.0, 0.5, 0.9), (2.0, 0.7, 0.33)]
)
def test_bound_constants_quadrature_vs_erf(g0, sigma, tc):
    p = Prior.gaussian(g0, sigma)
    c1q, c2q = gaussian_bound_constants(p, tc)
    c1e, c2e = gaussian_bound_constants_erf(p, tc)
    assert c1q == pytest.approx(c1e, abs=1e-8)
    assert c2q == pytest.approx(c2e, abs=1e-8)


def test_cmax_respects_interval_positivity_everywhere():
    povm = gaussian_ml_povm(GAUSS, math.pi / 4.0, 0.0)
    audit = interval_audit(povm, n_intervals=10**4, seed=3)
    assert audit.passed
    inflated = interval_audit(povm, n_intervals=10**4, seed=3, scale=1.05)
    assert inflated.n_violations > 0


def test_cmax_never_exceeds_fixed_interval_constants():
    rng = np.random.default_rng(5)
    for _ in range(20):
        p = Prior.gaussian(rng.uniform(0.5, 2.0), rng.uniform(0.3, 1.2))
        tc = rng.uniform(0.3, 2.0)
        try:
            c = gaussian_cmax(p, tc)
        except SinVanishes:
            continue
        c1, c2 = gaussian_bound_constants(p, tc)
        assert c <= min(c1, c2) + 1e-12


# ---------------------------------------------------------------------------
# Gaussian densities and cost


def test_gaussian_densities_shape():
    povm = gaussian_ml_povm(GAUSS, math.pi / 4.0, 0.0)
    assert povm.f_i(1.0) == pytest.approx(1.0 / math.sqrt(2 * math.pi))
    assert povm.f_z(1.0) == pytest.approx(0.0, abs=1e-15)
    tot_i, tot_z = povm.completeness()
    assert tot_i == pytest.approx(1.0, abs=1e-9)
    assert tot_z == pytest.approx(0.0, abs=1e-9)


def test_gaussian_cost_reduces_to_base_when_uninformative():
    base = 1.0 / math.sqrt(4.0 * math.pi)
    povm = gaussian_ml_povm(GAUSS, math.pi / 2.0, 0.0)
    assert gaussian_cost_max(povm) == pytest.approx(base)
    povm = gaussian_ml_povm(GAUSS, math.pi / 4.0, 50.0)
    assert gaussian_cost_max(povm) == pytest.approx(base, abs=1e-12)


@pytest.mark.parametrize("tc,u", [(math.pi / 4.0, 0.0), (0.6, 0.3), (1.9, 0.8)])
def test_gaussian_cost_closed_vs_quadrature(tc, u):
    povm = gaussian_ml_povm(GAUSS, tc, u)
    assert gaussian_cost_max(povm) == pytest.approx(
        average_cost_quadrature(povm), abs=1e-8
    )


def test_average_cost_increases_with_scale():
    for build, tc in ((gaussian_ml_povm, 0.7), (uniform_ml_povm, 0.7)):
        prior = GAUSS if build is gaussian_ml_povm else Prior.uniform(1.0, 1.0)
        povm = build(prior, tc, 0.0)
        costs = []
        for frac in np.linspace(0.0, 1.0, 10):
            scaled = dataclasses.replace(povm, _fz_scale=povm._fz_scale * frac)
            costs.append(average_cost_quadrature(scaled))
        assert np.all(np.diff(costs) > 0)


# ---------------------------------------------------------------------------
# uniform prior


def test_uniform_special_case_constant():
    p = special_case_prior()
    tc = math.pi / 4.0
    assert uniform_cmax(p, tc) == pytest.approx(2.0 * tc / math.pi, abs=1e-10)
    assert uniform_cmax_pointwise(p, tc) == pytest.approx(2.0 * tc / math.pi, abs=1e-12)


def test_uniform_small_spread_loosens_constraint():
    # shrinking sigma cancels the oscillatory term and the admissible scale
    # grows past the special-case value
    tc = math.pi / 4.0
    ref = 2.0 * tc / math.pi
    narrow = uniform_cmax(Prior.uniform(1.0, 0.05), tc)
    assert narrow > ref
    assert narrow == pytest.approx(uniform_cmax_pointwise(Prior.uniform(1.0, 0.05), tc), rel=1e-6)


def test_uniform_minimax_matches_pointwise_cap():
    rng = np.random.default_rng(9)
    for _ in range(15):
        p = Prior.uniform(rng.uniform(0.5, 2.0), rng.uniform(0.2, 1.2))
        tc = rng.uniform(0.3, 2.5)
        assert uniform_cmax(p, tc) == pytest.approx(
            uniform_cmax_pointwise(p, tc), rel=1e-6
        )


def test_uniform_random_constraint_scan():
    # direct check of the interval-endpoint inequalities on random (x, y)
    p = special_case_prior()
    tc = math.pi / 4.0
    big_a = 2.0 * math.sqrt(3.0) * p.sigma * tc
    big_b = 2.0 * p.g0 * tc
    ratio = math.sqrt(3.0) * p.sigma / p.g0

    def violations(c, n, seed):
        rng = np.random.default_rng(seed)
        x = rng.uniform(0.0, 1.0, n)
        y = 1.0 + ratio * (1.0 - x) * rng.uniform(-1.0, 1.0, n)
        h = (np.sin(big_a * x) * np.cos(big_b * y) - x * math.sin(big_a) * math.cos(big_b)) / tc
        lower = x - c * np.abs(h)
        upper = x + c * np.abs(h)
        return int(np.sum((lower < -1e-12) | (upper > 1.0 + 1e-12)))

    c_max = uniform_cmax(p, tc)
    assert violations(c_max, 10**5, 21) == 0
    assert violations(1.02 * c_max, 10**5, 21) > 0


def test_uniform_densities_and_completeness():
    p = Prior.uniform(1.0, 0.8)
    povm = uniform_ml_povm(p, 1.1, 0.0)
    tot_i, tot_z = povm.completeness()
    assert tot_i == pytest.approx(1.0, abs=1e-12)
    assert tot_z == pytest.approx(0.0, abs=1e-12)
    audit = interval_audit(povm, n_intervals=2000, seed=4)
    assert audit.passed


def test_uniform_special_case_cost():
    p = special_case_prior()
    tc = math.pi / 4.0
    for u, expected in ((0.0, 0.75), (math.log(2.0), 0.625)):
        povm = uniform_ml_povm(p, tc, u)
        assert uniform_cost_max(povm) == pytest.approx(expected, abs=1e-10)
        assert average_cost_quadrature(povm) == pytest.approx(expected, abs=1e-8)


def test_uniform_generic_cost_closed_vs_quadrature():
    p = Prior.uniform(1.0, 0.4)
    povm = uniform_ml_povm(p, 1.3, 0.25)
    assert uniform_cost_max(povm) == pytest.approx(
        average_cost_quadrature(povm), abs=1e-8
    )


# ---------------------------------------------------------------------------
# conditional law and mean estimate


def test_conditional_pdf_prior_recovery_when_uninformative():
    povm = gaussian_ml_povm(GAUSS, math.pi / 2.0, 0.0)  # f_z == 0
    xs = np.linspace(-4.0, 6.0, 200)
    from cavbayes.priors import density

    for g in (0.4, 1.0, 1.7):
        assert np.max(np.abs(conditional_pdf(povm, g, xs, 0.0) - density(GAUSS, xs))) < 1e-15
    assert ml_average_estimate(povm, 0.3, 0.0) == pytest.approx(1.0, abs=1e-9)


def test_conditional_pdf_normalization():
    rng = np.random.default_rng(13)
    for build, prior in ((gaussian_ml_povm, GAUSS), (uniform_ml_povm, Prior.uniform(1.0, 1.0))):
        povm = build(prior, 0.9, 0.2)
        lo, hi = povm.window
        for g in rng.uniform(0.2, 1.8, 10):
            total = integrate.quad(
                lambda x: conditional_pdf(povm, float(g), x, 0.2), lo, hi, limit=300
            )[0]
            assert total == pytest.approx(1.0, abs=1e-8)


def test_conditional_pdf_is_biased():
    povm = gaussian_ml_povm(GAUSS, math.pi / 4.0, 0.0)
    g = 0.7
    # not an even function of (estimate - true value)
    left = conditional_pdf(povm, g, g - 0.5, 0.0)
    right = conditional_pdf(povm, g, g + 0.5, 0.0)
    assert abs(left - right) > 1e-3


def test_uniform_special_case_average_estimate():
    p = special_case_prior()
    povm = uniform_ml_povm(p, math.pi / 4.0, 0.0)
    assert ml_average_estimate(povm, 1.0, 0.0) == pytest.approx(1.0, abs=1e-10)
    # generic g reproduces g0 + (4 g0/pi^2)(1 - 2 cos^2(pi g/(4 g0)))
    for g in (0.4, 1.3):
        expected = 1.0 + (4.0 / math.pi**2) * (
            1.0 - 2.0 * math.cos(math.pi * g / 4.0) ** 2
        )
        assert ml_average_estimate(povm, g, 0.0) == pytest.approx(expected, abs=1e-9)


def test_gaussian_mean_estimate_closed_form_matches_quadrature():
    povm = gaussian_ml_povm(GAUSS, math.pi / 4.0, 0.0)
    for g in (0.6, 1.0, 1.5):
        quad = ml_average_estimate(povm, g, 0.0)
        derived, display = gaussian_average_estimate_closed_forms(povm, g, 0.0)
        assert quad == pytest.approx(derived, abs=1e-8)
        # the display variant deviates; it is reported, never asserted
        assert math.isfinite(display)


def test_mean_estimate_reinforces_prior_at_long_interaction_times():
    # the bias envelope e^{-2 sigma^2 tau_c^2} dies with interaction time,
    # pinning the mean estimate to the prior mean for every true coupling
    # and any flight decay
    for u in (0.0, 10.0):
        povm = gaussian_ml_povm(GAUSS, 3.0, u)
        for g in (0.3, 1.0, 1.8):
            assert ml_average_estimate(povm, g, u) == pytest.approx(1.0, abs=1e-3)


def test_mean_estimate_bias_survives_long_flight():
    # heavy flight decay pins the arriving qubit to its ground state, so the
    # estimate distribution collapses onto f_I - f_z: a g-independent law
    # whose mean keeps a constant offset from the prior mean
    povm = gaussian_ml_povm(GAUSS, math.pi / 4.0, 10.0)
    means = [ml_average_estimate(povm, g, 10.0) for g in (0.3, 1.0, 1.8)]
    assert max(means) - min(means) < 1e-3  # no dependence on the true value
    assert abs(means[0] - 1.0) > 0.1  # but a persistent offset


# ---------------------------------------------------------------------------
# POVM property sweep


def test_povm_validity_on_random_draws():
    rng = np.random.default_rng(20260810)
    detected = 0
    n_draws = 40
    for i in range(n_draws):
        g0 = rng.uniform(0.5, 2.0)
        sigma = rng.uniform(0.4, 1.2) * g0
        tc = rng.uniform(0.5, 2.5) / g0
        for build, prior in (
            (gaussian_ml_povm, Prior.gaussian(g0, sigma)),
            (uniform_ml_povm, Prior.uniform(g0, sigma)),
        ):
            povm = build(prior, tc, 0.0)
            tot_i, tot_z = povm.completeness()
            assert abs(tot_i - 1.0) < 1e-9 and abs(tot_z) < 1e-9
            assert interval_audit(povm, 500, seed=1000 + i).passed
            if not interval_audit(povm, 500, seed=1000 + i, scale=1.05).passed:
                detected += 1
    assert detected >= int(0.95 * 2 * n_draws)


# ---------------------------------------------------------------------------
# Hermite machinery


def test_hermite_functions_orthonormal():
    xs = np.linspace(-12.0, 12.0, 4001)
    w = np.gradient(xs)
    for m, n in ((0, 0), (3, 3), (2, 5), (7, 7), (4, 9)):
        inner = np.sum(w * hermite_function(m, xs) * hermite_function(n, xs))
        assert inner == pytest.approx(1.0 if m == n else 0.0, abs=1e-8)


def test_expansion_coefficients_match_direct_projection():
    exp = cosine_hermite_coefficients(1.0, 1.0, math.pi / 4.0, n_basis=40)
    for n in range(21):
        ref = integrate.quad(
            lambda x: math.cos(2.0 * x * math.pi / 4.0 + math.pi / 2.0)
            * math.exp(-x * x / 2.0)
            * float(hermite_function(n, np.array([x]))[0]),
            -12.0,
            12.0,
            limit=400,
        )[0]
        assert exp.coefficients[n] == pytest.approx(ref, abs=1e-10)


def test_odd_partial_sum_converges_to_sine_product():
    g0, sigma, tc = 1.0, 1.0, math.pi / 4.0
    exp = cosine_hermite_coefficients(g0, sigma, tc, n_basis=40)
    xs = np.linspace(-5.0, 5.0, 801)
    got = exp.partial_sum(xs, parity="odd")
    target = -math.sin(2.0 * g0 * tc) * np.sin(2.0 * sigma * xs * tc) * np.exp(-(xs**2) / 2.0)
    assert np.max(np.abs(got - target)) < 1e-6


def test_expansion_requires_decayed_tail():
    with pytest.raises(ValueError):
        cosine_hermite_coefficients(1.0, 2.0, 2.0, n_basis=10)
