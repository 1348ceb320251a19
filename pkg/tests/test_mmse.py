"""Optimal quadratic-cost estimator: closed forms, quadrature path, limits."""

import math

import numpy as np
import pytest

from cavbayes.dynamics import FieldState, Scenario, field_for
from cavbayes.errors import DegenerateGamma0
from cavbayes.mmse import (
    average_estimate,
    closed_form_abc,
    closed_form_gammas,
    gamma_moments,
    limit_eigenvalue_tau0,
    mmse_estimator,
    mse_of_estimator,
)
from cavbayes.priors import Prior
from cavbayes.qubit import eigendecompose

VACUUM = FieldState.vacuum()
GAUSS = Prior.gaussian(1.0, 1.0)
UNIF = Prior.uniform(1.0, 1.0)


# ---------------------------------------------------------------------------
# moment operators


def test_gamma_traces_are_prior_moments():
    for prior in (GAUSS, UNIF):
        sc = Scenario(tau_c=0.8, tau_f_gamma=0.3)
        g = gamma_moments(prior, sc, VACUUM)
        assert g.gamma0.trace == pytest.approx(1.0, abs=1e-9)
        assert g.gamma1.trace == pytest.approx(prior.g0, abs=1e-9)
        assert g.gamma2.trace == pytest.approx(prior.g0**2 + prior.sigma**2, abs=1e-9)


@pytest.mark.parametrize("prior", [GAUSS, UNIF], ids=["gaussian", "uniform"])
def test_gamma_moments_match_closed_entries(prior):
    sc = Scenario(tau_c=0.9, tau_f_gamma=0.4)
    num = gamma_moments(prior, sc, VACUUM)
    ref = closed_form_gammas(prior, sc.tau_c, sc.tau_f_gamma)
    for name in ("gamma0", "gamma1", "gamma2"):
        assert getattr(num, name).ee == pytest.approx(getattr(ref, name).ee, abs=1e-9)
        assert getattr(num, name).gg == pytest.approx(getattr(ref, name).gg, abs=1e-9)


def test_gamma_moments_near_delta_prior():
    prior = Prior.gaussian(1.0, 1e-8)
    sc = Scenario(tau_c=0.7)
    g = gamma_moments(prior, sc, VACUUM)
    p = math.cos(1.0 * 0.7) ** 2
    for k, gam in enumerate((g.gamma0, g.gamma1, g.gamma2)):
        assert gam.ee == pytest.approx(1.0**k * p, abs=1e-6)
        assert gam.gg == pytest.approx(1.0**k * (1 - p), abs=1e-6)


def test_closed_form_entries_special_values():
    a, b, c = closed_form_abc(GAUSS, math.pi / 2.0)
    assert a == pytest.approx((1 - math.exp(-math.pi**2 / 2)) / 2, abs=1e-14)
    a, b, c = closed_form_abc(GAUSS, 0.0)
    assert (a, b, c) == pytest.approx((1.0, 1.0, 2.0), abs=1e-14)
    a, _, _ = closed_form_abc(UNIF, 1e-9)
    assert a == pytest.approx(1.0, abs=1e-9)


# ---------------------------------------------------------------------------
# estimator and cost


def test_full_swap_time_reinforces_prior():
    res = mmse_estimator(closed_form_gammas(GAUSS, math.pi / 2.0, 0.0))
    assert res.estimates == pytest.approx((1.0, 1.0), abs=1e-12)
    assert res.c_min == pytest.approx(1.0, abs=1e-12)


def test_half_swap_time_closed_values():
    for u in (0.0, 0.5):
        res = mmse_estimator(closed_form_gammas(GAUSS, math.pi / 4.0, u))
        k = (math.pi / 2.0) * math.exp(-math.pi**2 / 8.0)
        branch = 1.0 / (2.0 * math.exp(u) - 1.0)
        exc, gnd = res.branch_estimates()
        assert exc == pytest.approx(1.0 - k, abs=1e-12)
        assert gnd == pytest.approx(1.0 + k * branch, abs=1e-12)
        cost = 1.0 - (math.pi**2 / 4.0) * branch * math.exp(-math.pi**2 / 4.0)
        assert res.c_min == pytest.approx(cost, abs=1e-12)


def test_cost_never_beats_variance_bound():
    rng = np.random.default_rng(11)
    for _ in range(50):
        prior = Prior.gaussian(rng.uniform(0.5, 2.0), rng.uniform(0.3, 1.5))
        tc = rng.uniform(0.05, 4.0)
        u = rng.uniform(0.0, 2.0)
        res = mmse_estimator(closed_form_gammas(prior, tc, u))
        assert -1e-9 <= res.c_min <= prior.sigma**2 + 1e-9


def test_closed_and_quadrature_paths_agree():
    rng = np.random.default_rng(77)
    for _ in range(200):
        g0 = rng.uniform(0.5, 2.0)
        sig = rng.uniform(0.3, 1.5) * g0
        tc = rng.uniform(0.05, 5.0) / g0
        u = rng.uniform(0.0, 2.0)
        prior = Prior.gaussian(g0, sig) if rng.random() < 0.5 else Prior.uniform(g0, sig)
        res_c = mmse_estimator(closed_form_gammas(prior, tc, u))
        res_q = mmse_estimator(gamma_moments(prior, Scenario(tau_c=tc, tau_f_gamma=u), VACUUM))
        assert res_q.c_min == pytest.approx(res_c.c_min, abs=1e-8)
        assert res_q.estimates[0] == pytest.approx(res_c.estimates[0], abs=1e-8)
        assert res_q.estimates[1] == pytest.approx(res_c.estimates[1], abs=1e-8)


def test_zero_time_cost_is_prior_variance():
    # exactly zero interaction time is regular once flight decay acts
    for prior in (GAUSS, UNIF):
        res = mmse_estimator(closed_form_gammas(prior, 0.0, 0.3))
        assert res.c_min == pytest.approx(prior.sigma**2, abs=1e-12)
        # and the short-time limit approaches it smoothly
        res = mmse_estimator(closed_form_gammas(prior, 1e-5, 0.0))
        assert res.c_min == pytest.approx(prior.sigma**2, abs=1e-9)


def test_zero_time_without_decay_is_degenerate():
    with pytest.raises(DegenerateGamma0):
        mmse_estimator(closed_form_gammas(GAUSS, 0.0, 0.0))


def test_ground_branch_short_time_limit():
    assert limit_eigenvalue_tau0(GAUSS) == pytest.approx(2.0)
    assert limit_eigenvalue_tau0(Prior.gaussian(1.0, 1e-6)) == pytest.approx(1.0, abs=1e-9)
    for prior in (GAUSS, UNIF):
        res = mmse_estimator(
            gamma_moments(prior, Scenario(tau_c=1e-5), VACUUM)
        )
        _, gnd = res.branch_estimates()
        assert gnd == pytest.approx(limit_eigenvalue_tau0(prior), abs=1e-3)


def test_long_time_estimates_collapse_to_prior_mean():
    res_g = mmse_estimator(closed_form_gammas(GAUSS, 50.0, 0.0))
    dev_g = max(abs(e - 1.0) for e in res_g.estimates)
    assert dev_g < 0.05
    res_u = mmse_estimator(closed_form_gammas(UNIF, 50.0, 0.0))
    dev_u = max(abs(e - 1.0) for e in res_u.estimates)
    assert dev_u < 0.05
    assert dev_u > dev_g  # uniform prior converges more slowly


def test_coherent_field_short_time_branches():
    # measured short-time behavior with photons present: the excited branch
    # emerges from g0, while the ground branch tends to an interior limit
    # between g0 and the vacuum-ladder value g0(3s^2+g0^2)/(s^2+g0^2)
    # (5/3 at |alpha| = 1 with s = g0); only the excited branch matches the
    # "both start at g0" reading of the eigenvalue plots
    sc = Scenario(tau_c=1e-3, alpha=1.0)
    res = mmse_estimator(gamma_moments(GAUSS, sc, field_for(sc)))
    exc, gnd = res.branch_estimates()
    assert exc == pytest.approx(1.0, abs=1e-3)
    assert gnd == pytest.approx(5.0 / 3.0, abs=5e-3)
    assert 1.0 < gnd < limit_eigenvalue_tau0(GAUSS)


# ---------------------------------------------------------------------------
# conditional averages


def test_average_estimate_unbiased_at_prior_mean():
    sc = Scenario(tau_c=math.pi / 4.0)
    res = mmse_estimator(closed_form_gammas(GAUSS, sc.tau_c, 0.0))
    assert average_estimate(res, 1.0, sc, VACUUM) == pytest.approx(1.0, abs=1e-12)


def test_average_estimate_long_flight_reinforces_prior():
    sc = Scenario(tau_c=math.pi / 4.0, tau_f_gamma=50.0)
    res = mmse_estimator(
        closed_form_gammas(GAUSS, sc.tau_c, sc.tau_f_gamma), sc.tau_f_gamma
    )
    for g in (0.3, 0.9, 1.6):
        assert average_estimate(res, g, sc, VACUUM) == pytest.approx(1.0, abs=1e-9)


def test_average_estimate_uniform_closed_form():
    for u in (0.0, 0.4):
        sc = Scenario(tau_c=math.pi / 4.0, tau_f_gamma=u)
        res = mmse_estimator(closed_form_gammas(UNIF, sc.tau_c, u))
        arg = math.sqrt(3.0) * math.pi / 2.0
        x = (2.0 / math.pi) * math.cos(arg) - (4.0 / (math.sqrt(3.0) * math.pi**2)) * math.sin(arg)
        for g in (0.5, 1.0, 1.4):
            expected = 1.0 + x * (2.0 * math.cos(math.pi * g / 4.0) ** 2 - 1.0) / (
                2.0 * math.exp(u) - 1.0
            )
            assert average_estimate(res, g, sc, VACUUM) == pytest.approx(expected, abs=1e-12)


def test_mse_vanishes_for_perfect_estimator():
    sc = Scenario(tau_c=math.pi / 2.0)
    res = mmse_estimator(closed_form_gammas(GAUSS, sc.tau_c, 0.0))
    # estimator is g0 I; zero error when the true coupling equals g0
    assert mse_of_estimator(res, 1.0, sc, VACUUM) == pytest.approx(0.0, abs=1e-12)


def test_mse_matches_spectral_decomposition():
    sc = Scenario(tau_c=1.3, tau_f_gamma=0.2, delta=0.6, alpha=1.0)
    fld = field_for(sc)
    res = mmse_estimator(gamma_moments(GAUSS, sc, fld))
    g = 1.2
    from cavbayes.dynamics import reduced_state

    rho = reduced_state(g, sc, fld).as_array()
    w, v = eigendecompose(res.m_min)
    expected = sum(
        (w[k] - g) ** 2 * float(np.real(v[:, k].conj() @ rho @ v[:, k]))
        for k in range(2)
    )
    assert mse_of_estimator(res, g, sc, fld) == pytest.approx(expected, abs=1e-12)
