import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import simpson
from kinklab.errors import BracketFailure
from kinklab.kinkcore import (
    QUAD_TOL, compute_profile, interface_position, limit_position, localization_diagnostics, profile_time,
    solve_energy_level, weighted_residual,
)
from kinklab.potential import DoubleWellPotential, scaled

CM_LIMIT = 0.187846


def _quartic_time_mp(e, dps=30):
    """Independent tanh-sinh oracle for the quartic profile time over [-1, 1]."""
    with mpmath.workdps(dps):
        e = mpmath.mpf(e)
        f = lambda u: 1 / mpmath.sqrt(2 * e + (1 - u * u) ** 2)
        # symmetric: twice the half-span, split where the peak sits
        w = mpmath.sqrt(2 * e) / 2
        return 2 * mpmath.quad(f, [0, 1 - 100 * w, 1 - w, 1])


def _bisect_energy(k, ell, rtol=1e-12):
    lo, hi = -60.0, 5.0
    while hi - lo > rtol:
        mid = 0.5 * (lo + hi)
        if k * _quartic_time_mp(mpmath.exp(mid)) > ell:
            lo = mid
        else:
            hi = mid
    return math.exp(0.5 * (lo + hi))


# --- profile_time --------------------------------------------------------------

def test_profile_time_flat_potential():
    flat = DoubleWellPotential(lambda u: 0.0 * u, 0.0, 1.0, lambda u: 0.0 * u, lambda u: 0.0 * u)
    assert profile_time(flat, 0.5, 0.0, 1.0) == pytest.approx(1.0, abs=1e-14)


def test_profile_time_against_simpson(quartic):
    expected = simpson(lambda u: 1.0 / np.sqrt(2.0 * (0.1 + quartic(u))), -1.0, 1.0, 1_000_000)
    assert profile_time(quartic, 0.1, -1.0, 1.0) == pytest.approx(expected, abs=1e-9)


def test_profile_time_increases_as_energy_halves(ratchet_cm):
    times = [profile_time(ratchet_cm, e, -1.0, 1.0) for e in 0.1 * 0.5 ** np.arange(8)]
    assert np.all(np.diff(times) > 0)


def test_profile_time_additive(ratchet_cm):
    whole = profile_time(ratchet_cm, 1e-6, -1.0, 1.0)
    parts = profile_time(ratchet_cm, 1e-6, -1.0, 0.3) + profile_time(ratchet_cm, 1e-6, 0.3, 1.0)
    assert whole == pytest.approx(parts, abs=2 * QUAD_TOL)


def test_profile_time_bad_arguments(quartic):
    with pytest.raises(ValueError):
        profile_time(quartic, 0.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        profile_time(quartic, 0.1, 0.5, 0.2)
    with pytest.raises(ValueError):
        profile_time(quartic, 0.1, -1.5, 0.2)


# --- energy level --------------------------------------------------------------

def test_energy_level_against_bisection_oracle(quartic):
    sol = solve_energy_level(quartic, 0.1, 1.0)
    assert sol.e_k == pytest.approx(_bisect_energy(0.1, 1.0), rel=1e-8)


def test_energy_level_defect(builtins):
    for pot in builtins.values():
        sol = solve_energy_level(pot, 0.2, 1.0)
        assert abs(0.2 * profile_time(pot, sol.e_k, pot.min_a, pot.min_b) - 1.0) <= QUAD_TOL
        assert sol.e_k > 0


@pytest.mark.parametrize("name", ["quartic", "ratchet-cm", "rocked-ratchet"])
def test_energy_level_increasing_in_k(builtins, name):
    ks = [0.05, 0.1, 0.2, 0.4, 0.8]
    es = [solve_energy_level(builtins[name], k, 1.0).e_k for k in ks]
    assert np.all(np.diff(es) > 0)


def test_energy_level_tends_to_zero(quartic):
    es = [solve_energy_level(quartic, k, 1.0).e_k for k in (0.2, 0.1, 0.05)]
    assert es[0] > es[1] > es[2]
    assert es[2] < 1e-14


def test_large_k_gives_linear_regime(quartic):
    sol = solve_energy_level(quartic, 50.0, 1.0)
    # for E >> max V, k T = ell reduces to E ~ (k (b - a) / ell)^2 / 2
    assert sol.e_k == pytest.approx(0.5 * 100.0**2, rel=1e-3)
    prof = compute_profile(quartic, 50.0, 1.0, n_points=201)
    assert np.max(np.abs(prof.us - (-1.0 + 2.0 * prof.xs))) < 1e-3


def test_bracket_failure(quartic):
    with pytest.raises(BracketFailure):
        solve_energy_level(quartic, 0.01, 1.0, max_expansions=2)


def test_energy_level_rejects_bad_input(quartic):
    with pytest.raises(ValueError):
        solve_energy_level(quartic, 0.0, 1.0)


# --- profiles ------------------------------------------------------------------

@pytest.mark.parametrize("name", ["quartic", "ratchet-cm", "rocked-ratchet"])
@pytest.mark.parametrize("k", [0.5, 0.1])
def test_profile_invariants(builtins, name, k):
    pot = builtins[name]
    prof = compute_profile(pot, k, 1.0, n_points=801)
    assert np.all(np.diff(prof.us) > 0) and np.all(np.diff(prof.xs) > 0)
    assert prof.us[0] == pot.min_a and prof.us[-1] == pot.min_b
    assert prof.xs[0] == 0.0
    assert prof.xs[-1] == pytest.approx(1.0, abs=QUAD_TOL)
    assert prof.interface_x == pytest.approx(interface_position(pot, k, 1.0), abs=QUAD_TOL)


def _first_integral_model(prof):
    """Leading error of the uneven three-point slope in k^2 u'^2 / 2 - V."""
    hm = np.diff(prof.xs)[:-1]
    hp = np.diff(prof.xs)[1:]
    u = prof.us[1:-1]
    v = prof.pot(u)
    return np.abs(prof.pot.second_derivative(u)) * 2.0 * (prof.e_k + v) / prof.k**2 * hm * hp / 6.0


@pytest.mark.parametrize("name,k", [("quartic", 0.25), ("ratchet-cm", 0.25), ("rocked-ratchet", 0.5)])
def test_first_integral_within_error_model(builtins, name, k):
    prof = compute_profile(builtins[name], k, 1.0, n_points=1001)
    err = np.abs(prof.first_integral() - prof.e_k)
    floor = 1e-14 * (1.0 + np.max(prof.pot(prof.us)))
    assert np.all(err <= 2.0 * _first_integral_model(prof) + floor)


@pytest.mark.parametrize("name,k", [("quartic", 0.25), ("ratchet-cm", 0.25)])
def test_first_integral_second_order(builtins, name, k):
    errs = []
    for n in (251, 501, 1001):
        prof = compute_profile(builtins[name], k, 1.0, n_points=n)
        errs.append(np.max(np.abs(prof.first_integral() - prof.e_k)))
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    assert np.all(ratios > 3.5) and np.all(ratios < 4.5)


def test_interpolation_hits_nodes(ratchet_cm):
    prof = compute_profile(ratchet_cm, 0.25, 1.0, n_points=301)
    np.testing.assert_allclose(prof.interpolate(prof.xs), prof.us, atol=1e-15)
    assert prof.interpolate(-1.0) == ratchet_cm.min_a


def test_profile_rejects_tiny_grid(quartic):
    with pytest.raises(ValueError):
        compute_profile(quartic, 0.1, 1.0, n_points=2)


def test_rocked_family_last_pair_nearly_coincides(rocked):
    # rocked-ratchet k family; the last two curves are the closest pair
    ks = [3.0, 1.5, 1.0, 0.5, 0.45]
    x = np.linspace(0.0, 1.0, 4001)
    us = [compute_profile(rocked, k, 1.0).interpolate(x) for k in ks]
    gaps = [np.max(np.abs(a - b)) for a, b in zip(us, us[1:])]
    assert gaps[-1] < min(gaps[:-1]) / 3.0


# --- interface position ---------------------------------------------------------

def test_quartic_interface_midpoint(quartic):
    assert interface_position(quartic, 0.1, 1.0) == pytest.approx(0.5, abs=1e-6)


@settings(max_examples=25, deadline=None)
@given(k=st.floats(0.03, 5.0), ell=st.floats(0.5, 3.0))
def test_quartic_interface_midpoint_any_k(quartic, k, ell):
    assert interface_position(quartic, k, ell) == pytest.approx(0.5 * ell, abs=QUAD_TOL * ell * 10)


def test_ratchet_cm_interface_near_limit(ratchet_cm):
    assert abs(interface_position(ratchet_cm, 0.01, 1.0) - CM_LIMIT) <= 0.01


def test_rocked_interface_middle(rocked):
    assert abs(interface_position(rocked, 0.1, 1.0) - 0.5) <= 0.02


# --- limit position ----------------------------------------------------------------

def test_ratchet_cm_limit_closed_form(ratchet_cm):
    e2 = math.exp(2.0)
    closed = (1 + e2 + e2**2 + e2**3 + e2**4) / (1 + e2 + e2**2 + e2**3 + 6 * e2**4)
    assert limit_position(ratchet_cm, 1.0) == pytest.approx(closed, abs=1e-12)
    assert closed == pytest.approx(CM_LIMIT, abs=1e-6)


def test_equal_curvatures_give_midpoint(quartic, rocked):
    assert limit_position(quartic, 2.0) == 1.0
    assert limit_position(rocked, 1.0) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("c", [0.01, 1.0, 7.0])
def test_limit_position_scale_invariant(ratchet_cm, c):
    assert limit_position(scaled(ratchet_cm, c), 1.0) == pytest.approx(limit_position(ratchet_cm, 1.0), rel=1e-13)


# --- diagnostics -------------------------------------------------------------------

@pytest.mark.parametrize("name", ["ratchet-cm", "rocked-ratchet"])
def test_localization_sequences(builtins, name):
    pot = builtins[name]
    ks = 0.2 * 0.5 ** np.arange(5)
    diags = [localization_diagnostics(pot, k, 1.0) for k in ks]
    widths = [d.width_u1_u2 for d in diags]
    resid = [abs(d.weighted_residual) for d in diags]
    assert np.all(np.diff(widths) < 0)
    assert np.all(np.diff(resid) < 0)
    ratio = np.array(resid) / ks
    assert ratio.max() / ratio.min() < 3.0


def test_quartic_weighted_residual_vanishes(quartic):
    for k in (0.4, 0.1, 0.03):
        d = localization_diagnostics(quartic, k, 1.0)
        assert d.weighted_residual == pytest.approx(2.0 * (2.0 * d.interface_x - 1.0), abs=1e-12)
        assert abs(d.weighted_residual) < 1e-7


def test_diagnostic_split_consistent(ratchet_cm):
    d = localization_diagnostics(ratchet_cm, 0.1, 1.0)
    assert d.k * (d.s_a + d.r_a) == pytest.approx(d.interface_x, abs=1e-12)
    assert d.k * (d.s_a + d.r_a + d.s_b + d.r_b) == pytest.approx(1.0, abs=QUAD_TOL)
    assert d.weighted_residual == pytest.approx(weighted_residual(ratchet_cm, d.interface_x, 1.0), abs=1e-14)
    assert 0.0 < d.predicted_limit < 1.0


def test_vmax_interface_converges_to_midlevel_interface(ratchet_cm):
    gaps = [abs(localization_diagnostics(ratchet_cm, k, 1.0).interface_x_vmax
                - interface_position(ratchet_cm, k, 1.0)) for k in (0.2, 0.1, 0.05, 0.025)]
    assert np.all(np.diff(gaps) < 0)


def test_diagnostics_reject_bad_levels(quartic):
    with pytest.raises(ValueError):
        localization_diagnostics(quartic, 0.1, 1.0, u1=0.5, u2=0.2)
