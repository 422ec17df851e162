"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line with the measured numbers and then
asserts at the stated tolerance.
"""
import json
import math
import time

import numpy as np

from kinklab import cli
from kinklab.bvp import (
    FdGrid, TwoFieldState, auto_dps, continuation_sweep, discrete_first_integral, full_profile, level_crossing,
    phase_boundary, solve_one_field, solve_two_field,
)
from kinklab.kinkcore import compute_profile, interface_position, limit_position, localization_diagnostics
from kinklab.poromechanics import PoroParams, predict_interface

E2 = math.exp(2.0)
CM_LIMIT = (1 + E2 + E2**2 + E2**3 + E2**4) / (1 + E2 + E2**2 + E2**3 + 6 * E2**4)
V2_CURVATURE = 16.0 * (math.sqrt(3.0) - 1.0) * math.pi**3
HALVING = [0.2, 0.1, 0.05, 0.025]


def report(capsys, n, ok, text):
    with capsys.disabled():
        print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}: {text}")


def test_criterion_1_ratchet_cm_limit(capsys, ratchet_cm):
    x0 = limit_position(ratchet_cm, 1.0)
    x_small = interface_position(ratchet_cm, 0.01, 1.0)
    dist = [abs(interface_position(ratchet_cm, k, 1.0) - x0) for k in (0.1, 0.05, 0.025, 0.0125)]
    ok_limit = abs(x0 - CM_LIMIT) <= 1e-6
    ok_k = abs(x_small - x0) <= 0.01
    ok_mono = all(a > b for a, b in zip(dist, dist[1:]))
    ok = ok_limit and ok_k and ok_mono
    report(capsys, 1, ok, f"ratchet-cm limit {x0:.9f} (closed form {CM_LIMIT:.9f}); x_k(0.01)={x_small:.6f}; "
                          f"|x_k - x_0| over k=0.1..0.0125: {', '.join(f'{d:.2e}' for d in dist)}")
    assert ok_limit and ok_k and ok_mono


def test_criterion_2_rocked_ratchet_midpoint(capsys, rocked):
    ends = np.array([rocked.min_a, rocked.min_b])
    c_an = rocked.second_derivative(ends)
    c_fd = rocked.fd_second_derivative(ends)
    rel = max(abs(c - V2_CURVATURE) / V2_CURVATURE for c in np.concatenate([c_an, c_fd]))
    x = interface_position(rocked, 0.05, 1.0)
    ok = rel <= 1e-6 and abs(x - 0.5) <= 0.02
    report(capsys, 2, ok, f"curvatures analytic {c_an[0]:.10g}, {c_an[1]:.10g}, finite diff {c_fd[0]:.10g}, "
                          f"{c_fd[1]:.10g} vs {V2_CURVATURE:.10g} (max rel {rel:.1e}); x_k(0.05)={x:.6f}")
    assert ok


def _diagnostics(pot, ks):
    return [localization_diagnostics(pot, k, 1.0) for k in ks]


def test_criterion_3_weighted_residual(capsys, ratchet_cm, rocked):
    ok = True
    parts = []
    for pot in (ratchet_cm, rocked):
        wr = [d.weighted_residual for d in _diagnostics(pot, HALVING)]
        scaled = [abs(w) / k for w, k in zip(wr, HALVING)]
        mono = all(abs(a) > abs(b) for a, b in zip(wr, wr[1:]))
        band = max(scaled) / min(scaled) if min(scaled) > 0 else math.inf
        ok &= mono and band <= 3.0
        parts.append(f"{pot.name} wr={', '.join(f'{w:.3e}' for w in wr)} (wr/k band {band:.2f})")
    report(capsys, 3, ok, "; ".join(parts))
    assert ok


def test_criterion_4_width(capsys, quartic, ratchet_cm, rocked):
    ok = True
    parts = []
    for pot in (quartic, ratchet_cm, rocked):
        w = [d.width_u1_u2 for d in _diagnostics(pot, HALVING)]
        ok &= all(a > b for a, b in zip(w, w[1:])) and w[-1] < 0.05
        parts.append(f"{pot.name} {', '.join(f'{v:.4f}' for v in w)}")
    report(capsys, 4, ok, "widths over k=0.2..0.025: " + "; ".join(parts))
    assert ok


def _fd_profile(pot, k, n):
    grid = FdGrid(n)
    u, rep = solve_one_field(pot, k, grid, dps=auto_dps(pot, k, 1.0))
    return grid, full_profile(u, (pot.min_a, pot.min_b))


def test_criterion_5_oracle_equivalence(capsys, builtins):
    t0 = time.perf_counter()
    sup_fail, drift_fail, worst = [], [], 0.0
    for name, pot in builtins.items():
        for k in (0.5, 0.25, 0.1):
            prof = compute_profile(pot, k, 1.0, n_points=4001)
            drifts = {}
            for n in (1023, 2047, 4095):
                grid, u = _fd_profile(pot, k, n)
                drifts[n] = np.ptp(discrete_first_integral(pot, k, grid, u))
            sup = float(np.max(np.abs(u - prof.interpolate(grid.full_nodes))))
            worst = max(worst, sup)
            if sup > 1e-4:
                sup_fail.append(f"{name} k={k}: {sup:.2e}")
            # drift = C h^2 fitted on the two coarser grids, checked on the finest
            c = np.mean([drifts[n] * (n + 1) ** 2 for n in (1023, 2047)])
            if drifts[4095] > 10.0 * c / 4096**2:
                drift_fail.append(f"{name} k={k}: {drifts[4095]:.2e} vs model {c / 4096**2:.2e}")
    elapsed = time.perf_counter() - t0
    ok = not sup_fail and not drift_fail and elapsed < 60.0
    report(capsys, 5, ok, f"worst sup {worst:.2e}; over 1e-4: {sup_fail or 'none'}; first-integral drift over "
                          f"10x h^2 model: {drift_fail or 'none'}; {elapsed:.1f}s")
    assert not sup_fail
    assert not drift_fail
    assert elapsed < 60.0


def test_criterion_6_poromechanics_prediction(capsys):
    model = PoroParams(alpha=100.0, a_ratio=0.5, b_couple=1.0, k1=1.0, k2=1.0, k3=1.0)
    x0 = predict_interface(model)
    grid = FdGrid(4095)
    steps = continuation_sweep(model, grid, [0.1, 0.01, 0.001])
    x = grid.full_nodes
    crossings = []
    for st in steps:
        e = st.state.full_eps()
        crossings.append(level_crossing(x, e, 0.5 * (e[0] + e[-1])))
    ok_pred = abs(x0 - 0.6164) <= 0.001
    ok_kink = abs(crossings[-1] - x0) <= 0.01
    report(capsys, 6, ok_pred and ok_kink,
           f"predict {x0:.6f}; two-field eps crossings at k=0.1, 0.01, 0.001: "
           f"{', '.join(f'{c:.5f}' for c in crossings)} (|k=1e-3 - predict| = {abs(crossings[-1] - x0):.4f})")
    assert ok_pred
    assert ok_kink


def _run_kink(tmp_path, name, ks):
    out = tmp_path / name
    config = {"potential": {"name": name}, "k_values": ks, "grid_n": 2001, "output_path": str(out)}
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(config))
    assert cli.main(["kink", "--config", str(path)]) == 0
    rows = json.loads((out / "summary.json").read_text())
    profiles = [np.loadtxt(out / f"profile_k{k!r}.csv", delimiter=",", skiprows=1) for k in ks]
    return rows, profiles


def test_criterion_7_profile_families(capsys, tmp_path, builtins):
    ok_steep = True
    parts = []
    families = {"ratchet-cm": [1.0, 0.5, 0.25, 0.1], "rocked-ratchet": [3.0, 1.5, 1.0, 0.5, 0.45]}
    for name, ks in families.items():
        pot = builtins[name]
        rows, profiles = _run_kink(tmp_path, name, ks)
        a, b = pot.min_a, pot.min_b
        # interface band between the quarter levels; slope from the first integral
        levels = np.linspace(a + 0.25 * (b - a), a + 0.75 * (b - a), 501)
        slopes = [np.sqrt(2.0 * (r["E_k"] + pot(levels))) / r["k"] for r in rows]
        steeper = all(np.all(s2 > s1) for s1, s2 in zip(slopes, slopes[1:]))
        covered = all(p[0, 1] == a and p[-1, 1] == b and np.all(np.diff(p[:, 1]) > 0) for p in profiles)
        ok_steep &= steeper and covered
        parts.append(f"{name} steeper at every level of the interface band: {steeper}")
    xs = np.linspace(0.0, 1.0, 4001)
    rr = [np.interp(xs, p[:, 0], p[:, 1]) for p in profiles]
    gap = float(np.max(np.abs(rr[-2] - rr[-1])))
    ok = ok_steep and gap <= 0.02
    report(capsys, 7, ok, "; ".join(parts) + f"; rocked k=0.5 vs 0.45 sup {gap:.4f}")
    assert ok_steep
    assert gap <= 0.02


def test_criterion_8_symmetry(capsys, quartic):
    ks = [0.5, 0.25, 0.1, 0.05, 0.025, 0.0125]
    dev = max(abs(interface_position(quartic, k, ell) - 0.5 * ell) for k in ks for ell in (1.0, 2.5))
    params, (m_s, e_s, _, _) = phase_boundary(PoroParams(k1=0.1, k2=0.1, k3=0.1))
    grid = FdGrid(255)
    init = TwoFieldState(np.full(grid.n, e_s), np.full(grid.n, m_s), (m_s, e_s, m_s, e_s))
    _, rep = solve_two_field(params, grid, init)
    ok = dev <= 1e-6 and rep.iterations <= 1
    report(capsys, 8, ok, f"quartic max |x_k - l/2| = {dev:.1e}; constant two-field solve in {rep.iterations} Newton steps")
    assert ok
