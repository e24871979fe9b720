"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line."""
import itertools
import math
import time

import numpy as np
import pytest

from lowscat import analytic, observables, potentials, tables
from lowscat.errors import DivergenceError
from lowscat.solver import integrate
from lowscat.tuner import TuneTarget, tune

DR = 1e-4


def test_criterion_01_potential_table_forward(report):
    t0 = time.perf_counter()
    rows = tables.table_potentials(dr=DR)
    elapsed = time.perf_counter() - t0
    failed = [r.label for r in rows if not r.passed]
    report(1, f"9 rows (a 0.5%, unitary |1/a|<1e-4/r0, r0 +/-0.02): {9 - len(failed)}/9 ok, "
              f"{elapsed:.2f} s (limit 5 s); failed={failed}")
    assert not failed
    assert elapsed < 5.0


def test_criterion_02_lennard_jones_table_forward(report):
    rows = tables.table_lennard_jones(dr=DR)
    summary = ", ".join(
        f"{r.label.split()[-1]}: a={r.comparisons[0].observed:.6g} r0={r.comparisons[1].observed:.4f}" for r in rows
    )
    failed = [r.label for r in rows if not r.passed]
    report(2, f"{summary}; failed={failed}")
    assert not failed


def test_criterion_03_bound_state_table(report):
    t0 = time.perf_counter()
    rows = tables.table_bound_states()
    elapsed = time.perf_counter() - t0
    vals = ", ".join(f"{r.label} {c.quantity}={c.observed:.4f}" for r in rows for c in r.comparisons)
    ok = all(r.passed for r in rows)
    report(3, f"{vals}; {elapsed * 1e3:.2f} ms (limit 100 ms)")
    assert ok
    assert elapsed < 0.1


def test_criterion_04_well_analytic_vs_numeric(report):
    worst_a = worst_r0 = 0.0
    for v0 in (0.3, 0.6, 0.9, 1.5, 2.0, 4.0):
        obs = observables.compute_observables(potentials.spherical_well(v0, 1.0), dr=DR)
        worst_a = max(worst_a, abs(obs.a - analytic.well_scattering_length(v0, 1.0)))
        worst_r0 = max(worst_r0, abs(obs.r0 - analytic.well_effective_range(v0, 1.0)))
    report(4, f"max |da|={worst_a:.2e}, max |dr0|={worst_r0:.2e} (limit 1e-5)")
    assert worst_a <= 1e-5
    assert worst_r0 <= 1e-5


def _richardson(method, v0=150.0):
    exact = analytic.well_scattering_length(v0, 1.0)
    spec = potentials.spherical_well(v0, 1.0)
    errs = [observables.compute_observables(spec, dr=dr, method=method).a - exact for dr in (4e-3, 2e-3, 1e-3)]
    return errs[0] / errs[1], errs[1] / errs[2]


def test_criterion_05_convergence_orders(report):
    central = _richardson("central")
    numerov = _richardson("numerov")
    report(5, f"well v0=150 R=1: central ratios {central[0]:.3f}, {central[1]:.3f} (3.5-4.5); "
              f"numerov ratios {numerov[0]:.3f}, {numerov[1]:.3f} (14-18)")
    assert all(3.5 <= x <= 4.5 for x in central)
    assert all(14.0 <= x <= 18.0 for x in numerov)


def test_criterion_06_poschl_teller_benchmarks(report):
    rel = []
    for v, mu in ((0.9071, 0.7991), (1.4388, 0.8631)):
        a_exact = analytic.mpt_scattering_length(potentials.v_to_lambda(v), mu)
        obs = observables.compute_observables(potentials.poschl_teller(v, mu), dr=DR)
        rel.append(abs(obs.a / a_exact - 1.0))
    # unitarity row: the closed form diverges exactly where the solver reports unitarity
    with pytest.raises(DivergenceError):
        analytic.mpt_scattering_length(potentials.v_to_lambda(1.0), 2.0)
    spec = potentials.poschl_teller(1.0, 2.0)
    obs = observables.compute_observables(spec, dr=DR)
    raw = integrate(spec, potentials.derive_range(spec), dr=DR)
    a = observables.scattering_length(raw)
    norm = observables.normalize(raw, a, observables.is_unitary(a, raw.R))
    r = norm.r[: raw.i_range + 1]
    u_err = float(np.max(np.abs(norm.u[: raw.i_range + 1] - analytic.mpt_unitarity_u(2.0, raw.R, r))))
    r0_err = abs(obs.r0 - analytic.mpt_unitarity_r0(2.0))
    report(6, f"a rel err {max(rel):.2e} (limit 5e-3), unitary={obs.unitary}, |r0-2/mu|={r0_err:.2e} (1e-3), "
              f"max|u-tanh|={u_err:.2e} (1e-6)")
    assert max(rel) <= 5e-3
    assert obs.unitary
    assert r0_err <= 1e-3
    assert u_err < 1e-6


def test_criterion_07_shape_independence(report):
    target = TuneTarget(5.4, 1.70, desired_nodes=1)
    k = 0.05
    kcots, gaps = [], []
    for family in ("well", "mpt", "gaussian"):
        res = tune(family, target)
        p = observables.phase_shift(res.spec, k=k, dr=DR)
        kcots.append(float(p.kcot))
        gaps.append(abs(p.kcot - observables.kcot_expansion(res.achieved.a, res.achieved.r0, k)))
    spread = max(abs(x - y) for x, y in itertools.combinations(kcots, 2))
    report(7, f"k cot d0 at k=0.05: {[round(x, 7) for x in kcots]}, spread {spread:.2e} (5e-4), "
              f"max |measured - ERE| {max(gaps):.2e} (1e-3)")
    assert spread <= 5e-4
    assert max(gaps) <= 1e-3


def test_criterion_08_phase_shift_oracle(report):
    worst = 0.0
    for v, mu in ((1.1096, 0.3918), (1.2337, 1.0), (1.7575, 0.5)):
        spec = potentials.spherical_well(v, mu)
        for k in (0.01, 0.05, 0.1):
            num = observables.phase_shift(spec, k=k, dr=DR).delta
            worst = max(worst, abs(num - analytic.well_phase_shift(v, 1.0 / mu, k)))
    report(8, f"max |delta_num - delta_exact| = {worst:.2e} rad (limit 1e-6)")
    assert worst <= 1e-6


def test_criterion_09_bound_state_threshold(report):
    v_c = math.pi**2 / 8
    below = observables.compute_observables(potentials.spherical_well(v_c - 1e-3, 1.0), dr=DR)
    above = observables.compute_observables(potentials.spherical_well(v_c + 1e-3, 1.0), dr=DR)
    report(9, f"v0=pi^2/8-1e-3: nodes={below.node_count}, a={below.a:.4g}; "
              f"v0=pi^2/8+1e-3: nodes={above.node_count}, a={above.a:.4g}")
    assert below.node_count == 0 and below.a < 0
    assert above.node_count == 1 and above.a > 0


def _closed_loop_targets():
    for family, system, _v, _mu, a, r0 in tables.POTENTIAL_ROWS:
        yield family, system, a, r0
    for system, _c12, _c6, a, _tol, r0 in tables.LJ_ROWS:
        yield "lennard-jones", system, a, r0


def test_criterion_10_tuner_closed_loop(report):
    t0 = time.perf_counter()
    outcomes = []
    for family, system, a, r0 in _closed_loop_targets():
        target = TuneTarget("unitary" if a is None else a, r0, desired_nodes=1 if system == "deuteron" else 0)
        res = tune(family, target)
        ok = res.converged and target.satisfied_by(res.achieved) and res.outer_iterations <= 60
        outcomes.append((f"{family}/{system}", ok, res.outer_iterations))
    elapsed = time.perf_counter() - t0
    bad = [name for name, ok, _ in outcomes if not ok]
    most = max(it for _, _, it in outcomes)
    report(10, f"{len(outcomes) - len(bad)}/12 converged, max outer iterations {most}, "
               f"{elapsed:.1f} s (limit 120 s); failed={bad}")
    assert not bad
    assert elapsed < 120.0
