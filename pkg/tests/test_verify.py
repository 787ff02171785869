"""Independent numerical checks: quadrature norms, ODE residuals, oracles."""

import json
import math

import numpy as np
import pytest

from rscp.density import GridSpec, auto_extent, build_grid
from rscp.states import (PotentialParams, StateLabels, map_quantum_numbers,
                         radial_u)
from rscp.verify import (CheckResult, ConvergenceError, _integrate,
                         angular_expectation_abs_x, hydrogen_oracle,
                         ode_residuals, quad_angular_norm, quad_radial_norm,
                         radial_domain, radial_expectation_r,
                         sweep_statistics, verify_state)

# ------------------------------------------------------------------- norms


def test_radial_norm_hydrogen():
    assert abs(quad_radial_norm(StateLabels(2, 1, 0),
                                PotentialParams()) - 1.0) < 1e-12
    assert abs(quad_radial_norm(StateLabels(6, 1, 0),
                                PotentialParams()) - 1.0) < 1e-12


def test_radial_norm_ring_states():
    for labels, params in [
        (StateLabels(2, 1, 0), PotentialParams(1, 0.5, 0.5)),
        (StateLabels(6, 5, 0), PotentialParams(1, 0.5, 10)),
        (StateLabels(5, 3, 2), PotentialParams(2, 0.5, 5)),
    ]:
        assert abs(quad_radial_norm(labels, params) - 1.0) < 1e-10


def test_radial_quadrature_linearity():
    # doubling the integrand by hand doubles the reported integral
    labels, params = StateLabels(3, 1, 0), PotentialParams()
    q = map_quantum_numbers(labels, params)
    R = radial_domain(q, params)
    val = _integrate(lambda r: 2.0 * radial_u(q, params, r) ** 2,
                     [(0.0, 0.5 * R), (0.5 * R, R)])
    assert abs(val - 2.0) < 1e-10


def test_radial_domain_captures_tail():
    labels, params = StateLabels(6, 5, 0), PotentialParams(1, 0.5, 10)
    q = map_quantum_numbers(labels, params)
    R = radial_domain(q, params)
    # the tail bound guarantees what is left outside [0, R] is < 1e-13
    assert radial_u(q, params, R) ** 2 * q.n_prime / params.Z < 1e-13


def test_angular_norm_hydrogen_and_ring():
    assert abs(quad_angular_norm(StateLabels(2, 1, 0),
                                 PotentialParams()) - 1.0) < 1e-12
    # k=2, gamma1=3.7015621, m'=0.7071068 case
    assert abs(quad_angular_norm(StateLabels(6, 5, 0),
                                 PotentialParams(1, 0.5, 10)) - 1.0) < 1e-8
    assert abs(quad_angular_norm(StateLabels(5, 4, 1),
                                 PotentialParams(1, 0.5, 5)) - 1.0) < 1e-8


def test_integrate_convergence_error():
    with pytest.raises(ConvergenceError):
        _integrate(lambda x: np.sin(1.0 / (x + 1e-12)) * 1e6, [(0.0, 1.0)])


# --------------------------------------------------------------- residuals


def test_residuals_hydrogen_tiny():
    rres, ares = ode_residuals(StateLabels(2, 1, 0), PotentialParams())
    assert rres < 1e-10
    assert ares < 1e-10


def test_residuals_ring_states():
    for labels, params in [
        (StateLabels(2, 1, 0), PotentialParams(1, 0.5, 0.5)),
        (StateLabels(6, 5, 0), PotentialParams(1, 0.5, 10)),
        (StateLabels(4, 3, 2), PotentialParams(1, 0.5, 5)),
    ]:
        rres, ares = ode_residuals(labels, params, n_samples=100)
        assert rres < 1e-6, (labels, params)
        assert ares < 1e-6, (labels, params)


def test_residual_detects_wrong_energy():
    # a 1% energy error must push the radial residual far above threshold
    rres, _ = ode_residuals(StateLabels(2, 1, 0),
                            PotentialParams(1, 0.5, 0.5), energy_scale=1.01)
    assert rres > 1e-3


def test_residuals_deterministic():
    a = ode_residuals(StateLabels(5, 3, 0), PotentialParams(1, 0.5, 5), seed=4)
    b = ode_residuals(StateLabels(5, 3, 0), PotentialParams(1, 0.5, 5), seed=4)
    assert a == b


# ----------------------------------------------------------------- oracle


def test_hydrogen_oracle_axis_value():
    rho = hydrogen_oracle(2, 1, 0, (0.0, 0.0, 2.0))
    assert math.isclose(rho, math.exp(-2.0) / (8.0 * math.pi), rel_tol=1e-12)


def test_hydrogen_oracle_normalized():
    # 2 pi * int int |psi|^2 r^2 sin(theta) dr dtheta == 1
    from scipy.special import roots_legendre
    xr, wr = roots_legendre(240)
    xt, wt = roots_legendre(96)
    R = 60.0
    r = 0.5 * R * (xr + 1.0)
    theta = 0.5 * math.pi * (xt + 1.0)
    total = 0.0
    for n, l, m in [(1, 0, 0), (3, 2, 1)]:
        total = 0.0
        for ri, wri in zip(r, wr):
            rho = np.array([hydrogen_oracle(n, l, m,
                                            (ri * math.sin(t), 0.0,
                                             ri * math.cos(t)))
                            for t in theta])
            ang = float(np.sum(wt * rho * np.sin(theta)))
            total += wri * ri * ri * ang
        total *= 2.0 * math.pi * (0.5 * R) * (0.5 * math.pi)
        assert abs(total - 1.0) < 1e-8, (n, l, m)


def test_hydrogen_oracle_origin():
    assert hydrogen_oracle(2, 1, 0, (0.0, 0.0, 0.0)) == 0.0
    s = hydrogen_oracle(1, 0, 0, (0.0, 0.0, 0.0))
    assert math.isclose(s, 1.0 / math.pi, rel_tol=1e-12)


def test_hydrogen_oracle_phi_independent_for_m():
    a = hydrogen_oracle(4, 3, 2, (1.0, 1.5, 0.7))
    b = hydrogen_oracle(4, 3, 2, (math.hypot(1.0, 1.5), 0.0, 0.7))
    assert math.isclose(a, b, rel_tol=1e-12)


# ------------------------------------------------------------ expectations


def test_expectation_r_hydrogen_formula():
    # <r> = (3n^2 - l(l+1)) / 2 for hydrogen
    for n, l in [(2, 1), (4, 3), (6, 2)]:
        got = radial_expectation_r(StateLabels(n, l, 0), PotentialParams())
        want = 0.5 * (3 * n * n - l * (l + 1))
        assert math.isclose(got, want, rel_tol=1e-10)


def test_expectation_abs_cos_bounds():
    v = angular_expectation_abs_x(StateLabels(5, 1, 0),
                                  PotentialParams(1, 0.5, 5))
    assert 0.0 < v < 1.0


# ------------------------------------------------------------ report bundle


def test_check_result_pass_rule():
    assert CheckResult("x", 1.0 + 1e-9, 1.0, 1e-8).passed
    assert not CheckResult("x", 1.0 + 1e-7, 1.0, 1e-8).passed
    # residual-style checks: reference 0
    assert CheckResult("res", 1e-7, 0.0, 1e-6).passed


def test_verify_state_report():
    labels, params = StateLabels(2, 1, 0), PotentialParams(1, 0.5, 0.5)
    h = auto_extent(labels, params)
    grid = build_grid(labels, params, GridSpec(61, h))
    report = verify_state(labels, params, grid=grid)
    assert report.all_passed
    names = [c.name for c in report.checks]
    assert "radial_norm" in names and "grid_mass" in names
    payload = report.as_dict()
    json.dumps(payload)              # JSON-serializable end to end
    assert payload["all_passed"] is True
    assert payload["quasi"]["l_prime"] == pytest.approx(2.0731322, abs=5e-8)


def test_verify_state_without_grid():
    report = verify_state(StateLabels(3, 2, 1), PotentialParams(1, 0.5, 5))
    assert report.grid_mass_value is None
    assert all(c.name != "grid_mass" for c in report.checks)
    assert report.all_passed


def test_sweep_statistics_rows():
    entries = [
        (StateLabels(4, 1, 0), PotentialParams(1, 0.0, 0.5)),
        (StateLabels(4, 1, 0), PotentialParams(1, -0.5, 0.5)),   # inadmissible
        (StateLabels(4, 1, 0), PotentialParams(1, 5.0, 0.5)),
    ]
    rows = sweep_statistics(entries)
    assert len(rows) == 3
    assert rows[0]["admissible"] and rows[2]["admissible"]
    assert not rows[1]["admissible"]
    assert rows[1]["reason"]
    assert "r_mean" not in rows[1]
    assert rows[2]["r_mean"] > rows[0]["r_mean"]


def test_sweep_statistics_pole_rows(ring_650_grid):
    entries = [(StateLabels(6, 5, 0), PotentialParams(1, 0.5, 0.5))]
    rows = sweep_statistics(entries, levels=[10, 50, 90],
                            grids=[ring_650_grid])
    pc = rows[0]["pole_concentration"]
    assert list(pc) == [10.0, 50.0, 90.0]
    assert pc[10.0] < pc[50.0] < pc[90.0]


def test_abs_cos_grows_with_c():
    vals = [angular_expectation_abs_x(StateLabels(5, 1, 0),
                                      PotentialParams(1, 0.5, c))
            for c in (0.5, 5, 10, 25, 40, 80)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
