import math

import numpy as np
import pytest

import critlab

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def test_golden_convergents_are_fibonacci():
    p, q = critlab.convergents(critlab.parse_cf("golden", 12), 10)
    assert q == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]
    assert p[:4] == [0, 1, 1, 2]


def test_parse_notations():
    assert critlab.parse_cf("1/2") == [2]
    assert critlab.parse_cf("10,(1)", 5) == [10, 1, 1, 1, 1]
    assert critlab.real_from_cf([2]) == 0.5
    with pytest.raises(critlab.DomainError):
        critlab.parse_cf("1,x")


def test_tongue_boundary_closed_form():
    b = critlab.tongue_boundary(0, 1, "right")
    assert abs(b["theta"] - 1.0 / (2.0 * math.pi)) < 1e-10
    assert abs(b["multiplier"] - 1.0) < 1e-8


def test_golden_solve_and_orbit():
    sol = critlab.solve_parameter("golden", tol=1e-12)
    assert sol["rho_bound"] <= 1e-12
    F = critlab.Lift.arnold(sol["theta"])
    assert critlab.rotation_number_cf(F, 10) == [1] * 10
    value, bound = critlab.rotation_number(F, 100000)
    assert abs(value - GOLDEN) <= bound + 1e-9
    rows = critlab.renorm_orbit(F, 1, 8)
    assert [r["height"] for r in rows] == [1] * 8


def test_rotation_zero_inside_tongue():
    assert critlab.rotation_number_cf(critlab.Lift.arnold(0.1), 3) == [None]


def test_lift_is_degree_one_and_critical():
    F = critlab.Lift.two_harmonic(0.3, 0.2)
    for x in (-0.7, 0.0, 0.25, 1.3):
        assert abs(F(x + 1.0) - F(x) - 1.0) < 1e-12
    assert abs(F.derivative(0.0)) < 1e-12
    z = complex(0.2, 0.1)
    assert abs(F(z).real - F(z.conjugate()).real) < 1e-12


def test_gamma_curve_residual():
    x, residual = critlab.gamma_curve(0.3, 0, 1, [0.5, 1.0, 3.0])
    assert max(residual) < 1e-9
    assert abs(x[-1] - 0.25) < 5e-3


def test_julia_grid_is_deterministic():
    F = critlab.Lift.arnold(0.6066610634701419)
    a = critlab.julia_grid(F, 0.5 + 0j, 1.2, 1.2, 48, 60)
    b = critlab.julia_grid(F, 0.5 + 0j, 1.2, 1.2, 48, 60)
    assert a.shape == (48, 48) and a.dtype == np.uint8
    assert np.array_equal(a, b)
    assert set(np.unique(a)) <= {0, 1}


def test_run_experiment(tmp_path):
    report = critlab.run_experiment(
        {"command": "solve", "target": "0/1", "side": "right", "tol": 1e-12, "out": str(tmp_path)}
    )
    assert report["passed"]
    assert report["config"]["target"] == "0/1"
    assert (tmp_path / "solve_report.json").exists()
    with pytest.raises(critlab.ParameterError):
        critlab.run_experiment({"command": "rho", "thetta": 0.3})
