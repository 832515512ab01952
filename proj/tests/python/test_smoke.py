import math

import pytest

import confmass


def test_radial_oracle_at_lambda_one():
    b = 3.0 - 2.0 * math.sqrt(2.0)
    o = confmass.radial_oracle(0.0, b)
    assert o["lambda"] == pytest.approx(1.0, rel=1e-12)
    assert o["mass"] < 8.0 * math.pi


def test_liouville_solve_matches_oracle():
    grid = confmass.build_grid(64, 16)
    k = confmass.PotentialField.constant(1.0)
    sol = confmass.solve_liouville(1.0, 0.0, k, grid)
    assert sol.converged
    o = confmass.radial_oracle(0.0, 3.0 - 2.0 * math.sqrt(2.0))
    assert sol.sup_norm == pytest.approx(o["sup_norm"], rel=1e-3)
    assert confmass.mass(sol) == pytest.approx(o["mass"], rel=1e-3)
    report = confmass.pohozaev_report(sol)
    assert abs(report["holder_gap"]) < 1e-8 * report["lhs"]


def test_certificate_dict():
    cert = confmass.liouville_certificate(0.5, confmass.PotentialField.constant(1.0))
    assert cert["rho0"] == pytest.approx(12.0 * math.pi)
    assert cert["theorem"] == "liouville"


def test_ellipse_map_round_trip():
    domain = confmass.build_domain('{"kind": "ellipse", "params": {"a": 1.5, "b": 1.0}}')
    phi = confmass.compute_map(domain)
    z = complex(0.3, -0.4)
    assert abs(phi.inverse(phi.forward(z)) - z) < 1e-10
    # the map sends the domain onto the disk, so this is one over the conformal radius
    assert 1.0 / 1.5 < abs(phi.phi_prime_at_origin) < 1.0


def test_invalid_input_raises():
    with pytest.raises(confmass.ConfmassError):
        confmass.build_grid(0, 16)
    with pytest.raises(confmass.ConfmassError):
        confmass.solve_liouville(1.0, -1.0, confmass.PotentialField.constant(1.0), confmass.build_grid(16, 16))


def test_builtin_config_and_run():
    cfg = confmass.builtin_config("E7")
    assert cfg["name"] == "E7"
    cfg["grid"] = {"n_r": 32, "n_theta": 16, "grading": 1.0}
    report = confmass.run_experiment(cfg)
    assert report["records"]
    assert report["all_pass"]
