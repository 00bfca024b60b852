import math

import numpy as np
import pytest

import antieigen

T = np.diag([2 - 3j, 3 + 2j])


def test_mu_theta_example():
    r = antieigen.mu_theta(T, 0.0)
    assert r["value"] == pytest.approx(2 / math.sqrt(13), abs=1e-6)
    assert r["converged"]
    assert abs(np.linalg.norm(r["witness"]) - 1) < 1e-12

    r = antieigen.mu_theta(T, math.pi / 4)
    assert r["value"] == pytest.approx(-1 / math.sqrt(26), abs=1e-6)


def test_total_antieigenvalue_example():
    r = antieigen.total_antieigenvalue(T)
    assert r["value"] == pytest.approx(1 / math.sqrt(2), abs=1e-6)


def test_pointwise_functionals():
    assert antieigen.mu_theta_at(T, 0.0, [1, 0]) == pytest.approx(2 / math.sqrt(13), abs=1e-15)
    half = np.array([1, 1j]) / math.sqrt(2)
    assert antieigen.total_ratio_at(T, half) == pytest.approx(1 / math.sqrt(2), abs=1e-15)


def test_centres_of_mass():
    eps0, dist = antieigen.real_centre_of_mass(np.eye(2), T)
    assert eps0 == pytest.approx(2 / 13, abs=1e-7)
    assert dist == pytest.approx(3 / math.sqrt(13), abs=1e-12)

    lam, dist = antieigen.total_centre_of_mass(np.eye(2), T)
    assert lam.real == pytest.approx(5 / 26, abs=1e-6)
    assert lam.imag == pytest.approx(1 / 26, abs=1e-6)
    assert dist == pytest.approx(1 / math.sqrt(2), abs=1e-12)


def test_verify_identity_matrix():
    ok, reports = antieigen.verify(np.eye(2), restarts=8)
    assert ok
    assert {r["identity"] for r in reports} >= {"minmax", "sup-theta", "total-routes"}
    assert all(r["pass"] for r in reports if r["enforced"])


def test_matrix_document_round_trip():
    text = antieigen.dump_matrix(T, "example")
    back, label = antieigen.parse_matrix(text)
    assert label == "example"
    assert np.array_equal(back, T)


def test_errors_map_to_python_exceptions():
    with pytest.raises(antieigen.InvalidInput):
        antieigen.mu_theta(np.zeros((2, 2)), 0.0)
    with pytest.raises(ValueError):
        antieigen.mu_theta(np.ones((2, 3)), 0.0)
    with pytest.raises(ValueError):
        antieigen.parse_matrix("not json")
    with pytest.raises(antieigen.DegenerateVector):
        antieigen.mu_theta_at(np.diag([1.0, 0.0]), 0.0, [0, 1])
