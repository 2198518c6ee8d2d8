import json

import numpy as np
import pytest

from wqed import (DriveSpec, canonical_three_atom, mode_reduction_check,
                  g2_cross_validation, long_time_steady_oracle,
                  steady_state_cross_check, validate)
from wqed.scenarios import resonant_detuning

GAMMA = 0.01


class TestLongTimeOracle:
    def test_undriven_relaxes_to_ground(self, weak_cavity):
        rho = long_time_steady_oracle(weak_cavity, DriveSpec(), T=2000.0)
        expected = np.zeros((8, 8))
        expected[0, 0] = 1.0
        assert np.abs(rho.matrix - expected).max() < 1e-10

    def test_step_halving_converged(self, weak_cavity):
        drive = DriveSpec(epsilon=0.1 * GAMMA, delta=resonant_detuning(weak_cavity))
        rho_a = long_time_steady_oracle(weak_cavity, drive, T=2000.0, h=1e-3)
        rho_b = long_time_steady_oracle(weak_cavity, drive, T=2000.0, h=5e-4)
        assert np.abs(rho_a.matrix - rho_b.matrix).max() < 1e-11

    def test_step_bound_enforced(self, weak_cavity):
        with pytest.raises(ValueError):
            long_time_steady_oracle(weak_cavity, DriveSpec(), T=10.0, h=0.1)


class TestSteadyStateCrossCheck:
    @pytest.mark.parametrize("gamma,eps_over_gamma", [
        (0.01, 0.1), (0.01, 1e-3), (0.1, 1e-3), (1.0, 1e-3), (0.02, 1e-3)])
    def test_figure_operating_points(self, gamma, eps_over_gamma):
        system = validate(canonical_three_atom(gamma, 1.0))
        drive = DriveSpec(epsilon=eps_over_gamma * gamma,
                          delta=resonant_detuning(system))
        report = steady_state_cross_check(system, drive)
        assert report.passed, report
        assert report.abs_dev < 1e-9

    def test_offset_geometry(self):
        system = validate(canonical_three_atom(0.02, 1.0, d=0.1))
        drive = DriveSpec(epsilon=1e-3 * 0.02, delta=resonant_detuning(system))
        report = steady_state_cross_check(system, drive)
        assert report.passed


class TestModeReduction:
    @pytest.mark.parametrize("gamma", [0.01, 1.0])
    def test_symmetric_cavity_reduces(self, gamma):
        report = mode_reduction_check(gamma, 1.0)
        assert report.passed
        assert report.main_value < 1e-13

    def test_offset_cavity_deviates_structurally(self):
        report = mode_reduction_check(0.01, 1.0, d=0.1)
        assert not report.passed
        assert report.main_value > 0.01
        assert "off-symmetric" in report.note

    def test_json_roundtrip(self):
        report = mode_reduction_check(0.5, 1.0)
        data = json.loads(report.to_json())
        assert data["passed"] is True
        assert data["quantity"] == "mode_basis_max_deviation"


class TestG2CrossValidation:
    def test_weak_drive_agreement(self, weak_cavity):
        delta = resonant_detuning(weak_cavity)
        grid = [delta, 0.4 * delta, 1.7 * delta]
        reports = g2_cross_validation(weak_cavity, grid, eps=1e-3 * GAMMA)
        assert all(r.passed for r in reports)
        assert max(r.rel_dev for r in reports) < 0.02

    def test_strong_drive_documents_boundary(self, weak_cavity):
        delta = resonant_detuning(weak_cavity)
        with pytest.warns(UserWarning, match="weak-drive"):
            reports = g2_cross_validation(weak_cavity, [delta], eps=0.5 * GAMMA)
        assert not reports[0].passed
        assert reports[0].rel_dev > 0.02
