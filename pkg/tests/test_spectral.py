import numpy as np
import pytest

from wqed import (EP_GAMMA_TWO, NearDefectiveError, biorthogonal_decompose,
                  canonical_three_atom, closed_form_single, closed_form_two,
                  effective_hamiltonian, enumerate_basis, match_to_reference,
                  restrict, spectrum_report, spectrum_rows_to_csv, validate)

SQRT7 = np.sqrt(7.0)


class TestClosedFormSingle:
    def test_unit_rates(self):
        lp, lm, l3 = closed_form_single(1.0, 1.0)
        assert lp == pytest.approx(0.5 * (SQRT7 - 1j), abs=1e-15)
        assert lm == pytest.approx(0.5 * (-SQRT7 - 1j), abs=1e-15)
        assert l3 == -2j

    def test_decoupled_medium_limit(self):
        lp, lm, _ = closed_form_single(1e-12, 1.0)
        assert abs(lp) < 2e-6 and abs(lm) < 2e-6

    def test_weak_medium_polariton_position(self):
        # Re(lambda_-) ~ -sqrt(2 Gamma gamma) for gamma << Gamma
        _, lm, _ = closed_form_single(0.01, 1.0)
        assert lm.real == pytest.approx(-np.sqrt(0.02), abs=2e-4)
        assert lm.real == pytest.approx(-0.1414, abs=1e-4)

    def test_past_exceptional_point_is_pure_imaginary(self):
        lp, lm, _ = closed_form_single(9.0, 1.0)
        assert lp.real == 0.0 and lm.real == 0.0
        assert lp.imag > lm.imag  # principal branch keeps "+" less damped


class TestClosedFormTwo:
    def test_unit_rates(self):
        bp, bm, b3 = closed_form_two(1.0, 1.0)
        assert bp == pytest.approx(0.5 * SQRT7 - 1.5j, abs=1e-15)
        assert bm == pytest.approx(-0.5 * SQRT7 - 1.5j, abs=1e-15)
        assert b3 == -3j

    def test_two_excitation_exceptional_point(self):
        gamma = 2.0 * (3.0 - 2.0 * np.sqrt(2.0))
        bp, bm, _ = closed_form_two(gamma, 1.0)
        # the discriminant vanishes only to machine precision, and the square
        # root amplifies that residue to ~1e-8
        assert bp == pytest.approx(bm, abs=1e-7)
        assert bp == pytest.approx(-1j * (4 - 2 * np.sqrt(2.0)), abs=1e-7)

    def test_decoupled_limit(self):
        bp, bm, b3 = closed_form_two(1e-12, 1.0)
        assert bp == pytest.approx(-2j, abs=2e-6)
        assert abs(bm) < 2e-6
        assert b3 == pytest.approx(-2j, abs=2e-12)

    def test_pure_imaginary_below_threshold(self):
        for gamma in np.linspace(1e-3, EP_GAMMA_TWO - 1e-6, 20):
            bp, bm, _ = closed_form_two(gamma, 1.0)
            assert bp.real == 0.0 and bm.real == 0.0
            assert abs(bp.imag) > abs(bm.imag)  # "+" has the larger linewidth


class TestBiorthogonalDecompose:
    def test_hermitian_input(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        h = a + a.conj().T
        spec = biorthogonal_decompose(h)
        assert np.abs(spec.eigenvalues.imag).max() < 1e-13
        np.testing.assert_allclose(spec.left, spec.right.conj().T, atol=1e-10)

    def test_canonical_single_block_eigenvalues(self, unit_cavity):
        basis = enumerate_basis(3)
        H1 = restrict(effective_hamiltonian(unit_cavity, basis), 1)
        spec = biorthogonal_decompose(H1)
        ref = np.array(closed_form_single(1.0, 1.0))
        _, dev = match_to_reference(spec.eigenvalues, ref)
        assert dev < 1e-13

    def test_invariants(self, weak_cavity):
        basis = enumerate_basis(3)
        for k in (1, 2):
            M = restrict(effective_hamiltonian(weak_cavity, basis), k)
            spec = biorthogonal_decompose(M)
            n = M.shape[0]
            assert np.abs(spec.left @ spec.right - np.eye(n)).max() < 1e-10
            assert np.abs(M @ spec.right - spec.right * spec.eigenvalues).max() \
                < 1e-10 * np.abs(M).max()
            assert np.abs(spec.reconstruct() - M).max() < 1e-10 * np.abs(M).max()

    def test_sorting_order(self):
        m = np.diag([1.0 - 2.0j, 2.0 - 1.0j, -1.0 - 1.0j])
        spec = biorthogonal_decompose(m)
        np.testing.assert_allclose(spec.eigenvalues, [-1 - 1j, 2 - 1j, 1 - 2j])

    def test_exceptional_point_detected(self):
        basis = enumerate_basis(3)
        system = validate(canonical_three_atom(8.0, 1.0))
        H1 = restrict(effective_hamiltonian(system, basis), 1)
        with pytest.raises(NearDefectiveError):
            biorthogonal_decompose(H1)
        spec = biorthogonal_decompose(H1, allow_unnormalized=True)
        assert not spec.normalized
        assert spec.eigenvalues.shape == (3,)


class TestSpectrumReport:
    def test_sweep_against_closed_forms(self, unit_cavity):
        grid = np.linspace(1e-3, 8.0, 200)
        rows = spectrum_report(unit_cavity, grid)
        assert len(rows) == 200
        clean = [r for r in rows if abs(r.gamma - 8.0) > 1e-3]
        worst = max(r.max_dev for r in clean)
        assert worst < 1e-10

    def test_polariton_linewidths_are_half_gamma(self, unit_cavity):
        grid = np.linspace(0.05, 7.9, 40)
        rows = spectrum_report(unit_cavity, grid)
        for r in rows:
            assert r.lam[0].imag == pytest.approx(-r.gamma / 2, rel=1e-12)
            assert r.lam[1].imag == pytest.approx(-r.gamma / 2, rel=1e-12)

    def test_discriminant_change_is_flagged(self, unit_cavity):
        gamma_star = EP_GAMMA_TWO
        rows = spectrum_report(unit_cavity, [0.05, gamma_star, 1.0])
        assert rows[1].note != ""
        assert rows[0].note == "" and rows[2].note == ""

    def test_decoupled_eigenvalues_exact(self, unit_cavity):
        rows = spectrum_report(unit_cavity, [0.37, 2.2])
        for r in rows:
            assert abs(r.lam[2] - (-2j)) < 1e-13
            assert abs(r.beta[2] - (-1j * (2 + r.gamma))) < 1e-13

    def test_csv_columns(self, unit_cavity):
        rows = spectrum_report(unit_cavity, [0.5])
        text = spectrum_rows_to_csv(rows)
        header, line = text.strip().split("\n")
        assert header.startswith("gamma,re_lp,im_lp")
        assert len(line.split(",")) == 14

    def test_requires_symmetric_geometry(self):
        system = validate(canonical_three_atom(0.1, 1.0, d=0.1))
        with pytest.raises(ValueError):
            spectrum_report(system, [0.1])
