"""Entropies, conditional ensembles and the per-basis information report."""
import numpy as np
import pytest
from scipy.stats import unitary_group

from core.errors import DimensionError
from core.infomeasures import (
    condition_on_measurement,
    conditional_entropy,
    info_report,
    measured_joint_entropy,
    measurement_entropies,
    shannon_entropy,
    spectral_entropy,
    von_neumann_entropy,
)
from core.states import (
    MeasurementBasis,
    decohere,
    make_maximally_mixed,
    make_product,
    pure_state,
    random_basis,
    random_state,
)


class TestEntropies:

    def test_shannon_zero_log_zero(self):
        assert shannon_entropy([1.0, 0.0]) == 0.0
        assert shannon_entropy([0.5, 0.5]) == pytest.approx(1.0)
        assert shannon_entropy([0.25] * 4) == pytest.approx(2.0)

    def test_shannon_ignores_tiny_negative_drift(self):
        assert shannon_entropy([1.0, -1e-17]) == 0.0

    def test_shannon_last_axis(self):
        stack = np.array([[1.0, 0.0], [0.5, 0.5]])
        np.testing.assert_allclose(shannon_entropy(stack), [0.0, 1.0])

    def test_von_neumann_bounds(self, bell):
        assert von_neumann_entropy(bell) == pytest.approx(0.0, abs=1e-12)
        assert von_neumann_entropy(make_maximally_mixed(2, 3)) == pytest.approx(np.log2(6))

    def test_spectral_entropy_matches(self, mixture):
        assert spectral_entropy(mixture.matrix) == pytest.approx(von_neumann_entropy(mixture))


class TestConditionOnMeasurement:

    def test_bell_computational(self, bell, computational):
        ensemble = condition_on_measurement(bell, computational)
        np.testing.assert_allclose(ensemble.probabilities, [0.5, 0.5])
        np.testing.assert_allclose(ensemble.outcomes[0].state.matrix, np.diag([1, 0]), atol=1e-12)
        np.testing.assert_allclose(ensemble.outcomes[1].state.matrix, np.diag([0, 1]), atol=1e-12)

    def test_negligible_outcome_placeholder(self, computational):
        rho = make_product(random_state(2, 1, seed=0), pure_state([1.0, 0.0]))
        ensemble = condition_on_measurement(rho, computational)
        assert len(ensemble) == 2
        assert ensemble.outcomes[1].negligible
        np.testing.assert_allclose(ensemble.outcomes[1].state.matrix, np.eye(2) / 2)

    def test_basis_dimension_checked(self, bell):
        with pytest.raises(DimensionError):
            condition_on_measurement(bell, MeasurementBasis.computational(3))

    def test_measured_joint_entropy(self, mixture, computational, hadamard):
        assert measured_joint_entropy(mixture, computational) == pytest.approx(1.0)
        assert measured_joint_entropy(mixture, hadamard) == pytest.approx(2.0)
        assert conditional_entropy(mixture, hadamard) == pytest.approx(1.0)


class TestMeasurementEntropies:

    def test_matches_scalar_path(self):
        rho = random_state(2, 3, seed=8)
        unitaries = unitary_group.rvs(3, size=5, random_state=np.random.default_rng(1))
        h_outcomes, h_conditional = measurement_entropies(rho, unitaries)
        for n, u in enumerate(unitaries):
            basis = MeasurementBasis(u)
            ensemble = condition_on_measurement(rho, basis)
            assert h_outcomes[n] == pytest.approx(shannon_entropy(ensemble.probabilities), abs=1e-10)
            assert h_conditional[n] == pytest.approx(conditional_entropy(rho, basis), abs=1e-10)

    def test_single_unitary(self, bell):
        h_outcomes, h_conditional = measurement_entropies(bell, np.eye(2))
        assert h_outcomes.shape == (1,)
        assert h_conditional[0] == pytest.approx(0.0, abs=1e-12)

    def test_shape_checked(self, bell):
        with pytest.raises(DimensionError):
            measurement_entropies(bell, np.eye(3))


class TestInfoReport:

    def test_bell_report(self, bell, computational):
        report = info_report(bell, computational)
        assert report.h_sa == pytest.approx(0.0, abs=1e-9)
        assert report.h_s == pytest.approx(1.0, abs=1e-9)
        assert report.h_a == pytest.approx(1.0, abs=1e-9)
        assert report.i_mutual == pytest.approx(2.0, abs=1e-9)
        assert report.j_asym == pytest.approx(1.0, abs=1e-9)
        assert report.discord == pytest.approx(1.0, abs=1e-9)

    def test_classical_mixture_depends_on_basis(self, mixture, computational, hadamard):
        assert info_report(mixture, computational).discord == pytest.approx(0.0, abs=1e-9)
        assert info_report(mixture, hadamard).discord == pytest.approx(1.0, abs=1e-9)

    def test_identities(self):
        rho = random_state(2, 2, seed=17)
        report = info_report(rho, random_basis(2, seed=3))
        assert report.discord == pytest.approx(report.h_measured_joint - report.h_sa, abs=1e-9)
        assert report.h_measured_joint == pytest.approx(report.h_a_measured + report.h_s_given_a)
        assert report.discord_unmeasured_marginal <= report.discord + 1e-9

    def test_zero_discord_after_decoherence(self, hadamard):
        rho = decohere(random_state(2, 2, seed=21), hadamard)
        assert info_report(rho, hadamard).discord == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("d_a", [2, 3])
    def test_measured_joint_is_decohered_entropy(self, d_a):
        for seed in range(20):
            rho = random_state(2, d_a, seed=seed)
            basis = random_basis(d_a, seed=50 + seed)
            expected = von_neumann_entropy(decohere(rho, basis))
            assert info_report(rho, basis).h_measured_joint == pytest.approx(expected, abs=1e-9)

    def test_unmeasured_entropies_ignore_basis(self, computational, hadamard, circular):
        rho = random_state(2, 2, seed=31)
        reports = [info_report(rho, b) for b in (computational, hadamard, circular, random_basis(2, seed=5))]
        for report in reports[1:]:
            assert report.h_s == pytest.approx(reports[0].h_s, abs=1e-12)
            assert report.h_a == pytest.approx(reports[0].h_a, abs=1e-12)
            assert report.h_sa == pytest.approx(reports[0].h_sa, abs=1e-12)

    def test_mutual_information_bounds_measured_version(self):
        for seed in range(50):
            rho = random_state(2, 3, seed=seed)
            report = info_report(rho, random_basis(3, seed=seed))
            assert report.i_mutual >= report.j_asym - 1e-9

    def test_as_dict_keys(self, bell, computational):
        keys = set(info_report(bell, computational).as_dict())
        assert keys == {
            "h_s", "h_a", "h_sa", "h_s_given_a", "h_measured_joint", "i_mutual", "j_asym", "discord",
        }
