"""Density matrix validation, named states, families and the dephasing channel."""
import numpy as np
import pytest

from core.errors import DimensionError, DomainError, ValidationError
from core.infomeasures import von_neumann_entropy
from core.qmat import Subsystem
from core.states import (
    DensityMatrix,
    MeasurementBasis,
    decohere,
    make_bell,
    make_classical_mixture,
    make_dephased_bell,
    make_maximally_mixed,
    make_one_way,
    make_product,
    make_werner,
    oriented,
    pure_state,
    random_basis,
    random_state,
    swap_subsystems,
)
from tests.helpers import plus_state, zero_state


class TestDensityMatrix:

    def test_valid_state_is_frozen(self, bell):
        assert bell.dims == (2, 2)
        assert bell.dim == 4
        assert not bell.matrix.flags.writeable

    @pytest.mark.parametrize(
        "matrix, invariant",
        [
            (np.array([[0.5, 0.5], [0.0, 0.5]]), "hermitian"),
            (np.eye(2), "unit trace"),
            (np.array([[1.5, 0.0], [0.0, -0.5]]), "positive semidefinite"),
        ],
    )
    def test_invariants_are_named(self, matrix, invariant):
        with pytest.raises(ValidationError) as info:
            DensityMatrix(matrix, 2, 1)
        assert info.value.invariant == invariant

    def test_dimension_split(self):
        with pytest.raises(DimensionError, match="d_S \\* d_A"):
            DensityMatrix(np.eye(4) / 4, 3, 1)

    def test_from_clipped_repairs_drift(self):
        drifted = np.diag([1.0 + 1e-8, -1e-8]).astype(complex)
        rho = DensityMatrix.from_clipped(drifted, 2)
        assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-12)
        assert rho.eigenvalues.min() >= 0.0

    def test_purity(self, bell, mixture):
        assert bell.purity() == pytest.approx(1.0)
        assert mixture.purity() == pytest.approx(0.5)

    def test_marginal(self, one_way):
        rho_a = one_way.marginal(Subsystem.A)
        np.testing.assert_allclose(rho_a.matrix, np.eye(2) / 2, atol=1e-12)
        rho_s = one_way.marginal("S")
        expected = 0.5 * (zero_state().matrix + plus_state().matrix)
        np.testing.assert_allclose(rho_s.matrix, expected, atol=1e-12)


class TestMeasurementBasis:

    def test_named_bases_are_orthonormal(self, computational, hadamard, circular):
        for basis in (computational, hadamard, circular):
            v = basis.vectors
            np.testing.assert_allclose(v.conj().T @ v, np.eye(2), atol=1e-12)

    def test_non_orthonormal_rejected(self):
        with pytest.raises(ValidationError) as info:
            MeasurementBasis(np.array([[1.0, 1.0], [0.0, 1.0]]))
        assert info.value.invariant == "orthonormal"

    def test_projectors_resolve_identity(self, circular):
        np.testing.assert_allclose(sum(circular.projectors()), np.eye(2), atol=1e-12)

    def test_overlaps_of_mutually_unbiased_bases(self, computational, hadamard):
        np.testing.assert_allclose(computational.overlaps(hadamard), np.full((2, 2), 0.5), atol=1e-12)

    def test_from_unitary_uses_columns(self):
        angle = 0.3
        rotation = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
        basis = MeasurementBasis.from_unitary(rotation, "rotated")
        assert basis.label == "rotated"
        np.testing.assert_allclose(basis.vector(1), [-np.sin(angle), np.cos(angle)], atol=1e-15)
        rotation[0, 0] = 7.0
        assert basis.vectors[0, 0] == pytest.approx(np.cos(angle))

    def test_from_unitary_rejects_non_unitary(self):
        with pytest.raises(ValidationError, match="not orthonormal"):
            MeasurementBasis.from_unitary(np.diag([1.0, 2.0]))


class TestNamedStates:

    def test_bell_matrix(self, bell):
        expected = np.zeros((4, 4))
        expected[np.ix_([0, 3], [0, 3])] = 0.5
        np.testing.assert_allclose(bell.matrix, expected, atol=1e-15)

    def test_classical_mixture_matrix(self, mixture):
        np.testing.assert_allclose(mixture.matrix, np.diag([0.5, 0, 0, 0.5]), atol=0)

    def test_decohered_bell_is_classical_mixture(self, bell, mixture, computational):
        np.testing.assert_allclose(decohere(bell, computational).matrix, mixture.matrix, atol=1e-12)

    def test_decohere_is_idempotent(self, hadamard):
        rho = random_state(2, 2, seed=4)
        once = decohere(rho, hadamard)
        np.testing.assert_allclose(decohere(once, hadamard).matrix, once.matrix, atol=1e-12)

    def test_decohere_basis_mismatch(self, bell):
        with pytest.raises(DimensionError):
            decohere(bell, MeasurementBasis.computational(3))

    @pytest.mark.parametrize("d_a", [2, 3])
    def test_decohere_never_lowers_entropy(self, d_a):
        for seed in range(30):
            rho = random_state(2, d_a, seed=seed)
            basis = random_basis(d_a, seed=100 + seed)
            before = von_neumann_entropy(rho)
            assert von_neumann_entropy(decohere(rho, basis)) >= before - 1e-9

    def test_decohere_keeps_s_marginal(self):
        for seed in range(10):
            rho = random_state(2, 3, seed=seed)
            decohered = decohere(rho, random_basis(3, seed=seed))
            np.testing.assert_allclose(
                decohered.marginal(Subsystem.S).matrix, rho.marginal(Subsystem.S).matrix, atol=1e-12
            )

    def test_maximally_mixed(self):
        rho = make_maximally_mixed(2, 3)
        np.testing.assert_allclose(rho.matrix, np.eye(6) / 6)


class TestFamilies:

    def test_werner_endpoints(self, bell):
        np.testing.assert_allclose(make_werner(1.0).matrix, bell.matrix, atol=1e-15)
        np.testing.assert_allclose(make_werner(0.0).matrix, np.eye(4) / 4, atol=1e-15)

    @pytest.mark.parametrize("z", [-0.1, 1.5])
    def test_werner_domain(self, z):
        with pytest.raises(DomainError, match="z must lie"):
            make_werner(z)

    def test_werner_spectrum(self):
        np.testing.assert_allclose(
            make_werner(0.5).eigenvalues, [0.125, 0.125, 0.125, 0.625], atol=1e-12
        )

    def test_dephased_bell_endpoints(self, bell, mixture):
        np.testing.assert_allclose(make_dephased_bell(0.0).matrix, bell.matrix, atol=1e-15)
        np.testing.assert_allclose(make_dephased_bell(1.0).matrix, mixture.matrix, atol=1e-15)

    def test_product(self):
        rho = make_product(zero_state(), plus_state())
        assert rho.dims == (2, 2)
        np.testing.assert_allclose(rho.marginal("A").matrix, plus_state().matrix, atol=1e-12)

    def test_product_needs_single_systems(self, bell):
        with pytest.raises(DimensionError):
            make_product(bell, zero_state())

    def test_one_way_block_structure(self, one_way):
        m = one_way.matrix
        # A stays diagonal: no coherence between |s 0> and |s' 1>
        assert np.allclose(m.reshape(2, 2, 2, 2)[:, 0, :, 1], 0.0)

    def test_one_way_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            make_one_way(zero_state(), pure_state([1.0, 0.0, 0.0]))


class TestPureState:

    def test_normalizes(self):
        rho = pure_state([3.0, 4.0])
        assert rho.purity() == pytest.approx(1.0)
        assert rho.matrix[0, 0].real == pytest.approx(9 / 25)

    def test_zero_vector(self):
        with pytest.raises(DomainError):
            pure_state([0.0, 0.0])


class TestRandomStates:

    def test_seed_reproducibility(self):
        first = random_state(2, 2, seed=42)
        second = random_state(2, 2, seed=42)
        assert np.array_equal(first.matrix, second.matrix)
        assert not np.array_equal(first.matrix, random_state(2, 2, seed=43).matrix)

    def test_ginibre_mean_purity(self):
        # Hilbert-Schmidt ensemble on N = 4: <Tr rho^2> = 2N / (N^2 + 1)
        purities = [random_state(2, 2, seed=s).purity() for s in range(1000)]
        assert np.mean(purities) == pytest.approx(8 / 17, abs=0.02)

    def test_oversized(self):
        with pytest.raises(DimensionError):
            random_state(64, 32, seed=0)

    def test_random_basis(self):
        basis = random_basis(3, seed=9)
        np.testing.assert_allclose(basis.vectors.conj().T @ basis.vectors, np.eye(3), atol=1e-12)
        assert np.array_equal(basis.vectors, random_basis(3, seed=9).vectors)
        assert random_basis(1, seed=0).d_a == 1


class TestSwap:

    def test_swap_is_involution(self):
        rho = random_state(2, 3, seed=5)
        swapped = swap_subsystems(rho)
        assert swapped.dims == (3, 2)
        np.testing.assert_allclose(swap_subsystems(swapped).matrix, rho.matrix, atol=0)

    def test_swap_exchanges_marginals(self):
        rho = random_state(2, 3, seed=6)
        swapped = swap_subsystems(rho)
        np.testing.assert_allclose(swapped.marginal("S").matrix, rho.marginal("A").matrix, atol=1e-12)

    def test_oriented(self, one_way):
        assert oriented(one_way, Subsystem.A) is one_way
        assert oriented(one_way, "S").dims == (2, 2)
