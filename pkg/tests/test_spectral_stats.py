import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from conftest import pauli
from errors import DimensionZeroError, IncompatibleSpecError, TooFewLevelsError, TooLargeError, ValidationError
from model_zoo import g1_hamiltonian, g2_hamiltonian
from parent_hamiltonian import PauliHamiltonian
from spectral_stats import (
    GOE_MEAN_R_TILDE,
    POISSON_MEAN_R_TILDE,
    SymmetrySpec,
    all_sectors,
    check_symmetries,
    collapse_zero_modes,
    eigenvalues,
    goe_three_by_three_ratios,
    hamiltonian_to_sparse,
    histogram_table,
    mean_r_tilde_reference,
    pooled_momentum_statistics,
    r_statistics,
    reference_distributions,
    sample_goe_levels,
    sector_basis,
    sector_spectrum,
)


def _chain(n):
    """Translation- and inversion-symmetric test chain with a longitudinal field."""
    terms = {}
    for i in range(1, n + 1):
        terms[pauli(f"Z{i} Z{i % n + 1}", n)] = 1
        terms[pauli(f"X{i}", n)] = Fraction(7, 10)
        terms[pauli(f"Z{i}", n)] = Fraction(3, 10)
    return PauliHamiltonian(n, terms)


def _dimension(n, spec):
    try:
        return sector_basis(n, spec).dimension
    except DimensionZeroError:
        return 0


def _permutation(images):
    matrix = np.zeros((images.shape[0], images.shape[0]))
    matrix[images, np.arange(images.shape[0])] = 1
    return matrix


def _group_average_projector(n, spec):
    """Product of the dense projectors onto each requested eigenvalue."""
    dimension = 2 ** n
    full = dimension - 1
    states = np.arange(dimension)
    identity = np.eye(dimension)
    projector = identity.astype(complex)
    if spec.momentum is not None:
        omega = np.exp(2j * np.pi * spec.momentum / n)
        # T^j rotates every basis state left by j sites
        powers = (_permutation(((states << j) | (states >> (n - j))) & full) for j in range(n))
        projector = projector @ (sum(omega ** (-j) * power for j, power in enumerate(powers)) / n)
    if spec.inversion is not None:
        reflection = _permutation(np.array([int(format(s, f"0{n}b")[::-1], 2) for s in states]))
        projector = projector @ (identity + spec.inversion * reflection) / 2
    if spec.spin_flip_x is not None:
        projector = projector @ (identity + spec.spin_flip_x * _permutation(states ^ full)) / 2
    if spec.spin_flip_z is not None:
        parity = np.diag([(-1.0) ** bin(s).count("1") for s in states])
        projector = projector @ (identity + spec.spin_flip_z * parity) / 2
    return projector


class TestSymmetrySpec:
    def test_parse(self):
        assert SymmetrySpec.parse("t=1,p=1,px=1,pz=1", 14) == SymmetrySpec(0, 1, 1, 1)
        assert SymmetrySpec.parse("t=-1", 8) == SymmetrySpec(4)
        assert SymmetrySpec.parse("k=11,p=-1", 8) == SymmetrySpec(3, -1)
        assert SymmetrySpec.parse("", 8) == SymmetrySpec()
        assert SymmetrySpec.parse("full", 8).label() == "full"

    @pytest.mark.parametrize("text", ["t=2", "p=2", "q=1", "k", "k=x"])
    def test_parse_errors(self, text):
        with pytest.raises(ValidationError):
            SymmetrySpec.parse(text, 8)

    def test_antiperiodic_momentum_needs_even_n(self):
        with pytest.raises(IncompatibleSpecError):
            SymmetrySpec.parse("t=-1", 9)

    def test_label(self):
        assert SymmetrySpec(0, 1, None, -1).label() == "k=0,p=1,pz=-1"


class TestCheckSymmetries:
    def test_g1_chain_has_all_four(self):
        assert check_symmetries(g1_hamiltonian(14), SymmetrySpec(0, 1, 1, 1))

    def test_site_field_breaks_translation(self):
        h = g1_hamiltonian(14) + PauliHamiltonian(14, {pauli("X1", 14): Fraction(1, 2)})
        assert not check_symmetries(h, SymmetrySpec(0))
        assert check_symmetries(h, SymmetrySpec(None, None, 1))

    def test_g2_antisymmetric_term_breaks_inversion(self):
        assert check_symmetries(g2_hamiltonian(9), SymmetrySpec(0))
        assert not check_symmetries(g2_hamiltonian(9), SymmetrySpec(0, 1))
        assert check_symmetries(g2_hamiltonian(9, 1, 1, 0), SymmetrySpec(0, 1))

    def test_longitudinal_field_breaks_spin_flip(self):
        assert not check_symmetries(_chain(6), SymmetrySpec(None, None, 1))
        assert check_symmetries(_chain(6), SymmetrySpec(0, 1))


class TestSectorBasis:
    def test_two_site_zero_momentum(self):
        basis = sector_basis(2, SymmetrySpec(0))
        assert basis.dimension == 3
        expected = np.zeros((4, 4))
        expected[0, 0] = expected[3, 3] = 1
        expected[1:3, 1:3] = 0.5
        assert np.allclose(basis.projector(), expected)

    def test_columns_are_orthonormal(self):
        basis = sector_basis(8, SymmetrySpec(2, None, -1))
        gram = (basis.vectors.conj().T @ basis.vectors).toarray()
        assert np.allclose(gram, np.eye(basis.dimension), atol=1e-12)

    def test_projector_matches_group_average(self):
        n, k = 6, 2
        full = (1 << n) - 1
        states = np.arange(2 ** n)
        shifted = ((states << 1) | (states >> (n - 1))) & full
        translation = np.zeros((2 ** n, 2 ** n))
        translation[shifted, states] = 1
        omega = np.exp(2j * np.pi * k / n)
        average = sum(omega ** (-j) * np.linalg.matrix_power(translation, j) for j in range(n)) / n
        assert np.allclose(sector_basis(n, SymmetrySpec(k)).projector(), average, atol=1e-12)

    def test_empty_sector(self):
        with pytest.raises(DimensionZeroError):
            sector_basis(2, SymmetrySpec(1, None, 1))

    def test_incompatible_requests(self):
        with pytest.raises(IncompatibleSpecError):
            sector_basis(6, SymmetrySpec(1, 1))
        with pytest.raises(IncompatibleSpecError):
            sector_basis(5, SymmetrySpec(None, None, 1, 1))
        with pytest.raises(IncompatibleSpecError):
            sector_basis(5, SymmetrySpec(7))

    def test_limit(self):
        with pytest.raises(TooLargeError):
            sector_basis(8, SymmetrySpec(), limit=10)

    def test_sectors_partition_the_space(self):
        for specs in (all_sectors(6), all_sectors(6, inversion=True, spin_flip_x=True),
                      all_sectors(6, translation=False, spin_flip_z=True)):
            assert sum(_dimension(6, spec) for spec in specs) == 2 ** 6

    @pytest.mark.parametrize("spec", [
        SymmetrySpec(0, 1),
        SymmetrySpec(3, -1),
        SymmetrySpec(None, None, 1),
        SymmetrySpec(None, None, None, -1),
        SymmetrySpec(0, -1, 1, 1),
        SymmetrySpec(2, None, -1),
    ])
    def test_projector_matches_dense_group_average(self, spec):
        oracle = _group_average_projector(6, spec)
        if round(np.trace(oracle).real) == 0:
            with pytest.raises(DimensionZeroError):
                sector_basis(6, spec)
            return
        assert np.allclose(sector_basis(6, spec).projector(), oracle, atol=1e-12)

    def test_dimensions_match_projector_traces(self):
        total = 0
        for spec in all_sectors(8, inversion=True, spin_flip_x=True, spin_flip_z=True):
            trace = round(np.trace(_group_average_projector(8, spec)).real)
            assert _dimension(8, spec) == trace
            total += trace
        assert total == 2 ** 8


class TestEigenvalues:
    def test_free_spins(self):
        h = PauliHamiltonian(4, {pauli(f"Z{i}", 4): 1 for i in range(1, 5)})
        expected = [-4] + [-2] * 4 + [0] * 6 + [2] * 4 + [4]
        assert np.allclose(eigenvalues(h), expected)

    def test_sector_union_matches_full_spectrum(self):
        h = _chain(6)
        full = eigenvalues(h)
        pooled = np.sort(np.concatenate([eigenvalues(h, sector_basis(6, spec))
                                         for spec in all_sectors(6, inversion=True)]))
        assert np.allclose(pooled, full, atol=1e-9)

    def test_full_spectrum_matches_dense_oracle(self):
        h = g1_hamiltonian(8)
        dense = hamiltonian_to_sparse(h).toarray()
        assert np.allclose(eigenvalues(h), np.linalg.eigvalsh(dense), atol=1e-9)

    def test_zero_energy_level_in_symmetric_sector(self):
        h = g1_hamiltonian(8)
        levels = eigenvalues(h, sector_basis(8, SymmetrySpec(0, 1)))
        assert np.min(np.abs(levels)) < 1e-9

    def test_dense_limit(self):
        with pytest.raises(TooLargeError):
            eigenvalues(_chain(4), limit=10)


class TestRStatistics:
    def test_picket_fence(self):
        report = r_statistics(np.arange(20.0))
        assert report.r_values.shape[0] == 8
        assert np.allclose(report.r_values, 1.0)
        assert report.mean_r_tilde == pytest.approx(1.0)
        assert report.degeneracy_count == 0

    def test_central_window_by_index(self):
        report = r_statistics(np.arange(10.0) ** 2, central_fraction=0.6)
        # squares of 2..7 are kept
        assert report.r_values[0] == pytest.approx(5 / 7)

    def test_too_few_levels(self):
        with pytest.raises(TooFewLevelsError):
            r_statistics([0.0, 1.0, 2.5, 4.0, 7.0, 8.0])

    def test_bad_fraction(self):
        with pytest.raises(ValidationError):
            r_statistics(np.arange(10.0), central_fraction=0)

    def test_affine_invariance(self, rng):
        levels = np.sort(rng.uniform(size=200))
        base = r_statistics(levels)
        moved = r_statistics(3.5 * levels - 2.0)
        assert np.allclose(base.r_values, moved.r_values)

    def test_degenerate_gaps_are_excluded(self, caplog):
        levels = np.array([0.0, 1.0, 3.0, 3.0, 4.5, 7.0, 8.0, 11.0, 12.5, 16.0])
        with caplog.at_level("WARNING"):
            report = r_statistics(levels, central_fraction=1.0)
        assert report.degeneracy_count == 1
        assert report.r_values.shape[0] == 8 - 2
        assert "degenerate" in caplog.text

    def test_zero_mode_manifold_collapses_to_one_level(self):
        levels = np.array([-5.0, -3.5, -2.0, -1.0, 0.0, 0.0, 0.0, 1.0, 2.0, 3.5, 5.0])
        kept = r_statistics(levels, central_fraction=1.0)
        assert kept.degeneracy_count == 2
        assert kept.zero_mode_count == 0
        collapsed = r_statistics(levels, central_fraction=1.0, zero_modes=True)
        assert collapsed.degeneracy_count == 0
        assert collapsed.zero_mode_count == 3
        assert collapsed.r_values.shape[0] == 7
        assert collapsed.sector_dimension == 11
        assert collapsed.to_dict()["zero_mode_count"] == 3

    def test_single_zero_level_is_left_alone(self):
        levels, count = collapse_zero_modes([-2.0, 0.0, 1.0, 3.0])
        assert count == 0
        assert levels.tolist() == [-2.0, 0.0, 1.0, 3.0]
        levels, count = collapse_zero_modes([1e-13, -2.0, -1e-13, 3.0])
        assert count == 2
        assert levels.tolist() == [-2.0, 0.0, 3.0]

    def test_poisson_levels(self):
        levels = np.sort(np.random.default_rng(3).uniform(size=100000))
        report = r_statistics(levels, central_fraction=1.0)
        assert report.mean_r_tilde == pytest.approx(POISSON_MEAN_R_TILDE, abs=0.01)

    @pytest.mark.slow
    def test_goe_levels(self):
        rng = np.random.default_rng(12)
        ratios = np.concatenate([r_statistics(sample_goe_levels(1000, rng)).r_values for _ in range(60)])
        assert float(ratios.mean()) == pytest.approx(GOE_MEAN_R_TILDE, abs=0.005)


class TestReferenceCurves:
    @pytest.mark.parametrize("kind", ["goe", "poisson", "GOE"])
    def test_normalized(self, kind):
        total, _ = integrate.quad(lambda r: reference_distributions(kind, [r])[0], 0.0, 1.0)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_endpoints(self):
        assert reference_distributions("goe", [0.0])[0] == 0.0
        assert reference_distributions("poisson", [0.0, 1.0]).tolist() == [2.0, 0.5]

    def test_means(self):
        assert mean_r_tilde_reference("poisson") == pytest.approx(2 * math.log(2) - 1, abs=1e-9)
        assert mean_r_tilde_reference("goe") == pytest.approx(4 - 2 * math.sqrt(3), abs=1e-9)

    def test_rejects_bad_input(self):
        with pytest.raises(ValidationError):
            reference_distributions("gue", [0.5])
        with pytest.raises(ValidationError):
            reference_distributions("goe", [1.5])

    def test_histogram_table(self):
        table = histogram_table(np.linspace(0.01, 0.99, 50), bins=10)
        assert list(table.columns) == ["bin", "empirical_density", "goe", "poisson"]
        assert len(table) == 10
        assert table["bin"].iloc[0] == pytest.approx(0.05)
        assert (table["empirical_density"] * 0.1).sum() == pytest.approx(1.0)
        assert (table["goe"] * 0.1).sum() == pytest.approx(1.0, abs=1e-6)

    def test_three_by_three_goe_follows_surmise(self):
        ratios = goe_three_by_three_ratios(400000, np.random.default_rng(4))
        table = histogram_table(ratios, bins=20)
        assert (table["empirical_density"] - table["goe"]).abs().max() < 0.05

    @pytest.mark.slow
    def test_three_by_three_goe_follows_surmise_closely(self):
        ratios = goe_three_by_three_ratios(2000000, np.random.default_rng(5))
        table = histogram_table(ratios, bins=20)
        assert (table["empirical_density"] - table["goe"]).abs().max() < 0.02


class TestPooled:
    def test_sector_count_and_pooling(self):
        report = pooled_momentum_statistics(g1_hamiltonian(8), 1, 1)
        labels = [spec.label() for spec, _, _ in report.sectors]
        assert labels[0] == "k=0,p=1,px=1,pz=1"
        assert len(labels) == 7
        kept = [r for _, _, r in report.sectors if r is not None]
        assert report.r_values.shape[0] == sum(r.r_values.shape[0] for r in kept)

    def test_single_sector_helper(self):
        report = sector_spectrum(_chain(8), SymmetrySpec(0, 1))
        assert report.sector_dimension == report.eigenvalues.shape[0]

    def test_parallel_sectors_are_identical(self):
        serial = pooled_momentum_statistics(_chain(8), None, None, workers=1)
        parallel = pooled_momentum_statistics(_chain(8), None, None, workers=2)
        assert np.array_equal(serial.r_values, parallel.r_values)
        assert [s.label() for s, _, _ in serial.sectors] == [s.label() for s, _, _ in parallel.sectors]

    @pytest.mark.slow
    def test_g1_chain_is_chaotic_at_fourteen_sites(self):
        report = pooled_momentum_statistics(g1_hamiltonian(14), 1, 1)
        assert report.zero_mode_count > 0
        assert report.degeneracy_count == 0
        assert report.mean_r_tilde >= 0.48
        assert abs(report.mean_r_tilde - GOE_MEAN_R_TILDE) < abs(report.mean_r_tilde - POISSON_MEAN_R_TILDE)
