from fractions import Fraction

import numpy as np
import pytest

from conftest import pauli
from errors import (
    ClaimCheckError,
    HamiltonianParseError,
    NonHermitianOperatorError,
    NonHermitianResultError,
    NotAnnihilatingError,
    ValidationError,
)
from graph_states import g1_graph, g2_graph, graph_to_stabilizer, statevector
from model_zoo import g1_hamiltonian, g2_bundle_pairs, g2_hamiltonian
from parent_hamiltonian import (
    Factorization,
    PauliHamiltonian,
    assemble,
    assemble_orbits,
    decompose,
    energy_moments,
    enumerate_factorizations,
    find_orbit,
    no_go_audit,
    parse_hamiltonian,
    phase_in_group,
    translation_orbits,
    validate_hamiltonian_text,
    verify_zero_eigenstate,
)
from pauli_core import PauliString
from spectral_stats import hamiltonian_to_sparse
from stabilizer_group import five_qubit_code_tableau, random_stabilizer_tableau


@pytest.fixture(scope="module")
def g1_10():
    return graph_to_stabilizer(g1_graph(10))


@pytest.fixture(scope="module")
def g2_9_factorizations(g2_9):
    return enumerate_factorizations(g2_9, 2)


class TestPauliHamiltonian:
    def test_signs_fold_into_coefficients(self):
        h = PauliHamiltonian(2, {pauli("-X1 X2", 2): 2, pauli("Z1", 2): Fraction(1, 2)})
        assert h.coefficient(pauli("X1 X2", 2)) == -2
        assert h.coefficient(pauli("-X1 X2", 2)) == 2
        assert h.locality == 2
        assert len(h) == 2

    def test_zero_terms_are_dropped(self):
        h = PauliHamiltonian(1, {pauli("X1", 1): 1, pauli("-X1", 1): 1})
        assert len(h) == 0
        assert h.locality == 0

    def test_identity_and_non_hermitian_terms_are_rejected(self):
        with pytest.raises(HamiltonianParseError):
            PauliHamiltonian(1, {PauliString.identity(1): 1})
        with pytest.raises(NonHermitianOperatorError):
            PauliHamiltonian(1, {pauli("+i X1", 1): 1})

    def test_addition_and_scaling(self):
        a = PauliHamiltonian(2, {pauli("X1", 2): 1})
        b = PauliHamiltonian(2, {pauli("X1", 2): -1, pauli("Z2", 2): 3})
        assert (a + b) == PauliHamiltonian(2, {pauli("Z2", 2): 3})
        assert b.scaled(Fraction(1, 3)).coefficient(pauli("Z2", 2)) == 1

    def test_text_round_trip(self):
        h = g2_hamiltonian(5, 1, Fraction(2, 3), -3)
        text = h.to_text()
        assert text.startswith("N=5\n")
        assert "2/3\t" in text
        assert parse_hamiltonian(text) == h

    def test_parse_merges_repeated_terms(self):
        h = parse_hamiltonian("N=2\n0.5\t+X1 X2\n1/2 -X1 X2\n# comment\n2\t-Z1\n")
        assert h == PauliHamiltonian(2, {pauli("Z1", 2): -2})

    @pytest.mark.parametrize("text", [
        "1\t+X1\n",
        "N=1\n1/0\t+X1\n",
        "N=1\n1\t+I\n",
        "N=1\n1\t+iX1\n",
        "N=1\nX1\n",
    ])
    def test_parse_errors(self, text):
        with pytest.raises(HamiltonianParseError):
            parse_hamiltonian(text)

    def test_validate_text(self):
        ok, message = validate_hamiltonian_text("N=2\n1\t+Z1 Z2\n")
        assert ok and "locality 2" in message
        ok, _ = validate_hamiltonian_text("N=2\n1\t+Z3\n")
        assert not ok


class TestFactorizations:
    def test_lowering_operator_factorization(self, zero_state):
        found = enumerate_factorizations(zero_state(1), 1)
        lowering = Factorization(pauli("Z1", 1), pauli("X1", 1), pauli("Y1", 1), 3)
        assert lowering in found
        assert lowering.a_text == "-i"
        assert lowering.reversed() in found
        assert len(found) == 2

    def test_g1_two_body_pair(self, g1_12):
        found = enumerate_factorizations(g1_12, 2)
        expected = Factorization(pauli("X1 X2 Z6 Z9", 12), pauli("Z6 Z9", 12), pauli("X1 X2", 12), 0)
        assert expected in found
        assert all(f.g.weight <= f.p.weight + f.q.weight for f in found)
        assert all(max(f.p.weight, f.q.weight) <= 2 for f in found)

    def test_g2_single_site_pair(self, g2_9_factorizations):
        expected = Factorization(pauli("X1 Z5 Z6", 9), pauli("Z5 Z6", 9), pauli("X1", 9), 0)
        assert expected in g2_9_factorizations
        assert expected.is_real_phase

    def test_factorization_checks_product(self):
        with pytest.raises(ValidationError):
            Factorization(pauli("Z1", 1), pauli("X1", 1), pauli("Y1", 1), 1)
        with pytest.raises(ValidationError):
            Factorization(pauli("Z1", 1), PauliString.identity(1), pauli("Z1", 1), 0)

    def test_locality_bound_is_validated(self, bell):
        with pytest.raises(ValidationError):
            enumerate_factorizations(bell, 0)
        with pytest.raises(ValidationError):
            enumerate_factorizations(bell, 3)

    def test_parallel_enumeration_is_identical(self, g1_10):
        assert enumerate_factorizations(g1_10, 2, workers=1) == enumerate_factorizations(g1_10, 2, workers=3)


class TestAssemble:
    def test_g1_orbit_gives_zz_minus_xx_chain(self, g1_12):
        orbits = translation_orbits(enumerate_factorizations(g1_12, 2))
        index = find_orbit(orbits, pauli("Z6 Z9", 12), pauli("X1 X2", 12))
        assert len(orbits[index]) == 12
        h = assemble_orbits([orbits[index]], [Fraction(3, 2)])
        assert h == g1_hamiltonian(12, Fraction(3, 2))

    def test_g2_orbits_give_three_coupling_chain(self, g2_9_factorizations):
        orbits = translation_orbits(g2_9_factorizations)
        couplings = {"j1": Fraction(2), "j2": Fraction(-1, 3), "j3": Fraction(5)}
        chosen = [orbits[find_orbit(orbits, p, q)] for p, q in g2_bundle_pairs(9).values()]
        h = assemble_orbits(chosen, [couplings[key] for key in g2_bundle_pairs(9)])
        assert h == g2_hamiltonian(9, couplings["j1"], couplings["j2"], couplings["j3"])

    def test_lone_complex_bundle_is_not_hermitian(self):
        lowering = Factorization(pauli("Z1", 1), pauli("X1", 1), pauli("Y1", 1), 3)
        with pytest.raises(NonHermitianResultError) as info:
            assemble([(lowering, 1)])
        assert "+Y1" in info.value.details()["offending"][0]

    def test_complex_bundle_pair_is_hermitian(self, zero_state):
        lowering = Factorization(pauli("Z1", 1), pauli("X1", 1), pauli("Y1", 1), 3)
        raising = lowering.reversed()
        # (X + iY) - i (Y - iX) = 0
        h = assemble([(lowering, 1), (raising, -1j)])
        assert len(h) == 0
        assert verify_zero_eigenstate(h, zero_state(1))

    def test_empty_bundle_list_needs_size(self):
        with pytest.raises(ValidationError):
            assemble([])
        assert len(assemble([], 3)) == 0

    def test_orbit_coefficient_count_is_checked(self, g2_9_factorizations):
        orbits = translation_orbits(g2_9_factorizations)
        with pytest.raises(ValidationError):
            assemble_orbits(orbits[:2], [1])


class TestZeroEnergy:
    def test_g1_chain_annihilates(self, g1_12):
        assert verify_zero_eigenstate(g1_hamiltonian(12), g1_12)
        assert energy_moments(g1_hamiltonian(12), g1_12) == (0, 0)

    def test_field_on_product_state(self, zero_state):
        h = PauliHamiltonian(4, {pauli(f"Z{i}", 4): 1 for i in range(1, 5)})
        first, _ = energy_moments(h, zero_state(4))
        assert first == 4
        assert not verify_zero_eigenstate(h, zero_state(4))

    def test_zero_mean_but_nonzero_variance(self, zero_state):
        h = PauliHamiltonian(1, {pauli("X1", 1): 1, pauli("Y1", 1): 1})
        assert energy_moments(h, zero_state(1)) == (0, 2)
        assert not verify_zero_eigenstate(h, zero_state(1))

    def test_moments_match_statevector(self):
        graph = g1_graph(8)
        tableau = graph_to_stabilizer(graph)
        h = g1_hamiltonian(8) + PauliHamiltonian(8, {pauli("X1", 8): Fraction(1, 2), pauli("Z2 Z3", 8): -1})
        vector = statevector(graph)
        applied = hamiltonian_to_sparse(h) @ vector
        first, second = energy_moments(h, tableau)
        assert np.isclose(float(first), np.vdot(vector, applied).real)
        assert np.isclose(float(second), np.vdot(applied, applied).real)


class TestDecompose:
    def test_bell_certificate(self, bell):
        h = PauliHamiltonian(2, {pauli("Z1 Z2", 2): 1, pauli("X1 X2", 2): -1})
        certificate = decompose(h, bell)
        assert len(certificate.class_table) == 1
        entry = certificate.class_table[0]
        assert entry.representative.is_identity
        assert entry.class_size == 3
        assert certificate.balanced()
        assert certificate.reconstruct() == h.terms
        assert assemble(certificate.bundles(), 2) == h

    def test_bell_wrong_sign_does_not_balance(self, bell):
        h = PauliHamiltonian(2, {pauli("Z1 Z2", 2): 1, pauli("X1 X2", 2): 1})
        with pytest.raises(NotAnnihilatingError) as info:
            decompose(h, bell)
        assert info.value.details()["representative"] == "+I"

    def test_g1_round_trip(self, g1_10):
        h = g1_hamiltonian(10, 2)
        certificate = decompose(h, g1_10)
        assert certificate.reconstruct() == h.terms
        assert assemble(certificate.bundles(), 10) == h
        assert all(entry.class_size == 2 ** 10 for entry in certificate.class_table
                   if not entry.representative.is_identity)

    def test_phase_in_group(self, bell):
        assert phase_in_group(bell, pauli("Z1 Z2", 2), pauli("X1 X2", 2)) == 0
        assert phase_in_group(bell, pauli("X1", 2), pauli("Z1", 2)) is None
        assert phase_in_group(bell, pauli("X1", 2), pauli("Y2", 2)) is None

    def test_certificate_serializes(self, bell):
        h = PauliHamiltonian(2, {pauli("Z1 Z2", 2): 1, pauli("X1 X2", 2): -1})
        document = decompose(h, bell).to_dict()
        assert document["classes"][0]["n_P"] == 3
        assert len(document["c_values"]) == 4

    def test_parallel_decomposition_is_identical(self, g1_10):
        h = g1_hamiltonian(10) + g1_hamiltonian(10).scaled(2)
        assert decompose(h, g1_10, workers=1) == decompose(h, g1_10, workers=2)


def _round_trip(tableau, factorizations, rng):
    real = [f for f in factorizations if f.is_real_phase]
    orbits = translation_orbits(real)
    picked = sorted(rng.choice(len(orbits), size=min(4, len(orbits)), replace=False).tolist())
    coefficients = [Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in picked]
    h = assemble_orbits([orbits[i] for i in picked], coefficients, tableau.n_qubits)
    assert verify_zero_eigenstate(h, tableau)
    certificate = decompose(h, tableau)
    assert certificate.reconstruct() == h.terms
    assert assemble(certificate.bundles(), tableau.n_qubits) == h


def test_synthesis_round_trip(g1_10, g2_9, g2_9_factorizations):
    rng = np.random.default_rng(17)
    g1_factorizations = enumerate_factorizations(g1_10, 2)
    for _ in range(5):
        _round_trip(g1_10, g1_factorizations, rng)
        _round_trip(g2_9, g2_9_factorizations, rng)


@pytest.mark.slow
def test_synthesis_round_trip_many_trials(g1_10, g2_9, g2_9_factorizations):
    rng = np.random.default_rng(1000)
    g1_factorizations = enumerate_factorizations(g1_10, 2)
    for _ in range(100):
        _round_trip(g1_10, g1_factorizations, rng)
        _round_trip(g2_9, g2_9_factorizations, rng)


def test_synthesized_chain_matches_statevector():
    graph = g2_graph(7)
    h = g2_hamiltonian(7, 1, 2, 3)
    applied = hamiltonian_to_sparse(h) @ statevector(graph)
    assert np.linalg.norm(applied) < 1e-10


class TestNoGoAudit:
    def test_g1(self, g1_12):
        report = no_go_audit(g1_12, 2)
        assert report.delta == 4
        assert report.annihilator_exists
        assert report.mite_ceiling == 3
        assert report.weight_bound_holds
        assert report.witness.g.weight == 4

    def test_five_qubit_code_has_no_one_body_annihilator(self):
        report = no_go_audit(five_qubit_code_tableau(), 1)
        assert report.delta == 3
        assert report.factorization_count == 0
        assert report.mite_ceiling is None
        assert report.to_dict()["witness"] is None

    def test_product_state(self, zero_state):
        report = no_go_audit(zero_state(3), 1)
        assert report.delta == 1
        singles = {f.g for f in enumerate_factorizations(zero_state(3), 1) if f.g.weight == 1}
        assert singles == {pauli(f"Z{i}", 3) for i in range(1, 4)}
        assert report.factorization_count > 0

    def test_random_groups_respect_weight_bound(self):
        rng = np.random.default_rng(8)
        for _ in range(15):
            tableau = random_stabilizer_tableau(6, rng, edge_probability=0.6)
            report = no_go_audit(tableau, 1)
            assert report.weight_bound_holds
            if report.delta is None or report.delta > 2:
                assert report.factorization_count == 0
            else:
                assert report.factorization_count > 0

    def test_large_delta_without_annihilator_is_consistent(self):
        report = no_go_audit(five_qubit_code_tableau(), 1)
        assert report.to_dict()["delta_lower_bound"] == 3


@pytest.mark.slow
def test_random_groups_up_to_ten_sites():
    rng = np.random.default_rng(99)
    for n in (8, 10):
        for _ in range(50):
            tableau = random_stabilizer_tableau(n, rng)
            report = no_go_audit(tableau, 2)
            assert report.weight_bound_holds
            assert report.annihilator_exists == (report.delta is not None and report.delta <= 4)


def test_audit_rejects_inconsistent_enumeration(monkeypatch, g1_12):
    import parent_hamiltonian

    monkeypatch.setattr(parent_hamiltonian, "min_weight", lambda t, bound: None)
    with pytest.raises(ClaimCheckError):
        no_go_audit(g1_12, 2)
