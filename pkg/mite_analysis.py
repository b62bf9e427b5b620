"""
Infinite-temperature thermal-equilibrium (MITE) verdicts for stabilizer states.

A stabilizer state is maximally mixed on A exactly when no nonidentity group
element is supported inside A, so every verdict reduces to kernel queries on
the tableau. Graph states additionally get the neighbourhood-parity test.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from errors import SubsetLimitExceeded, ValidationError
from graph_states import Graph, is_maximally_mixed, reduced_density_matrix, statevector
from pauli_core import PauliString, Support, to_text
from stabilizer_group import StabilizerTableau, min_weight, subgroup_supported_in
from utils import colex_combinations, map_chunks

logger = logging.getLogger(__name__)

GRAPH_SUBSET_LIMIT = 24


@dataclass(frozen=True)
class MiteVerdict:
    property: str
    size: Optional[int]
    holds: bool
    subsystem: Optional[Support] = None
    witness: Optional[PauliString] = None

    def __post_init__(self):
        if not self.holds:
            if self.subsystem is None or self.witness is None:
                raise ValueError("a failing verdict needs a witness")
            if not Support.from_mask(self.witness.support_mask).issubset(self.subsystem):
                raise ValueError("the witness must be supported inside the witnessed subsystem")

    def to_dict(self):
        witness = None
        if not self.holds:
            witness = {"subsystem": self.subsystem.to_list(), "element": to_text(self.witness)}
        return {"property": self.property, "size": self.size, "holds": self.holds, "witness": witness}


def is_mite_on(t: StabilizerTableau, a: Support) -> MiteVerdict:
    if not a.sites:
        raise ValidationError("the subsystem is empty")
    Support.of(a.sites, t.n_qubits)
    elements = subgroup_supported_in(t, a)
    if not elements:
        return MiteVerdict("subsystem", len(a), True)
    return MiteVerdict("subsystem", len(a), False, a, elements[0])


def _check_size(name: str, value: int, n: int) -> None:
    if not 1 <= value <= n:
        raise ValidationError(f"{name}={value} outside 1..{n}", **{name: value, "n": n})


def _first_failure(subsets: Sequence[Tuple[int, ...]], offset: int, t: StabilizerTableau):
    for rank, subset in enumerate(subsets, offset):
        verdict = is_mite_on(t, Support.of(site + 1 for site in subset))
        if not verdict.holds:
            return rank, verdict
    return None


def _scan(t: StabilizerTableau, subsets: List[Tuple[int, ...]], workers: int):
    """First failing subset in the given order; parallel chunks keep the minimum rank."""
    results = map_chunks(_first_failure, subsets, workers, t)
    failures = [found for found in results if found is not None]
    if not failures:
        return None
    return min(failures, key=lambda found: found[0])[1]


def k_body_mite(t: StabilizerTableau, k: int, workers: int = 1) -> MiteVerdict:
    """
    MITE on every k-subset, scanned in colex order; the first failing subset
    in that order is the reported witness regardless of `workers`.
    """
    _check_size("k", k, t.n_qubits)
    subsets = list(colex_combinations(t.n_qubits, k))
    failure = _scan(t, subsets, workers)
    if failure is None:
        return MiteVerdict("k_body", k, True)
    return MiteVerdict("k_body", k, False, failure.subsystem, failure.witness)


def cyclic_windows(n: int, length: int) -> List[Tuple[int, ...]]:
    """0-based windows {s, s+1, ..., s+length-1} mod N, one per start site."""
    if length >= n:
        return [tuple(range(n))]
    return [tuple(sorted((start + offset) % n for offset in range(length))) for start in range(n)]


def l_local_mite(t: StabilizerTableau, l: int, workers: int = 1) -> MiteVerdict:
    _check_size("l", l, t.n_qubits)
    failure = _scan(t, cyclic_windows(t.n_qubits, l), workers)
    if failure is None:
        return MiteVerdict("l_local", l, True)
    return MiteVerdict("l_local", l, False, failure.subsystem, failure.witness)


def graph_mite_criterion(g: Graph, a: Support) -> bool:
    """
    Neighbourhood-parity test: for every nonempty B inside A some vertex
    outside A must have an odd number of neighbours in B.

    Args:
        g: Graph
        a: Subsystem

    Returns:
        True iff the graph state is maximally mixed on A
    """
    sites = a.to_list()
    if len(sites) > GRAPH_SUBSET_LIMIT:
        raise SubsetLimitExceeded(
            f"|A|={len(sites)} needs 2^{len(sites)} subsets; the limit is {GRAPH_SUBSET_LIMIT}",
            size=len(sites),
        )
    inside = a.mask
    outside_vertices = [v for v in range(1, g.n_vertices + 1) if not inside >> (v - 1) & 1]
    for choice in range(1, 1 << len(sites)):
        b_mask = 0
        for index, site in enumerate(sites):
            if choice >> index & 1:
                b_mask |= 1 << (site - 1)
        if not any((g.neighbors[v - 1] & b_mask).bit_count() % 2 for v in outside_vertices):
            return False
    return True


def max_uniformity(t: StabilizerTableau) -> int:
    """delta(G) - 1: the largest k for which k-body MITE holds."""
    delta = min_weight(t, t.n_qubits)
    # a maximal group always has an element of weight <= N
    return delta - 1


def oracle_mite_on(g: Graph, a: Support, tolerance: float = 1e-12) -> bool:
    """Statevector cross-check: is the reduced density matrix on A maximally mixed?"""
    vector = statevector(g)
    return is_maximally_mixed(reduced_density_matrix(vector, a.to_list(), g.n_vertices), tolerance)
