"""
Ready-made stabilizer models with their parent Hamiltonians and the thermal
profile each one is known to have, stored as executable claims.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd

from errors import ClaimCheckError, OddNError, TooSmallError, ValidationError
from graph_states import Graph, cycle_graph, g1_graph, g2_graph, graph_generator, graph_to_stabilizer
from mite_analysis import is_mite_on, k_body_mite, l_local_mite
from parent_hamiltonian import Factorization, PauliHamiltonian, enumerate_factorizations, verify_zero_eigenstate
from pauli_core import PauliString, support, to_text
from stabilizer_group import StabilizerTableau, from_generators, span, subgroup_supported_in
from utils import clean_token

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Claim:
    """
    One expected verdict.

    kind is "zero_energy", "k_body", "l_local" or "witness"; a witness claim
    expects `element` inside the subgroup supported on its own support.
    """

    kind: str
    expected: bool
    provenance: str
    size: Optional[int] = None
    element: Optional[PauliString] = None

    def describe(self) -> str:
        if self.kind == "zero_energy":
            return "zero-energy eigenstate"
        if self.kind == "witness":
            return f"MITE fails on supp({to_text(self.element)})"
        return f"{self.size}-{'body' if self.kind == 'k_body' else 'local'} MITE"


@dataclass(frozen=True)
class ClaimResult:
    claim: Claim
    observed: bool
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.observed == self.claim.expected

    def to_dict(self):
        return {
            "claim": self.claim.describe(),
            "expected": self.claim.expected,
            "observed": self.observed,
            "passed": self.passed,
            "provenance": self.claim.provenance,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class ModelBundle:
    name: str
    tableau: StabilizerTableau
    graph: Optional[Graph] = None
    hamiltonian: Optional[PauliHamiltonian] = None
    couplings: Dict[str, Fraction] = field(default_factory=dict)
    claims: Tuple[Claim, ...] = ()

    @property
    def n_qubits(self) -> int:
        return self.tableau.n_qubits

    def factorizations(self, m: int = 2, workers: int = 1) -> List[Factorization]:
        return enumerate_factorizations(self.tableau, m, workers)

    def _run(self, claim: Claim, workers: int) -> ClaimResult:
        if claim.kind == "zero_energy":
            if self.hamiltonian is None:
                raise ValidationError(f"model {self.name} has no Hamiltonian", model=self.name)
            return ClaimResult(claim, verify_zero_eigenstate(self.hamiltonian, self.tableau))
        if claim.kind == "k_body":
            verdict = k_body_mite(self.tableau, claim.size, workers)
        elif claim.kind == "l_local":
            verdict = l_local_mite(self.tableau, claim.size, workers)
        elif claim.kind == "witness":
            subsystem = support(claim.element)
            verdict = is_mite_on(self.tableau, subsystem)
            if verdict.holds:
                return ClaimResult(claim, True, "no element supported there")
            elements = span(subgroup_supported_in(self.tableau, subsystem), self.n_qubits)
            found = any(element.bare() == claim.element.bare() for element in elements)
            return ClaimResult(claim, not found, "" if found else "the expected element is not in the group")
        else:
            raise ValidationError(f"unknown claim kind {claim.kind!r}", kind=claim.kind)
        detail = "" if verdict.holds else f"witness {to_text(verdict.witness)} on {verdict.subsystem.to_list()}"
        return ClaimResult(claim, verdict.holds, detail)

    def check_claims(self, workers: int = 1) -> List[ClaimResult]:
        """Execute every claim; failures are logged, not raised."""
        results = [self._run(claim, workers) for claim in self.claims]
        for result in results:
            if not result.passed:
                logger.warning("model %s: claim '%s' failed (%s)", self.name, result.claim.describe(), result.detail)
        return results

    def assert_claims(self, workers: int = 1) -> List[ClaimResult]:
        results = self.check_claims(workers)
        failed = [result.claim.describe() for result in results if not result.passed]
        if failed:
            raise ClaimCheckError(f"model {self.name}: {len(failed)} claim(s) failed", failed=failed)
        return results

    def claims_table(self, results: Optional[List[ClaimResult]] = None) -> pd.DataFrame:
        results = self.check_claims() if results is None else results
        return pd.DataFrame([result.to_dict() for result in results],
                            columns=["claim", "expected", "observed", "passed", "provenance", "detail"])

    def to_dict(self):
        return {
            "name": self.name,
            "n_qubits": self.n_qubits,
            "couplings": dict(self.couplings),
            "graph_edges": None if self.graph is None else [list(edge) for edge in self.graph.edges()],
            "has_hamiltonian": self.hamiltonian is not None,
            "claims": [claim.describe() for claim in self.claims],
        }


def _term(n: int, letters: Dict[int, str]) -> PauliString:
    """Letters keyed by possibly out-of-range sites, wrapped periodically."""
    return PauliString.from_sites(n, {(site - 1) % n + 1: letter for site, letter in letters.items()})


def _add(terms: Dict[PauliString, Fraction], p: PauliString, value: Fraction) -> None:
    terms[p] = terms.get(p, Fraction(0)) + value


def eap_tableau(n: int) -> StabilizerTableau:
    """Bell pairs between sites i and i + N/2."""
    half = n // 2
    gens = []
    for i in range(1, half + 1):
        gens.append(_term(n, {i: "X", i + half: "X"}))
        gens.append(_term(n, {i: "Z", i + half: "Z"}))
    return from_generators(gens)


def eap_model(n: int) -> ModelBundle:
    """Entangled antipodal pairs; no Hamiltonian is attached."""
    if n % 2:
        raise OddNError(f"N={n} must be even", n=n)
    if n < 4:
        raise TooSmallError(f"N={n} must be at least 4", n=n)
    half = n // 2
    claims = (
        Claim("k_body", True, "antipodal pairs: every single site is maximally mixed", size=1),
        Claim("k_body", False, "antipodal pairs: two-body observables deviate from thermal values", size=2),
        Claim("witness", False, "antipodal pairs: sites 1 and 1+N/2 form a Bell pair",
              element=_term(n, {1: "X", 1 + half: "X"})),
        Claim("l_local", True, "antipodal pairs: thermal for spatially local observables", size=half),
    )
    return ModelBundle("eap", eap_tableau(n), claims=claims)


def g1_hamiltonian(n: int, j: Any = 1) -> PauliHamiltonian:
    """H = J sum_i (Z_i Z_{i+3} - X_i X_{i+1}) with periodic boundaries."""
    j = Fraction(j)
    terms: Dict[PauliString, Fraction] = {}
    for i in range(1, n + 1):
        _add(terms, _term(n, {i: "Z", i + 3: "Z"}), j)
        _add(terms, _term(n, {i: "X", i + 1: "X"}), -j)
    return PauliHamiltonian(n, terms)


def g1_model(n: int, j: Any = 1) -> ModelBundle:
    graph = g1_graph(n)
    k1 = graph_generator(graph, 1)
    claims = (
        Claim("zero_energy", True, "antipodal circulant graph state annihilated by the ZZ-XX chain"),
        Claim("k_body", True, "antipodal circulant graph state: three-body MITE for N >= 8", size=3),
        Claim("k_body", False, "no four-body MITE for a stabilizer state with a two-body parent", size=4),
        Claim("witness", False, "the graph generator on site 1 is a four-body stabilizer", element=k1),
        Claim("l_local", True, "antipodal circulant graph state: (N/2-1)-local MITE", size=n // 2 - 1),
    )
    return ModelBundle("g1", graph_to_stabilizer(graph), graph, g1_hamiltonian(n, j), {"j": Fraction(j)}, claims)


def g2_hamiltonian(n: int, j1: Any = 1, j2: Any = 1, j3: Any = 1) -> PauliHamiltonian:
    """
    H = sum_i J1 (Z_i Z_{i+2} - X_i X_{i+1}) + J2 (Z_i Z_{i+1} - X_i)
              + J3 (Y_i Z_{i+1} - Z_i Y_{i+1})
    """
    j1, j2, j3 = Fraction(j1), Fraction(j2), Fraction(j3)
    terms: Dict[PauliString, Fraction] = {}
    for i in range(1, n + 1):
        _add(terms, _term(n, {i: "Z", i + 2: "Z"}), j1)
        _add(terms, _term(n, {i: "X", i + 1: "X"}), -j1)
        _add(terms, _term(n, {i: "Z", i + 1: "Z"}), j2)
        _add(terms, _term(n, {i: "X"}), -j2)
        _add(terms, _term(n, {i: "Y", i + 1: "Z"}), j3)
        _add(terms, _term(n, {i: "Z", i + 1: "Y"}), -j3)
    return PauliHamiltonian(n, terms)


def g2_bundle_pairs(n: int) -> Dict[str, Tuple[PauliString, PauliString]]:
    """
    One (P, Q) pair per coupling whose translation orbit assembles that
    coupling's bracket; every pair has a = +1.
    """
    h = (n - 1) // 2
    return {
        "j1": (_term(n, {1 + h: "Z", 3 + h: "Z"}), _term(n, {1: "X", 2: "X"})),
        "j2": (_term(n, {1 + h: "Z", 2 + h: "Z"}), _term(n, {1: "X"})),
        # K^(j-h) K^(j) = + Y_{j-h} Y_j Z_{j+1} Z_{j-h-1}, taken at j = 1
        "j3": (_term(n, {1: "Y", 2: "Z"}), _term(n, {-h: "Z", 1 - h: "Y"})),
    }


def g2_model(n: int, j1: Any = 1, j2: Any = 1, j3: Any = 1) -> ModelBundle:
    graph = g2_graph(n)
    half = (n - 1) // 2
    claims = (
        Claim("zero_energy", True, "star-shaped cluster state is a zero-energy eigenstate for arbitrary real couplings"),
        Claim("k_body", True, "star-shaped cluster state: two-body MITE", size=2),
        Claim("k_body", False, "star-shaped cluster state: three-body stabilizers exist", size=3),
        Claim("l_local", True, "star-shaped cluster state: ((N-1)/2)-local MITE", size=half),
    )
    couplings = {"j1": Fraction(j1), "j2": Fraction(j2), "j3": Fraction(j3)}
    return ModelBundle("g2", graph_to_stabilizer(graph), graph, g2_hamiltonian(n, j1, j2, j3), couplings, claims)


def cluster_1d_model(n: int) -> ModelBundle:
    """Cycle-graph cluster state; stabilizers act on three consecutive sites."""
    graph = cycle_graph(n)
    claims: Tuple[Claim, ...] = ()
    if n >= 5:
        claims = (
            Claim("l_local", False, "1D cluster state: three-site stabilizers break 3-local MITE", size=3),
            Claim("l_local", True, "1D cluster state: 2-local MITE", size=2),
            Claim("k_body", True, "1D cluster state: lightest stabilizers have weight 3", size=2),
        )
    return ModelBundle("cluster", graph_to_stabilizer(graph), graph, claims=claims)


_REGISTRY: Dict[str, Tuple[Callable[..., ModelBundle], Tuple[str, ...], str]] = {
    "eap": (eap_model, ("n",), "entangled antipodal pairs (N even >= 4)"),
    "g1": (g1_model, ("n", "j"), "antipodal circulant graph state with its ZZ-XX parent (N even >= 8)"),
    "g2": (g2_model, ("n", "j1", "j2", "j3"), "star-shaped cluster state with its three-coupling parent (N odd >= 5)"),
    "cluster": (cluster_1d_model, ("n",), "1D cluster state on a ring (N >= 3)"),
}


def get_model(name: str, n: int, **couplings: Any) -> ModelBundle:
    """
    Build a model by registry name.

    Args:
        name: One of list_models()
        n: System size
        **couplings: Coupling values accepted by that model; None entries are ignored

    Returns:
        ModelBundle
    """
    key = clean_token(name)
    if key not in _REGISTRY:
        raise ValidationError(f"unknown model {name!r}; choose from {sorted(_REGISTRY)}", model=name)
    builder, parameters, _ = _REGISTRY[key]
    accepted = {k: v for k, v in couplings.items() if v is not None and k in parameters}
    ignored = sorted(k for k, v in couplings.items() if v is not None and k not in parameters)
    if ignored:
        logger.warning("model %s ignores parameters %s", key, ignored)
    return builder(n, **accepted)


def list_models() -> pd.DataFrame:
    return pd.DataFrame(
        [{"name": name, "parameters": ", ".join(parameters), "description": description}
         for name, (_, parameters, description) in sorted(_REGISTRY.items())],
        columns=["name", "parameters", "description"],
    )


def export_files(bundle: ModelBundle) -> Dict[str, str]:
    """File name -> contents for the tableau, graph and Hamiltonian formats."""
    files = {f"{bundle.name}_n{bundle.n_qubits}.tableau": bundle.tableau.to_text()}
    if bundle.graph is not None:
        files[f"{bundle.name}_n{bundle.n_qubits}.graph"] = bundle.graph.to_text()
        files[f"{bundle.name}_n{bundle.n_qubits}.dot"] = bundle.graph.to_dot(bundle.name)
    if bundle.hamiltonian is not None:
        files[f"{bundle.name}_n{bundle.n_qubits}.ham"] = bundle.hamiltonian.to_text()
    return files
