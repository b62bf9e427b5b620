"""Graphs, graph-state stabilizers, the circulant families and a statevector oracle."""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from errors import EvenNError, GraphParseError, OddNError, TooLargeError, TooSmallError
from pauli_core import PauliString
from stabilizer_group import StabilizerTableau, from_generators

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_LIMIT = 14


@dataclass(frozen=True)
class Graph:
    """
    Simple undirected graph on vertices 1..N.

    `neighbors[v-1]` is the bit mask of the vertices adjacent to v, so the
    masks form the symmetric zero-diagonal adjacency matrix over GF(2).
    """

    n_vertices: int
    neighbors: Tuple[int, ...]

    def __post_init__(self):
        if len(self.neighbors) != self.n_vertices:
            raise GraphParseError("one neighbour mask per vertex is required", n_vertices=self.n_vertices)
        for v, mask in enumerate(self.neighbors):
            if mask >> v & 1:
                raise GraphParseError(f"self-loop on vertex {v + 1}", vertex=v + 1)
            for u in range(self.n_vertices):
                if (mask >> u & 1) != (self.neighbors[u] >> v & 1):
                    raise GraphParseError(f"adjacency of {v + 1} and {u + 1} is not symmetric", pair=[v + 1, u + 1])

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        masks = [0] * n_vertices
        for i, j in edges:
            if not (1 <= i <= n_vertices and 1 <= j <= n_vertices):
                raise GraphParseError(f"edge {{{i},{j}}} outside 1..{n_vertices}", edge=[i, j])
            if i == j:
                raise GraphParseError(f"self-loop on vertex {i}", vertex=i)
            masks[i - 1] |= 1 << (j - 1)
            masks[j - 1] |= 1 << (i - 1)
        return cls(n_vertices, tuple(masks))

    @classmethod
    def from_networkx(cls, graph: nx.Graph, n_vertices: Optional[int] = None) -> "Graph":
        """networkx graphs are read with 0-based integer labels."""
        n = n_vertices if n_vertices is not None else graph.number_of_nodes()
        return cls.from_edges(n, ((int(u) + 1, int(v) + 1) for u, v in graph.edges()))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(1, self.n_vertices + 1))
        graph.add_edges_from(self.edges())
        return graph

    def edges(self) -> List[Tuple[int, int]]:
        return [(i, j) for i in range(1, self.n_vertices + 1) for j in range(i + 1, self.n_vertices + 1)
                if self.neighbors[i - 1] >> (j - 1) & 1]

    def neighborhood(self, vertex: int) -> List[int]:
        mask = self.neighbors[vertex - 1]
        return [u + 1 for u in range(self.n_vertices) if mask >> u & 1]

    def adjacency_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.n_vertices, self.n_vertices), dtype=np.uint8)
        for i, j in self.edges():
            matrix[i - 1, j - 1] = matrix[j - 1, i - 1] = 1
        return matrix

    def relabel(self, perm: Dict[int, int]) -> "Graph":
        """Image of the graph under the 1-based vertex permutation `perm`."""
        return Graph.from_edges(self.n_vertices, ((perm[i], perm[j]) for i, j in self.edges()))

    def is_circulant(self) -> bool:
        shift = {v: v % self.n_vertices + 1 for v in range(1, self.n_vertices + 1)}
        return self.relabel(shift) == self

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        lines.extend(f"  {v};" for v in range(1, self.n_vertices + 1))
        lines.extend(f"  {i} -- {j};" for i, j in self.edges())
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [f"N={self.n_vertices}"]
        lines.extend(f"{i} {j}" for i, j in self.edges())
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """
    Parse the graph file format: `N=<n>` then one `i j` edge per line.

    Args:
        text: File contents

    Returns:
        Graph
    """
    lines = [(number, line.strip()) for number, line in enumerate(text.splitlines(), 1)]
    lines = [(number, line) for number, line in lines if line and not line.startswith("#")]
    if not lines or not lines[0][1].upper().startswith("N="):
        raise GraphParseError("missing `N=<n>` header", line=lines[0][0] if lines else 1)
    try:
        n_vertices = int(lines[0][1].split("=", 1)[1])
    except ValueError:
        raise GraphParseError(f"line {lines[0][0]}: bad header", line=lines[0][0])
    edges = []
    for number, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2 or not all(part.isdigit() for part in parts):
            raise GraphParseError(f"line {number}: expected `i j`", line=number)
        edges.append((int(parts[0]), int(parts[1])))
    return Graph.from_edges(n_vertices, edges)


def validate_graph_text(text: str) -> Tuple[bool, str]:
    """
    Check a graph file before use.

    Returns:
        Tuple of (is_valid: bool, message: str)
    """
    try:
        graph = parse_graph(text)
    except Exception as e:
        return False, f"Invalid graph: {str(e)}"
    return True, f"Graph validated: {graph.n_vertices} vertices, {len(graph.edges())} edges."


def _circulant(n: int, offsets: Sequence[int]) -> Graph:
    edges = set()
    for i in range(n):
        for offset in offsets:
            j = (i + offset) % n
            if i != j:
                edges.add((min(i, j) + 1, max(i, j) + 1))
    return Graph.from_edges(n, sorted(edges))


def g1_graph(n: int) -> Graph:
    """
    Antipodal circulant graph: vertex i is joined to i+N/2-1, i+N/2 and
    i+N/2+1, generated by the edges {i, i+N/2-1} and {i, i+N/2}.
    """
    if n % 2:
        raise OddNError(f"N={n} must be even", n=n)
    if n < 8:
        raise TooSmallError(f"N={n} must be at least 8", n=n)
    return _circulant(n, (n // 2 - 1, n // 2))


def g2_graph(n: int) -> Graph:
    """Star-shaped cycle: vertex i is joined to i +- (N-1)/2."""
    if n % 2 == 0:
        raise EvenNError(f"N={n} must be odd", n=n)
    if n < 5:
        raise TooSmallError(f"N={n} must be at least 5", n=n)
    return _circulant(n, ((n - 1) // 2,))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise TooSmallError(f"N={n} must be at least 3", n=n)
    return _circulant(n, (1,))


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def random_graph(n: int, p: float, seed: int) -> Graph:
    return Graph.from_networkx(nx.gnp_random_graph(n, p, seed=seed), n)


def find_isomorphism(g: Graph, h: Graph) -> Optional[Dict[int, int]]:
    """A vertex map taking g onto h, or None (networkx VF2 search)."""
    matcher = nx.algorithms.isomorphism.GraphMatcher(g.to_networkx(), h.to_networkx())
    if not matcher.is_isomorphic():
        return None
    return {int(u): int(v) for u, v in matcher.mapping.items()}


def graph_generator(g: Graph, vertex: int) -> PauliString:
    """K^(i) = X_i prod_{j ~ i} Z_j."""
    return PauliString(g.n_vertices, 1 << (vertex - 1), g.neighbors[vertex - 1], 0)


def graph_to_stabilizer(g: Graph) -> StabilizerTableau:
    return from_generators([graph_generator(g, v) for v in range(1, g.n_vertices + 1)])


def _check_oracle(n: int, limit: int) -> None:
    if n > limit:
        raise TooLargeError(
            f"statevector on {n} qubits needs {16 * 2 ** n} bytes; the oracle limit is N={limit}",
            n=n,
            limit=limit,
        )


def _parity(values: np.ndarray) -> np.ndarray:
    values = values.copy()
    shift = 32
    while shift:
        values ^= values >> shift
        shift //= 2
    return values & 1


def statevector(g: Graph, limit: int = DEFAULT_ORACLE_LIMIT) -> np.ndarray:
    """
    Amplitudes of prod CZ_ij |+>^N; basis index bit s-1 holds site s.

    Args:
        g: Graph
        limit: Largest N accepted

    Returns:
        Normalized complex vector of length 2^N
    """
    n = g.n_vertices
    _check_oracle(n, limit)
    basis = np.arange(2 ** n, dtype=np.int64)
    signs = np.zeros(2 ** n, dtype=np.int64)
    for i, j in g.edges():
        signs ^= (basis >> (i - 1)) & (basis >> (j - 1)) & 1
    return (1 - 2 * signs).astype(np.complex128) / np.sqrt(2.0 ** n)


def apply_pauli(p: PauliString, vector: np.ndarray) -> np.ndarray:
    """p|vector> with the same bit convention as `statevector`."""
    basis = np.arange(vector.shape[0], dtype=np.int64)
    z_sign = 1 - 2 * _parity(basis & p.z_bits)
    phase = 1j ** p.phase_exp
    result = np.empty_like(vector)
    # X^x Z^z |b> = (-1)^{z.b} |b ^ x>
    result[basis ^ p.x_bits] = phase * z_sign * vector
    return result


def reduced_density_matrix(vector: np.ndarray, sites: Sequence[int], n: int) -> np.ndarray:
    """Partial trace onto `sites` (1-based), ordered as given."""
    tensor = vector.reshape([2] * n)
    # numpy axis 0 is the most significant bit, i.e. site n
    keep = [n - site for site in sites]
    traced = [axis for axis in range(n) if axis not in keep]
    psi = np.transpose(tensor, keep + traced).reshape(2 ** len(keep), -1)
    return psi @ psi.conj().T


def is_maximally_mixed(rho: np.ndarray, tolerance: float = 1e-12) -> bool:
    """Trace-norm distance to I/d below tolerance."""
    dimension = rho.shape[0]
    eigenvalues = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    return float(np.abs(eigenvalues - 1.0 / dimension).sum()) < tolerance
