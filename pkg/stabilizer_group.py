"""Maximal stabilizer groups held as row-reduced generator tableaux."""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from errors import (
    DependentGeneratorError,
    DimensionMismatch,
    MinusIdentityError,
    NonCommutingError,
    NonHermitianGeneratorError,
    NonHermitianOperatorError,
    NotMaximalError,
    PauliParseError,
    TableauParseError,
)
from pauli_core import PauliString, Support, commutes, multiply, multiply_all, phase_between, to_text
from utils import colex_combinations

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupElementWitness:
    """Certificate that sign * p is the product of the flagged generators."""

    coefficients: Tuple[int, ...]
    sign: int

    def to_dict(self):
        return {"coefficients": list(self.coefficients), "sign": self.sign}


def _lowest_bit(value: int) -> int:
    return (value & -value).bit_length() - 1


class _RowReducer:
    """Incremental GF(2) row reduction of Pauli rows with phase tracking."""

    def __init__(self, n_qubits: int):
        self.n_qubits = n_qubits
        self.rows: List[PauliString] = []
        self.pivots: List[int] = []

    def reduce(self, p: PauliString) -> PauliString:
        vector = p.symplectic
        for row, pivot in zip(self.rows, self.pivots):
            if vector >> pivot & 1:
                p = multiply(p, row)
                vector = p.symplectic
        return p

    def insert(self, reduced: PauliString) -> None:
        pivot = _lowest_bit(reduced.symplectic)
        for index, row in enumerate(self.rows):
            if row.symplectic >> pivot & 1:
                self.rows[index] = multiply(row, reduced)
        self.rows.append(reduced)
        self.pivots.append(pivot)

    def sorted_rows(self) -> List[PauliString]:
        order = sorted(range(len(self.rows)), key=lambda index: self.pivots[index])
        return [self.rows[index] for index in order]


@dataclass(frozen=True)
class StabilizerTableau:
    """
    N commuting, independent, Hermitian generators in row-reduced echelon form.

    Columns are ordered x_1..x_N then z_1..z_N; row i has its pivot in the
    i-th lowest pivot column and zeros in every other pivot column.
    """

    n_qubits: int
    generators: Tuple[PauliString, ...]

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(_lowest_bit(row.symplectic) for row in self.generators)

    def to_text(self) -> str:
        lines = [f"N={self.n_qubits}"]
        lines.extend(to_text(row) for row in self.generators)
        return "\n".join(lines) + "\n"

    def is_translation_invariant(self) -> bool:
        """True iff every generator shifted by one site is a +1 element."""
        for row in self.generators:
            witness = membership(self, row.translate(1))
            if witness is None or witness.sign != 1:
                return False
        return True

    def to_dict(self):
        return {"n_qubits": self.n_qubits, "generators": [to_text(row) for row in self.generators]}


def from_generators(gens: Sequence[PauliString]) -> StabilizerTableau:
    """
    Validate a generating set and bring it to canonical form.

    Args:
        gens: N Hermitian Pauli strings on N qubits

    Returns:
        Validated StabilizerTableau
    """
    if not gens:
        raise NotMaximalError("a stabilizer group needs generators", count=0)
    n_qubits = gens[0].n_qubits
    for index, gen in enumerate(gens):
        if gen.n_qubits != n_qubits:
            raise DimensionMismatch("generators act on different qubit counts", index=index + 1)
        if not gen.is_hermitian:
            raise NonHermitianGeneratorError(f"generator {index + 1} ({to_text(gen)}) is not Hermitian", index=index + 1)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not commutes(gens[i], gens[j]):
                raise NonCommutingError(
                    f"generators {i + 1} and {j + 1} anticommute",
                    pair=[i + 1, j + 1],
                )
    reducer = _RowReducer(n_qubits)
    for index, gen in enumerate(gens):
        reduced = reducer.reduce(gen)
        if reduced.is_identity:
            if reduced.relative_phase == 2:
                raise MinusIdentityError(f"generator {index + 1} closes a relation equal to -I", index=index + 1)
            raise DependentGeneratorError(f"generator {index + 1} is a product of earlier generators", index=index + 1)
        reducer.insert(reduced)
    if len(reducer.rows) != n_qubits:
        raise NotMaximalError(
            f"{len(reducer.rows)} independent generators on {n_qubits} qubits; the group is not maximal",
            count=len(reducer.rows),
        )
    return StabilizerTableau(n_qubits, tuple(reducer.sorted_rows()))


def _reduce_against(t: StabilizerTableau, p: PauliString) -> Tuple[PauliString, List[int], PauliString]:
    vector = p.symplectic
    coefficients = [0] * t.n_qubits
    product = PauliString.identity(t.n_qubits)
    for index, (row, pivot) in enumerate(zip(t.generators, t.pivots)):
        if vector >> pivot & 1:
            vector ^= row.symplectic
            product = multiply(product, row)
            coefficients[index] = 1
    residual = PauliString(t.n_qubits, vector & ((1 << t.n_qubits) - 1), vector >> t.n_qubits)
    return residual, coefficients, product


def membership(t: StabilizerTableau, p: PauliString) -> Optional[GroupElementWitness]:
    """
    Decide whether +p or -p belongs to the group.

    Args:
        t: Stabilizer tableau
        p: Hermitian Pauli string

    Returns:
        Witness with sign s such that s*p is in the group, or None
    """
    if p.n_qubits != t.n_qubits:
        raise DimensionMismatch("operator and tableau differ in qubit count", left=p.n_qubits, right=t.n_qubits)
    residual, coefficients, product = _reduce_against(t, p)
    if not residual.is_identity:
        return None
    relative = phase_between(p, product)
    if relative not in (0, 2):
        raise NonHermitianOperatorError(f"{to_text(p)} is not Hermitian", operator=to_text(p))
    return GroupElementWitness(tuple(coefficients), 1 if relative == 0 else -1)


def expectation(t: StabilizerTableau, p: PauliString) -> int:
    """
    <psi_G|p|psi_G> for a Hermitian Pauli string: +1, -1 or 0.

    Args:
        t: Stabilizer tableau
        p: Hermitian Pauli string

    Returns:
        Exact expectation value
    """
    witness = membership(t, p)
    if witness is None:
        return 0
    return witness.sign


def coset_representative(t: StabilizerTableau, p: PauliString) -> PauliString:
    """Canonical prefactor-1 representative of the coset p*G (identity for G itself)."""
    residual, _, _ = _reduce_against(t, p)
    return residual.bare()


def _canonical_rows(rows: Iterable[PauliString], n_qubits: int) -> List[PauliString]:
    reducer = _RowReducer(n_qubits)
    for row in rows:
        reduced = reducer.reduce(row)
        if not reduced.is_identity:
            reducer.insert(reduced)
    return reducer.sorted_rows()


def subgroup_supported_in(t: StabilizerTableau, a: Support) -> List[PauliString]:
    """
    Generators of the elements of G whose support lies inside `a`.

    The restriction of each generator to the sites outside `a` is reduced
    over GF(2); combinations that vanish there are exactly the elements
    supported in `a`. An empty result means the reduced state on `a` is
    maximally mixed.

    Args:
        t: Stabilizer tableau
        a: Subsystem

    Returns:
        Canonical generators of the supported subgroup
    """
    n = t.n_qubits
    inside = a.mask
    outside = ((1 << n) - 1) & ~inside
    outside_vector = outside | (outside << n)
    restricted: List[int] = []
    combos: List[int] = []
    pivots: List[int] = []
    kernel: List[int] = []
    for index, row in enumerate(t.generators):
        vector = row.symplectic & outside_vector
        combo = 1 << index
        for k, pivot in enumerate(pivots):
            if vector >> pivot & 1:
                vector ^= restricted[k]
                combo ^= combos[k]
        if vector == 0:
            kernel.append(combo)
        else:
            restricted.append(vector)
            combos.append(combo)
            pivots.append(_lowest_bit(vector))
    elements = [multiply_all((row for index, row in enumerate(t.generators) if combo >> index & 1), n)
                for combo in kernel]
    return _canonical_rows(elements, n)


def span(rows: Sequence[PauliString], n_qubits: int) -> List[PauliString]:
    """All 2^len(rows) products of the given commuting rows, identity excluded."""
    return [multiply_all((row for index, row in enumerate(rows) if mask >> index & 1), n_qubits)
            for mask in range(1, 1 << len(rows))]


def min_weight(t: StabilizerTableau, bound: int) -> Optional[int]:
    """
    delta(G), the least weight of a nonidentity element, if it is <= bound.

    Every support of size j = 1..bound is scanned in colex order, so the
    cost is sum_{j<=bound} C(N, j) row reductions of an N x 2N matrix.

    Args:
        t: Stabilizer tableau
        bound: Largest weight to look for

    Returns:
        delta(G) or None when delta(G) > bound
    """
    for size in range(1, min(bound, t.n_qubits) + 1):
        for subset in colex_combinations(t.n_qubits, size):
            if subgroup_supported_in(t, Support.of(site + 1 for site in subset)):
                logger.debug("weight-%d element found on %s", size, subset)
                return size
    return None


def parse_tableau(text: str) -> StabilizerTableau:
    """
    Parse the tableau file format: `N=<n>` then one Pauli string per line.

    Args:
        text: File contents

    Returns:
        Validated StabilizerTableau
    """
    lines = [(number, line.strip()) for number, line in enumerate(text.splitlines(), 1)]
    lines = [(number, line) for number, line in lines if line and not line.startswith("#")]
    if not lines or not lines[0][1].upper().startswith("N="):
        raise TableauParseError("missing `N=<n>` header", line=lines[0][0] if lines else 1)
    header_line, header = lines[0]
    try:
        n_qubits = int(header.split("=", 1)[1])
    except ValueError:
        raise TableauParseError(f"line {header_line}: bad header {header!r}", line=header_line)
    gens = []
    for number, line in lines[1:]:
        try:
            gens.append(PauliString.parse(line, n_qubits))
        except PauliParseError as exc:
            raise TableauParseError(f"line {number}: {exc.message}", line=number)
    return from_generators(gens)


def validate_tableau_text(text: str) -> Tuple[bool, str]:
    """
    Check a tableau file before use.

    Returns:
        Tuple of (is_valid: bool, message: str)
    """
    try:
        tableau = parse_tableau(text)
    except Exception as e:
        return False, f"Invalid tableau: {str(e)}"
    return True, f"Tableau validated: {tableau.n_qubits} qubits, {len(tableau.generators)} generators."


# Six invertible 2x2 matrices over GF(2), acting on (x, z) of one site.
_LOCAL_SYMPLECTIC = (
    ((1, 0), (0, 1)),
    ((0, 1), (1, 0)),
    ((1, 1), (0, 1)),
    ((1, 0), (1, 1)),
    ((0, 1), (1, 1)),
    ((1, 1), (1, 0)),
)


def random_stabilizer_tableau(n_qubits: int, rng: np.random.Generator, edge_probability: float = 0.5) -> StabilizerTableau:
    """
    Random maximal stabilizer group: a random graph state dressed with
    random single-site symplectic relabelings and random generator signs.

    Local relabelings preserve supports, so delta(G) follows the graph.

    Args:
        n_qubits: Number of qubits
        rng: numpy Generator
        edge_probability: G(n, p) edge probability

    Returns:
        Validated StabilizerTableau
    """
    upper = np.triu(rng.random((n_qubits, n_qubits)) < edge_probability, k=1)
    adjacency = upper | upper.T
    local = [_LOCAL_SYMPLECTIC[int(choice)] for choice in rng.integers(0, len(_LOCAL_SYMPLECTIC), size=n_qubits)]
    signs = rng.integers(0, 2, size=n_qubits)
    gens = []
    for i in range(n_qubits):
        x_bits = z_bits = 0
        for s in range(n_qubits):
            x, z = (1 if s == i else 0), int(adjacency[i, s])
            (a, b), (c, d) = local[s]
            new_x, new_z = (a * x + b * z) % 2, (c * x + d * z) % 2
            x_bits |= new_x << s
            z_bits |= new_z << s
        phase = (x_bits & z_bits).bit_count() + 2 * int(signs[i])
        gens.append(PauliString(n_qubits, x_bits, z_bits, phase))
    return from_generators(gens)


def five_qubit_code_tableau() -> StabilizerTableau:
    """Cyclic XZZXI stabilizers completed by the logical ZZZZZ."""
    gens = [PauliString.from_label("XZZXI").translate(shift) for shift in range(4)]
    gens.append(PauliString.from_label("ZZZZZ"))
    return from_generators(gens)
