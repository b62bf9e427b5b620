"""
Zero-energy parent Hamiltonians of stabilizer states.

Synthesis runs forwards: every stabilizer element g = a*P*Q gives an
annihilating bundle P - a*Q, and real combinations of bundles are re-expanded
into a traceless Pauli Hamiltonian. Decomposition runs backwards: the terms
of a Hamiltonian are grouped into classes P ~ Q (some phase a puts a*P*Q in
the group) and each class must balance for the state to be annihilated.

Coefficients stay exact throughout: real ones as Fraction, complex ones as
sympy Gaussian rationals.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy

from errors import (
    ClaimCheckError,
    DimensionMismatch,
    HamiltonianParseError,
    NonHermitianOperatorError,
    NonHermitianResultError,
    NotAnnihilatingError,
    PauliParseError,
    ValidationError,
)
from pauli_core import PauliString, Support, commutes, multiply, to_text
from stabilizer_group import (
    StabilizerTableau,
    coset_representative,
    expectation,
    membership,
    min_weight,
    span,
    subgroup_supported_in,
)
from utils import colex_combinations, format_rational, map_chunks, parse_rational

logger = logging.getLogger(__name__)

_I_POWERS = (sympy.Integer(1), sympy.I, sympy.Integer(-1), -sympy.I)
_PHASE_TEXT = {0: "+1", 1: "+i", 2: "-1", 3: "-i"}
_OTHER_LETTERS = {"X": ("Y", "Z"), "Y": ("X", "Z"), "Z": ("X", "Y")}


def _to_sympy(value: Any) -> sympy.Expr:
    """Exact sympy number from int, Fraction, decimal text, float or complex."""
    if isinstance(value, sympy.Basic):
        return sympy.nsimplify(value, rational=True) if value.has(sympy.Float) else value
    if isinstance(value, complex):
        return _to_sympy(value.real) + sympy.I * _to_sympy(value.imag)
    if isinstance(value, str):
        value = parse_rational(value)
    fraction = Fraction(value)
    return sympy.Rational(fraction.numerator, fraction.denominator)


def _real_fraction(value: sympy.Expr) -> Optional[Fraction]:
    """Fraction for a real exact value, None when an imaginary part survives."""
    real, imaginary = sympy.expand(value).as_real_imag()
    if imaginary != 0:
        return None
    real = sympy.Rational(real)
    return Fraction(int(real.p), int(real.q))


def _sympy_text(value: sympy.Expr) -> str:
    return sympy.sstr(sympy.expand(value))


class PauliHamiltonian:
    """
    Traceless Hermitian Hamiltonian H = sum_P h(P) P over prefactor-1 strings.

    Keys are stored in bare form; a string given with sign -1 folds its sign
    into the coefficient. Zero coefficients are dropped.
    """

    def __init__(self, n_qubits: int, terms: Optional[Mapping[PauliString, Any]] = None):
        self.n_qubits = n_qubits
        collected: Dict[PauliString, Fraction] = {}
        for p, coefficient in (terms or {}).items():
            if p.n_qubits != n_qubits:
                raise DimensionMismatch("term and Hamiltonian differ in qubit count", left=p.n_qubits, right=n_qubits)
            if not p.is_hermitian:
                raise NonHermitianOperatorError(f"{to_text(p)} is not Hermitian", operator=to_text(p))
            if p.is_identity:
                raise HamiltonianParseError("identity term in a traceless Hamiltonian", operator=to_text(p))
            key = p.bare()
            collected[key] = collected.get(key, Fraction(0)) + Fraction(coefficient) * p.sign
        ordered = sorted(collected.items(), key=lambda item: item[0].sort_key())
        self._terms: Dict[PauliString, Fraction] = {p: value for p, value in ordered if value != 0}

    @property
    def terms(self) -> Dict[PauliString, Fraction]:
        return dict(self._terms)

    def coefficient(self, p: PauliString) -> Fraction:
        return self._terms.get(p.bare(), Fraction(0)) * (p.sign if p.is_hermitian else 1)

    @cached_property
    def locality(self) -> int:
        return max((p.weight for p in self._terms), default=0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliHamiltonian):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self._terms == other._terms

    def __add__(self, other: "PauliHamiltonian") -> "PauliHamiltonian":
        merged = dict(self._terms)
        for p, value in other:
            merged[p] = merged.get(p, Fraction(0)) + value
        return PauliHamiltonian(self.n_qubits, merged)

    def scaled(self, factor: Any) -> "PauliHamiltonian":
        factor = Fraction(factor)
        return PauliHamiltonian(self.n_qubits, {p: value * factor for p, value in self._terms.items()})

    def to_text(self) -> str:
        """Hamiltonian file: `N=<n>` then one `coefficient<TAB>PauliString` line per term."""
        lines = [f"N={self.n_qubits}"]
        lines.extend(f"{format_rational(value)}\t{to_text(p)}" for p, value in self._terms.items())
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "n_qubits": self.n_qubits,
            "locality": self.locality,
            "terms": [{"pauli": to_text(p), "coefficient": value} for p, value in self._terms.items()],
        }

    def __repr__(self) -> str:
        return f"PauliHamiltonian(n_qubits={self.n_qubits}, terms={len(self._terms)})"


def parse_hamiltonian(text: str) -> PauliHamiltonian:
    """
    Parse a Hamiltonian file.

    Args:
        text: `N=<n>` header followed by `coefficient<TAB>PauliString` lines

    Returns:
        PauliHamiltonian
    """
    lines = [(number, line.strip()) for number, line in enumerate(text.splitlines(), 1)]
    lines = [(number, line) for number, line in lines if line and not line.startswith("#")]
    if not lines or not lines[0][1].upper().startswith("N="):
        raise HamiltonianParseError("missing `N=<n>` header", line=lines[0][0] if lines else 1)
    try:
        n_qubits = int(lines[0][1].split("=", 1)[1])
    except ValueError:
        raise HamiltonianParseError(f"line {lines[0][0]}: bad header", line=lines[0][0])
    terms: Dict[PauliString, Fraction] = {}
    for number, line in lines[1:]:
        parts = line.split("\t", 1) if "\t" in line else line.split(None, 1)
        if len(parts) != 2:
            raise HamiltonianParseError(f"line {number}: expected `coefficient<TAB>PauliString`", line=number)
        try:
            coefficient = parse_rational(parts[0])
            p = PauliString.parse(parts[1], n_qubits)
        except (ValueError, ZeroDivisionError, PauliParseError) as exc:
            raise HamiltonianParseError(f"line {number}: {exc}", line=number)
        if p.is_identity:
            raise HamiltonianParseError(f"line {number}: identity term in a traceless Hamiltonian", line=number)
        if not p.is_hermitian:
            raise HamiltonianParseError(f"line {number}: {to_text(p)} is not Hermitian", line=number)
        key = p.bare()
        terms[key] = terms.get(key, Fraction(0)) + coefficient * p.sign
    return PauliHamiltonian(n_qubits, terms)


def validate_hamiltonian_text(text: str) -> Tuple[bool, str]:
    """
    Check a Hamiltonian file before use.

    Returns:
        Tuple of (is_valid: bool, message: str)
    """
    try:
        h = parse_hamiltonian(text)
    except Exception as e:
        return False, f"Invalid Hamiltonian: {str(e)}"
    return True, f"Hamiltonian validated: {len(h)} terms, locality {h.locality}."


@dataclass(frozen=True)
class Factorization:
    """A group element written as g = a * P * Q with a = i^a_exp."""

    g: PauliString
    p: PauliString
    q: PauliString
    a_exp: int

    def __post_init__(self):
        object.__setattr__(self, "a_exp", self.a_exp % 4)
        if self.p.is_identity or self.q.is_identity:
            raise ValidationError("factors must differ from the identity", g=to_text(self.g))
        if multiply(self.p, self.q).with_phase(self.a_exp) != self.g:
            raise ValidationError(
                f"a*P*Q does not reproduce {to_text(self.g)}",
                p=to_text(self.p),
                q=to_text(self.q),
            )

    @property
    def a(self) -> complex:
        return 1j ** self.a_exp

    @property
    def a_text(self) -> str:
        return _PHASE_TEXT[self.a_exp]

    @property
    def is_real_phase(self) -> bool:
        return self.a_exp in (0, 2)

    def reversed(self) -> "Factorization":
        """The (Q, P) entry; a_{Q,P} = a_{P,Q}^{-1} for the same element."""
        return Factorization(self.g, self.q, self.p, -self.a_exp)

    def sort_key(self):
        return (self.g.sort_key(), self.p.sort_key(), self.q.sort_key())

    def to_dict(self):
        return {"g": to_text(self.g), "p": to_text(self.p), "q": to_text(self.q), "a": self.a_text}


def _elements_in_chunk(subsets: Sequence[Tuple[int, ...]], offset: int, t: StabilizerTableau) -> Dict[int, PauliString]:
    found: Dict[int, PauliString] = {}
    for subset in subsets:
        rows = subgroup_supported_in(t, Support.of(site + 1 for site in subset))
        for element in span(rows, t.n_qubits):
            found.setdefault(element.symplectic, element)
    return found


def low_weight_elements(t: StabilizerTableau, bound: int, workers: int = 1) -> List[PauliString]:
    """
    Every nonidentity group element of weight <= bound, with its exact phase.

    Each such element lives inside some support of size exactly
    min(bound, N), so only those supports are scanned.
    """
    size = min(bound, t.n_qubits)
    subsets = list(colex_combinations(t.n_qubits, size))
    merged: Dict[int, PauliString] = {}
    for chunk in map_chunks(_elements_in_chunk, subsets, workers, t):
        for key, element in chunk.items():
            merged.setdefault(key, element)
    return sorted(merged.values(), key=lambda element: element.sort_key())


def _site_options(letter: str) -> List[Tuple[str, str]]:
    first, second = _OTHER_LETTERS[letter]
    return [("I", letter), (letter, "I"), (first, second), (second, first)]


def _split_element(g: PauliString, m: int) -> List[Factorization]:
    n = g.n_qubits
    letters = g.letters()
    sites = sorted(letters)
    outside = [site for site in range(1, n + 1) if site not in letters]
    found = []
    for choice in itertools.product(*(_site_options(letters[site]) for site in sites)):
        p_letters = {site: pair[0] for site, pair in zip(sites, choice) if pair[0] != "I"}
        q_letters = {site: pair[1] for site, pair in zip(sites, choice) if pair[1] != "I"}
        budget = m - max(len(p_letters), len(q_letters))
        if budget < 0:
            continue
        # shared letters outside supp(g) cancel in P*Q
        for extra in range(min(budget, len(outside)) + 1):
            for extra_sites in itertools.combinations(outside, extra):
                for extra_letters in itertools.product("XYZ", repeat=extra):
                    shared = dict(zip(extra_sites, extra_letters))
                    p = PauliString.from_sites(n, {**p_letters, **shared})
                    q = PauliString.from_sites(n, {**q_letters, **shared})
                    if p.is_identity or q.is_identity:
                        continue
                    a_exp = g.phase_exp - multiply(p, q).phase_exp
                    found.append(Factorization(g, p, q, a_exp))
    return found


def enumerate_factorizations(t: StabilizerTableau, m: int, workers: int = 1) -> List[Factorization]:
    """
    All factorizations g = a*P*Q with g in G\\{I} and |supp P|, |supp Q| <= m.

    Args:
        t: Stabilizer tableau
        m: Locality bound
        workers: Processes for the support scan

    Returns:
        Factorizations sorted by (g, P, Q); (P, Q) and (Q, P) are separate entries
    """
    if not 1 <= m <= t.n_qubits:
        raise ValidationError(f"locality bound m={m} outside 1..{t.n_qubits}", m=m)
    elements = low_weight_elements(t, 2 * m, workers)
    logger.debug("%d group elements of weight <= %d", len(elements), 2 * m)
    factorizations = []
    for g in elements:
        factorizations.extend(_split_element(g, m))
    factorizations.sort(key=lambda f: f.sort_key())
    return factorizations


def assemble(bundles: Iterable[Tuple[Factorization, Any]], n_qubits: Optional[int] = None) -> PauliHamiltonian:
    """
    Re-expand sum c * (P - a*Q) in the Pauli basis.

    Args:
        bundles: (factorization, coefficient) pairs; coefficients may be complex
        n_qubits: Qubit count, needed only when `bundles` is empty

    Returns:
        PauliHamiltonian with exact real coefficients
    """
    accumulated: Dict[PauliString, sympy.Expr] = {}
    for factorization, coefficient in bundles:
        if n_qubits is None:
            n_qubits = factorization.g.n_qubits
        elif factorization.g.n_qubits != n_qubits:
            raise DimensionMismatch("bundles act on different qubit counts", left=factorization.g.n_qubits, right=n_qubits)
        c = _to_sympy(coefficient)
        p, q = factorization.p, factorization.q
        accumulated[p.bare()] = accumulated.get(p.bare(), sympy.Integer(0)) + c * _I_POWERS[p.relative_phase]
        weight = -c * _I_POWERS[factorization.a_exp] * _I_POWERS[q.relative_phase]
        accumulated[q.bare()] = accumulated.get(q.bare(), sympy.Integer(0)) + weight
    if n_qubits is None:
        raise ValidationError("cannot size an empty Hamiltonian without n_qubits")
    terms: Dict[PauliString, Fraction] = {}
    offending = []
    for p, value in accumulated.items():
        real = _real_fraction(value)
        if real is None:
            offending.append(f"{to_text(p)}: {_sympy_text(value)}")
        else:
            terms[p] = real
    if offending:
        raise NonHermitianResultError(
            f"{len(offending)} coefficient(s) are not real: " + "; ".join(offending),
            offending=offending,
        )
    return PauliHamiltonian(n_qubits, terms)


def energy_moments(h: PauliHamiltonian, t: StabilizerTableau) -> Tuple[Fraction, Fraction]:
    """
    Exact <H> and <H^2> in the stabilizer state.

    Anticommuting pairs cancel in <H^2>, so only commuting products are
    evaluated, each through a membership query.

    Args:
        h: Hamiltonian
        t: Stabilizer tableau

    Returns:
        Tuple of (<H>, <H^2>)
    """
    if h.n_qubits != t.n_qubits:
        raise DimensionMismatch("Hamiltonian and tableau differ in qubit count", left=h.n_qubits, right=t.n_qubits)
    terms = list(h)
    first = sum((value * expectation(t, p) for p, value in terms), Fraction(0))
    second = sum((value * value for _, value in terms), Fraction(0))
    for i in range(len(terms)):
        p, hp = terms[i]
        for j in range(i + 1, len(terms)):
            q, hq = terms[j]
            if not commutes(p, q):
                continue
            product = multiply(p, q)
            value = expectation(t, product.bare()) * (1 if product.relative_phase == 0 else -1)
            second += 2 * hp * hq * value
    return first, second


def verify_zero_eigenstate(h: PauliHamiltonian, t: StabilizerTableau) -> bool:
    """True iff <H> = 0 and <H^2> = 0, i.e. H annihilates the stabilizer state."""
    first, second = energy_moments(h, t)
    return first == 0 and second == 0


def phase_in_group(t: StabilizerTableau, p: PauliString, q: PauliString) -> Optional[int]:
    """
    Exponent k with i^k * P * Q in G, or None when P and Q are not related.

    Args:
        t: Stabilizer tableau
        p: Hermitian Pauli string
        q: Hermitian Pauli string

    Returns:
        k in {0, 1, 2, 3} or None
    """
    product = multiply(p, q)
    witness = membership(t, product.bare())
    if witness is None:
        return None
    return ((0 if witness.sign == 1 else 2) - product.relative_phase) % 4


@dataclass(frozen=True)
class ClassEntry:
    """One equivalence class of the Hamiltonian's support."""

    representative: PauliString
    members: Tuple[PauliString, ...]
    coefficients: Tuple[Fraction, ...]
    class_size: int
    phases: Tuple[int, ...]

    def to_dict(self):
        return {
            "representative": to_text(self.representative),
            "n_P": self.class_size,
            "members": [
                {"pauli": to_text(p), "h": value, "a_rep": _PHASE_TEXT[phase]}
                for p, value, phase in zip(self.members, self.coefficients, self.phases)
            ],
        }


@dataclass(frozen=True)
class DecompositionCertificate:
    """
    Canonical c(P, Q) form of an annihilating Hamiltonian.

    `c_values[(P, Q)] = -(1/n_P) a_{Q,P} h(Q)` for P, Q in the same class,
    and `pair_phases[(P, Q)]` holds the exponent of a_{P,Q}.
    """

    n_qubits: int
    class_table: Tuple[ClassEntry, ...]
    c_values: Dict[Tuple[PauliString, PauliString], sympy.Expr] = field(compare=False)
    pair_phases: Dict[Tuple[PauliString, PauliString], int] = field(compare=False)

    def reconstruct(self) -> Dict[PauliString, Fraction]:
        """
        h'(R) from the c values over the full class of size n_P; the class
        members with h = 0 contribute (n_P - m) h(R) / n_P in closed form.
        """
        rebuilt: Dict[PauliString, Fraction] = {}
        for entry in self.class_table:
            n, m = entry.class_size, len(entry.members)
            for r, h_r in zip(entry.members, entry.coefficients):
                total = sympy.Rational(n - m, n) * _to_sympy(h_r)
                for q in entry.members:
                    total += self.c_values[(r, q)]
                    total -= self.c_values[(q, r)] * _I_POWERS[self.pair_phases[(q, r)]]
                value = _real_fraction(total)
                if value is None:
                    raise NonHermitianResultError(f"reconstructed h({to_text(r)}) is not real", operator=to_text(r))
                rebuilt[r] = value
        return rebuilt

    def balanced(self) -> bool:
        """Sum over Q of c(P, Q) vanishes for every P in every class."""
        for entry in self.class_table:
            for p in entry.members:
                if sympy.expand(sum(self.c_values[(p, q)] for q in entry.members)) != 0:
                    return False
        return True

    def bundles(self) -> List[Tuple[Factorization, sympy.Expr]]:
        """
        A finite bundle list with assemble(bundles()) == h exactly.

        Uses the class support size m in place of n_P:
        c(P, Q) = -(1/m) a_{Q,P} h(Q) for P != Q.
        """
        result = []
        for entry in self.class_table:
            m = len(entry.members)
            for p in entry.members:
                for q, h_q in zip(entry.members, entry.coefficients):
                    if p == q:
                        continue
                    c = -sympy.Rational(1, m) * _I_POWERS[self.pair_phases[(q, p)]] * _to_sympy(h_q)
                    a_exp = self.pair_phases[(p, q)]
                    g = multiply(p, q).with_phase(a_exp)
                    result.append((Factorization(g, p, q, a_exp), c))
        return result

    def to_dict(self):
        return {
            "n_qubits": self.n_qubits,
            "classes": [entry.to_dict() for entry in self.class_table],
            "c_values": [
                {"p": to_text(p), "q": to_text(q), "c": _sympy_text(value)}
                for (p, q), value in self.c_values.items()
            ],
        }


def _decompose_classes(groups: Sequence[Tuple[PauliString, Tuple[Tuple[PauliString, Fraction], ...]]],
                       offset: int, t: StabilizerTableau):
    entries = []
    for representative, items in groups:
        members = tuple(p for p, _ in items)
        coefficients = tuple(value for _, value in items)
        phases = tuple(phase_in_group(t, representative, p) for p in members)
        # sum_Q h(Q) a_{rep,Q}^{-1}
        balance = sum((_to_sympy(value) * _I_POWERS[-phase % 4] for value, phase in zip(coefficients, phases)),
                      sympy.Integer(0))
        if sympy.expand(balance) != 0:
            raise NotAnnihilatingError(
                f"class of {to_text(representative)} does not balance: {_sympy_text(balance)}",
                representative=to_text(representative),
                balance=_sympy_text(balance),
            )
        class_size = 2 ** t.n_qubits - (1 if representative.is_identity else 0)
        pair_phases = {(p, q): phase_in_group(t, p, q) for p in members for q in members}
        c_values = {}
        for p in members:
            for q, h_q in zip(members, coefficients):
                c_values[(p, q)] = sympy.expand(
                    -sympy.Rational(1, class_size) * _I_POWERS[pair_phases[(q, p)]] * _to_sympy(h_q)
                )
        entries.append((ClassEntry(representative, members, coefficients, class_size, phases), c_values, pair_phases))
    return entries


def decompose(h: PauliHamiltonian, t: StabilizerTableau, workers: int = 1) -> DecompositionCertificate:
    """
    Split h into classes and emit c(P, Q) = -(1/n_P) a_{Q,P} h(Q).

    Args:
        h: Traceless Hamiltonian
        t: Stabilizer tableau
        workers: Processes over classes

    Returns:
        DecompositionCertificate
    """
    if h.n_qubits != t.n_qubits:
        raise DimensionMismatch("Hamiltonian and tableau differ in qubit count", left=h.n_qubits, right=t.n_qubits)
    grouped: Dict[PauliString, List[Tuple[PauliString, Fraction]]] = {}
    for p, value in h:
        grouped.setdefault(coset_representative(t, p), []).append((p, value))
    groups = sorted(((rep, tuple(items)) for rep, items in grouped.items()), key=lambda item: item[0].sort_key())
    class_table = []
    c_values: Dict[Tuple[PauliString, PauliString], sympy.Expr] = {}
    pair_phases: Dict[Tuple[PauliString, PauliString], int] = {}
    for chunk in map_chunks(_decompose_classes, groups, workers, t):
        for entry, values, phases in chunk:
            class_table.append(entry)
            c_values.update(values)
            pair_phases.update(phases)
    logger.debug("decomposed %d terms into %d classes", len(h), len(class_table))
    return DecompositionCertificate(h.n_qubits, tuple(class_table), c_values, pair_phases)


def _orbit_key(f: Factorization):
    n = f.g.n_qubits
    return min((f.p.translate(shift).sort_key(), f.q.translate(shift).sort_key()) for shift in range(n))


def translation_orbits(factorizations: Iterable[Factorization]) -> List[Tuple[Factorization, ...]]:
    """Group factorizations whose (P, Q) pairs are cyclic translates of each other."""
    grouped: Dict[Any, List[Factorization]] = {}
    for f in factorizations:
        grouped.setdefault(_orbit_key(f), []).append(f)
    return [tuple(sorted(grouped[key], key=lambda f: f.sort_key())) for key in sorted(grouped)]


def find_orbit(orbits: Sequence[Tuple[Factorization, ...]], p: PauliString, q: PauliString) -> int:
    """Index of the orbit holding the ordered pair (P, Q)."""
    for index, orbit in enumerate(orbits):
        if any(f.p == p.bare() and f.q == q.bare() for f in orbit):
            return index
    raise ValidationError(f"no orbit contains ({to_text(p)}, {to_text(q)})", p=to_text(p), q=to_text(q))


def assemble_orbits(orbits: Sequence[Tuple[Factorization, ...]], coefficients: Sequence[Any],
                    n_qubits: Optional[int] = None) -> PauliHamiltonian:
    """One coefficient per translation orbit, shared by every member."""
    if len(orbits) != len(coefficients):
        raise ValidationError("one coefficient per orbit is required", orbits=len(orbits), coefficients=len(coefficients))
    bundles = [(f, coefficient) for orbit, coefficient in zip(orbits, coefficients) for f in orbit]
    return assemble(bundles, n_qubits)


@dataclass(frozen=True)
class NoGoReport:
    n_qubits: int
    locality: int
    delta: Optional[int]
    factorization_count: int
    real_phase_count: int
    weight_bound_holds: bool
    witness: Optional[Factorization]

    @property
    def annihilator_exists(self) -> bool:
        return self.factorization_count > 0

    @property
    def mite_ceiling(self) -> Optional[int]:
        """Largest k-body MITE compatible with an m-body zero-energy parent, if one exists."""
        if not self.annihilator_exists:
            return None
        return min(self.delta - 1, 2 * self.locality - 1)

    def to_dict(self):
        return {
            "n_qubits": self.n_qubits,
            "m": self.locality,
            "delta": self.delta,
            "delta_lower_bound": self.delta if self.delta is not None else 2 * self.locality + 2,
            "factorization_count": self.factorization_count,
            "real_phase_count": self.real_phase_count,
            "annihilator_exists": self.annihilator_exists,
            "mite_ceiling": self.mite_ceiling,
            "weight_bound_holds": self.weight_bound_holds,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


def no_go_audit(t: StabilizerTableau, m: int, workers: int = 1) -> NoGoReport:
    """
    Check that no m-body annihilator exists once delta(G) > 2m.

    Every factorization obeys |supp g| <= |supp P| + |supp Q| <= 2m, so a
    group without elements of weight <= 2m has none.

    Args:
        t: Stabilizer tableau
        m: Locality bound
        workers: Processes for the enumeration

    Returns:
        NoGoReport; the witness is the factorization of largest |supp g|
    """
    delta = min_weight(t, 2 * m + 1)
    factorizations = enumerate_factorizations(t, m, workers)
    weight_bound = all(f.g.weight <= f.p.weight + f.q.weight for f in factorizations)
    if (delta is None or delta > 2 * m) and factorizations:
        raise ClaimCheckError(
            f"delta(G) > {2 * m} yet {len(factorizations)} factorizations were found",
            delta=delta,
            m=m,
        )
    if not weight_bound:
        raise ClaimCheckError("a factorization violates |supp g| <= |supp P| + |supp Q|", m=m)
    witness = max(factorizations, key=lambda f: f.g.weight) if factorizations else None
    report = NoGoReport(
        n_qubits=t.n_qubits,
        locality=m,
        delta=delta,
        factorization_count=len(factorizations),
        real_phase_count=sum(1 for f in factorizations if f.is_real_phase),
        weight_bound_holds=weight_bound,
        witness=witness,
    )
    logger.info("no-go audit m=%d: delta=%s, %d factorizations", m, delta, len(factorizations))
    return report
