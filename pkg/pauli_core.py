"""
Exact N-qubit Pauli algebra in the binary symplectic representation.

A PauliString stores two bit masks and a phase exponent:

    operator = i^phase_exp * prod_s X_s^{x_s} Z_s^{z_s}

Site s (1-based) lives in bit s-1 of `x_bits` and `z_bits`. With this
ordering the product of two strings picks up (-1)^{|z_p & x_q|}, so phases
are a popcount away. Y is stored as x=z=1 and carries one unit of phase,
since Y = iXZ.
"""
import logging
import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from errors import DimensionMismatch, PauliParseError, ValidationError

logger = logging.getLogger(__name__)

_PREFIXES = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_EXP = {"+": 0, "+i": 1, "-": 2, "-i": 3, "": 0}
_TOKEN = re.compile(r"([IXYZ])(\d+)")


@dataclass(frozen=True)
class Support:
    """Sites (1-based) on which a Pauli string acts nontrivially."""

    sites: FrozenSet[int]

    @classmethod
    def of(cls, sites: Iterable[int], n_qubits: Optional[int] = None) -> "Support":
        """Sites are 1-based; with `n_qubits` they must also lie in 1..n_qubits."""
        chosen = frozenset(int(site) for site in sites)
        bad = sorted(site for site in chosen if site < 1 or (n_qubits is not None and site > n_qubits))
        if bad:
            bound = "1 or above" if n_qubits is None else f"1..{n_qubits}"
            raise ValidationError(f"sites {bad} outside {bound}", sites=bad, n_qubits=n_qubits)
        return cls(chosen)

    @classmethod
    def from_mask(cls, mask: int) -> "Support":
        sites = []
        index = 1
        while mask:
            if mask & 1:
                sites.append(index)
            mask >>= 1
            index += 1
        return cls(frozenset(sites))

    @property
    def mask(self) -> int:
        mask = 0
        for site in self.sites:
            mask |= 1 << (site - 1)
        return mask

    def __len__(self) -> int:
        return len(self.sites)

    def __iter__(self):
        return iter(sorted(self.sites))

    def __contains__(self, site: int) -> bool:
        return site in self.sites

    def issubset(self, other: "Support") -> bool:
        return self.sites <= other.sites

    def to_list(self):
        return sorted(self.sites)


@dataclass(frozen=True)
class PauliString:
    n_qubits: int
    x_bits: int
    z_bits: int
    phase_exp: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise PauliParseError("a Pauli string needs at least one qubit", n_qubits=self.n_qubits)
        full = (1 << self.n_qubits) - 1
        if self.x_bits & ~full or self.z_bits & ~full or self.x_bits < 0 or self.z_bits < 0:
            raise PauliParseError("bit vectors exceed the qubit count", n_qubits=self.n_qubits)
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # --- construction ---------------------------------------------------

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0, 0)

    @classmethod
    def from_sites(cls, n_qubits: int, letters: Dict[int, str], sign: int = 1) -> "PauliString":
        """
        Build a Hermitian string from a {site: letter} map.

        Args:
            n_qubits: Number of qubits
            letters: 1-based site -> one of 'I', 'X', 'Y', 'Z'
            sign: +1 or -1 overall sign

        Returns:
            PauliString equal to sign * (tensor product of the letters)
        """
        x_bits = z_bits = 0
        for site, letter in letters.items():
            if not 1 <= site <= n_qubits:
                raise PauliParseError(f"site {site} outside 1..{n_qubits}", site=site)
            bit = 1 << (site - 1)
            letter = letter.upper()
            if letter in ("X", "Y"):
                x_bits |= bit
            if letter in ("Z", "Y"):
                z_bits |= bit
            if letter not in "IXYZ":
                raise PauliParseError(f"unknown Pauli letter {letter!r}", letter=letter)
        if sign not in (1, -1):
            raise PauliParseError("sign must be +1 or -1", sign=sign)
        phase = (x_bits & z_bits).bit_count() + (0 if sign == 1 else 2)
        return cls(n_qubits, x_bits, z_bits, phase)

    @classmethod
    def from_label(cls, label: str, sign: int = 1) -> "PauliString":
        """Dense label such as 'XIZY', leftmost letter on site 1."""
        return cls.from_sites(len(label), {index + 1: letter for index, letter in enumerate(label)}, sign)

    @classmethod
    def parse(cls, text: str, n_qubits: int) -> "PauliString":
        """
        Parse the sparse text form, e.g. `+X1 Z5 Z6 Z7` or `-i Y2`.

        Args:
            text: Serialized string with a {+, -, +i, -i} prefix
            n_qubits: Number of qubits

        Returns:
            The parsed PauliString
        """
        cleaned = text.strip()
        match = re.match(r"^([+-]i?)?\s*(.*)$", cleaned)
        prefix, body = match.group(1) or "", match.group(2).strip()
        if not body:
            raise PauliParseError(f"missing Pauli letters in {text!r}", text=text)
        letters: Dict[int, str] = {}
        if body != "I":
            for token in body.split():
                token_match = _TOKEN.fullmatch(token)
                if token_match is None:
                    raise PauliParseError(f"bad token {token!r} in {text!r}", token=token)
                letter, site = token_match.group(1), int(token_match.group(2))
                if site in letters:
                    raise PauliParseError(f"site {site} repeated in {text!r}", site=site)
                if letter != "I":
                    letters[site] = letter
        base = cls.from_sites(n_qubits, letters)
        return cls(n_qubits, base.x_bits, base.z_bits, base.phase_exp + _PREFIX_EXP[prefix])

    # --- views ------------------------------------------------------------

    @property
    def relative_phase(self) -> int:
        """Exponent k such that the operator is i^k times its letter form."""
        return (self.phase_exp - (self.x_bits & self.z_bits).bit_count()) % 4

    @property
    def is_hermitian(self) -> bool:
        return self.relative_phase in (0, 2)

    @property
    def sign(self) -> int:
        """+1 or -1 relative to the letter form; only meaningful when Hermitian."""
        return 1 if self.relative_phase == 0 else -1

    @property
    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    @property
    def support_mask(self) -> int:
        return self.x_bits | self.z_bits

    @property
    def symplectic(self) -> int:
        """Packed (x|z) vector: x in bits 0..N-1, z in bits N..2N-1."""
        return self.x_bits | (self.z_bits << self.n_qubits)

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def letter(self, site: int) -> str:
        bit = 1 << (site - 1)
        return "IXZY"[(1 if self.x_bits & bit else 0) + (2 if self.z_bits & bit else 0)]

    def letters(self) -> Dict[int, str]:
        return {site: self.letter(site) for site in Support.from_mask(self.support_mask)}

    def to_label(self) -> str:
        return "".join(self.letter(site) for site in range(1, self.n_qubits + 1))

    def bare(self) -> "PauliString":
        """The prefactor-1 Hermitian string with the same letters."""
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, (self.x_bits & self.z_bits).bit_count())

    def with_phase(self, extra_exp: int) -> "PauliString":
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, self.phase_exp + extra_exp)

    def sort_key(self) -> Tuple[int, ...]:
        return (self.weight, self.support_mask, self.x_bits, self.z_bits, self.phase_exp)

    def __str__(self) -> str:
        return to_text(self)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    # --- site permutations -------------------------------------------------

    def translate(self, shift: int) -> "PauliString":
        """Cyclic relabeling site s -> s + shift (mod N)."""
        n = self.n_qubits
        shift %= n
        full = (1 << n) - 1

        def rotate(bits: int) -> int:
            return ((bits << shift) | (bits >> (n - shift))) & full

        return PauliString(n, rotate(self.x_bits), rotate(self.z_bits), self.phase_exp)

    def reflect(self) -> "PauliString":
        """Spatial inversion s -> N + 1 - s."""
        n = self.n_qubits

        def mirror(bits: int) -> int:
            return int(format(bits, f"0{n}b")[::-1], 2)

        return PauliString(n, mirror(self.x_bits), mirror(self.z_bits), self.phase_exp)


def _check_dims(p: PauliString, q: PauliString) -> None:
    if p.n_qubits != q.n_qubits:
        raise DimensionMismatch(
            f"Pauli strings act on {p.n_qubits} and {q.n_qubits} qubits",
            left=p.n_qubits,
            right=q.n_qubits,
        )


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """
    Exact operator product p*q including the accumulated power of i.

    Args:
        p: Left factor
        q: Right factor

    Returns:
        PauliString equal to p*q
    """
    _check_dims(p, q)
    phase = p.phase_exp + q.phase_exp + 2 * (p.z_bits & q.x_bits).bit_count()
    return PauliString(p.n_qubits, p.x_bits ^ q.x_bits, p.z_bits ^ q.z_bits, phase)


def multiply_all(strings: Iterable[PauliString], n_qubits: int) -> PauliString:
    result = PauliString.identity(n_qubits)
    for item in strings:
        result = multiply(result, item)
    return result


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff pq = qp, via the symplectic form x_p.z_q + z_p.x_q mod 2."""
    _check_dims(p, q)
    return ((p.x_bits & q.z_bits).bit_count() + (p.z_bits & q.x_bits).bit_count()) % 2 == 0


def support(p: PauliString) -> Support:
    return Support.from_mask(p.support_mask)


def to_text(p: PauliString) -> str:
    """Sparse text form with a {+, -, +i, -i} prefix, e.g. `+X1 Z5 Z6 Z7`."""
    prefix = _PREFIXES[p.relative_phase]
    if p.is_identity:
        return f"{prefix}I"
    tokens = [f"{letter}{site}" for site, letter in sorted(p.letters().items())]
    return prefix + " ".join(tokens)


def phase_between(reference: PauliString, other: PauliString) -> int:
    """
    Exponent k with other == i^k * reference; both must share their letters.

    Args:
        reference: String whose letters define the basis
        other: String with the same bits

    Returns:
        k in {0, 1, 2, 3}
    """
    _check_dims(reference, other)
    if reference.x_bits != other.x_bits or reference.z_bits != other.z_bits:
        raise DimensionMismatch("strings differ in their letters", left=str(reference), right=str(other))
    return (other.phase_exp - reference.phase_exp) % 4
