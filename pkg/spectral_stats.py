"""
Symmetry-resolved exact diagonalization and level-spacing ratio statistics.

Sectors are joint eigenspaces of lattice translation T, site inversion P,
the global flip P_X = prod X_i and the parity P_Z = prod Z_i. Basis vectors
are character-weighted orbit sums of computational basis states; P_Z is
diagonal and only filters states.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import integrate, linalg, sparse

from errors import DimensionZeroError, IncompatibleSpecError, TooFewLevelsError, TooLargeError, ValidationError
from parent_hamiltonian import PauliHamiltonian
from pauli_core import PauliString
from utils import clean_token, map_chunks

logger = logging.getLogger(__name__)

DEFAULT_SECTOR_LIMIT = 20000
DEFAULT_CENTRAL_FRACTION = 0.5
DEGENERACY_TOLERANCE = 1e-12
ZERO_MODE_TOLERANCE = 1e-10

POISSON_MEAN_R_TILDE = 2 * math.log(2) - 1
# large-matrix GOE value; the 3x3 surmise gives 4 - 2*sqrt(3)
GOE_MEAN_R_TILDE = 0.5307


@dataclass(frozen=True)
class SymmetrySpec:
    """
    Requested eigenvalues; None leaves a symmetry unresolved.

    `momentum` is the index k of the translation eigenvalue exp(2 pi i k / N).
    """

    momentum: Optional[int] = None
    inversion: Optional[int] = None
    spin_flip_x: Optional[int] = None
    spin_flip_z: Optional[int] = None

    def __post_init__(self):
        for name in ("inversion", "spin_flip_x", "spin_flip_z"):
            value = getattr(self, name)
            if value not in (None, 1, -1):
                raise ValidationError(f"{name} must be +1, -1 or unset", value=value)

    @classmethod
    def parse(cls, text: str, n: int) -> "SymmetrySpec":
        """
        Parse `t=1,p=1,px=1,pz=1`; `t=1` is momentum 0, `t=-1` momentum N/2
        and `k=<index>` selects any momentum.
        """
        values: Dict[str, Optional[int]] = {}
        cleaned = clean_token(text)
        if cleaned in ("", "none", "full"):
            return cls()
        for item in cleaned.split(","):
            if "=" not in item:
                raise ValidationError(f"bad sector token {item!r}; expected key=value", token=item)
            key, raw = (part.strip() for part in item.split("=", 1))
            try:
                value = int(raw)
            except ValueError:
                raise ValidationError(f"bad sector value {raw!r}", token=item)
            if key == "t":
                if value == 1:
                    values["momentum"] = 0
                elif value == -1:
                    if n % 2:
                        raise IncompatibleSpecError(f"t=-1 needs even N, got N={n}", n=n)
                    values["momentum"] = n // 2
                else:
                    raise ValidationError("t must be +1 or -1; use k=<index> for other momenta", value=value)
            elif key == "k":
                values["momentum"] = value % n
            elif key == "p":
                values["inversion"] = value
            elif key == "px":
                values["spin_flip_x"] = value
            elif key == "pz":
                values["spin_flip_z"] = value
            else:
                raise ValidationError(f"unknown sector key {key!r}", key=key)
        return cls(**values)

    def label(self) -> str:
        parts = []
        for key, value in (("k", self.momentum), ("p", self.inversion), ("px", self.spin_flip_x), ("pz", self.spin_flip_z)):
            if value is not None:
                parts.append(f"{key}={value}")
        return ",".join(parts) or "full"

    def to_dict(self):
        return {"k": self.momentum, "p": self.inversion, "px": self.spin_flip_x, "pz": self.spin_flip_z}


def _flip_sign(mask: int) -> int:
    return -1 if mask.bit_count() % 2 else 1


def _transformed(h: PauliHamiltonian, transform) -> PauliHamiltonian:
    terms = {}
    for p, value in h:
        image, sign = transform(p)
        terms[image] = terms.get(image, Fraction(0)) + sign * value
    return PauliHamiltonian(h.n_qubits, terms)


def check_symmetries(h: PauliHamiltonian, s: SymmetrySpec) -> bool:
    """
    True iff every symmetry requested in `s` maps the term list onto itself.

    Args:
        h: Hamiltonian
        s: Requested symmetries (only which are set matters)

    Returns:
        Whether all requested symmetries commute with h
    """
    checks = []
    if s.momentum is not None:
        checks.append(("translation", lambda p: (p.translate(1), 1)))
    if s.inversion is not None:
        checks.append(("inversion", lambda p: (p.reflect(), 1)))
    if s.spin_flip_x is not None:
        # X Z X = -Z and X Y X = -Y
        checks.append(("spin_flip_x", lambda p: (p, _flip_sign(p.z_bits))))
    if s.spin_flip_z is not None:
        checks.append(("spin_flip_z", lambda p: (p, _flip_sign(p.x_bits))))
    for name, transform in checks:
        if _transformed(h, transform) != h:
            logger.info("Hamiltonian is not symmetric under %s", name)
            return False
    return True


def _rotate(states: np.ndarray, shift: int, n: int) -> np.ndarray:
    full = (1 << n) - 1
    shift %= n
    if shift == 0:
        return states.copy()
    return ((states << shift) | (states >> (n - shift))) & full


def _reverse(states: np.ndarray, n: int) -> np.ndarray:
    result = np.zeros_like(states)
    for bit in range(n):
        result |= ((states >> bit) & 1) << (n - 1 - bit)
    return result


def _popcount_parity(states: np.ndarray, n: int) -> np.ndarray:
    parity = np.zeros_like(states)
    for bit in range(n):
        parity ^= (states >> bit) & 1
    return parity


def _group_elements(n: int, s: SymmetrySpec) -> List[Tuple[int, int, int, complex]]:
    """(shift, reflect, complement, conj(character)) for each element of the resolved group."""
    shifts = range(n) if s.momentum is not None else (0,)
    reflections = (0, 1) if s.inversion is not None else (0,)
    complements = (0, 1) if s.spin_flip_x is not None else (0,)
    elements = []
    for shift in shifts:
        for reflect in reflections:
            for complement in complements:
                character = 1.0 + 0j
                if s.momentum is not None:
                    character *= np.exp(2j * np.pi * s.momentum * shift / n)
                if reflect:
                    character *= s.inversion
                if complement:
                    character *= s.spin_flip_x
                elements.append((shift, reflect, complement, np.conj(character)))
    return elements


def _check_compatible(n: int, s: SymmetrySpec) -> None:
    if s.momentum is not None and not 0 <= s.momentum < n:
        raise IncompatibleSpecError(f"momentum index {s.momentum} outside 0..{n - 1}", momentum=s.momentum)
    if s.inversion is not None and s.momentum is not None and (2 * s.momentum) % n:
        raise IncompatibleSpecError(
            f"inversion maps momentum {s.momentum} to {-s.momentum % n}; resolve it only at k=0 or k=N/2",
            momentum=s.momentum,
        )
    if s.spin_flip_x is not None and s.spin_flip_z is not None and n % 2:
        raise IncompatibleSpecError(f"P_X and P_Z anticommute at odd N={n}", n=n)


@dataclass(frozen=True)
class SectorBasis:
    """Orthonormal columns (2^N x d, CSC) spanning one joint eigenspace."""

    n_qubits: int
    spec: SymmetrySpec
    vectors: sparse.csc_matrix

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def projector(self) -> np.ndarray:
        dense = self.vectors.toarray()
        return dense @ dense.conj().T


def sector_basis(n: int, s: SymmetrySpec, limit: Optional[int] = None) -> SectorBasis:
    """
    Orbit-sum basis of the joint eigenspace selected by `s`.

    Args:
        n: Number of qubits
        s: Requested eigenvalues
        limit: Largest accepted number of orbit representatives

    Returns:
        SectorBasis
    """
    _check_compatible(n, s)
    states = np.arange(2 ** n, dtype=np.int64)
    elements = _group_elements(n, s)
    images = np.empty((len(elements), states.shape[0]), dtype=np.int64)
    for index, (shift, reflect, complement, _) in enumerate(elements):
        mapped = _rotate(states, shift, n)
        if reflect:
            mapped = _reverse(mapped, n)
        if complement:
            mapped = mapped ^ ((1 << n) - 1)
        images[index] = mapped
    keep = images.min(axis=0) == states
    if s.spin_flip_z is not None:
        keep &= (1 - 2 * _popcount_parity(states, n)) == s.spin_flip_z
    representatives = states[keep]
    if limit is not None and representatives.shape[0] > limit:
        raise TooLargeError(f"sector has up to {representatives.shape[0]} states; the limit is {limit}",
                            dimension=int(representatives.shape[0]), limit=limit)
    characters = np.array([element[3] for element in elements])
    rows = images[:, representatives].ravel()
    columns = np.tile(np.arange(representatives.shape[0]), len(elements))
    data = np.repeat(characters, representatives.shape[0])
    raw = sparse.coo_matrix((data, (rows, columns)), shape=(2 ** n, representatives.shape[0])).tocsc()
    raw.sum_duplicates()
    norms = np.sqrt(np.asarray(abs(raw).power(2).sum(axis=0)).ravel())
    alive = norms > 1e-10
    dropped = int((~alive).sum())
    if dropped:
        logger.debug("dropped %d orbits with vanishing projection", dropped)
    vectors = raw[:, np.flatnonzero(alive)] @ sparse.diags(1.0 / norms[alive])
    if vectors.shape[1] == 0:
        raise DimensionZeroError(f"sector {s.label()} is empty at N={n}", sector=s.label(), n=n)
    logger.debug("sector %s at N=%d has dimension %d", s.label(), n, vectors.shape[1])
    return SectorBasis(n, s, sparse.csc_matrix(vectors))


def all_sectors(n: int, translation: bool = True, inversion: bool = False,
                spin_flip_x: bool = False, spin_flip_z: bool = False) -> List[SymmetrySpec]:
    """Every sector of a resolution; together they span the full space."""
    if spin_flip_x and spin_flip_z and n % 2:
        raise IncompatibleSpecError(f"P_X and P_Z anticommute at odd N={n}", n=n)
    momenta = list(range(n)) if translation else [None]
    flips_x = (1, -1) if spin_flip_x else (None,)
    flips_z = (1, -1) if spin_flip_z else (None,)
    specs = []
    for k in momenta:
        if inversion and (k is None or (2 * k) % n == 0):
            inversions = (1, -1)
        else:
            inversions = (None,)
        for p in inversions:
            for px in flips_x:
                for pz in flips_z:
                    specs.append(SymmetrySpec(k, p, px, pz))
    return specs


def pauli_to_sparse(p: PauliString) -> sparse.csr_matrix:
    """Matrix of p with basis index bit s-1 holding site s."""
    dimension = 2 ** p.n_qubits
    states = np.arange(dimension, dtype=np.int64)
    z_sign = 1 - 2 * _popcount_parity(states & p.z_bits, p.n_qubits)
    data = (1j ** p.phase_exp) * z_sign.astype(np.complex128)
    return sparse.csr_matrix((data, (states ^ p.x_bits, states)), shape=(dimension, dimension))


def hamiltonian_to_sparse(h: PauliHamiltonian) -> sparse.csr_matrix:
    dimension = 2 ** h.n_qubits
    matrix = sparse.csr_matrix((dimension, dimension), dtype=np.complex128)
    for p, value in h:
        matrix = matrix + float(value) * pauli_to_sparse(p)
    return matrix


def eigenvalues(h: PauliHamiltonian, basis: Optional[SectorBasis] = None,
                limit: int = DEFAULT_SECTOR_LIMIT) -> np.ndarray:
    """
    Full sorted spectrum of h restricted to `basis` (the whole space if None).

    Args:
        h: Hamiltonian
        basis: Sector basis from sector_basis
        limit: Largest dense dimension accepted

    Returns:
        Sorted real eigenvalues
    """
    dimension = 2 ** h.n_qubits if basis is None else basis.dimension
    if dimension > limit:
        raise TooLargeError(f"dense eigensolve of dimension {dimension} exceeds the limit {limit}",
                            dimension=dimension, limit=limit)
    matrix = hamiltonian_to_sparse(h)
    if basis is not None:
        if basis.n_qubits != h.n_qubits:
            raise ValidationError("basis and Hamiltonian differ in qubit count")
        matrix = basis.vectors.conj().T @ (matrix @ basis.vectors)
    dense = matrix.toarray()
    dense = (dense + dense.conj().T) / 2
    if np.allclose(dense.imag, 0.0):
        dense = dense.real
    return np.sort(linalg.eigh(dense, eigvals_only=True))


@dataclass(frozen=True)
class SpectrumReport:
    sector_dimension: int
    eigenvalues: np.ndarray
    r_values: np.ndarray
    mean_r_tilde: float
    central_fraction_used: float
    degeneracy_count: int
    zero_mode_count: int = 0

    def to_dict(self):
        return {
            "dimension": self.sector_dimension,
            "mean_r_tilde": self.mean_r_tilde,
            "central_fraction": self.central_fraction_used,
            "degeneracy_count": self.degeneracy_count,
            "zero_mode_count": self.zero_mode_count,
            "r_count": int(self.r_values.shape[0]),
        }


def collapse_zero_modes(levels: Sequence[float]) -> Tuple[np.ndarray, int]:
    """
    Replace a manifold of two or more exact zero levels by a single 0.

    Parent Hamiltonians with a chiral partner carry such a manifold; its
    size grows with N and says nothing about level repulsion.

    Returns:
        (sorted levels with the manifold collapsed, levels in the manifold or 0)
    """
    levels = np.sort(np.asarray(levels, dtype=float))
    if levels.shape[0] == 0:
        return levels, 0
    scale = max(levels[-1] - levels[0], 1.0)
    zero = np.abs(levels) <= ZERO_MODE_TOLERANCE * scale
    count = int(zero.sum())
    if count < 2:
        return levels, 0
    logger.info("collapsed %d zero modes into one level", count)
    return np.sort(np.append(levels[~zero], 0.0)), count


def r_statistics(levels: Sequence[float], central_fraction: float = DEFAULT_CENTRAL_FRACTION,
                 sector_dimension: Optional[int] = None, zero_modes: bool = False) -> SpectrumReport:
    """
    Gap ratios r~ = min(s_i, s_{i+1}) / max(s_i, s_{i+1}) over the central levels.

    Gaps below 1e-12 times the spectral width count as degeneracies; ratios
    touching them are excluded. With `zero_modes` the E = 0 manifold is first
    collapsed to one level and the window is taken from the collapsed list.

    Args:
        levels: Eigenvalues (sorted here)
        central_fraction: Share of levels kept around the middle, by index
        sector_dimension: Dimension reported; defaults to the number of levels
        zero_modes: Collapse the zero-energy manifold before windowing

    Returns:
        SpectrumReport
    """
    if not 0 < central_fraction <= 1:
        raise ValidationError(f"central fraction {central_fraction} outside (0, 1]", central_fraction=central_fraction)
    levels = np.sort(np.asarray(levels, dtype=float))
    total = levels.shape[0]
    working, zero_mode_count = collapse_zero_modes(levels) if zero_modes else (levels, 0)
    keep = int(round(central_fraction * working.shape[0]))
    if keep < 4:
        raise TooFewLevelsError(f"{keep} retained levels; at least 4 are needed", levels=total, retained=keep)
    start = (working.shape[0] - keep) // 2
    retained = working[start:start + keep]
    width = working[-1] - working[0]
    gaps = np.diff(retained)
    degenerate = gaps <= DEGENERACY_TOLERANCE * width
    degeneracy_count = int(degenerate.sum())
    if degeneracy_count:
        logger.warning("%d degenerate gaps excluded; a symmetry may be unresolved", degeneracy_count)
    usable = ~(degenerate[:-1] | degenerate[1:])
    left, right = gaps[:-1][usable], gaps[1:][usable]
    r_values = np.minimum(left, right) / np.maximum(left, right)
    mean = float(r_values.mean()) if r_values.shape[0] else float("nan")
    return SpectrumReport(
        sector_dimension=total if sector_dimension is None else sector_dimension,
        eigenvalues=levels,
        r_values=r_values,
        mean_r_tilde=mean,
        central_fraction_used=central_fraction,
        degeneracy_count=degeneracy_count,
        zero_mode_count=zero_mode_count,
    )


def reference_distributions(kind: str, grid: Sequence[float]) -> np.ndarray:
    """
    Folded P(r~) on [0, 1]: Poisson 2/(1+r)^2, GOE surmise (27/4)(r+r^2)/(1+r+r^2)^(5/2).

    Args:
        kind: "goe" or "poisson"
        grid: Points in [0, 1]

    Returns:
        Density values
    """
    r = np.asarray(grid, dtype=float)
    if np.any((r < 0) | (r > 1)):
        raise ValidationError("reference densities are defined on [0, 1]")
    kind = clean_token(kind)
    if kind == "poisson":
        return 2.0 / (1.0 + r) ** 2
    if kind == "goe":
        return 6.75 * (r + r ** 2) / (1.0 + r + r ** 2) ** 2.5
    raise ValidationError(f"unknown reference ensemble {kind!r}", kind=kind)


def mean_r_tilde_reference(kind: str) -> float:
    """Mean of the folded reference density (2 ln 2 - 1 for Poisson, 4 - 2 sqrt 3 for the GOE surmise)."""
    value, _ = integrate.quad(lambda r: r * reference_distributions(kind, [r])[0], 0.0, 1.0)
    return value


def sample_goe_levels(size: int, rng: np.random.Generator) -> np.ndarray:
    """Sorted eigenvalues of one real symmetric Gaussian matrix."""
    a = rng.standard_normal((size, size))
    return linalg.eigh((a + a.T) / 2.0, eigvals_only=True)


def goe_three_by_three_ratios(count: int, rng: np.random.Generator) -> np.ndarray:
    """r~ of `count` independent 3x3 GOE matrices, whose law is the surmise exactly."""
    a = rng.standard_normal((count, 3, 3))
    levels = np.linalg.eigvalsh((a + np.transpose(a, (0, 2, 1))) / 2.0)
    lower, upper = levels[:, 1] - levels[:, 0], levels[:, 2] - levels[:, 1]
    return np.minimum(lower, upper) / np.maximum(lower, upper)


def histogram_table(r_values: Sequence[float], bins: int = 20) -> pd.DataFrame:
    """
    Density histogram of r~ on [0, 1] beside bin-averaged reference curves.

    Returns:
        DataFrame with columns bin, empirical_density, goe, poisson
    """
    density, edges = np.histogram(np.asarray(r_values, dtype=float), bins=bins, range=(0.0, 1.0), density=True)
    rows = []
    for index in range(bins):
        left, right = edges[index], edges[index + 1]
        goe, _ = integrate.quad(lambda r: reference_distributions("goe", [r])[0], left, right)
        poisson, _ = integrate.quad(lambda r: reference_distributions("poisson", [r])[0], left, right)
        rows.append({
            "bin": (left + right) / 2,
            "empirical_density": density[index],
            "goe": goe / (right - left),
            "poisson": poisson / (right - left),
        })
    return pd.DataFrame(rows, columns=["bin", "empirical_density", "goe", "poisson"])


def sector_spectrum(h: PauliHamiltonian, spec: SymmetrySpec, central_fraction: float = DEFAULT_CENTRAL_FRACTION,
                    limit: int = DEFAULT_SECTOR_LIMIT, zero_modes: bool = True) -> SpectrumReport:
    basis = sector_basis(h.n_qubits, spec, limit)
    levels = eigenvalues(h, basis, limit)
    return r_statistics(levels, central_fraction, basis.dimension, zero_modes)


def _sector_chunk(specs: Sequence[SymmetrySpec], offset: int, h: PauliHamiltonian,
                  central_fraction: float, limit: int, zero_modes: bool):
    results = []
    for spec in specs:
        try:
            basis = sector_basis(h.n_qubits, spec, limit)
        except DimensionZeroError:
            logger.info("sector %s is empty; skipped", spec.label())
            results.append((spec, np.array([]), None))
            continue
        levels = eigenvalues(h, basis, limit)
        try:
            report = r_statistics(levels, central_fraction, basis.dimension, zero_modes)
        except TooFewLevelsError:
            logger.warning("sector %s has too few levels for gap ratios; skipped", spec.label())
            report = None
        results.append((spec, levels, report))
    return results


@dataclass(frozen=True)
class PooledReport:
    n_qubits: int
    sectors: Tuple[Tuple[SymmetrySpec, np.ndarray, Optional[SpectrumReport]], ...]
    r_values: np.ndarray
    mean_r_tilde: float
    degeneracy_count: int
    central_fraction_used: float
    zero_mode_count: int = 0

    def to_dict(self):
        return {
            "N": self.n_qubits,
            "mean_r_tilde": self.mean_r_tilde,
            "degeneracy_count": self.degeneracy_count,
            "zero_mode_count": self.zero_mode_count,
            "central_fraction": self.central_fraction_used,
            "r_count": int(self.r_values.shape[0]),
            "sectors": [
                {"sector": spec.label(), "dimension": int(levels.shape[0]),
                 "mean_r_tilde": None if report is None else report.mean_r_tilde}
                for spec, levels, report in self.sectors
            ],
        }


def pooled_momentum_statistics(h: PauliHamiltonian, spin_flip_x: Optional[int] = 1, spin_flip_z: Optional[int] = 1,
                               central_fraction: float = DEFAULT_CENTRAL_FRACTION,
                               limit: int = DEFAULT_SECTOR_LIMIT, workers: int = 1,
                               zero_modes: bool = True) -> PooledReport:
    """
    r~ computed per momentum sector k = 0..floor(N/2) and pooled afterwards.

    The -k sectors are inversion images with identical spectra, so they are
    not repeated. Inversion is resolved at k = 0 and k = N/2.

    Args:
        h: Translation-invariant Hamiltonian
        spin_flip_x: P_X eigenvalue or None
        spin_flip_z: P_Z eigenvalue or None
        central_fraction: Share of levels kept per sector
        limit: Largest sector dimension
        workers: Processes over sectors
        zero_modes: Collapse each sector's zero-energy manifold first

    Returns:
        PooledReport
    """
    n = h.n_qubits
    specs = []
    for k in range(n // 2 + 1):
        inversions = (1, -1) if (2 * k) % n == 0 else (None,)
        specs.extend(SymmetrySpec(k, p, spin_flip_x, spin_flip_z) for p in inversions)
    for spec in specs:
        _check_compatible(n, spec)
    sectors = []
    for chunk in map_chunks(_sector_chunk, specs, workers, h, central_fraction, limit, zero_modes):
        sectors.extend(chunk)
    reports = [report for _, _, report in sectors if report is not None]
    r_values = np.concatenate([report.r_values for report in reports]) if reports else np.array([])
    mean = float(r_values.mean()) if r_values.shape[0] else float("nan")
    return PooledReport(
        n_qubits=n,
        sectors=tuple(sectors),
        r_values=r_values,
        mean_r_tilde=mean,
        degeneracy_count=sum(report.degeneracy_count for report in reports),
        central_fraction_used=central_fraction,
        zero_mode_count=sum(report.zero_mode_count for report in reports),
    )
