"""
Spectral Analysis
Exact spectra of action matrices from the cycle structure of the leaf action.

The eigenvalues of A_x are 0 (once per leaf that eventually leaves the domain)
and, for every cycle of length k of the leaf action, all k-th roots of unity.
A partial injection has no tails running into a cycle, so the surviving
leaves are exactly the leaves on cycles.
"""
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Set, Tuple, Union
import cmath
import logging

import numpy as np

from .errors import CapExceededError
from .tree_action import ActionMatrix, action_matrix
from .wreath import WreathElement

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_MAX_N = 6

ElementOrMatrix = Union[WreathElement, ActionMatrix]


def _as_matrix(x: ElementOrMatrix) -> ActionMatrix:
    return x if isinstance(x, ActionMatrix) else action_matrix(x)


@dataclass(frozen=True)
class CycleDecomposition:
    cycle_lengths: Tuple[int, ...]
    transient_count: int

    @property
    def on_cycles(self) -> int:
        return sum(self.cycle_lengths)


@dataclass(frozen=True)
class SpectralMeasure:
    """
    Eigenvalue multiset of A_x, stored as a zero count plus cycle lengths.

    Each cycle of length k contributes all k-th roots of unity once.
    """

    n: int
    zero_multiplicity: int
    cycle_lengths: Tuple[int, ...]

    def __post_init__(self):
        if self.zero_multiplicity + sum(self.cycle_lengths) != 1 << self.n:
            raise ValueError("Eigenvalue count does not match the matrix size")

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def nonzero_count(self) -> int:
        return sum(self.cycle_lengths)

    def eigenvalues(self) -> np.ndarray:
        """Explicit eigenvalue list, zeros first, then the roots of each cycle."""
        parts = [np.zeros(self.zero_multiplicity, dtype=complex)]
        for k in self.cycle_lengths:
            parts.append(np.exp(2j * np.pi * np.arange(k) / k))
        return np.concatenate(parts)


def surviving_set(x: ElementOrMatrix) -> Set[int]:
    """
    Leaves in dom(x^m) for every m >= 1.

    Domains of successive powers shrink; once a step removes nothing the
    chain is stable, and it must stabilise within 2^n steps.
    """
    matrix = _as_matrix(x)
    positions = {i: j for i, j in enumerate(matrix.row_images, 1) if j is not None}
    for _ in range(matrix.size):
        advanced = {}
        for leaf, current in positions.items():
            following = matrix.image(current)
            if following is not None:
                advanced[leaf] = following
        if len(advanced) == len(positions):
            break
        positions = advanced
    return set(positions)


def cycle_decomposition(x: ElementOrMatrix) -> CycleDecomposition:
    matrix = _as_matrix(x)
    rows = matrix.row_images
    visited = [False] * (matrix.size + 1)
    lengths = []
    transient = 0
    for start in range(1, matrix.size + 1):
        if visited[start]:
            continue
        walked = 0
        current: Optional[int] = start
        while current is not None and not visited[current]:
            visited[current] = True
            walked += 1
            current = rows[current - 1]
        if current == start:
            lengths.append(walked)
        else:
            transient += walked
    return CycleDecomposition(tuple(sorted(lengths)), transient)


def ultimate_rank(x: ElementOrMatrix) -> int:
    """Number of leaves that survive every power of x."""
    return cycle_decomposition(x).on_cycles


def spectral_measure(x: ElementOrMatrix) -> SpectralMeasure:
    matrix = _as_matrix(x)
    cycles = cycle_decomposition(matrix)
    return SpectralMeasure(matrix.n, cycles.transient_count, cycles.cycle_lengths)


def moment(measure: SpectralMeasure, k: int) -> Fraction:
    """
    k-th moment of the eigenvalue distribution, trace(A^k) / 2^n.

    A cycle of length c contributes c when c divides k, otherwise its roots cancel.
    """
    if k < 1:
        raise ValueError(f"Moment order must be positive, got {k}")
    fixed = sum(c for c in measure.cycle_lengths if k % c == 0)
    return Fraction(fixed, measure.size)


@dataclass(frozen=True)
class TestFunction:
    """
    Finite sum of coef * z^p * conj(z)^q with rational coefficients.

    Integrals of these against a SpectralMeasure are exact: on the unit
    circle z^p conj(z)^q = z^(p-q), and the k-th roots of unity sum z^d
    to k when k divides d and to 0 otherwise.
    """

    name: str
    terms: Tuple[Tuple[int, int, Fraction], ...]

    __test__ = False

    def __call__(self, z: complex) -> complex:
        return sum(complex(c) * z ** p * z.conjugate() ** q for p, q, c in self.terms)

    def at_zero(self) -> Fraction:
        return sum((c for p, q, c in self.terms if p == 0 and q == 0), Fraction(0))

    def roots_of_unity_sum(self, k: int) -> Fraction:
        total = Fraction(0)
        for p, q, c in self.terms:
            if (p - q) % k == 0:
                total += c * k
        return total

    def sup_norm_bound(self) -> Fraction:
        """Upper bound for max |f| on the closed unit disc."""
        return sum((abs(c) for _, _, c in self.terms), Fraction(0))


def _term(p: int, q: int, c) -> Tuple[int, int, Fraction]:
    return (p, q, Fraction(c))


CONSTANT_ONE = TestFunction("one", (_term(0, 0, 1),))
IDENTITY_Z = TestFunction("id", (_term(1, 0, 1),))
ABS_SQUARED = TestFunction("abs_z2", (_term(1, 1, 1),))
REAL_Z = TestFunction("re_z", (_term(1, 0, Fraction(1, 2)), _term(0, 1, Fraction(1, 2))))
REAL_Z_SQUARED = TestFunction("re_z2", (_term(2, 0, Fraction(1, 2)), _term(0, 2, Fraction(1, 2))))

STANDARD_TEST_FUNCTIONS = {f.name: f for f in (CONSTANT_ONE, IDENTITY_Z, ABS_SQUARED, REAL_Z, REAL_Z_SQUARED)}


def integrate(measure: SpectralMeasure, f: Union[TestFunction, Callable[[complex], complex]]):
    """
    Integrate f against the eigenvalue distribution.

    Args:
        measure: Spectral measure of some x
        f: TestFunction (exact) or any callable on the closed unit disc (numeric)

    Returns:
        Fraction for a TestFunction, complex for a callable
    """
    if isinstance(f, TestFunction):
        total = measure.zero_multiplicity * f.at_zero()
        for k, count in Counter(measure.cycle_lengths).items():
            total += count * f.roots_of_unity_sum(k)
        return total / measure.size
    total = measure.zero_multiplicity * complex(f(0j))
    for k, count in Counter(measure.cycle_lengths).items():
        roots = (cmath.exp(2j * cmath.pi * j / k) for j in range(k))
        total += count * sum(complex(f(z)) for z in roots)
    return total / measure.size


def eigenvalues_dense_oracle(x: ElementOrMatrix, max_n: int = DEFAULT_ORACLE_MAX_N) -> np.ndarray:
    """
    Numeric eigenvalues of the dense 0/1 action matrix.

    Raises:
        CapExceededError: If the matrix is larger than 2^max_n
    """
    matrix = _as_matrix(x)
    if matrix.n > max_n:
        raise CapExceededError("Dense eigenvalue oracle", matrix.n, max_n)
    return np.linalg.eigvals(matrix.to_numpy())


def _spectral_order(values: np.ndarray) -> np.ndarray:
    modulus = np.round(np.abs(values), 6)
    argument = np.mod(np.angle(values), 2 * np.pi)
    argument[np.isclose(argument, 2 * np.pi, atol=1e-6)] = 0.0
    argument[modulus < 1e-6] = 0.0
    return values[np.lexsort((np.round(argument, 6), modulus))]


def match_spectra(exact: Iterable[complex], numeric: Iterable[complex]) -> float:
    """
    Largest distance between paired eigenvalues after sorting both lists
    by (modulus, argument).
    """
    left = _spectral_order(np.asarray(list(exact), dtype=complex))
    right = _spectral_order(np.asarray(list(numeric), dtype=complex))
    if left.shape != right.shape:
        raise ValueError(f"Spectra differ in size: {left.size} != {right.size}")
    if left.size == 0:
        return 0.0
    return float(np.max(np.abs(left - right)))


def count_large_eigenvalues(values: Iterable[complex], threshold: float = 0.5) -> int:
    """Eigenvalues are 0 or of unit modulus, so |lambda| > 1/2 separates them."""
    return int(np.sum(np.abs(np.asarray(list(values), dtype=complex)) > threshold))
