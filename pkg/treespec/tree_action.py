"""
Tree Action
Realizes elements of P_n as partial automorphisms of the n-level binary rooted tree,
and builds their leaf action matrices.
"""
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple
import logging

import numpy as np

from .base_i2 import POINTS
from .wreath import WreathElement

logger = logging.getLogger(__name__)

TreeWord = Tuple[int, ...]


class VertexId(NamedTuple):
    """Vertex v_index^level; indices run from 1 to 2^level."""

    level: int
    index: int


ROOT = VertexId(0, 1)


def word_to_index(word: Sequence[int]) -> VertexId:
    """
    Map a word b_1...b_l over {1, 2} to its vertex.

    The first letter picks the top branch; index = 1 + sum (b_j - 1) 2^(l - j).
    """
    index = 0
    for letter in word:
        if letter not in POINTS:
            raise ValueError(f"Word letters must be 1 or 2, got {letter!r}")
        index = 2 * index + (letter - 1)
    return VertexId(len(word), index + 1)


def index_to_word(vertex: VertexId) -> TreeWord:
    level, index = vertex
    if level < 0 or not 1 <= index <= (1 << level):
        raise ValueError(f"No vertex with index {index} on level {level}")
    offset = index - 1
    return tuple(((offset >> (level - 1 - j)) & 1) + 1 for j in range(level))


def parent(vertex: VertexId) -> Optional[VertexId]:
    if vertex.level == 0:
        return None
    return VertexId(vertex.level - 1, (vertex.index + 1) // 2)


@dataclass(frozen=True)
class PartialTreeAutomorphism:
    """Explicit vertex map of a partial automorphism of the n-level tree."""

    n: int
    vertex_map: Dict[VertexId, VertexId] = field(hash=False)

    def __call__(self, vertex: VertexId) -> Optional[VertexId]:
        return self.vertex_map.get(vertex)

    @property
    def domain(self) -> List[VertexId]:
        return sorted(self.vertex_map)

    def compose(self, other: "PartialTreeAutomorphism") -> "PartialTreeAutomorphism":
        """Apply self first, then other."""
        if self.n != other.n:
            raise ValueError(f"Depth mismatch: {self.n} != {other.n}")
        composed = {}
        for source, middle in self.vertex_map.items():
            target = other(middle)
            if target is not None:
                composed[source] = target
        return PartialTreeAutomorphism(self.n, composed)

    def restrict_to_level(self, level: int) -> Dict[int, int]:
        return {s.index: t.index for s, t in self.vertex_map.items() if s.level == level}

    def violations(self) -> List[str]:
        """
        Check the structural invariants of a partial tree automorphism.

        Returns:
            List of human-readable violations (empty when valid)
        """
        problems = []
        if self.vertex_map and self.vertex_map.get(ROOT) != ROOT:
            problems.append("root is not mapped to root")
        images_by_level: Dict[int, set] = {}
        for source, target in self.vertex_map.items():
            if not 0 <= source.level <= self.n:
                problems.append(f"{source} lies outside the tree")
            if target.level != source.level:
                problems.append(f"{source} changes level to {target}")
            up = parent(source)
            if up is not None:
                if up not in self.vertex_map:
                    problems.append(f"{source} is in the domain but its parent is not")
                elif self.vertex_map[up] != parent(target):
                    problems.append(f"{source} breaks parent consistency")
            seen = images_by_level.setdefault(source.level, set())
            if target in seen:
                problems.append(f"{target} is hit twice")
            seen.add(target)
        return problems


def to_tree_automorphism(x: WreathElement) -> PartialTreeAutomorphism:
    """
    Unfold x into its vertex map.

    The root always maps to the root; branch y in dom(a) maps to y^a and the
    subtree below y moves by f(y).
    """
    vertex_map = {ROOT: ROOT}
    stack = [(x, (), ())]
    while stack:
        element, source, target = stack.pop()
        for branch in element.a.domain:
            source_word = source + (branch,)
            target_word = target + (element.a(branch),)
            vertex_map[word_to_index(source_word)] = word_to_index(target_word)
            child = element.child(branch)
            if child is not None:
                stack.append((child, source_word, target_word))
    return PartialTreeAutomorphism(x.level, vertex_map)


def leaf_action(x: WreathElement, i: int) -> Optional[int]:
    """
    Image of leaf v_i^n under x.

    Args:
        x: Element of P_n
        i: Leaf index, 1 <= i <= 2^n

    Returns:
        Index of the image leaf, or None when the leaf is outside dom(x)
    """
    word = index_to_word(VertexId(x.level, i))
    image = []
    element = x
    for letter in word:
        target = element.a(letter)
        if target is None:
            return None
        image.append(target)
        element = element.child(letter)
    return word_to_index(image).index


def _leaf_images(x: WreathElement) -> List[Optional[int]]:
    """0-based images of all leaves, None outside the domain."""
    if x.level == 1:
        return [None if t is None else t - 1 for t in x.a.images]
    half = 1 << (x.level - 1)
    images: List[Optional[int]] = [None] * (2 * half)
    for branch in x.a.domain:
        source_offset = (branch - 1) * half
        target_offset = (x.a(branch) - 1) * half
        for j, t in enumerate(_leaf_images(x.child(branch))):
            if t is not None:
                images[source_offset + j] = target_offset + t
    return images


@dataclass(frozen=True)
class ActionMatrix:
    """
    Sparse row form of the 2^n x 2^n action matrix.

    ``row_images[i - 1]`` is the column of the single 1 in row i, or None
    for a zero row. Matrices act on row vectors.
    """

    n: int
    row_images: Tuple[Optional[int], ...]

    def __post_init__(self):
        size = 1 << self.n
        if len(self.row_images) != size:
            raise ValueError(f"Expected {size} rows, got {len(self.row_images)}")
        columns = [j for j in self.row_images if j is not None]
        if any(not 1 <= j <= size for j in columns):
            raise ValueError("Column index out of range")
        if len(set(columns)) != len(columns):
            raise ValueError("Two rows share a column")

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def rank(self) -> int:
        """Number of nonzero rows."""
        return sum(j is not None for j in self.row_images)

    def image(self, i: int) -> Optional[int]:
        return self.row_images[i - 1]

    def trace(self) -> int:
        return sum(1 for i, j in enumerate(self.row_images, 1) if i == j)

    def to_dense(self) -> List[List[int]]:
        rows = []
        for j in self.row_images:
            row = [0] * self.size
            if j is not None:
                row[j - 1] = 1
            rows.append(row)
        return rows

    def to_numpy(self) -> np.ndarray:
        dense = np.zeros((self.size, self.size), dtype=float)
        for i, j in enumerate(self.row_images):
            if j is not None:
                dense[i, j - 1] = 1.0
        return dense

    @classmethod
    def from_leaf_images(cls, n: int, images: Sequence[int]) -> "ActionMatrix":
        """Build from 0-based leaf images with -1 for undefined (sampler output)."""
        return cls(n, tuple(None if t < 0 else int(t) + 1 for t in images))

    @classmethod
    def identity(cls, n: int) -> "ActionMatrix":
        return cls(n, tuple(range(1, (1 << n) + 1)))


def action_matrix(x: WreathElement) -> ActionMatrix:
    """Action matrix A_x: row i has its 1 in column x(v_i^n)."""
    return ActionMatrix(x.level, tuple(None if t is None else t + 1 for t in _leaf_images(x)))


def matrix_multiply(left: ActionMatrix, right: ActionMatrix) -> ActionMatrix:
    """Row i of the product is defined iff left's row i and right's row left(i) are."""
    if left.n != right.n:
        raise ValueError(f"Size mismatch: n={left.n} != n={right.n}")
    rows = tuple(None if j is None else right.image(j) for j in left.row_images)
    return ActionMatrix(left.n, rows)


def matrix_power(matrix: ActionMatrix, k: int) -> ActionMatrix:
    if k < 0:
        raise ValueError(f"Power must be nonnegative, got {k}")
    result = ActionMatrix.identity(matrix.n)
    for _ in range(k):
        result = matrix_multiply(result, matrix)
    return result
