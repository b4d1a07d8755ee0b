"""
Exact Uniform Sampling
Draws elements of P_n uniformly at random, level by level over the tree.

Every vertex in the domain carries its own sub-element of P_h (h = height
below the vertex), whose top map a is chosen with probability
N_{h-1}^|dom(a)| / N_h. The choice compares one uniform number u in [0, 1)
against the cumulative weights. Only the first 64 bits of u are drawn up
front; further bits are drawn only when those 64 bits cannot settle a
comparison, so the draw is exact even though N_h has about 2^(h+1) bits.

Randomness for sample number ``index`` comes from a generator keyed by
(seed, index), so a batch gives the same samples however it is split
across workers.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple
import logging
import math

import numpy as np

from .base_i2 import enumerate_i2
from .tree_action import ActionMatrix
from .wreath import WreathElement, count_elements

logger = logging.getLogger(__name__)

WORD_BITS = 64
_WORD_MAX = np.iinfo(np.uint64).max

# Image (0-based) of branch b under the I2 element with canonical index c, -1 if undefined.
_BRANCH_IMAGE = np.array(
    [[-1 if t is None else t - 1 for t in a.images] for a in enumerate_i2()],
    dtype=np.int64,
)


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample ``index`` of the stream ``seed``."""
    if seed < 0 or index < 0:
        raise ValueError("Seed and sample index must be nonnegative")
    return np.random.default_rng([seed, index])


def _draw_words(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.integers(0, _WORD_MAX, size=size, dtype=np.uint64, endpoint=True)


def _scaled_floor(numerator: int, denominator: int, bits: int = WORD_BITS) -> int:
    """floor(numerator * 2^bits / denominator) without a full-width division."""
    target = numerator << bits
    shift = max(denominator.bit_length() - 2 * bits, 0)
    estimate = target >> shift
    quotient = estimate // max(denominator >> shift, 1)
    while quotient * denominator > target:
        quotient -= 1
    while (quotient + 1) * denominator <= target:
        quotient += 1
    return quotient


@dataclass(frozen=True)
class _ThresholdTable:
    cumulative: Tuple[int, ...]
    total: int
    floors: np.ndarray


def _weights(height: int) -> List[int]:
    """Weight N_{h-1}^|dom(a)| of each I2 element in canonical order (N_0 = 1)."""
    lower = count_elements(height - 1) if height > 1 else 1
    return [lower ** len(a.domain) for a in enumerate_i2()]


@lru_cache(maxsize=None)
def _exact_thresholds(height: int) -> _ThresholdTable:
    weights = _weights(height)
    total = sum(weights)
    cumulative = []
    running = 0
    for w in weights[:-1]:
        running += w
        cumulative.append(running)
    floors = np.array([_scaled_floor(c, total) for c in cumulative], dtype=np.uint64)
    return _ThresholdTable(tuple(cumulative), total, floors)


@lru_cache(maxsize=None)
def _approximate_thresholds(height: int) -> np.ndarray:
    # Relative weights N^(d-2) for |dom(a)| = d, with N = N_{h-1} ~ 2^(2^h - 1).
    if height == 1:
        ratio = 1.0
    elif height <= 10:
        ratio = 1.0 / float(count_elements(height - 1))
    else:
        ratio = math.ldexp(1.0, -((1 << height) - 1))
    relative = np.array([ratio ** (2 - len(a.domain)) for a in enumerate_i2()])
    cumulative = np.cumsum(relative / relative.sum())[:-1]
    scaled = [min(int(c * 2.0 ** WORD_BITS), int(_WORD_MAX)) for c in cumulative]
    return np.array(scaled, dtype=np.uint64)


class _LazyUniform:
    """A uniform u in [0, 1) whose binary digits are drawn on demand."""

    def __init__(self, rng: np.random.Generator, first_word: int):
        self.rng = rng
        self.prefix = first_word
        self.bits = WORD_BITS

    def at_least(self, numerator: int, denominator: int) -> bool:
        """Decide u >= numerator / denominator."""
        while True:
            floor, rest = divmod(numerator << self.bits, denominator)
            if self.prefix != floor:
                return self.prefix > floor
            if rest == 0:
                return True
            self.prefix = (self.prefix << WORD_BITS) | int(_draw_words(self.rng, 1)[0])
            self.bits += WORD_BITS


def _resolve_tie(rng: np.random.Generator, word: int, height: int) -> int:
    table = _exact_thresholds(height)
    uniform = _LazyUniform(rng, word)
    category = 0
    for numerator in table.cumulative:
        if not uniform.at_least(numerator, table.total):
            break
        category += 1
    return category


def _draw_categories(rng: np.random.Generator, size: int, height: int, approximate: bool) -> np.ndarray:
    """Canonical I2 indices of the top maps of ``size`` independent elements of P_height."""
    if approximate:
        thresholds = _approximate_thresholds(height)
    else:
        thresholds = _exact_thresholds(height).floors
    words = _draw_words(rng, size)
    categories = np.searchsorted(thresholds, words, side="right").astype(np.int64)
    if not approximate:
        # The first 64 bits cannot decide a comparison with an equal threshold.
        for position in np.flatnonzero(np.isin(words, thresholds)):
            categories[position] = _resolve_tie(rng, int(words[position]), height)
    return categories


@dataclass(frozen=True)
class LevelSample:
    """
    One sampled element in level form.

    ``codes[k][v]`` is the canonical I2 index of the top map carried by
    vertex v (0-based) of level k, or -1 when v is outside the domain.
    ``leaf_images[i]`` is the 0-based image of leaf i, or -1.
    """

    n: int
    codes: Tuple[np.ndarray, ...]
    leaf_images: np.ndarray

    def to_element(self) -> WreathElement:
        return self._build(0, 0)

    def _build(self, level: int, vertex: int) -> WreathElement:
        a = enumerate_i2()[int(self.codes[level][vertex])]
        if level == self.n - 1:
            return WreathElement(1, a)
        children: List[Optional[WreathElement]] = [None, None]
        for branch in a.domain:
            children[branch - 1] = self._build(level + 1, 2 * vertex + branch - 1)
        return WreathElement(self.n - level, a, tuple(children))

    def action_matrix(self) -> ActionMatrix:
        return ActionMatrix.from_leaf_images(self.n, self.leaf_images)


def sample_levels(n: int, rng: np.random.Generator, approximate: bool = False) -> LevelSample:
    """
    Draw a uniform element of P_n in level form.

    Args:
        n: Level
        rng: Generator for this sample (see ``sample_rng``)
        approximate: Use float64 branch probabilities instead of exact ones

    Returns:
        LevelSample with per-vertex codes and the leaf images
    """
    if n < 1:
        raise ValueError(f"Level must be positive, got {n}")
    codes = []
    images = np.zeros(1, dtype=np.int64)
    for level in range(n):
        alive = np.flatnonzero(images >= 0)
        level_codes = np.full(images.size, -1, dtype=np.int64)
        level_codes[alive] = _draw_categories(rng, alive.size, n - level, approximate)
        following = np.full(2 * images.size, -1, dtype=np.int64)
        for branch in (0, 1):
            targets = _BRANCH_IMAGE[level_codes[alive], branch]
            defined = targets >= 0
            sources = alive[defined]
            following[2 * sources + branch] = 2 * images[sources] + targets[defined]
        codes.append(level_codes)
        images = following
    return LevelSample(n, tuple(codes), images)


def sample_uniform(n: int, rng: np.random.Generator, approximate: bool = False) -> WreathElement:
    """Draw an element of P_n, each of the N_n elements with probability 1/N_n."""
    return sample_levels(n, rng, approximate).to_element()


def sample_batch(
    n: int,
    count: int,
    seed: int,
    start: int = 0,
    approximate: bool = False,
) -> List[WreathElement]:
    """Samples ``start`` .. ``start + count - 1`` of the stream ``seed``."""
    return [
        sample_uniform(n, sample_rng(seed, index), approximate)
        for index in range(start, start + count)
    ]
