"""
Inverse Symmetric Semigroup on {1, 2}
The seven partial bijections of a two-point set, the atom every wreath power is built from.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple
import logging

logger = logging.getLogger(__name__)

POINTS = (1, 2)

# Sort position of an undefined image in the canonical order.
_UNDEFINED_KEY = 3


@dataclass(frozen=True)
class I2Element:
    """
    A partial bijection of {1, 2}.

    Images are 1, 2 or None (undefined). Composition is diagrammatic:
    ``f.compose(g)`` applies f first, then g.
    """

    image_of_1: Optional[int]
    image_of_2: Optional[int]

    def __post_init__(self):
        for image in (self.image_of_1, self.image_of_2):
            if image is not None and image not in POINTS:
                raise ValueError(f"Image must be 1, 2 or None, got {image!r}")
        if self.image_of_1 is not None and self.image_of_1 == self.image_of_2:
            raise ValueError(f"Not injective: both points map to {self.image_of_1}")

    def __call__(self, point: int) -> Optional[int]:
        if point == 1:
            return self.image_of_1
        if point == 2:
            return self.image_of_2
        raise ValueError(f"Point must be 1 or 2, got {point!r}")

    @property
    def images(self) -> Tuple[Optional[int], Optional[int]]:
        return (self.image_of_1, self.image_of_2)

    @property
    def domain(self) -> Tuple[int, ...]:
        """Points with a defined image, in increasing order."""
        return tuple(p for p in POINTS if self(p) is not None)

    def sort_key(self) -> Tuple[int, int]:
        """Canonical order: by (image of 1, image of 2), undefined last."""
        return tuple(_UNDEFINED_KEY if i is None else i for i in self.images)

    def compose(self, other: "I2Element") -> "I2Element":
        return compose_i2(self, other)

    def inverse(self) -> "I2Element":
        return inverse_i2(self)

    def __repr__(self) -> str:
        cells = ["-" if i is None else str(i) for i in self.images]
        return f"I2Element[{cells[0]},{cells[1]}]"


IDENTITY_I2 = I2Element(1, 2)
TRANSPOSITION_I2 = I2Element(2, 1)
EMPTY_I2 = I2Element(None, None)


def compose_i2(f: I2Element, g: I2Element) -> I2Element:
    """
    Compose two partial bijections, f acting first.

    Args:
        f: Left operand (applied first)
        g: Right operand

    Returns:
        The map x -> g(f(x)) on {x in dom(f) : f(x) in dom(g)}
    """
    images = []
    for point in POINTS:
        middle = f(point)
        images.append(None if middle is None else g(middle))
    return I2Element(*images)


def inverse_i2(f: I2Element) -> I2Element:
    """Reverse the relation of f."""
    images = [None, None]
    for point in POINTS:
        image = f(point)
        if image is not None:
            images[image - 1] = point
    return I2Element(*images)


@lru_cache(maxsize=None)
def _canonical_order() -> Tuple[I2Element, ...]:
    choices = (1, 2, None)
    elements = []
    for image_of_1 in choices:
        for image_of_2 in choices:
            if image_of_1 is not None and image_of_1 == image_of_2:
                continue
            elements.append(I2Element(image_of_1, image_of_2))
    elements.sort(key=I2Element.sort_key)
    return tuple(elements)


def enumerate_i2() -> List[I2Element]:
    """
    List the seven partial bijections of {1, 2} in canonical order.

    Returns:
        Identity first, empty map last
    """
    return list(_canonical_order())


def domain_size_i2(f: I2Element) -> int:
    return len(f.domain)


def is_idempotent_i2(f: I2Element) -> bool:
    return compose_i2(f, f) == f


def i2_index(f: I2Element) -> int:
    """Position of f in the canonical order (0..6)."""
    return _canonical_order().index(f)
