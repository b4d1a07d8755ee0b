"""
Partial Wreath Powers
Elements of P_n = P_{n-1} partial-wreath IS_2, their composition, counting and enumeration.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional, Tuple
import logging

from .base_i2 import (
    EMPTY_I2,
    IDENTITY_I2,
    POINTS,
    TRANSPOSITION_I2,
    I2Element,
    compose_i2,
    enumerate_i2,
    inverse_i2,
)
from .errors import CapExceededError

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 3

Children = Tuple[Optional["WreathElement"], Optional["WreathElement"]]


@dataclass(frozen=True)
class WreathElement:
    """
    An element (f, a) of the n-th partial wreath power of IS_2.

    ``a`` acts on the two branches below the root; ``children[y - 1]`` is the
    level n-1 element f(y) acting on the subtree below branch y, present
    exactly when y is in dom(a). Level-1 elements carry no children.
    """

    level: int
    a: I2Element
    children: Children = (None, None)

    def __post_init__(self):
        if self.level < 1:
            raise ValueError(f"Level must be positive, got {self.level}")
        if len(self.children) != 2:
            raise ValueError("Exactly two child slots are required")
        for branch in POINTS:
            child = self.children[branch - 1]
            defined = self.a(branch) is not None and self.level > 1
            if defined and child is None:
                raise ValueError(f"Missing child for branch {branch} in dom(a)")
            if not defined and child is not None:
                raise ValueError(f"Unexpected child for branch {branch} outside dom(a)")
            if child is not None and child.level != self.level - 1:
                raise ValueError(
                    f"Child at branch {branch} has level {child.level}, expected {self.level - 1}"
                )

    def child(self, branch: int) -> Optional["WreathElement"]:
        return self.children[branch - 1]

    def compose(self, other: "WreathElement") -> "WreathElement":
        return compose(self, other)

    def inverse(self) -> "WreathElement":
        return inverse(self)


def from_i2(f: I2Element) -> WreathElement:
    return WreathElement(1, f)


def make_element(a: I2Element, children: Children) -> WreathElement:
    """Build a level n >= 2 element; the level is read off the children."""
    levels = {child.level for child in children if child is not None}
    if len(levels) != 1:
        raise ValueError("Level cannot be inferred: children missing or of mixed levels")
    return WreathElement(levels.pop() + 1, a, children)


@lru_cache(maxsize=None)
def identity(n: int) -> WreathElement:
    if n == 1:
        return from_i2(IDENTITY_I2)
    child = identity(n - 1)
    return WreathElement(n, IDENTITY_I2, (child, child))


@lru_cache(maxsize=None)
def empty(n: int) -> WreathElement:
    if n < 1:
        raise ValueError(f"Level must be positive, got {n}")
    return WreathElement(n, EMPTY_I2)


def compose(x: WreathElement, y: WreathElement) -> WreathElement:
    """
    Multiply two elements, x acting first: (f, a)(g, b) = (f g^a, ab).

    Args:
        x: Left operand
        y: Right operand of the same level

    Returns:
        Element whose child at branch z is f(z) g(z^a), defined when
        z is in dom(a) and z^a is in dom(b)
    """
    if x.level != y.level:
        raise ValueError(f"Level mismatch: {x.level} != {y.level}")
    a = compose_i2(x.a, y.a)
    if x.level == 1:
        return WreathElement(1, a)
    children = []
    for branch in POINTS:
        target = x.a(branch)
        if target is None or y.a(target) is None:
            children.append(None)
        else:
            children.append(compose(x.child(branch), y.child(target)))
    return WreathElement(x.level, a, tuple(children))


def inverse(x: WreathElement) -> WreathElement:
    a = inverse_i2(x.a)
    if x.level == 1:
        return WreathElement(1, a)
    children = [None, None]
    for branch in x.a.domain:
        children[x.a(branch) - 1] = inverse(x.child(branch))
    return WreathElement(x.level, a, tuple(children))


def is_idempotent(x: WreathElement) -> bool:
    return compose(x, x) == x


def is_unit(x: WreathElement) -> bool:
    """True when x is everywhere defined, i.e. a full tree automorphism."""
    if len(x.a.domain) != 2:
        return False
    return x.level == 1 or all(is_unit(child) for child in x.children)


# Counting

def count_elements_closed_form(n: int) -> int:
    """N_n = 2^(2^(n+1) - 1) - 1."""
    if n < 1:
        raise ValueError(f"Level must be positive, got {n}")
    return (1 << ((1 << (n + 1)) - 1)) - 1


@lru_cache(maxsize=None)
def count_elements_recursive(n: int) -> int:
    """N_n as the sum over a in IS_2 of N_{n-1}^|dom(a)|, with N_0 = 1."""
    if n < 0:
        raise ValueError(f"Level must be nonnegative, got {n}")
    if n == 0:
        return 1
    previous = count_elements_recursive(n - 1)
    return sum(previous ** len(a.domain) for a in enumerate_i2())


@lru_cache(maxsize=None)
def count_elements(n: int) -> int:
    """
    Number of elements of P_n.

    Both the closed form and the recursion are evaluated; a disagreement
    is an internal error.
    """
    closed = count_elements_closed_form(n)
    recursive = count_elements_recursive(n)
    if closed != recursive:
        raise ArithmeticError(f"Cardinality formulas disagree at n={n}")
    return closed


def count_units(n: int) -> int:
    """Number of full automorphisms of the n-level tree: 2^(2^n - 1)."""
    if n < 1:
        raise ValueError(f"Level must be positive, got {n}")
    return 1 << ((1 << n) - 1)


# Enumeration

def enumerate_elements(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[WreathElement]:
    """
    Stream every element of P_n exactly once, in canonical order.

    Order is the IS_2 order of the top map, then the children's own order,
    branch 1 before branch 2.

    Args:
        n: Level
        cap: Largest level that may be enumerated

    Raises:
        CapExceededError: If n exceeds the cap
    """
    if n < 1:
        raise ValueError(f"Level must be positive, got {n}")
    if n > cap:
        raise CapExceededError("Enumeration", n, cap, count_elements(n))
    logger.debug(f"Enumerating P_{n} ({count_elements(n)} elements)")
    return _iter_elements(n)


def _iter_elements(n: int) -> Iterator[WreathElement]:
    if n == 1:
        for a in enumerate_i2():
            yield WreathElement(1, a)
        return
    lower = _element_list(n - 1)
    for a in enumerate_i2():
        branches = a.domain
        for combo in product(lower, repeat=len(branches)):
            children = [None, None]
            for branch, child in zip(branches, combo):
                children[branch - 1] = child
            yield WreathElement(n, a, tuple(children))


@lru_cache(maxsize=None)
def _element_list(n: int) -> Tuple[WreathElement, ...]:
    return tuple(_iter_elements(n))


def enumerate_units(n: int, cap: int = DEFAULT_ENUMERATION_CAP + 1) -> Iterator[WreathElement]:
    """Stream the full automorphisms of the n-level tree (2^(2^n - 1) of them)."""
    if n > cap:
        raise CapExceededError("Unit enumeration", n, cap, count_units(n))
    return _iter_units(n)


def _iter_units(n: int) -> Iterator[WreathElement]:
    lower = list(_iter_units(n - 1)) if n > 1 else []
    for a in (IDENTITY_I2, TRANSPOSITION_I2):
        if n == 1:
            yield WreathElement(1, a)
            continue
        for left, right in product(lower, repeat=2):
            yield WreathElement(n, a, (left, right))


# Ranks

def rank_leaf(x: WreathElement) -> int:
    """
    Number of leaves in dom(x).

    rank_n(x) is the sum of rank_{n-1}(f(y)) over y in dom(a), and 0 when
    dom(a) is empty.
    """
    if x.level == 1:
        return len(x.a.domain)
    return sum(rank_leaf(x.child(branch)) for branch in x.a.domain)


# Idempotent-unit decomposition

def domain_idempotent(x: WreathElement) -> WreathElement:
    """The identity restricted to dom(x)."""
    images = [p if p in x.a.domain else None for p in POINTS]
    a = I2Element(*images)
    if x.level == 1:
        return WreathElement(1, a)
    children = tuple(
        domain_idempotent(x.child(branch)) if x.child(branch) is not None else None
        for branch in POINTS
    )
    return WreathElement(x.level, a, children)


def _complete_i2(a: I2Element) -> I2Element:
    """Extend a partial bijection to a permutation: undefined sources take the unused targets in increasing order."""
    used = {a(p) for p in a.domain}
    free_targets = iter(p for p in POINTS if p not in used)
    images = [a(p) if a(p) is not None else next(free_targets) for p in POINTS]
    return I2Element(*images)


def complete_to_unit(x: WreathElement) -> WreathElement:
    """A full automorphism agreeing with x on dom(x); missing subtrees act as the identity."""
    a = _complete_i2(x.a)
    if x.level == 1:
        return WreathElement(1, a)
    children = tuple(
        complete_to_unit(x.child(branch)) if x.child(branch) is not None else identity(x.level - 1)
        for branch in POINTS
    )
    return WreathElement(x.level, a, children)


def decompose_idempotent_permutation(x: WreathElement) -> Tuple[WreathElement, WreathElement]:
    """
    Factor x = e s with e idempotent on dom(x) and s a full automorphism.

    Returns:
        Tuple (e, s)
    """
    return domain_idempotent(x), complete_to_unit(x)
