"""
JSON formats for elements, action matrices and spectral measures.

Elements: a level-1 element is the array [t1, t2] over {0, 1, 2} with 0 for
undefined; a deeper element is {"a": [t1, t2], "children": {"1": ..., "2": ...}}
with exactly the keys y where a is defined.
"""
from typing import Any, Dict, List, Optional, Union
import json
import logging

from .base_i2 import POINTS, I2Element
from .errors import ElementFormatError
from .spectral import SpectralMeasure
from .tree_action import ActionMatrix
from .wreath import WreathElement

logger = logging.getLogger(__name__)

ElementJson = Union[List[int], Dict[str, Any]]


def i2_to_json(f: I2Element) -> List[int]:
    return [0 if t is None else t for t in f.images]


def element_to_json(x: WreathElement) -> ElementJson:
    if x.level == 1:
        return i2_to_json(x.a)
    return {
        "a": i2_to_json(x.a),
        "children": {str(branch): element_to_json(x.child(branch)) for branch in x.a.domain},
    }


def _parse_i2(data: Any, path: str) -> I2Element:
    if not isinstance(data, list) or len(data) != 2:
        raise ElementFormatError(path, "expected an array of two entries")
    for position, entry in enumerate(data):
        if isinstance(entry, bool) or not isinstance(entry, int) or entry not in (0, 1, 2):
            raise ElementFormatError(f"{path}[{position}]", f"entry must be 0, 1 or 2, got {entry!r}")
    images = [None if t == 0 else t for t in data]
    try:
        return I2Element(*images)
    except ValueError as e:
        raise ElementFormatError(path, str(e)) from e


def _parse(data: Any, level: Optional[int], path: str) -> WreathElement:
    if isinstance(data, list):
        if level not in (None, 1):
            raise ElementFormatError(path, f"expected a level-{level} object, got a level-1 array")
        return WreathElement(1, _parse_i2(data, path))
    if not isinstance(data, dict):
        raise ElementFormatError(path, f"expected an array or an object, got {type(data).__name__}")
    if level == 1:
        raise ElementFormatError(path, "level-1 elements are written as a two-entry array")
    unknown = set(data) - {"a", "children"}
    if unknown:
        raise ElementFormatError(path, f"unexpected keys {sorted(unknown)}")
    if "a" not in data:
        raise ElementFormatError(path, "missing key 'a'")
    a = _parse_i2(data["a"], f"{path}.a")
    children_data = data.get("children", {})
    if not isinstance(children_data, dict):
        raise ElementFormatError(f"{path}.children", "expected an object")
    expected_keys = {str(branch) for branch in a.domain}
    if set(children_data) != expected_keys:
        raise ElementFormatError(
            f"{path}.children",
            f"keys must be exactly {sorted(expected_keys)} (the domain of a), got {sorted(children_data)}",
        )
    child_level = None if level is None else level - 1
    children: List[Optional[WreathElement]] = [None, None]
    for branch in POINTS:
        key = str(branch)
        if key in children_data:
            child = _parse(children_data[key], child_level, f"{path}.children.{key}")
            if child_level is None:
                child_level = child.level
            elif child.level != child_level:
                raise ElementFormatError(f"{path}.children.{key}", f"expected level {child_level}, got {child.level}")
            children[branch - 1] = child
    if child_level is None:
        raise ElementFormatError(path, "level cannot be inferred from an element with no children; give n")
    return WreathElement(child_level + 1, a, tuple(children))


def element_from_json(data: Any, n: Optional[int] = None) -> WreathElement:
    """
    Parse an element.

    Args:
        data: Decoded JSON value
        n: Expected level; required when the top map has an empty domain

    Raises:
        ElementFormatError: Naming the JSON path of the first problem found
    """
    return _parse(data, n, "$")


def parse_element(text: str, n: Optional[int] = None) -> WreathElement:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ElementFormatError("$", f"invalid JSON: {e.msg} at position {e.pos}") from e
    return element_from_json(data, n)


def dump_element(x: WreathElement) -> str:
    return json.dumps(element_to_json(x), separators=(",", ":"))


def matrix_to_json(matrix: ActionMatrix, dense: bool = False) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"n": matrix.n, "rows": [0 if j is None else j for j in matrix.row_images]}
    if dense:
        payload["dense"] = matrix.to_dense()
    return payload


def measure_to_json(measure: SpectralMeasure, eigenvalues: bool = False, digits: int = 12) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "n": measure.n,
        "zeros": measure.zero_multiplicity,
        "cycles": list(measure.cycle_lengths),
    }
    if eigenvalues:
        payload["eigenvalues"] = [
            [float(f"{z.real:.{digits}g}"), float(f"{z.imag:.{digits}g}")] for z in measure.eigenvalues()
        ]
    return payload
