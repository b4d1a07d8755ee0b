"""
Tests for the JSON formats of elements, matrices and spectral measures
"""
import json

import pytest

from treespec.base_i2 import TRANSPOSITION_I2
from treespec.errors import ElementFormatError
from treespec.serialization import (
    dump_element,
    element_from_json,
    element_to_json,
    matrix_to_json,
    measure_to_json,
    parse_element,
)
from treespec.spectral import spectral_measure
from treespec.tree_action import action_matrix
from treespec.wreath import WreathElement, empty, enumerate_elements, identity

EXAMPLE_1 = '{"a":[2,1],"children":{"1":[1,2],"2":[0,0]}}'


def test_example_round_trip():
    x = parse_element(EXAMPLE_1)
    assert dump_element(x) == EXAMPLE_1
    assert x.child(1) == WreathElement(1, identity(1).a)


def test_level_two_elements_parse_back():
    for x in enumerate_elements(2):
        assert element_from_json(json.loads(dump_element(x)), n=2) == x


def test_level_one_format():
    assert element_to_json(WreathElement(1, TRANSPOSITION_I2)) == [2, 1]
    assert parse_element("[0, 2]").a.images == (None, 2)


def test_empty_top_map_needs_level():
    with pytest.raises(ElementFormatError) as info:
        parse_element('{"a":[0,0]}')
    assert info.value.path == "$"
    assert parse_element('{"a":[0,0]}', n=2) == empty(2)
    assert parse_element('{"a":[0,0],"children":{}}', n=3) == empty(3)


@pytest.mark.parametrize(
    "text, path",
    [
        ('{"a":[2,1],"children":{"1":[1,2]}}', "$.children"),
        ('{"a":[2,1],"children":{"1":[1,2],"2":[3,0]}}', "$.children.2[0]"),
        ('{"a":[1,0],"children":{"1":{"a":[1,1],"children":{}}}}', "$.children.1.a"),
        ('{"a":[1,2],"children":{"1":[1,2],"2":{"a":[1,2],"children":{"1":[1,2],"2":[1,2]}}}}', "$.children.2"),
        ('{"a":[1,2],"children":{"1":[1,2],"2":[1,2]},"extra":1}', "$"),
        ('{"children":{}}', "$"),
        ('[1, 2, 0]', "$"),
        ('"abc"', "$"),
        ('{"a":[true,0]}', "$.a[0]"),
        ('{"a":', "$"),
    ],
)
def test_malformed_elements_name_the_path(text, path):
    with pytest.raises(ElementFormatError) as info:
        parse_element(text)
    assert info.value.path == path
    assert path in str(info.value)


def test_expected_level_is_enforced():
    with pytest.raises(ElementFormatError):
        parse_element(EXAMPLE_1, n=3)
    with pytest.raises(ElementFormatError):
        parse_element("[1, 2]", n=2)


def test_matrix_json():
    matrix = action_matrix(parse_element(EXAMPLE_1))
    assert matrix_to_json(matrix) == {"n": 2, "rows": [3, 4, 0, 0]}
    dense = matrix_to_json(matrix, dense=True)["dense"]
    assert dense[0] == [0, 0, 1, 0]
    assert dense[3] == [0, 0, 0, 0]


def test_measure_json():
    measure = spectral_measure(parse_element(EXAMPLE_1))
    assert measure_to_json(measure) == {"n": 2, "zeros": 4, "cycles": []}
    assert measure_to_json(measure, eigenvalues=True)["eigenvalues"] == [[0.0, 0.0]] * 4

    payload = measure_to_json(spectral_measure(WreathElement(1, TRANSPOSITION_I2)), eigenvalues=True)
    assert payload["cycles"] == [2]
    assert [re for re, _ in payload["eigenvalues"]] == [1.0, -1.0]
    assert abs(payload["eigenvalues"][1][1]) < 1e-12
