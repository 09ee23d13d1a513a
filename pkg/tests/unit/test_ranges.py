"""
test_ranges.py — Unit tests for the compact CLI range and parameter parsers.
"""
import pytest

from uniwkb.core.errors import ValidationError
from uniwkb.utils.ranges import parse_methods, parse_params, parse_quantum_numbers


def test_quantum_number_range():
    assert parse_quantum_numbers("0..5") == [0, 1, 2, 3, 4, 5]


def test_single_quantum_number():
    assert parse_quantum_numbers(" 3 ") == [3]


@pytest.mark.parametrize("text", ["", "a..b", "-1..2", "4..2", "1.5"])
def test_bad_quantum_numbers(text):
    with pytest.raises(ValidationError):
        parse_quantum_numbers(text)


def test_params_stay_strings():
    assert parse_params("v0=1, alpha=2.5") == {"v0": "1", "alpha": "2.5"}


def test_empty_params():
    assert parse_params(None) == {}
    assert parse_params("") == {}


@pytest.mark.parametrize("text", ["v0", "=1", "v0=", "v0=1,v0=2"])
def test_bad_params(text):
    with pytest.raises(ValidationError):
        parse_params(text)


def test_methods_deduplicated_in_order():
    assert parse_methods("wkb,improved,wkb", ("wkb", "improved"), ()) == ["wkb", "improved"]


def test_methods_default():
    assert parse_methods(None, ("wkb", "improved"), ("improved",)) == ["improved"]


def test_unknown_method_names_the_options():
    with pytest.raises(ValidationError, match="method must be one of"):
        parse_methods("bogus", ("wkb", "improved"), ())
