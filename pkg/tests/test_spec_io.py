import json
import numpy as np
import pytest
from app.services.example_service import get_example
from app.utils.exceptions import SpecParseError
from app.utils.spec_io import dump_spec_json, parse_spec_json, spec_to_dict
from tests.conftest import BUILTIN_KEYS


@pytest.mark.parametrize("key", BUILTIN_KEYS)
def test_dump_then_parse_reproduces_example(key):
    spec = get_example(key)
    assert parse_spec_json(dump_spec_json(spec)) == spec


def test_empty_wb2_keeps_column_count(schrodinger):
    data = spec_to_dict(schrodinger)
    assert data["WB2"] == []
    spec = parse_spec_json(json.dumps(data))
    assert spec.WB2.shape == (0, 4)


def test_matrices_are_read_only(schrodinger):
    with pytest.raises(ValueError):
        schrodinger.P2[0, 0] = 0.0


def test_syntax_error_reports_position():
    with pytest.raises(SpecParseError) as err:
        parse_spec_json('{"name": "x",\n  "n": }')
    assert "第2行" in err.value.detail
    assert err.value.exit_code == 2


def test_missing_field(schrodinger):
    data = spec_to_dict(schrodinger)
    del data["WC"]
    with pytest.raises(SpecParseError, match="WC"):
        parse_spec_json(json.dumps(data))


def test_ragged_matrix(schrodinger):
    data = spec_to_dict(schrodinger)
    data["WB1"][0] = data["WB1"][0][:3]
    with pytest.raises(SpecParseError, match="WB1"):
        parse_spec_json(json.dumps(data))


def test_real_entries_accepted(schrodinger):
    data = spec_to_dict(schrodinger)
    data["H"] = [[2.0]]
    spec = parse_spec_json(json.dumps(data))
    assert spec.H[0, 0] == 2.0
    assert np.iscomplexobj(spec.H)


def test_string_entries_accepted(schrodinger):
    data = spec_to_dict(schrodinger)
    data["P2"] = [["0+1j"]]
    data["WB1"][1] = [0, 0, 0, " 1j "]
    spec = parse_spec_json(json.dumps(data))
    assert spec == schrodinger
    data["P2"] = [["one"]]
    with pytest.raises(SpecParseError, match="P2"):
        parse_spec_json(json.dumps(data))


@pytest.mark.parametrize("value", [1.5, True, "1", 1.0])
def test_non_integer_dimension_rejected(schrodinger, value):
    data = spec_to_dict(schrodinger)
    data["n"] = value
    with pytest.raises(SpecParseError, match="n"):
        parse_spec_json(json.dumps(data))
