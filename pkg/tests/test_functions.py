"""Built-in functions and truth-table I/O."""

import pytest

from cclab import (
    FunctionSpec,
    FunctionTable,
    equality_fn,
    identity_fn,
    inner_product_fn,
    parse_function,
)


def test_identity_values():
    f = identity_fn(2)
    assert f.value("00", "10") == "10"
    assert f.value("11", "01") == "01"
    assert not f.boolean


def test_equality_values():
    f = equality_fn(2)
    assert f.bit("01", "01") == 1
    assert f.bit("01", "10") == 0
    # truth values come back embedded at full width
    assert f.value("01", "01") == "01"
    assert f.value("01", "10") == "00"


def test_inner_product_values():
    f = inner_product_fn(2)
    assert f.bit("11", "11") == 0
    assert f.bit("01", "11") == 1
    assert f.bit("00", "11") == 0
    f3 = inner_product_fn(3)
    assert f3.bit("111", "111") == 1
    assert f3.bit("101", "010") == 0


def test_spec_validates_grid_shape():
    with pytest.raises(ValueError):
        FunctionSpec("bad", 1, True, (("0", "1"),))
    with pytest.raises(ValueError):
        FunctionSpec("bad", 1, True, (("0", "1"), ("0",)))
    with pytest.raises(ValueError):
        FunctionSpec("bad", 1, True, (("0", "2"), ("0", "1")))


def test_spec_rejects_wrong_width_cells():
    # string-valued cells must be exactly n bits wide
    with pytest.raises(ValueError):
        FunctionSpec("bad", 1, False, (("00", "1"), ("0", "1")))


def test_table_round_trip_boolean(tmp_path):
    f = equality_fn(2)
    path = tmp_path / "eq.txt"
    f.table().save(path)
    back = FunctionTable.load(path)
    assert back.cells == f.table().cells
    assert back.boolean


def test_table_round_trip_string_valued(tmp_path):
    f = identity_fn(2)
    path = tmp_path / "id.txt"
    f.table().save(path)
    back = FunctionTable.load(path)
    assert back.spec("id").value("10", "01") == "01"
    assert not back.boolean


def test_table_text_format():
    text = equality_fn(1).table().to_text()
    assert text == "n=1\n10\n01\n"


def test_table_parse_errors():
    with pytest.raises(ValueError):
        FunctionTable.from_text("m=1\n10\n01\n")
    with pytest.raises(ValueError):
        FunctionTable.from_text("n=1\n10\n")
    with pytest.raises(ValueError):
        FunctionTable.from_text("n=1\n10\n02\n")
    with pytest.raises(ValueError):
        FunctionTable.from_text("n=1\n0;1\n0\n")


def test_parse_function_builtins_and_table(tmp_path):
    assert parse_function("identity", 2).name == "identity"
    assert parse_function("eq", 3).n == 3
    assert parse_function("ip", 2).boolean
    path = tmp_path / "t.txt"
    equality_fn(2).table().save(path)
    assert parse_function(f"table:{path}", 2).bit("00", "00") == 1
    with pytest.raises(ValueError):
        parse_function(f"table:{path}", 3)
    with pytest.raises(ValueError):
        parse_function("nope", 2)


def test_bit_requires_boolean():
    with pytest.raises(ValueError):
        identity_fn(1).bit("0", "0")
