"""
Tests for Distribution File Formats
===================================

Verifies:
1. Number formatting (fixed digits, shortest repr, inf/nan, negative zero)
2. CSV and JSON joint parsing with labels
3. Parse errors naming the row and column
4. Byte-identical CSV rewrite of a parsed file
5. Encoder files in both codecs
"""

import json
from pathlib import Path

import numpy as np
import pytest

from ibplane.core import Encoder, JointXY
from ibplane.core.formats import (
    format_number,
    joint_to_text,
    parse_joint,
    read_encoder,
    read_joint,
    write_encoder,
    write_joint,
)
from ibplane.errors import ParseError

JOINT_CSV = "x\\y,cat,dog\nu,0.25,0.25\nv,0.5,0.0\n"


class TestFormatNumber:
    """Numeric rendering."""

    def test_twelve_digits(self) -> None:
        assert format_number(1 / 3) == "0.333333333333"

    def test_shortest_repr(self) -> None:
        assert format_number(0.1, None) == "0.1"

    def test_special_values(self) -> None:
        assert format_number(float("nan")) == "nan"
        assert format_number(float("inf")) == "inf"
        assert format_number(float("-inf")) == "-inf"

    def test_negative_zero(self) -> None:
        assert format_number(-0.0) == "0"


class TestParseJoint:
    """Decoding joints from text."""

    def test_csv_labels(self) -> None:
        joint = parse_joint(JOINT_CSV)
        assert joint.x_labels == ("u", "v")
        assert joint.y_labels == ("cat", "dog")
        np.testing.assert_allclose(joint.p, [[0.25, 0.25], [0.5, 0.0]])

    def test_json(self) -> None:
        text = json.dumps({"x_labels": ["a", "b"], "y_labels": ["p", "q"], "p": [[0.5, 0], [0, 0.5]]})
        joint = parse_joint(text, "json")
        assert joint.x_labels == ("a", "b")
        assert joint.mutual_information > 0

    def test_json_without_labels(self) -> None:
        joint = parse_joint('{"p": [[1.0]]}', "json")
        assert joint.x_labels == ("x0",)

    def test_bad_cell_names_row_and_column(self) -> None:
        text = "x\\y,a,b\nu,0.5,0\nv,abc,0.5\n"
        with pytest.raises(ParseError) as info:
            parse_joint(text)
        assert info.value.row == 3
        assert info.value.column == 2
        assert "row 3" in str(info.value)

    def test_ragged_row(self) -> None:
        with pytest.raises(ParseError) as info:
            parse_joint("x\\y,a,b\nu,0.5\n")
        assert info.value.row == 2

    def test_negative_probability(self) -> None:
        with pytest.raises(ParseError, match="finite and >= 0"):
            parse_joint("x\\y,a,b\nu,1.5,-0.5\n")

    def test_mass_error_becomes_parse_error(self) -> None:
        with pytest.raises(ParseError, match="total mass"):
            parse_joint("x\\y,a,b\nu,0.5,0.4\n")

    def test_invalid_json(self) -> None:
        with pytest.raises(ParseError, match="invalid JSON"):
            parse_joint("{not json", "json")

    def test_json_ragged_matrix(self) -> None:
        with pytest.raises(ParseError) as info:
            parse_joint('{"p": [[0.5, 0.5], [0.0]]}', "json")
        assert info.value.row == 2

    def test_header_only(self) -> None:
        with pytest.raises(ParseError):
            parse_joint("x\\y,a\n")


class TestJointFiles:
    """Reading and writing joint files."""

    def test_csv_rewrite_is_byte_identical(self, tmp_path: Path) -> None:
        src = tmp_path / "joint.csv"
        src.write_text(JOINT_CSV, encoding="utf-8")
        out = write_joint(read_joint(src), tmp_path / "copy.csv")
        assert out.read_text(encoding="utf-8") == JOINT_CSV

    def test_json_file(self, tmp_path: Path, uniform4: JointXY) -> None:
        path = write_joint(uniform4, tmp_path / "joint.json")
        again = read_joint(path)
        np.testing.assert_array_equal(again.p, uniform4.p)
        assert again.y_labels == uniform4.y_labels

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ParseError, match="cannot read"):
            read_joint(tmp_path / "absent.csv")

    def test_fixed_digits(self) -> None:
        joint = JointXY.from_matrix(np.array([[1 / 3, 2 / 3]]))
        assert "0.333333" in joint_to_text(joint, digits=6)


class TestEncoderFiles:
    """Encoder CSV/JSON codecs."""

    def test_csv(self, tmp_path: Path) -> None:
        enc = Encoder(np.array([[0.25, 0.75], [1.0, 0.0]]), ("lo", "hi"))
        path = write_encoder(enc, tmp_path / "enc.csv")
        assert path.read_text(encoding="utf-8").startswith("x\\t,lo,hi\n")
        again = read_encoder(path)
        np.testing.assert_array_equal(again.q, enc.q)
        assert again.t_labels == ("lo", "hi")

    def test_json(self, tmp_path: Path) -> None:
        enc = Encoder.identity(3)
        again = read_encoder(write_encoder(enc, tmp_path / "enc.json", x_labels=("a", "b", "c")))
        np.testing.assert_array_equal(again.q, enc.q)

    def test_rows_must_be_stochastic(self, tmp_path: Path) -> None:
        path = tmp_path / "enc.csv"
        path.write_text("x\\t,a,b\nx0,0.5,0.4\n", encoding="utf-8")
        with pytest.raises(ParseError, match="row 0"):
            read_encoder(path)
