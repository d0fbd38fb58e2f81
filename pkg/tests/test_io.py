"""
Tests for the on-disk formats: index-set dumps, coefficient-array CSVs, Hankel
sequences and canonical problems.

Dependencies:
pip install pytest
"""

import numpy as np
import pytest

from slrc.core.errors import InvalidInputError
from slrc.core.io import (
    load_coefficient_array,
    load_index_set,
    load_problem,
    load_sequence,
    read_rows,
    save_coefficient_array,
    save_index_set,
    save_problem,
    save_sequence,
    write_rows,
)
from slrc.structure.indexsets import doubled, triangle_set
from slrc.structure.quasi_hankel import exp_array


class TestIndexSetFile:
    def test_round_trip(self, tmp_path):
        A = triangle_set(2, 2)
        path = save_index_set(tmp_path / "t22.txt", A)
        assert path.read_text() == "0 0\n1 0\n0 1\n2 0\n1 1\n0 2\n"
        assert load_index_set(path) == A

    def test_unordered_lines_are_sorted(self, tmp_path):
        path = tmp_path / "shuffled.txt"
        path.write_text("0 1\n\n1 0\n0 0\n")
        assert load_index_set(path) == triangle_set(2, 1)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("\n")
        with pytest.raises(InvalidInputError):
            load_index_set(path)


class TestCoefficientArrayFile:
    def test_round_trip_is_exact(self, tmp_path, rng):
        A = triangle_set(2, 2)
        points = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
        h = exp_array(A, points, [1.0, -0.5j, 2.0])
        path = save_coefficient_array(tmp_path / "h.csv", h)

        loaded = load_coefficient_array(path)
        assert loaded.domain == doubled(A)
        np.testing.assert_array_equal(loaded.values, h.values)

    def test_layout(self, tmp_path):
        h = exp_array(triangle_set(2, 1), [(0.5, -2.0)], [1.0])
        rows = read_rows(save_coefficient_array(tmp_path / "h.csv", h))
        assert list(rows[0]) == ["alpha_1", "alpha_2", "re", "im"]
        assert [(row["alpha_1"], row["alpha_2"]) for row in rows[:3]] == [("0", "0"), ("1", "0"), ("0", "1")]
        assert float(rows[2]["re"]) == -2.0

    def test_rows_in_any_order(self, tmp_path):
        path = tmp_path / "h.csv"
        path.write_text("alpha_1,re,im\n2,4.0,0.0\n0,1.0,0.0\n1,2.0,-1.0\n")
        h = load_coefficient_array(path)
        assert h[(1,)] == 2 - 1j
        np.testing.assert_array_equal(h.values, [1, 2 - 1j, 4])

    def test_header_only(self, tmp_path):
        path = tmp_path / "h.csv"
        path.write_text("alpha_1,alpha_2,re,im\n")
        with pytest.raises(InvalidInputError):
            load_coefficient_array(path)


class TestSequenceAndProblemFiles:
    def test_sequence_round_trip(self, tmp_path):
        values = np.array([1.0, 0.1 + 0.2j, 1 / 3])
        np.testing.assert_array_equal(load_sequence(save_sequence(tmp_path / "seq.csv", values)), values)

    def test_sequence_with_gap(self, tmp_path):
        path = tmp_path / "seq.csv"
        path.write_text("index,re,im\n0,1,0\n2,1,0\n")
        with pytest.raises(InvalidInputError):
            load_sequence(path)

    def test_problem_round_trip(self, tmp_path):
        points = np.array([[0.3, 0.1j], [-0.2, 0.5]])
        coeffs = np.array([1.0, 2.0 - 1j])
        loaded_points, loaded_coeffs = load_problem(save_problem(tmp_path / "problem.csv", points, coeffs))
        np.testing.assert_array_equal(loaded_points, points)
        np.testing.assert_array_equal(loaded_coeffs, coeffs)


def test_writers_create_missing_directories(tmp_path):
    path = write_rows(tmp_path / "nested" / "results" / "grid.csv", ["x", "ok"], [[0.5, True], [2, False]])
    assert path.read_text() == "x,ok\n0.5,true\n2,false\n"
