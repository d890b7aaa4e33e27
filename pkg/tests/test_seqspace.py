import numpy as np
import pytest

from fncode.seqspace import (
    digit_matrix,
    position_sums,
    radix_decode,
    radix_encode,
    radix_string,
    repeated_position_sums,
    sequence_count,
)


def test_radix_roundtrip():
    rng = np.random.default_rng(1)
    for _ in range(100):
        base = int(rng.integers(2, 6))
        n = int(rng.integers(1, 8))
        seq = rng.integers(0, base, n)
        value = radix_encode(seq, base)
        assert 0 <= value < sequence_count(base, n)
        assert np.array_equal(radix_decode(value, base, n), seq)


def test_radix_is_most_significant_first():
    assert radix_encode([1, 0, 0], 2) == 4
    assert radix_encode([0, 0, 1], 2) == 1
    assert radix_decode(4, 2, 3).tolist() == [1, 0, 0]


def test_digit_matrix_enumerates_in_radix_order():
    mat = digit_matrix(3, 2)
    assert mat.shape == (9, 2)
    for value, row in enumerate(mat):
        assert radix_encode(row, 3) == value


def test_position_sums_match_direct_loop():
    rng = np.random.default_rng(2)
    tables = [rng.normal(size=3) for _ in range(4)]
    sums = position_sums(tables)
    assert len(sums) == 81
    for value, row in enumerate(digit_matrix(3, 4)):
        direct = sum(tables[i][row[i]] for i in range(4))
        assert sums[value] == pytest.approx(direct, abs=1e-12)


def test_repeated_position_sums_equals_position_sums():
    rng = np.random.default_rng(3)
    table = rng.normal(size=2)
    assert np.array_equal(repeated_position_sums(table, 5),
                          position_sums([table] * 5))


def test_radix_string():
    assert radix_string(4, 2, 3) == "100"
    assert radix_string(35, 36, 1) == "z"
    with pytest.raises(ValueError):
        radix_string(0, 37, 1)
