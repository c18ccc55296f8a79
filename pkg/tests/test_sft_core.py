import itertools
import random

import pytest
from hypothesis import given, strategies as st

from sftgroup.exceptions import (
    ConditionIError,
    EmptyWordError,
    InadmissibleWordError,
    ReducibleMatrixError,
    ValidationError,
    ZeroRowColumnError,
)
from sftgroup.matrices import all_builtins, builtin
from sftgroup.sft_core import (
    EppPoint,
    WordOrder,
    common_refinement,
    enumerate_points,
    enumerate_words,
    epp_equal,
    epp_prefix,
    epp_shift,
    follower_equal,
    matrix_from_json,
    max_extension,
    min_extension,
    point_from_json,
    random_point,
    validate_matrix,
    word_order,
)

from conftest import MATRIX_NAMES


def test_valid_matrices():
    assert validate_matrix([[1, 1], [1, 1]]).n == 2
    assert validate_matrix([[1, 1], [1, 0]]).n == 2


def test_permutation_matrix_fails_condition_I():
    with pytest.raises(ConditionIError) as e:
        validate_matrix([[0, 1], [1, 0]])
    assert e.value.code == "condition_I"


def test_distinct_matrix_errors():
    with pytest.raises(ZeroRowColumnError):
        validate_matrix([[1, 1], [0, 0]])
    with pytest.raises(ZeroRowColumnError):
        validate_matrix([[1, 0], [1, 0]])
    with pytest.raises(ReducibleMatrixError):
        validate_matrix([[1, 1], [0, 1]])
    with pytest.raises(ValidationError):
        validate_matrix([[1, 2], [1, 1]])
    with pytest.raises(ValidationError):
        validate_matrix([[1]])


def test_matrix_json():
    A = matrix_from_json({"n": 2, "rows": [[1, 1], [1, 0]]})
    assert A == builtin("fibonacci")
    assert A.to_json() == {"n": 2, "rows": [[1, 1], [1, 0]]}
    with pytest.raises(ValidationError):
        matrix_from_json({"n": 3, "rows": [[1, 1], [1, 0]]})


def test_enumerate_words(fib, full2):
    assert enumerate_words(fib, 2) == [(1, 1), (1, 2), (2, 1)]
    assert enumerate_words(full2, 2) == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert enumerate_words(fib, 0) == [()]


@pytest.mark.parametrize("name", MATRIX_NAMES)
def test_word_counts_match_matrix_powers(name):
    A = builtin(name)
    n = A.n
    power = [[int(i == j) for j in range(n)] for i in range(n)]
    for m in range(1, 7):
        words = enumerate_words(A, m)
        assert words == sorted(words) and len(set(words)) == len(words)
        assert all(A.is_admissible(w) for w in words)
        assert len(words) == sum(sum(row) for row in power)
        power = [[sum(power[i][k] * A[k + 1, j + 1] for k in range(n)) for j in range(n)]
                 for i in range(n)]


def test_follower_equal(fib, full2):
    assert follower_equal(fib, (1, 1), (2, 1))
    assert not follower_equal(fib, (1,), (1, 2))
    assert follower_equal(full2, (1, 2, 2), (2,))
    with pytest.raises(EmptyWordError):
        follower_equal(fib, (), (1,))


def test_word_order():
    assert word_order((1, 2), (2, 1)) is WordOrder.LESS
    assert word_order((1,), (1, 2)) is WordOrder.PREFIX_OF_SECOND
    assert word_order((1, 1), (1, 2)) is WordOrder.LESS
    assert word_order((1, 2), (1,)) is WordOrder.PREFIX_OF_FIRST
    assert word_order((2,), (1, 2)) is WordOrder.GREATER
    assert word_order((2, 1), (2, 1)) is WordOrder.EQUAL


def test_extensions(fib):
    assert min_extension(fib, (2,)) == EppPoint.make((2,), (1,))
    assert max_extension(fib, (2,)) == EppPoint.make((), (2, 1))
    assert min_extension(fib, (1,)) == EppPoint.make((), (1,))
    with pytest.raises(EmptyWordError):
        min_extension(fib, ())
    with pytest.raises(InadmissibleWordError):
        max_extension(fib, (2, 2))


@pytest.mark.parametrize("name", MATRIX_NAMES)
def test_extensions_follow_extreme_successors(name):
    A = builtin(name)
    for w in enumerate_words(A, 3):
        lo, hi = min_extension(A, w), max_extension(A, w)
        a, b = lo.prefix(3 * A.n + 3), hi.prefix(3 * A.n + 3)
        assert a[:3] == w and b[:3] == w
        for k in range(3, len(a)):
            assert a[k] == min(A.successors(a[k - 1]))
            assert b[k] == max(A.successors(b[k - 1]))


def test_epp_plumbing():
    x = EppPoint.make((2,), (1,))
    assert epp_shift(x, 1) == EppPoint.make((), (1,))
    assert epp_prefix(EppPoint.make((), (2, 1)), 3) == (2, 1, 2)
    assert epp_equal(EppPoint.make((1, 2), (1, 2)), EppPoint.make((), (1, 2)))
    assert EppPoint.make((1, 2, 1), (2, 1, 2, 1)) == EppPoint.make((), (1, 2))
    assert str(x) == "2(1)^inf"


def test_epp_json(fib):
    x = point_from_json({"preamble": [2], "cycle": [1]}, fib)
    assert x.to_json() == {"preamble": [2], "cycle": [1]}
    with pytest.raises(InadmissibleWordError):
        point_from_json({"preamble": [2], "cycle": [2]}, fib)
    with pytest.raises(ValidationError):
        point_from_json({"preamble": [1], "cycle": []}, fib)


@given(st.lists(st.integers(1, 2), max_size=6), st.lists(st.integers(1, 2), min_size=1, max_size=4))
def test_canonical_form_idempotent_and_faithful(pre, cyc):
    x = EppPoint.make(pre, cyc)
    assert EppPoint.make(x.preamble, x.cycle) == x
    n = len(pre) + 3 * len(cyc)
    raw = (tuple(pre) + tuple(cyc) * (n // len(cyc) + 1))[:n]
    assert x.prefix(n) == raw
    # primitive and minimal
    c = x.cycle
    assert all(c != c[:d] * (len(c) // d) for d in range(1, len(c)) if len(c) % d == 0)
    assert not x.preamble or x.preamble[-1] != x.cycle[-1]


def test_point_order_is_lexicographic(fib):
    pts = enumerate_points(fib, 3, 3)
    n = 20  # distinct points this small already differ within 20 symbols
    for x, y in itertools.combinations(pts, 2):
        assert x.prefix(n) != y.prefix(n)
        assert (x < y) == (x.prefix(n) < y.prefix(n))


@pytest.mark.parametrize("name", MATRIX_NAMES)
def test_random_points_are_admissible(name):
    A = builtin(name)
    rng = random.Random(0)
    for _ in range(100):
        x = random_point(A, rng)
        assert A.is_admissible(x.prefix(len(x.preamble) + 2 * len(x.cycle) + 1))


def test_common_refinement(full2):
    assert common_refinement([(1,), (2,)], [(1, 1), (1, 2), (2,)]) == [(1, 1), (1, 2), (2,)]
    assert common_refinement([(1, 1), (1, 2), (2,)], [(1,), (2, 1), (2, 2)]) == \
        [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_builtins_are_valid():
    assert set(all_builtins()) == set(MATRIX_NAMES)
