import random

import pytest
from hypothesis import given, strategies as st

from sftgroup.adic_tables import (
    OrderClass,
    apply,
    classify_order,
    cocycle,
    compose,
    compose_uniform,
    expand_row,
    expand_to_depth,
    identity_table,
    inverse,
    minimal_size,
    random_table,
    reduce,
    table_from_json,
    tables_equivalent,
    validate_table,
)
from sftgroup.exceptions import (
    DomainError,
    EmptyWordError,
    FollowerMismatchError,
    InadmissibleWordError,
    PartitionError,
)
from sftgroup.matrices import builtin
from sftgroup.sft_core import EppPoint, enumerate_points, random_point

from conftest import MATRIX_NAMES

seeds = st.integers(0, 10**6)
names = st.sampled_from(MATRIX_NAMES)


def test_swap_and_x0_are_valid(swap, x0):
    assert swap.rows == (((1,), (2, 1)), ((2, 1), (1,)))
    assert len(x0) == 3


def test_validation_errors(fib, full2):
    with pytest.raises(FollowerMismatchError):
        validate_table(fib, [((1,), (2,)), ((2,), (1,))])
    with pytest.raises(PartitionError):
        validate_table(full2, [((1,), (1,)), ((1, 2), (2,))])
    with pytest.raises(PartitionError):
        validate_table(full2, [((1,), (1,)), ((2, 1), (2,))])
    with pytest.raises(InadmissibleWordError):
        validate_table(fib, [((1,), (2, 2)), ((2,), (1,))])
    with pytest.raises(EmptyWordError):
        validate_table(full2, [((), ())])


def test_table_json(fib, swap):
    obj = {"rows": [{"domain": [1], "range": [2, 1]}, {"domain": [2, 1], "range": [1]}]}
    assert table_from_json(fib, obj) == swap
    assert swap.to_json() == obj
    assert str(swap) == "{1->21, 21->1}"


def test_identity(full2, fib):
    assert identity_table(full2).rows == (((1,), (1,)), ((2,), (2,)))
    assert identity_table(fib).rows == (((1,), (1,)), ((2,), (2,)))
    assert len(identity_table(builtin("full3"))) == 3


def test_expand_row(swap, full2):
    assert expand_row(swap, 0).rows == (((1, 1), (2, 1, 1)), ((1, 2), (2, 1, 2)), ((2, 1), (1,)))
    assert expand_row(swap, 1).rows == (((1,), (2, 1)), ((2, 1, 1), (1, 1)), ((2, 1, 2), (1, 2)))
    assert expand_row(identity_table(full2), 0).rows == (((1, 1), (1, 1)), ((1, 2), (1, 2)), ((2,), (2,)))
    with pytest.raises(DomainError):
        expand_row(swap, 2)


def test_expand_to_depth(swap, full2, fib):
    assert expand_to_depth(swap, 2).rows == (((1, 1), (2, 1, 1)), ((1, 2), (2, 1, 2)), ((2, 1), (1,)))
    assert len(expand_to_depth(identity_table(full2), 2)) == 4
    assert expand_to_depth(identity_table(fib), 2).rows == (((1, 1), (1, 1)), ((1, 2), (1, 2)), ((2, 1), (2, 1)))
    with pytest.raises(DomainError):
        expand_to_depth(swap, 1)


def test_equivalence(swap, fib, x0):
    assert tables_equivalent(swap, expand_row(swap, 0))
    assert not tables_equivalent(swap, identity_table(fib))
    assert tables_equivalent(x0, expand_row(x0, 2))


def test_reduce(swap, full2, x0):
    assert reduce(expand_row(swap, 0)) == swap
    assert reduce(expand_to_depth(identity_table(full2), 3)) == identity_table(full2)
    assert reduce(x0) == x0


def test_compose_and_inverse(swap, fib, full2, x0):
    assert tables_equivalent(compose(swap, swap), identity_table(fib))
    assert compose(swap, swap) == identity_table(fib)
    assert tables_equivalent(compose(x0, inverse(x0)), identity_table(full2))
    assert inverse(swap) == swap
    assert inverse(identity_table(fib)) == identity_table(fib)
    assert inverse(inverse(x0)) == x0


def test_apply(swap, fib):
    assert apply(swap, EppPoint.make((), (1, 2))) == EppPoint.make((), (2, 1))
    assert apply(swap, EppPoint.make((2,), (1,))) == EppPoint.make((), (1,))
    for x in enumerate_points(fib, 3, 3):
        assert apply(identity_table(fib), x) == x


def test_cocycle(swap, x0, fib):
    assert cocycle(swap).steps == (((1,), -1), ((2, 1), 1))
    assert cocycle(x0).steps == (((1, 1), 1), ((1, 2), 0), ((2,), -1))
    assert set(cocycle(identity_table(fib)).values()) == {0}


def test_classify(swap, x0, full2):
    assert classify_order(x0) is OrderClass.ORDER_PRESERVING
    assert classify_order(swap) is OrderClass.CYCLIC_ORDER_PRESERVING
    T = validate_table(full2, [((1, 1), (1, 2)), ((1, 2), (2, 1)), ((2, 1), (1, 1)), ((2, 2), (2, 2))])
    assert classify_order(T) is OrderClass.GENERAL


def test_random_table_examples(fib, full2):
    T = random_table(fib, seed=1, max_depth=3)
    assert validate_table(fib, T.rows) == T
    assert random_table(fib, seed=1, max_depth=3) == T
    S = random_table(full2, seed=2, max_depth=1)
    assert S.domain == ((1,), (2,)) and sorted(S.range) == [(1,), (2,)]
    with pytest.raises(DomainError):
        random_table(fib, seed=0, max_depth=0)


@given(names, seeds)
def test_group_laws(name, seed):
    A = builtin(name)
    rng = random.Random(seed)
    T1, T2, T3 = (random_table(A, rng=rng) for _ in range(3))
    e = identity_table(A)
    assert tables_equivalent(compose(compose(T1, T2), T3), compose(T1, compose(T2, T3)))
    assert tables_equivalent(compose(T1, inverse(T1)), e)
    assert tables_equivalent(compose(e, T1), T1)
    assert tables_equivalent(compose(T1, T2), compose_uniform(T1, T2))


@given(names, seeds)
def test_action_compatibility(name, seed):
    A = builtin(name)
    rng = random.Random(seed)
    T1, T2 = random_table(A, rng=rng), random_table(A, rng=rng)
    E = expand_row(T1, rng.randrange(len(T1)))
    for _ in range(10):
        x = random_point(A, rng)
        assert apply(compose(T1, T2), x) == apply(T1, apply(T2, x))
        assert apply(E, x) == apply(T1, x)
        nu, mu = T1.row_for(x)
        assert apply(T1, x).shift(len(mu)) == x.shift(len(nu))


@given(names, seeds)
def test_reduce_properties(name, seed):
    """Greedy merging is idempotent and reaches the brute-force minimum."""
    A = builtin(name)
    rng = random.Random(seed)
    T = random_table(A, rng=rng)
    for _ in range(rng.randint(0, 3)):
        T = expand_row(T, rng.randrange(len(T)))
    R = reduce(T)
    assert tables_equivalent(R, T)
    assert reduce(R) == R
    assert len(R) == minimal_size(T)


@given(names, seeds)
def test_reduce_confluent(name, seed):
    """Different expansions of one element reduce to the same table."""
    A = builtin(name)
    rng = random.Random(seed)
    T = random_table(A, rng=rng)
    a, b = T, T
    for _ in range(3):
        a = expand_row(a, rng.randrange(len(a)))
        b = expand_row(b, rng.randrange(len(b)))
    assert reduce(a) == reduce(b)


@given(names, seeds)
def test_cocycle_law(name, seed):
    A = builtin(name)
    rng = random.Random(seed)
    T1, T2 = random_table(A, rng=rng), random_table(A, rng=rng)
    d1, d2 = cocycle(T1), cocycle(T2)
    assert cocycle(compose(T2, T1)).equivalent(d1 + d2.precompose(T1))
    assert cocycle(inverse(T1)).equivalent(-d1.precompose(inverse(T1)))
    for _ in range(5):
        x = random_point(A, rng)
        assert cocycle(compose(T2, T1))(x) == d1(x) + d2(apply(T1, x))


@given(names, seeds, st.sampled_from([OrderClass.ORDER_PRESERVING,
                                      OrderClass.CYCLIC_ORDER_PRESERVING]))
def test_order_classes_closed(name, seed, kind):
    A = builtin(name)
    rng = random.Random(seed)
    ok = {kind, OrderClass.ORDER_PRESERVING}
    T, S = random_table(A, kind=kind, rng=rng), random_table(A, kind=kind, rng=rng)
    for U in (T, S, compose(T, S), inverse(T), reduce(expand_row(T, 0))):
        assert classify_order(U) in ok
    assert classify_order(expand_row(T, rng.randrange(len(T)))) is classify_order(T)


def test_equivalence_oracle_small(fib):
    """tables_equivalent agrees with comparing images of all small points."""
    rng = random.Random(7)
    pts = enumerate_points(fib, 4, 3)
    for _ in range(30):
        T1, T2 = random_table(fib, max_depth=2, rng=rng), random_table(fib, max_depth=2, rng=rng)
        same = all(apply(T1, x) == apply(T2, x) for x in pts)
        assert tables_equivalent(T1, T2) == same
