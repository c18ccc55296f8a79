from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from sftgroup.exceptions import EmptyWordError, FieldZeroDivisionError, ValidationError
from sftgroup.matrices import builtin
from sftgroup.perron_field import (
    compare,
    compute_perron,
    endpoint_l,
    endpoint_r,
    kms_weight,
    number_from_json,
    pow_int,
    to_decimal,
)
from sftgroup.sft_core import enumerate_words, follower_equal

from conftest import MATRIX_NAMES


def test_full_shifts():
    P = compute_perron(builtin("full2"))
    assert P.min_poly == (-2, 1)
    assert P.beta == 2 and P.p == (Fraction(1, 2), Fraction(1, 2))
    P3 = compute_perron(builtin("full3"))
    assert P3.beta == 3 and all(pj == Fraction(1, 3) for pj in P3.p)


def test_fibonacci(P_fib):
    b = P_fib.beta
    assert P_fib.min_poly == (-1, -1, 1)
    assert P_fib.p == (b - 1, 2 - b)
    assert (b * b - b - 1).is_zero()
    assert b.inverse() == b - 1
    assert pow_int(b, -1).coeffs == (-1, 1)
    assert compare(2 - b, b - 1) == -1
    assert 2 - b < b - 1
    assert to_decimal(b) == "1.618033988750"


def test_three_by_three():
    P = compute_perron(builtin("cubic"))
    assert P.min_poly == (-1, 0, -1, 1)
    assert P.beta.to_decimal(12) == "1.465571231877"
    G = compute_perron(builtin("golden_edge"))
    b = G.beta
    assert G.min_poly == (-1, -1, 1)
    assert G.p == (2 - b, 2 * b - 3, 2 - b)


@pytest.mark.parametrize("name", MATRIX_NAMES)
def test_perron_invariants(name, perrons):
    P = perrons[name]
    A = P.matrix
    assert sum(P.p, P.field.zero) == 1
    assert all(pj > 0 for pj in P.p)
    for i in A.symbols:
        assert sum((P.p[j - 1] for j in A.successors(i)), P.field.zero) == P.beta * P.p[i - 1]
    assert P.beta > 1
    # m_β divides the characteristic polynomial and is irreducible
    x = sympy.Symbol("x")
    m = sympy.Poly(list(reversed(P.min_poly)), x)
    cp = sympy.Matrix(A.entries).charpoly(x)
    assert cp.rem(m).is_zero and m.is_irreducible
    # β is the spectral radius
    radius = max(abs(complex(r)) for r in sympy.Matrix(A.entries).eigenvals())
    assert abs(float(P.beta) - radius) < 1e-12


def test_kms_weights(P_fib, P_full2):
    b = P_fib.beta
    assert kms_weight(P_fib, (1, 1)) == 2 - b == b**-2
    assert kms_weight(P_fib, (1, 2)) == 2 * b - 3 == b**-3
    assert kms_weight(P_full2, (2, 1)) == Fraction(1, 4)
    with pytest.raises(EmptyWordError):
        kms_weight(P_fib, ())


def test_endpoints(P_fib, P_full2):
    b = P_fib.beta
    assert (endpoint_l(P_fib, (2,)), endpoint_r(P_fib, (2,))) == (b - 1, 1)
    assert (endpoint_l(P_fib, (1, 2)), endpoint_r(P_fib, (1, 2))) == (2 - b, b - 1)
    assert (endpoint_l(P_full2, (1, 2)), endpoint_r(P_full2, (1, 2))) == (Fraction(1, 4), Fraction(1, 2))


@pytest.mark.parametrize("name", MATRIX_NAMES)
def test_endpoints_against_definition(name, perrons):
    """l(μ) by the recursion equals the sum of weights of all ≺-smaller words."""
    P = perrons[name]
    for n in range(1, 6):
        words = enumerate_words(P.matrix, n)
        acc = P.field.zero
        for w in words:
            assert endpoint_l(P, w) == acc
            assert endpoint_r(P, w) - endpoint_l(P, w) == kms_weight(P, w)
            assert kms_weight(P, w) <= P.beta_inv_power(n)
            acc = acc + kms_weight(P, w)
        assert acc == 1


@pytest.mark.parametrize("name", MATRIX_NAMES)
def test_slope_law(name, perrons):
    P = perrons[name]
    words = [w for n in range(1, 4) for w in enumerate_words(P.matrix, n)]
    for u in words:
        for v in words:
            if follower_equal(P.matrix, u, v):
                assert kms_weight(P, u) / kms_weight(P, v) == P.beta_power(len(v) - len(u))


def test_division_by_zero(P_fib):
    with pytest.raises(FieldZeroDivisionError):
        P_fib.beta / (P_fib.beta * P_fib.beta - P_fib.beta - 1)


def test_number_json(P_fib):
    b = P_fib.beta
    assert number_from_json(P_fib.field, {"poly": ["-1", "1"]}) == b - 1
    assert number_from_json(P_fib.field, "3/10") == Fraction(3, 10)
    assert (b - 1).to_json(10) == {"poly": ["-1", "1"], "approx": "0.6180339887"}
    with pytest.raises(ValidationError):
        number_from_json(P_fib.field, {"poly": ["x"]})


def _oracle_decimal(coeffs, min_poly, digits):
    x = sympy.Symbol("x")
    root = max(sympy.Poly(list(reversed(min_poly)), x).real_roots())
    val = sum(sympy.Rational(c.numerator, c.denominator) * root**k for k, c in enumerate(coeffs))
    approx = Decimal(str(sympy.N(val, digits + 30)))
    return str(approx.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN))


@given(st.lists(st.fractions(max_denominator=50).filter(lambda q: abs(q) < 20),
                min_size=1, max_size=3),
       st.sampled_from(["fibonacci", "cubic"]),
       st.integers(1, 15))
def test_to_decimal_against_sympy(coeffs, name, digits):
    P = compute_perron(builtin(name))
    a = P.field.element(coeffs[:P.field.degree])
    got = a.to_decimal(digits)
    want = _oracle_decimal(a.coeffs, P.min_poly, digits)
    if got.startswith("-") and set(got[1:]) <= set("0."):
        got = got[1:]
    if want.startswith("-") and set(want[1:]) <= set("0."):
        want = want[1:]
    assert got == want


@given(st.lists(st.fractions(max_denominator=30), min_size=2, max_size=2),
       st.lists(st.fractions(max_denominator=30), min_size=2, max_size=2))
def test_field_axioms(P_fib, u, v):
    a, b = P_fib.field.element(u), P_fib.field.element(v)
    assert (a + b) - b == a
    assert a * (b + 1) == a * b + a
    if not b.is_zero():
        assert (a / b) * b == a
    assert compare(a, b) == -compare(b, a)
    assert (a < b) == (float(a) < float(b)) or abs(float(a) - float(b)) < 1e-9
