"""Exact arithmetic in Q(β) for the Perron eigenvalue β of a transition matrix.

Elements are residue polynomials in β modulo the minimal polynomial m_β,
stored as tuples of :class:`fractions.Fraction` (constant term first).  Sign
questions are settled on a rational isolating interval for β; a fast
outward-rounded float enclosure is tried before exact rational refinement.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import total_ordering
from typing import Sequence

import sympy

from .exceptions import (
    ComputationError,
    EmptyWordError,
    FieldZeroDivisionError,
    ValidationError,
)
from .sft_core import TransitionMatrix

Rational = (int, Fraction)


# ------------------------------------------------------------ polynomials
# Dense lists of Fractions, constant term first.


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list, b: list):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        k = len(a) - len(b)
        c = a[-1] / lead
        q[k] = c
        for i, bc in enumerate(b):
            a[i + k] -= c * bc
        a.pop()
    return q, a


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _poly_eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


# ------------------------------------------------------------ the field


class BetaField:
    """The number field Q(β) = Q[x]/(m_β) with an isolating interval for β."""

    def __init__(self, min_poly: Sequence[int], lo: Fraction, hi: Fraction):
        self.min_poly = tuple(int(c) for c in min_poly)
        self.degree = len(self.min_poly) - 1
        lead = Fraction(self.min_poly[-1])
        self._monic = [Fraction(c) / lead for c in self.min_poly]
        if self.degree == 1:
            root = -self._monic[0]
            lo = hi = root
        self._lo, self._hi = Fraction(lo), Fraction(hi)
        self._lock = threading.Lock()
        self._float_box = None
        # x^k mod m_β for k < 2d - 1, as coefficient lists of length d
        d = self.degree
        self._reduce = []
        for k in range(2 * d - 1):
            r = [Fraction(0)] * (k + 1)
            r[k] = Fraction(1)
            _, rem = _poly_divmod(r, self._monic)
            rem = rem + [Fraction(0)] * (d - len(rem))
            self._reduce.append(rem[:d])
        self.zero = AlgebraicNumber(self, (Fraction(0),) * d)
        self.one = self.rational(1)
        self.beta = self._beta()

    def _beta(self):
        if self.degree == 1:
            return self.one * (-self._monic[0])
        c = [Fraction(0)] * self.degree
        c[1] = Fraction(1)
        return AlgebraicNumber(self, tuple(c))

    def rational(self, q) -> "AlgebraicNumber":
        c = [Fraction(0)] * self.degree
        c[0] = Fraction(q)
        return AlgebraicNumber(self, tuple(c))

    def element(self, coeffs: Sequence) -> "AlgebraicNumber":
        """Residue of an arbitrary polynomial in β (constant term first)."""
        c = [Fraction(x) for x in coeffs]
        if len(c) > self.degree:
            _, c = _poly_divmod(c, self._monic)
        c = c + [Fraction(0)] * (self.degree - len(c))
        return AlgebraicNumber(self, tuple(c))

    def coerce(self, x) -> "AlgebraicNumber":
        if isinstance(x, AlgebraicNumber):
            if x.field is not self:
                raise ComputationError("mixing elements of different fields")
            return x
        if isinstance(x, Rational):
            return self.rational(x)
        return NotImplemented

    # -- isolating interval -------------------------------------------------

    def interval(self, width: Fraction | None = None):
        """A rational interval [lo, hi] containing β, refined to ``width``."""
        with self._lock:
            if width is not None and self.degree > 1:
                lo, hi = self._lo, self._hi
                f_lo = _poly_eval(self._monic, lo)
                while hi - lo > width:
                    mid = (lo + hi) / 2
                    f_mid = _poly_eval(self._monic, mid)
                    if f_mid == 0:  # pragma: no cover - m_β has no rational root
                        lo = hi = mid
                        break
                    if (f_mid > 0) == (f_lo > 0):
                        lo, f_lo = mid, f_mid
                    else:
                        hi = mid
                self._lo, self._hi = lo, hi
            return self._lo, self._hi

    def float_box(self):
        """Outward-rounded float enclosure of β."""
        if self._float_box is None:
            lo, hi = self.interval(Fraction(1, 2**70))
            self._float_box = (_down(float(lo)), _up(float(hi)))
        return self._float_box

    def mul_poly(self, a: Sequence, b: Sequence) -> tuple:
        d = self.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = list(prod[:d])
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                red = self._reduce[k]
                for i in range(d):
                    out[i] += c * red[i]
        return tuple(out)

    def inverse_poly(self, a: Sequence) -> tuple:
        # extended Euclid: s·a + t·m = 1
        r0, r1 = list(self._monic), _trim(list(a))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, _trim(r)
            s0, s1 = s1, _trim(_poly_sub(s0, _poly_mul(q, s1)))
            if not r1:  # pragma: no cover - m_β irreducible
                raise ComputationError("minimal polynomial is not irreducible")
        inv = [c / r1[0] for c in s1]
        return self.element(inv).coeffs

    def __repr__(self):
        return f"BetaField(min_poly={list(self.min_poly)})"


@total_ordering
class AlgebraicNumber:
    """Element of Q(β), immutable and hashable."""

    __slots__ = ("field", "coeffs", "_fbox")

    def __init__(self, field: BetaField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs
        self._fbox = None

    # arithmetic

    def _other(self, other):
        return self.field.coerce(other)

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return AlgebraicNumber(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return AlgebraicNumber(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            q = Fraction(other)
            return AlgebraicNumber(self.field, tuple(a * q for a in self.coeffs))
        o = self._other(other)
        if o is NotImplemented:
            return o
        return AlgebraicNumber(self.field, self.field.mul_poly(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise FieldZeroDivisionError("division by exact zero in Q(beta)")
        if self.is_rational():
            return self.field.rational(1 / self.coeffs[0])
        return AlgebraicNumber(self.field, self.field.inverse_poly(self.coeffs))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = self.field.one
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # exact predicates

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __eq__(self, other):
        if isinstance(other, AlgebraicNumber):
            return self.field is other.field and self.coeffs == other.coeffs
        if isinstance(other, Rational):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    # ordering

    def _float_enclosure(self):
        if self._fbox is None:
            blo, bhi = self.field.float_box()
            lo = hi = 0.0
            plo = phi = 1.0
            for k, c in enumerate(self.coeffs):
                if k:
                    plo, phi = _down(plo * blo), _up(phi * bhi)
                if not c:
                    continue
                cf = float(c)
                clo, chi = _down(cf), _up(cf)
                if c > 0:
                    lo, hi = _down(lo + _down(clo * plo)), _up(hi + _up(chi * phi))
                else:
                    lo, hi = _down(lo + _down(clo * phi)), _up(hi + _up(chi * plo))
            self._fbox = (lo, hi)
        return self._fbox

    def enclosure(self, width: Fraction | None = None):
        """Rational interval containing the value, computed from β's interval."""
        if self.is_rational():
            return self.coeffs[0], self.coeffs[0]
        blo, bhi = self.field.interval(width)
        lo = hi = Fraction(0)
        plo = phi = Fraction(1)
        for k, c in enumerate(self.coeffs):
            if k:
                plo, phi = plo * blo, phi * bhi
            if c > 0:
                lo += c * plo
                hi += c * phi
            elif c < 0:
                lo += c * phi
                hi += c * plo
        return lo, hi

    def sign(self) -> int:
        if self.is_rational():
            c = self.coeffs[0]
            return (c > 0) - (c < 0)
        lo, hi = self._float_enclosure()
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        width = Fraction(1, 2**60)
        while True:
            lo, hi = self.enclosure(width)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            width /= 2**32

    def __lt__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() < 0

    def __float__(self):
        if self.is_rational():
            return float(self.coeffs[0])
        lo, hi = self.enclosure(Fraction(1, 2**80))
        return float((lo + hi) / 2)

    def to_decimal(self, digits: int = 12) -> str:
        """Correctly rounded decimal string with ``digits`` fractional digits."""
        scale = 10**digits
        if self.is_rational():
            q = round(self.coeffs[0] * scale)
        else:
            width = Fraction(1, scale * 16)
            while True:
                lo, hi = self.enclosure(width)
                a, b = round(lo * scale), round(hi * scale)
                if a == b:
                    q = a
                    break
                width /= 2**16
        neg = q < 0
        s = str(abs(q)).rjust(digits + 1, "0")
        body = s[:-digits] + "." + s[-digits:] if digits else s
        return ("-" if neg else "") + body

    def poly_strings(self) -> list:
        return [str(c) for c in self.coeffs]

    def to_json(self, digits: int = 12) -> dict:
        return {"poly": self.poly_strings(), "approx": self.to_decimal(digits)}

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else f"{c}*b^{k}" if k > 1 else f"{c}*b")
        return "AlgebraicNumber(" + (" + ".join(terms) or "0") + ")"


def add(a, b):
    return a + b


def sub(a, b):
    return a - b


def mul(a, b):
    return a * b


def div(a, b):
    return a / b


def pow_int(a: AlgebraicNumber, k: int) -> AlgebraicNumber:
    return a**k


def compare(a, b) -> int:
    """-1, 0 or 1 as a < b, a == b, a > b."""
    if isinstance(a, AlgebraicNumber):
        return (a - b).sign()
    return -((b - a).sign())


def to_decimal(a: AlgebraicNumber, digits: int = 12) -> str:
    return a.to_decimal(digits)


def number_from_json(field: BetaField, obj) -> AlgebraicNumber:
    """Parse ``{"poly": ["-1", "1"]}``, a bare list of coefficients or a rational string."""
    try:
        if isinstance(obj, dict):
            obj = obj["poly"]
        if isinstance(obj, (int, str)):
            return field.rational(Fraction(obj))
        return field.element([Fraction(c) for c in obj])
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError(f"cannot parse algebraic number: {exc}") from None


# ------------------------------------------------------------ Perron data


class PerronData:
    """Perron eigenvalue, normalized eigenvector and cylinder measures for A.

    Built by :func:`compute_perron`.  Endpoint and weight lookups are memoized
    per word; the memo only ever stores exact values, so concurrent fills are
    benign.
    """

    def __init__(self, matrix: TransitionMatrix, field: BetaField, p: tuple):
        self.matrix = matrix
        self.field = field
        self.p = p
        self.beta = field.beta
        self._beta_inv = self.beta.inverse()
        self._inv_powers = [field.one]
        self._prefix_p = {}
        self._left = {}
        for i in matrix.symbols:
            self._prefix_p[i] = sum(
                (p[j - 1] for j in matrix.successors(i)), field.zero)
        # row_less[i][j] = Σ_{j' < j, A(i,j')=1} p_{j'}
        self._row_less = {}
        for i in matrix.symbols:
            acc = field.zero
            for j in matrix.symbols:
                self._row_less[i, j] = acc
                if matrix[i, j]:
                    acc = acc + p[j - 1]
        self._first_less = {}
        acc = field.zero
        for j in matrix.symbols:
            self._first_less[j] = acc
            acc = acc + p[j - 1]

    @property
    def min_poly(self) -> tuple:
        return self.field.min_poly

    @property
    def beta_interval(self):
        return self.field.interval()

    def beta_inv_power(self, n: int) -> AlgebraicNumber:
        """β^{-n} for n ≥ 0, memoized."""
        pw = self._inv_powers
        while len(pw) <= n:
            pw.append(pw[-1] * self._beta_inv)
        return pw[n]

    def beta_power(self, k: int) -> AlgebraicNumber:
        if k <= 0:
            return self.beta_inv_power(-k)
        return self.beta**k

    def row_sum(self, i: int) -> AlgebraicNumber:
        """Σ_j A(i,j) p_j (= β p_i)."""
        return self._prefix_p[i]

    def less_weight(self, prev: int | None, j: int) -> AlgebraicNumber:
        """Σ p_{j'} over allowed successors j' < j of ``prev`` (all j' if None)."""
        if prev is None:
            return self._first_less[j]
        return self._row_less[prev, j]

    def to_json(self, digits: int = 12) -> dict:
        lo, hi = self.beta_interval
        return {
            "matrix": self.matrix.to_json(),
            "min_poly": list(self.min_poly),
            "beta": self.beta.to_json(digits),
            "beta_approx": self.beta.to_decimal(digits),
            "beta_interval": [str(lo), str(hi)],
            "p": [pj.to_json(digits) for pj in self.p],
        }


def _int_poly(expr_poly) -> list:
    """sympy Poly -> integer coefficient list, constant term first."""
    return [int(c) for c in reversed(expr_poly.all_coeffs())]


def compute_perron(A: TransitionMatrix) -> PerronData:
    """Perron eigenvalue and normalized positive eigenvector of A, exactly."""
    x = sympy.Symbol("x")
    charpoly = sympy.Poly(sympy.Matrix(A.entries).charpoly(x).as_expr(), x)
    _, factors = sympy.factor_list(charpoly)
    factors = [sympy.Poly(f, x) for f, _ in factors]
    squarefree = sympy.Poly(1, x)
    for f in factors:
        squarefree = squarefree * f
    (a, b), _ = max(squarefree.intervals(), key=lambda iv: iv[0][1])
    a, b = Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))

    chosen = None
    for f in factors:
        coeffs = _int_poly(f)
        fa, fb = _poly_eval(coeffs, a), _poly_eval(coeffs, b)
        if fa == 0 or fb == 0 or (fa > 0) != (fb > 0):
            chosen = coeffs
            break
    if chosen is None:  # pragma: no cover
        raise ComputationError("could not locate the Perron root among the factors")
    if chosen[-1] < 0:
        chosen = [-c for c in chosen]
    if len(chosen) == 2:
        root = Fraction(-chosen[0], chosen[1])
        a = b = root
    field = BetaField(chosen, a, b)
    beta = field.beta
    if not beta > 1:
        raise ComputationError("Perron eigenvalue is not greater than one")

    p = _perron_vector(A, field)
    total = sum(p, field.zero)
    p = tuple(pj / total for pj in p)
    if not all(pj.sign() > 0 for pj in p):
        raise ComputationError("Perron eigenvector is not positive")
    for i in A.symbols:
        lhs = sum((p[j - 1] for j in A.successors(i)), field.zero)
        if lhs != beta * p[i - 1]:  # pragma: no cover
            raise ComputationError("eigenvector check A p = beta p failed")
    return PerronData(A, field, p)


def _perron_vector(A: TransitionMatrix, field: BetaField) -> list:
    """A nonzero solution of (A - βI) v = 0 by exact Gaussian elimination."""
    n = A.n
    beta = field.beta
    M = [[field.rational(A[i, j]) - (beta if i == j else 0) for j in A.symbols]
         for i in A.symbols]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, n) if not M[r][col].is_zero()), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = M[row][col].inverse()
        M[row] = [v * inv for v in M[row]]
        for r in range(n):
            if r != row and not M[r][col].is_zero():
                f = M[r][col]
                M[r] = [v - f * w for v, w in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise ComputationError(
            f"Perron eigenspace has dimension {len(free)}, expected 1")
    f = free[0]
    v = [field.zero] * n
    v[f] = field.one
    for r, c in enumerate(pivots):
        v[c] = -M[r][f]
    return v


def kms_weight(P: PerronData, mu: Sequence[int]) -> AlgebraicNumber:
    """φ(S_μ S_μ*) = β^{-|μ|} Σ_j A(μ_last, j) p_j."""
    if not mu:
        raise EmptyWordError("kms_weight needs a nonempty word")
    return P.beta_inv_power(len(mu)) * P.row_sum(mu[-1])


def endpoint_l(P: PerronData, mu: Sequence[int]) -> AlgebraicNumber:
    """Left endpoint l(μ) of the interval I_μ, by the one-symbol recursion."""
    if not mu:
        raise EmptyWordError("endpoints are defined for nonempty words")
    mu = tuple(mu)
    memo = P._left
    hit = memo.get(mu)
    if hit is not None:
        return hit
    # walk back to the longest memoized prefix
    k = len(mu) - 1
    while k > 0 and mu[:k] not in memo:
        k -= 1
    if k == 0:
        val = P.less_weight(None, mu[0])
        memo[mu[:1]] = val
        k = 1
    else:
        val = memo[mu[:k]]
    for n in range(k, len(mu)):
        val = val + P.beta_inv_power(n) * P.less_weight(mu[n - 1], mu[n])
        memo[mu[: n + 1]] = val
    return val


def endpoint_r(P: PerronData, mu: Sequence[int]) -> AlgebraicNumber:
    return endpoint_l(P, mu) + kms_weight(P, mu)
