"""A-adic PL functions on [0,1), the maps f_A and g_i, ρ_A and the derivative.

Every PL map produced here carries the table words it came from, so the
breakpoints are exact interval endpoints l(ν) rather than numbers that would
have to be matched back to words.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Sequence

from .adic_tables import (
    AdicTable,
    OrderClass,
    _order_class_of_ranks,
    apply,
    cocycle,
    compose,
    inverse,
    reduce,
    validate_table,
)
from .exceptions import DomainError, SemiconjugacyError, ValidationError
from .perron_field import (
    AlgebraicNumber,
    PerronData,
    endpoint_l,
    endpoint_r,
    kms_weight,
)
from .sft_core import EppPoint, min_extension
from .steps import StepFunction


@dataclass(frozen=True)
class Piece:
    domain: tuple
    range: tuple
    x_lo: AlgebraicNumber
    x_hi: AlgebraicNumber
    y_lo: AlgebraicNumber
    exponent: int
    slope: AlgebraicNumber

    @property
    def y_hi(self) -> AlgebraicNumber:
        return self.y_lo + self.slope * (self.x_hi - self.x_lo)


@dataclass(frozen=True)
class PLMap:
    """Right-continuous piecewise linear bijection of [0,1) decorated with words.

    ``sigma[p]`` is the position (0-based) of piece p's range interval among
    all range intervals in increasing order.
    """

    perron: PerronData
    pieces: tuple
    sigma: tuple

    def __call__(self, t: AlgebraicNumber) -> AlgebraicNumber:
        return pl_eval(self, t)

    def breakpoints(self) -> list:
        return [pc.x_lo for pc in self.pieces[1:]]

    def piece_index(self, t: AlgebraicNumber) -> int:
        if t < 0 or not t < 1:
            raise DomainError("PL maps are evaluated on [0, 1)")
        lo, hi = 0, len(self.pieces) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.pieces[mid].x_lo <= t:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def order_class(self) -> OrderClass:
        return _order_class_of_ranks(self.sigma)

    def check(self) -> None:
        """Assert the exact tiling and slope invariants."""
        P = self.perron
        assert self.pieces[0].x_lo == 0 and self.pieces[-1].x_hi == 1
        for a, b in zip(self.pieces, self.pieces[1:]):
            assert a.x_hi == b.x_lo
        by_range = sorted(self.pieces, key=lambda pc: pc.range)
        assert by_range[0].y_lo == 0 and by_range[-1].y_hi == 1
        for a, b in zip(by_range, by_range[1:]):
            assert a.y_hi == b.y_lo
        for pc in self.pieces:
            assert pc.slope * (pc.x_hi - pc.x_lo) == endpoint_r(P, pc.range) - pc.y_lo

    def to_json(self, digits: int = 12) -> dict:
        return {
            "sigma": list(self.sigma),
            "pieces": [
                {
                    "domain": list(pc.domain),
                    "range": list(pc.range),
                    "x_lo": pc.x_lo.to_json(digits),
                    "x_hi": pc.x_hi.to_json(digits),
                    "y_at_lo": pc.y_lo.to_json(digits),
                    "slope_exponent": pc.exponent,
                    "slope": pc.slope.to_json(digits),
                }
                for pc in self.pieces
            ],
        }


def table_to_pl(P: PerronData, T: AdicTable) -> PLMap:
    """The PL function f_T: I_{ν(i)} is mapped linearly onto I_{μ(i)}."""
    if T.matrix != P.matrix:
        raise ValidationError("table and Perron data belong to different matrices")
    pieces = []
    for nu, mu in T.rows:
        d = len(nu) - len(mu)
        pieces.append(Piece(
            domain=nu,
            range=mu,
            x_lo=endpoint_l(P, nu),
            x_hi=endpoint_r(P, nu),
            y_lo=endpoint_l(P, mu),
            exponent=d,
            slope=P.beta_power(d),
        ))
    order = sorted(range(len(pieces)), key=lambda p: pieces[p].range)
    sigma = [0] * len(pieces)
    for rank, p in enumerate(order):
        sigma[p] = rank
    return PLMap(P, tuple(pieces), tuple(sigma))


def pl_to_table(f: PLMap) -> AdicTable:
    return validate_table(f.perron.matrix, [(pc.domain, pc.range) for pc in f.pieces])


def pl_compose(f: PLMap, g: PLMap) -> PLMap:
    """f ∘ g, computed on the table side."""
    if f.perron is not g.perron:
        raise ValidationError("PL maps built from different Perron data")
    return table_to_pl(f.perron, compose(pl_to_table(f), pl_to_table(g)))


def pl_inverse(f: PLMap) -> PLMap:
    return table_to_pl(f.perron, inverse(pl_to_table(f)))


def pl_eval(f: PLMap, t: AlgebraicNumber) -> AlgebraicNumber:
    t = f.perron.field.coerce(t)
    pc = f.pieces[f.piece_index(t)]
    return pc.y_lo + pc.slope * (t - pc.x_lo)


# ------------------------------------------------------------ f_A and g_i


def eval_fA(P: PerronData, t) -> AlgebraicNumber:
    """f_A(t) = β(t - l(I_ij)) + l(I_j) for t in I_ij."""
    t = P.field.coerce(t)
    if t < 0 or not t < 1:
        raise DomainError("f_A is defined on [0, 1)")
    A = P.matrix
    i = max(s for s in A.symbols if endpoint_l(P, (s,)) <= t)
    j = max(s for s in A.successors(i) if endpoint_l(P, (i, s)) <= t)
    return P.beta * (t - endpoint_l(P, (i, j))) + endpoint_l(P, (j,))


def eval_gi(P: PerronData, i: int, t) -> AlgebraicNumber:
    """g_i(t) = (t - l(I_j))/β + l(I_ij) for t in I_j with A(i,j) = 1."""
    t = P.field.coerce(t)
    A = P.matrix
    if not 1 <= i <= A.n:
        raise DomainError(f"symbol {i} is not in the alphabet")
    if t < 0 or not t < 1:
        raise DomainError("g_i is defined on a subset of [0, 1)")
    j = max(s for s in A.symbols if endpoint_l(P, (s,)) <= t)
    if not A[i, j]:
        raise DomainError(f"t lies in I_{j}, outside J_{i}")
    return (t - endpoint_l(P, (j,))) / P.beta + endpoint_l(P, (i, j))


# ------------------------------------------------------------ rho_A


def rho(P: PerronData, x: EppPoint) -> AlgebraicNumber:
    """ρ_A(x) = Σ_{n≥0} β^{-n} c_n with the periodic tail summed in closed form.

    c_0 = Σ_{j<x_1} p_j and c_n = Σ_{j<x_{n+1}, A(x_n,j)=1} p_j for n ≥ 1.
    """

    def c(n):
        if n == 0:
            return P.less_weight(None, x.symbol(1))
        return P.less_weight(x.symbol(n), x.symbol(n + 1))

    K = len(x.preamble) + 1
    period = len(x.cycle)
    head = sum((P.beta_inv_power(n) * c(n) for n in range(K)), P.field.zero)
    tail = sum((P.beta_inv_power(n) * c(n) for n in range(K, K + period)), P.field.zero)
    return head + tail / (1 - P.beta_inv_power(period))


# ------------------------------------------------------------ singularities, derivative


def singular_sets(P: PerronData, T: AdicTable):
    """C_τ = {l(ν(i)) : i ≥ 2} and S_τ = {ν(i)_min} for the rows of ``T`` as given."""
    C = [endpoint_l(P, nu) for nu in T.domain[1:]]
    S = [min_extension(T.matrix, nu) for nu in T.domain]
    return C, S


def derivative(P: PerronData, T: AdicTable) -> StepFunction:
    """D_τ = β^{d_τ} as a step function on the domain cylinders."""
    return cocycle(T).map(P.beta_power)


def kms_expectation(P: PerronData, D: StepFunction) -> AlgebraicNumber:
    """φ(D) = Σ value · φ(S_w S_w*)."""
    return sum((v * kms_weight(P, w) for w, v in D.steps), P.field.zero)


class SemiconjugacyResult(enum.Enum):
    VERIFIED = "verified"
    SKIPPED_SINGULAR = "skipped_singular"


def check_semiconjugacy(P: PerronData, T: AdicTable, x: EppPoint) -> SemiconjugacyResult:
    """Check f_T(ρ(x)) = ρ(τ(x)) and slope = β^{d_τ(x)} at one point, exactly.

    Points whose ρ-value is a breakpoint of f_T, or 0 or 1, are skipped: ρ_A
    identifies the right end of one domain cylinder with the left end of the
    next, where the right-continuous f_T only follows the right-hand piece.
    """
    t = rho(P, x)
    C, _ = singular_sets(P, reduce(T))
    if t == 0 or t == 1 or any(t == c for c in C):
        return SemiconjugacyResult.SKIPPED_SINGULAR
    f = table_to_pl(P, T)
    lhs = pl_eval(f, t)
    y = apply(T, x)
    rhs = rho(P, y)
    if lhs != rhs:
        raise SemiconjugacyError(
            f"f_T(rho(x)) != rho(T(x)) at x={x}: {lhs!r} vs {rhs!r} (rho(x)={t!r})")
    slope = f.pieces[f.piece_index(t)].slope
    expected = P.beta_power(cocycle(T)(x))
    if slope != expected:
        raise SemiconjugacyError(
            f"slope at rho(x) is {slope!r}, expected beta^d = {expected!r} at x={x}")
    return SemiconjugacyResult.VERIFIED


# ------------------------------------------------------------ export


def export_pl(f: PLMap, format: str = "csv", digits: int = 12) -> bytes:
    if format == "csv":
        return _export_csv(f, digits)
    if format == "svg":
        return _export_svg(f, digits)
    raise ValidationError(f"unknown export format {format!r}")


def _word(w: Sequence[int]) -> str:
    return " ".join(map(str, w))


def _export_csv(f: PLMap, digits: int) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x_lo", "x_hi", "y_at_lo", "slope_exponent", "nu", "mu",
                "x_lo_poly", "x_hi_poly", "y_at_lo_poly"])
    for pc in f.pieces:
        w.writerow([
            pc.x_lo.to_decimal(digits), pc.x_hi.to_decimal(digits),
            pc.y_lo.to_decimal(digits), pc.exponent,
            _word(pc.domain), _word(pc.range),
            " ".join(pc.x_lo.poly_strings()), " ".join(pc.x_hi.poly_strings()),
            " ".join(pc.y_lo.poly_strings()),
        ])
    return buf.getvalue().encode()


def _export_svg(f: PLMap, digits: int) -> bytes:
    size = 400

    def X(a):
        return a.to_decimal(digits)

    def Y(a):
        return (1 - a).to_decimal(digits)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 1 1">',
        '<rect x="0" y="0" width="1" height="1" fill="none" stroke="#999" '
        'stroke-width="0.004"/>',
    ]
    for pc in f.pieces:
        parts.append(
            f'<line x1="{X(pc.x_lo)}" y1="{Y(pc.y_lo)}" x2="{X(pc.x_hi)}" '
            f'y2="{Y(pc.y_hi)}" stroke="black" stroke-width="0.006">'
            f'<title>{_word(pc.domain)} -&gt; {_word(pc.range)}</title></line>')
        parts.append(
            f'<circle cx="{X(pc.x_lo)}" cy="{Y(pc.y_lo)}" r="0.01" fill="black"/>')
        parts.append(
            f'<circle cx="{X(pc.x_hi)}" cy="{Y(pc.y_hi)}" r="0.01" fill="white" '
            f'stroke="black" stroke-width="0.004"/>')
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode()
