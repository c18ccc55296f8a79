"""Integer invariants of A: Smith normal form, K₀ = Z^N/(I − A^t)Z^N, det(I − A)."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .sft_core import TransitionMatrix


def _identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(X, Y) -> list:
    return [[sum(X[i][k] * Y[k][j] for k in range(len(Y))) for j in range(len(Y[0]))]
            for i in range(len(X))]


def determinant(M) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    a = [list(map(int, row)) for row in M]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(M):
    """Return (D, U, V) with U·M·V = D diagonal, d_i | d_{i+1}, U and V unimodular.

    Zero diagonal entries come last.
    """
    D = [list(map(int, row)) for row in M]
    m = len(D)
    n = len(D[0]) if m else 0
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (D, V):
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row dst += c * row src
        for R in (D, U):
            R[dst] = [x + c * y for x, y in zip(R[dst], R[src])]

    def add_col(src, dst, c):
        for R in (D, V):
            for row in R:
                row[dst] += c * row[src]

    for t in range(min(m, n)):
        nonzero = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return D, U, V


@dataclass(frozen=True)
class AbelianGroupPresentation:
    """Z^free_rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_k with d₁ | d₂ | … and every d_i ≥ 2."""

    free_rank: int
    torsion: tuple

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(d < 2 for d in self.torsion):
            raise ValueError("invariant factors must be at least 2")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self):
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def _id_minus_At(A: TransitionMatrix) -> list:
    n = A.n
    return [[int(i == j) - A[j + 1, i + 1] for j in range(n)] for i in range(n)]


def k0_group(A: TransitionMatrix) -> AbelianGroupPresentation:
    D, _, _ = smith_normal_form(_id_minus_At(A))
    diag = [D[i][i] for i in range(A.n)]
    return AbelianGroupPresentation(
        free_rank=sum(1 for d in diag if d == 0),
        torsion=tuple(d for d in diag if d > 1),
    )


def det_id_minus_A(A: TransitionMatrix) -> int:
    n = A.n
    return determinant([[int(i == j) - A[i + 1, j + 1] for j in range(n)] for i in range(n)])


class Simplicity(enum.Enum):
    SIMPLE = "simple"
    NOT_SIMPLE = "not_simple"


def simplicity_verdict(A: TransitionMatrix) -> Simplicity:
    """Simple iff K₀ is 2-divisible, i.e. finite of odd order."""
    G = k0_group(A)
    if G.free_rank == 0 and all(d % 2 for d in G.torsion):
        return Simplicity.SIMPLE
    return Simplicity.NOT_SIMPLE


class Comparison(enum.Enum):
    DISTINGUISHED = "distinguished"
    NECESSARY_CONDITIONS_PASS = "necessary_conditions_pass"


def compare_invariants(A: TransitionMatrix, B: TransitionMatrix) -> Comparison:
    """One-sided: equal K₀ and det(I − A) do not prove the groups isomorphic,
    because the class of the unit is not compared."""
    if k0_group(A) != k0_group(B) or det_id_minus_A(A) != det_id_minus_A(B):
        return Comparison.DISTINGUISHED
    return Comparison.NECESSARY_CONDITIONS_PASS


def invariants_json(A: TransitionMatrix) -> dict:
    G = k0_group(A)
    return {
        "free_rank": G.free_rank,
        "torsion": list(G.torsion),
        "det_id_minus_A": det_id_minus_A(A),
        "simple": simplicity_verdict(A) is Simplicity.SIMPLE,
    }


def verify_snf(M, D, U, V) -> bool:
    """Exact check of U·M·V = D, the divisibility chain and unimodularity."""
    m = len(M)
    n = len(M[0]) if m else 0
    if m == 0 or n == 0:
        return True
    if _matmul(_matmul(U, M), V) != D:
        return False
    if any(D[i][j] for i in range(m) for j in range(n) if i != j):
        return False
    diag = [D[i][i] for i in range(min(m, n))]
    if any(d < 0 for d in diag):
        return False
    for a, b in zip(diag, diag[1:]):
        if (a == 0 and b != 0) or (a and b % a):
            return False
    return abs(determinant(U)) == 1 and abs(determinant(V)) == 1
