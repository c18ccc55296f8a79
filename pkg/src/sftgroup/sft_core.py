"""Alphabet, transition matrix, admissible words and eventually periodic points.

Symbols are 1-based.  A word is a plain tuple of ints; the empty tuple is the
empty word.  Points of X_A are only represented when they are eventually
periodic (:class:`EppPoint`).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .exceptions import (
    ConditionIError,
    EmptyWordError,
    InadmissibleWordError,
    ReducibleMatrixError,
    ValidationError,
    ZeroRowColumnError,
)

Word = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class TransitionMatrix:
    """Validated zero-one matrix of a one-sided topological Markov shift.

    Build instances with :func:`validate_matrix`; the constructor itself does
    not check irreducibility or condition (I).
    """

    entries: tuple

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.entries[i - 1][j - 1]

    @property
    def symbols(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def _successors(self):
        return tuple(
            tuple(j for j in self.symbols if self[i, j]) for i in self.symbols
        )

    def successors(self, i: int) -> tuple:
        """Allowed next symbols after ``i``, ascending."""
        return self._successors[i - 1]

    def followers(self, word: Sequence[int]) -> tuple:
        """Γ₁⁺ of a word; every symbol for the empty word."""
        if not word:
            return tuple(self.symbols)
        return self.successors(word[-1])

    def row(self, i: int) -> tuple:
        return self.entries[i - 1]

    def is_admissible(self, word: Sequence[int]) -> bool:
        if any(not (1 <= s <= self.n) for s in word):
            return False
        return all(self[a, b] for a, b in zip(word, word[1:]))

    def check_word(self, word: Sequence[int], *, nonempty: bool = False) -> Word:
        w = tuple(int(s) for s in word)
        if nonempty and not w:
            raise EmptyWordError("the empty word is not allowed here")
        if not self.is_admissible(w):
            raise InadmissibleWordError(f"word {list(w)} is not admissible")
        return w

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [list(r) for r in self.entries]}


def _reachable(entries, start: int) -> set:
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j, a in enumerate(entries[i]):
            if a and j not in seen:
                seen.add(j)
                stack.append(j)
    return seen


def validate_matrix(entries) -> TransitionMatrix:
    """Check a square 0/1 array and return it as a :class:`TransitionMatrix`.

    Condition (I) is tested as "not a permutation matrix", which for an
    irreducible matrix is equivalent to X_A having no isolated points.
    """
    rows = [list(r) for r in entries]
    n = len(rows)
    if n < 2:
        raise ValidationError("the alphabet must have at least 2 symbols")
    if any(len(r) != n for r in rows):
        raise ValidationError("matrix must be square")
    for r in rows:
        for a in r:
            if a not in (0, 1):
                raise ValidationError(f"entries must be 0 or 1, got {a!r}")
    rows = [[int(a) for a in r] for r in rows]
    for i in range(n):
        if not any(rows[i]):
            raise ZeroRowColumnError(f"row {i + 1} is identically zero")
        if not any(rows[k][i] for k in range(n)):
            raise ZeroRowColumnError(f"column {i + 1} is identically zero")
    for i in range(n):
        if len(_reachable(rows, i)) != n:
            raise ReducibleMatrixError(
                f"matrix is reducible: not every symbol is reachable from {i + 1}"
            )
    if all(sum(r) == 1 for r in rows):
        raise ConditionIError(
            "condition (I) fails: the matrix is a permutation matrix, X_A is finite"
        )
    return TransitionMatrix(tuple(tuple(r) for r in rows))


def matrix_from_json(obj) -> TransitionMatrix:
    """Parse ``{"n": 2, "rows": [[1,1],[1,0]]}`` (or a bare list of rows)."""
    if isinstance(obj, dict):
        if "rows" not in obj:
            raise ValidationError('matrix JSON needs a "rows" field')
        rows = obj["rows"]
        if "n" in obj and obj["n"] != len(rows):
            raise ValidationError('"n" does not match the number of rows')
    else:
        rows = obj
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValidationError("matrix rows must be a list of lists")
    return validate_matrix(rows)


def enumerate_words(A: TransitionMatrix, m: int) -> list:
    """B_m(X_A) in lexicographic order."""
    if m < 0:
        raise ValidationError("word length must be nonnegative")
    words = [()]
    for _ in range(m):
        words = [w + (j,) for w in words for j in A.followers(w)]
    return words


def follower_equal(A: TransitionMatrix, mu: Sequence[int], nu: Sequence[int]) -> bool:
    """Γ⁺_*(μ) = Γ⁺_*(ν), decided by the rows of the last symbols."""
    if not mu or not nu:
        raise EmptyWordError("follower sets are compared for nonempty words only")
    return A.row(mu[-1]) == A.row(nu[-1])


class WordOrder(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    PREFIX_OF_SECOND = "proper_prefix_of_second"
    PREFIX_OF_FIRST = "proper_prefix_of_first"
    EQUAL = "equal"


def word_order(mu: Sequence[int], nu: Sequence[int]) -> WordOrder:
    for a, b in zip(mu, nu):
        if a != b:
            return WordOrder.LESS if a < b else WordOrder.GREATER
    if len(mu) == len(nu):
        return WordOrder.EQUAL
    return WordOrder.PREFIX_OF_SECOND if len(mu) < len(nu) else WordOrder.PREFIX_OF_FIRST


def is_prefix(u: Sequence[int], w: Sequence[int]) -> bool:
    return len(u) <= len(w) and tuple(w[: len(u)]) == tuple(u)


# ---------------------------------------------------------------- points


def _primitive_root(cycle: tuple) -> tuple:
    n = len(cycle)
    for k in range(1, n + 1):
        if n % k == 0 and cycle[:k] * (n // k) == cycle:
            return cycle[:k]
    return cycle


@dataclass(frozen=True, order=False)
class EppPoint:
    """Eventually periodic point ``preamble · cycle · cycle · …`` of X_A.

    Use :meth:`make` to build one; it reduces the cycle to its primitive root
    and moves the period start as early as possible, so that equality of
    points is equality of the dataclass fields.
    """

    preamble: tuple
    cycle: tuple

    @classmethod
    def make(cls, preamble: Iterable[int], cycle: Iterable[int],
             A: TransitionMatrix | None = None) -> "EppPoint":
        pre = tuple(int(s) for s in preamble)
        cyc = tuple(int(s) for s in cycle)
        if not cyc:
            raise ValidationError("an eventually periodic point needs a nonempty cycle")
        if A is not None and not A.is_admissible(pre + cyc + cyc):
            raise InadmissibleWordError(
                f"point {list(pre)}({list(cyc)})^inf is not in X_A"
            )
        cyc = _primitive_root(cyc)
        while pre and pre[-1] == cyc[-1]:
            pre = pre[:-1]
            cyc = (cyc[-1],) + cyc[:-1]
        return cls(pre, cyc)

    def symbol(self, k: int) -> int:
        """The coordinate x_k (1-based)."""
        if k <= len(self.preamble):
            return self.preamble[k - 1]
        return self.cycle[(k - len(self.preamble) - 1) % len(self.cycle)]

    def prefix(self, m: int) -> Word:
        if m <= len(self.preamble):
            return self.preamble[:m]
        extra = m - len(self.preamble)
        reps = -(-extra // len(self.cycle))
        return self.preamble + (self.cycle * reps)[:extra]

    def shift(self, k: int = 1) -> "EppPoint":
        if k <= len(self.preamble):
            return EppPoint.make(self.preamble[k:], self.cycle)
        r = (k - len(self.preamble)) % len(self.cycle)
        return EppPoint.make((), self.cycle[r:] + self.cycle[:r])

    def prepend(self, word: Sequence[int]) -> "EppPoint":
        return EppPoint.make(tuple(word) + self.preamble, self.cycle)

    def is_periodic(self) -> bool:
        return not self.preamble

    def compare(self, other: "EppPoint") -> int:
        """Lexicographic order on X_A: -1, 0 or 1."""
        if self == other:
            return 0
        horizon = (max(len(self.preamble), len(other.preamble))
                   + len(self.cycle) * len(other.cycle))
        a, b = self.prefix(horizon), other.prefix(horizon)
        return -1 if a < b else 1

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def to_json(self) -> dict:
        return {"preamble": list(self.preamble), "cycle": list(self.cycle)}

    def __str__(self):
        sep = "" if max(self.preamble + self.cycle) < 10 else ","
        pre = sep.join(map(str, self.preamble))
        return f"{pre}({sep.join(map(str, self.cycle))})^inf"


def point_from_json(obj, A: TransitionMatrix | None = None) -> EppPoint:
    if not isinstance(obj, dict) or "cycle" not in obj:
        raise ValidationError('point JSON needs "preamble" and "cycle" fields')
    return EppPoint.make(obj.get("preamble", []), obj["cycle"], A)


def epp_shift(x: EppPoint, k: int) -> EppPoint:
    return x.shift(k)


def epp_prefix(x: EppPoint, m: int) -> Word:
    return x.prefix(m)


def epp_equal(x: EppPoint, y: EppPoint) -> bool:
    return EppPoint.make(x.preamble, x.cycle) == EppPoint.make(y.preamble, y.cycle)


def _extension(A: TransitionMatrix, omega: Sequence[int], pick) -> EppPoint:
    w = A.check_word(omega, nonempty=True)
    # The successor choice depends only on the current symbol, so the orbit of
    # the last symbol cycles within n steps.
    seen = {}
    seq = list(w)
    cur = seq[-1]
    while cur not in seen:
        seen[cur] = len(seq) - 1
        cur = pick(A.successors(cur))
        seq.append(cur)
    start = seen[cur]
    return EppPoint.make(seq[: start], seq[start:-1])


def min_extension(A: TransitionMatrix, omega: Sequence[int]) -> EppPoint:
    """ω followed by the smallest allowed successor at every step."""
    return _extension(A, omega, min)


def max_extension(A: TransitionMatrix, omega: Sequence[int]) -> EppPoint:
    return _extension(A, omega, max)


def primitive_cycles(A: TransitionMatrix, max_len: int) -> list:
    """Admissible primitive cycles up to rotation, one representative each."""
    out = []
    for k in range(1, max_len + 1):
        for c in itertools.product(A.symbols, repeat=k):
            if _primitive_root(c) != c or not A.is_admissible(c + c[:1]):
                continue
            if min(c[i:] + c[:i] for i in range(k)) == c:
                out.append(c)
    return out


def enumerate_points(A: TransitionMatrix, max_preamble: int, max_cycle: int) -> list:
    """All distinct eventually periodic points with bounded preamble and cycle."""
    cycles = primitive_cycles(A, max_cycle)
    rotations = {c[i:] + c[:i] for c in cycles for i in range(len(c))}
    words = [w for m in range(max_preamble + 1) for w in enumerate_words(A, m)]
    points = set()
    for pre in words:
        for cyc in rotations:
            if pre and not A[pre[-1], cyc[0]]:
                continue
            points.add(EppPoint.make(pre, cyc))
    return sorted(points, key=lambda x: (x.preamble, x.cycle))


def random_point(A: TransitionMatrix, rng, max_preamble: int = 4,
                 max_cycle: int = 3) -> EppPoint:
    """A random eventually periodic point; ``rng`` is a :class:`random.Random`."""
    cycles = primitive_cycles(A, max_cycle)
    while True:
        c = rng.choice(cycles)
        r = rng.randrange(len(c))
        c = c[r:] + c[:r]
        m = rng.randint(0, max_preamble)
        pre = []
        ok = True
        # walk backwards from the cycle start so the junction is admissible
        nxt = c[0]
        for _ in range(m):
            preds = [i for i in A.symbols if A[i, nxt]]
            if not preds:
                ok = False
                break
            nxt = rng.choice(preds)
            pre.append(nxt)
        if ok:
            return EppPoint.make(reversed(pre), c, A)


def common_refinement(words1: Iterable[Sequence[int]], words2: Iterable[Sequence[int]]) -> list:
    """Meet of two cylinder partitions given by complete prefix codes."""
    ws2 = sorted(tuple(w) for w in words2)
    out = []
    for u in sorted(tuple(w) for w in words1):
        for v in ws2:
            if is_prefix(u, v):
                out.append(v)
            elif is_prefix(v, u):
                out.append(u)
    return sorted(set(out))
