"""A-adic tables: the combinatorial presentation of elements of Γ_A.

A table is a list of rows ``(domain ν, range μ)``; the element it presents
maps ``ν·x`` to ``μ·x``.  Rows are kept sorted by domain word, so that for a
prefix-free column plain tuple order is the cylinder order ≺.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .exceptions import (
    DomainError,
    EmptyWordError,
    FollowerMismatchError,
    GenerationError,
    PartitionError,
    ValidationError,
)
from .sft_core import (
    EppPoint,
    TransitionMatrix,
    follower_equal,
    is_prefix,
)
from .steps import StepFunction

Row = tuple  # (domain word, range word)


@dataclass(frozen=True)
class AdicTable:
    """A validated A-adic table.  Construct with :func:`validate_table`."""

    matrix: TransitionMatrix
    rows: tuple

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def domain(self) -> tuple:
        return tuple(nu for nu, _ in self.rows)

    @property
    def range(self) -> tuple:
        return tuple(mu for _, mu in self.rows)

    @property
    def domain_depth(self) -> int:
        return max(len(nu) for nu in self.domain)

    @property
    def range_depth(self) -> int:
        return max(len(mu) for mu in self.range)

    @cached_property
    def _lookup(self) -> dict:
        return dict(self.rows)

    def row_for(self, x: EppPoint) -> Row:
        """The row whose domain cylinder contains ``x``."""
        lookup = self._lookup
        for k in range(1, self.domain_depth + 1):
            w = x.prefix(k)
            if w in lookup:
                return w, lookup[w]
        raise DomainError(f"no row contains the point {x}")  # pragma: no cover

    def row_containing(self, word: Sequence[int]) -> Row:
        """The row whose domain word is a prefix of ``word``."""
        lookup = self._lookup
        for k in range(1, len(word) + 1):
            w = tuple(word[:k])
            if w in lookup:
                return w, lookup[w]
        raise DomainError(f"word {list(word)} is not refined by the domain column")

    def to_json(self) -> dict:
        return {"rows": [{"domain": list(nu), "range": list(mu)} for nu, mu in self.rows]}

    def __str__(self):
        def fmt(w):
            return "".join(map(str, w)) if self.matrix.n < 10 else ",".join(map(str, w))
        return "{" + ", ".join(f"{fmt(nu)}->{fmt(mu)}" for nu, mu in self.rows) + "}"


# ------------------------------------------------------------ validation


def is_partition(A: TransitionMatrix, words: Iterable[Sequence[int]]) -> bool:
    """Whether the cylinders of ``words`` partition X_A."""
    try:
        _check_partition(A, [tuple(w) for w in words], "column")
    except PartitionError:
        return False
    return True


def _check_partition(A: TransitionMatrix, words: list, label: str) -> None:
    ws = sorted(words)
    if not ws:
        raise PartitionError(f"{label} is empty")
    for u, v in zip(ws, ws[1:]):
        if is_prefix(u, v):
            raise PartitionError(
                f"{label}: word {list(u)} is a prefix of {list(v)} (cylinders overlap)")
    wordset = set(ws)
    prefixes = {w[:k] for w in ws for k in range(len(w))}
    # every internal node of the prefix tree must have all allowed children present
    for node in prefixes:
        for j in A.followers(node):
            child = node + (j,)
            if child not in wordset and child not in prefixes:
                raise PartitionError(
                    f"{label}: the cylinder of {list(child)} is not covered")


def validate_table(A: TransitionMatrix, rows) -> AdicTable:
    """Validate ``(domain, range)`` pairs and return a sorted :class:`AdicTable`."""
    clean = []
    for nu, mu in rows:
        nu = A.check_word(nu)
        mu = A.check_word(mu)
        if not nu or not mu:
            raise EmptyWordError("table rows must use nonempty words")
        clean.append((nu, mu))
    _check_partition(A, [nu for nu, _ in clean], "domain column")
    _check_partition(A, [mu for _, mu in clean], "range column")
    for nu, mu in clean:
        if not follower_equal(A, nu, mu):
            raise FollowerMismatchError(
                f"row {list(nu)} -> {list(mu)}: follower sets differ")
    return AdicTable(A, tuple(sorted(clean)))


def _table(A: TransitionMatrix, rows) -> AdicTable:
    return AdicTable(A, tuple(sorted(rows)))


def table_from_json(A: TransitionMatrix, obj) -> AdicTable:
    try:
        rows = [(r["domain"], r["range"]) for r in obj["rows"]]
    except (KeyError, TypeError):
        raise ValidationError(
            'table JSON must look like {"rows": [{"domain": [..], "range": [..]}, ...]}'
        ) from None
    return validate_table(A, rows)


def identity_table(A: TransitionMatrix) -> AdicTable:
    return _table(A, [((j,), (j,)) for j in A.symbols])


# ------------------------------------------------------------ expansion


def expand_row(T: AdicTable, i: int) -> AdicTable:
    """Replace row ``i`` (0-based) by its complete one-symbol sibling family."""
    if not 0 <= i < len(T.rows):
        raise DomainError(f"row index {i} out of range for a table with {len(T)} rows")
    nu, mu = T.rows[i]
    kids = [(nu + (a,), mu + (a,)) for a in T.matrix.followers(nu)]
    return _table(T.matrix, T.rows[:i] + tuple(kids) + T.rows[i + 1:])


def expand_to_depth(T: AdicTable, p: int) -> AdicTable:
    """Equivalent table whose domain column is exactly B_p(X_A)."""
    if p < T.domain_depth:
        raise DomainError(f"depth {p} is below the domain depth {T.domain_depth}")
    A = T.matrix
    rows = []
    for nu, mu in T.rows:
        tails = [()]
        for _ in range(p - len(nu)):
            tails = [t + (a,) for t in tails for a in A.followers(nu + t)]
        rows.extend((nu + t, mu + t) for t in tails)
    return _table(A, rows)


def expand_range_to_depth(T: AdicTable, q: int) -> AdicTable:
    """Equivalent table whose range column is exactly B_q(X_A)."""
    return inverse(expand_to_depth(inverse(T), q))


def tables_equivalent(T1: AdicTable, T2: AdicTable) -> bool:
    """Whether two tables present the same element (T1 ≈ T2)."""
    if T1.matrix != T2.matrix:
        raise ValidationError("tables over different matrices")
    M = max(T1.domain_depth, T2.domain_depth)
    return expand_to_depth(T1, M).rows == expand_to_depth(T2, M).rows


def reduce(T: AdicTable) -> AdicTable:
    """Merge complete sibling families until none is left.

    A family ``{(ν̂α → μ̂α) : α ∈ Γ₁⁺(ν̂)}`` with nonempty, follower-equal stems
    collapses to ``(ν̂ → μ̂)``.
    """
    A = T.matrix
    rows = dict(T.rows)
    changed = True
    while changed:
        changed = False
        families = {}
        for nu, mu in rows.items():
            if len(nu) >= 2 and len(mu) >= 2 and nu[-1] == mu[-1]:
                families.setdefault((nu[:-1], mu[:-1]), []).append(nu[-1])
        for (nh, mh), alphas in families.items():
            if sorted(alphas) == list(A.followers(nh)) and follower_equal(A, nh, mh):
                for a in alphas:
                    del rows[nh + (a,)]
                rows[nh] = mh
                changed = True
    return _table(A, rows.items())


def minimal_size(T: AdicTable) -> int:
    """Fewest rows of any table presenting the same element (exhaustive search).

    A domain word ν can be a row exactly when the element maps ``ν·x`` to
    ``μ·x`` for one word μ with the same follower set; the minimum is then a
    simple recursion over the prefix tree.
    """
    A = T.matrix
    deep = expand_to_depth(T, T.domain_depth)
    lookup = dict(deep.rows)
    D = T.domain_depth

    def image_stem(nu):
        stems = set()
        tails = [()]
        for _ in range(D - len(nu)):
            tails = [t + (a,) for t in tails for a in A.followers(nu + t)]
        for t in tails:
            mu = lookup[nu + t]
            if len(mu) < len(t) or mu[len(mu) - len(t):] != t:
                return None
            stems.add(mu[: len(mu) - len(t)])
        if len(stems) != 1:
            return None
        (mu,) = stems
        if not mu or not follower_equal(A, nu, mu):
            return None
        return mu

    def best(nu):
        if nu and image_stem(nu) is not None:
            return 1
        return sum(best(nu + (a,)) for a in A.followers(nu))

    return best(())


# ------------------------------------------------------------ group law


def compose(T1: AdicTable, T2: AdicTable, *, reduced: bool = True) -> AdicTable:
    """Table presenting τ₁ ∘ τ₂ (T2 is applied first).

    Range words of T2 are matched against domain words of T1 by prefix, so
    neither table is expanded further than needed.
    """
    if T1.matrix != T2.matrix:
        raise ValidationError("tables over different matrices")
    dom1 = sorted(T1.rows)
    rows = []
    for nu2, mu2 in T2.rows:
        for nu1, mu1 in dom1:
            if is_prefix(mu2, nu1):
                rows.append((nu2 + nu1[len(mu2):], mu1))
            elif is_prefix(nu1, mu2):
                rows.append((nu2, mu1 + mu2[len(nu1):]))
    out = validate_table(T1.matrix, rows)
    return reduce(out) if reduced else out


def compose_uniform(T1: AdicTable, T2: AdicTable) -> AdicTable:
    """τ₁ ∘ τ₂ by expanding T1's domain and T2's range to a common depth."""
    M = max(T1.domain_depth, T2.range_depth)
    E1 = dict(expand_to_depth(T1, M).rows)
    E2 = expand_range_to_depth(T2, M)
    return _table(T1.matrix, [(nu2, E1[mu2]) for nu2, mu2 in E2.rows])


def inverse(T: AdicTable) -> AdicTable:
    return _table(T.matrix, [(mu, nu) for nu, mu in T.rows])


def apply(T: AdicTable, x: EppPoint) -> EppPoint:
    """Image of an eventually periodic point under the cylinder map."""
    nu, mu = T.row_for(x)
    return x.shift(len(nu)).prepend(mu)


def cocycle(T: AdicTable) -> StepFunction:
    """d_τ = |ν(i)| - |μ(i)| on each domain cylinder U_{ν(i)}."""
    return StepFunction(tuple((nu, len(nu) - len(mu)) for nu, mu in T.rows))


CocycleSteps = StepFunction


# ------------------------------------------------------------ F_A and T_A


class OrderClass(enum.Enum):
    ORDER_PRESERVING = "order_preserving"
    CYCLIC_ORDER_PRESERVING = "cyclic_order_preserving"
    GENERAL = "general"


def _order_class_of_ranks(seq: Sequence) -> OrderClass:
    m = len(seq)
    descents = sum(1 for i in range(m - 1) if seq[i] > seq[i + 1])
    if descents == 0:
        return OrderClass.ORDER_PRESERVING
    if descents == 1 and seq[-1] < seq[0]:
        return OrderClass.CYCLIC_ORDER_PRESERVING
    return OrderClass.GENERAL


def classify_order(T: AdicTable) -> OrderClass:
    """F_A / T_A membership read off the range column."""
    return _order_class_of_ranks(T.range)


# ------------------------------------------------------------ random tables


def _random_code(A: TransitionMatrix, rng: random.Random, max_depth: int,
                 split_prob: float = 0.5) -> list:
    words = []

    def grow(w):
        if w and (len(w) >= max_depth or rng.random() >= split_prob):
            words.append(w)
            return
        for a in A.followers(w):
            grow(w + (a,))

    grow(())
    return words


class _CodeSampler:
    """Random prefix codes whose leaf follower classes match a target.

    ``cls[s]`` is the follower class of symbol s.  Two targets are supported:
    an exact sequence of classes in ≺ order, or a multiset (count vector).
    """

    def __init__(self, A: TransitionMatrix, max_depth: int):
        self.A = A
        self.max_depth = max_depth
        rows = sorted(set(A.entries))
        self.cls = {s: rows.index(A.row(s)) for s in A.symbols}
        self.nclasses = len(rows)

    # -- exact sequence --------------------------------------------------

    def sample_sequence(self, target: Sequence[int], rng: random.Random):
        target = tuple(target)
        memo = {}

        def count_node(s, depth, i, j):
            # trees rooted at a node ending in s (at given depth) with leaf classes target[i:j]
            key = ("n", s, depth, i, j)
            if key in memo:
                return memo[key]
            total = 1 if (j == i + 1 and target[i] == self.cls[s]) else 0
            if depth < self.max_depth and j - i >= 1:
                total += count_kids(self.A.successors(s), depth + 1, i, j)
            memo[key] = total
            return total

        def count_kids(kids, depth, i, j):
            key = ("k", kids, depth, i, j)
            if key in memo:
                return memo[key]
            if not kids:
                total = 1 if i == j else 0
            else:
                total = 0
                rest = len(kids) - 1
                for k in range(i + 1, j - rest + 1):
                    c = count_node(kids[0], depth, i, k)
                    if c:
                        total += c * count_kids(kids[1:], depth, k, j)
            memo[key] = total
            return total

        def draw_node(w, s, i, j):
            depth = len(w)
            leaf = 1 if (j == i + 1 and target[i] == self.cls[s]) else 0
            split = count_kids(self.A.successors(s), depth + 1, i, j) \
                if depth < self.max_depth else 0
            if rng.randrange(leaf + split) < leaf:
                return [w]
            return draw_kids(w, self.A.successors(s), i, j)

        def draw_kids(w, kids, i, j):
            if not kids:
                return []
            rest = len(kids) - 1
            options = []
            for k in range(i + 1, j - rest + 1):
                c = count_node(kids[0], len(w) + 1, i, k)
                if c:
                    c *= count_kids(kids[1:], len(w) + 1, k, j)
                if c:
                    options.append((k, c))
            k = _weighted_choice(rng, options)
            return draw_node(w + (kids[0],), kids[0], i, k) + draw_kids(w, kids[1:], k, j)

        top = tuple(self.A.symbols)
        if not count_kids(top, 1, 0, len(target)):
            return None
        return draw_kids((), top, 0, len(target))

    # -- multiset -------------------------------------------------------

    def sample_counts(self, target: Sequence[int], rng: random.Random):
        target = tuple(target)
        memo = {}

        def vecs_node(s, depth):
            key = ("n", s, depth)
            if key in memo:
                return memo[key]
            leaf = [0] * self.nclasses
            leaf[self.cls[s]] = 1
            out = {tuple(leaf)}
            if depth < self.max_depth:
                out |= vecs_kids(self.A.successors(s), depth + 1)
            memo[key] = out
            return out

        def vecs_kids(kids, depth):
            key = ("k", kids, depth)
            if key in memo:
                return memo[key]
            if not kids:
                out = {(0,) * self.nclasses}
            else:
                out = set()
                for u in vecs_node(kids[0], depth):
                    for v in vecs_kids(kids[1:], depth):
                        t = tuple(a + b for a, b in zip(u, v))
                        if all(a <= b for a, b in zip(t, target)):
                            out.add(t)
            memo[key] = out
            return out

        def draw_node(w, s, vec):
            leaf = [0] * self.nclasses
            leaf[self.cls[s]] = 1
            opts = []
            if tuple(leaf) == vec:
                opts.append("leaf")
            if len(w) < self.max_depth and vec in vecs_kids(self.A.successors(s), len(w) + 1):
                opts.append("split")
            if rng.choice(opts) == "leaf":
                return [w]
            return draw_kids(w, self.A.successors(s), vec)

        def draw_kids(w, kids, vec):
            if not kids:
                return []
            depth = len(w) + 1
            firsts = sorted(
                u for u in vecs_node(kids[0], depth)
                if all(a <= b for a, b in zip(u, vec))
                and tuple(b - a for a, b in zip(u, vec)) in vecs_kids(kids[1:], depth)
            )
            u = rng.choice(firsts)
            rest = tuple(b - a for a, b in zip(u, vec))
            return draw_node(w + (kids[0],), kids[0], u) + draw_kids(w, kids[1:], rest)

        top = tuple(self.A.symbols)
        if target not in vecs_kids(top, 1):
            return None
        return draw_kids((), top, target)


def _weighted_choice(rng: random.Random, options):
    total = sum(c for _, c in options)
    r = rng.randrange(total)
    for k, c in options:
        if r < c:
            return k
        r -= c
    raise AssertionError("unreachable")  # pragma: no cover


def random_table(A: TransitionMatrix, seed=None, max_depth: int = 3,
                 kind: OrderClass = OrderClass.GENERAL, *, rng=None) -> AdicTable:
    """A random valid table, deterministic for a given seed.

    The domain column is a random prefix code of depth at most ``max_depth``.
    The range column is drawn among prefix codes with the same follower-class
    multiset (``GENERAL``), the same class sequence (``ORDER_PRESERVING``) or
    a rotation of it (``CYCLIC_ORDER_PRESERVING``); rows are then paired
    class by class.
    """
    if max_depth < 1:
        raise DomainError("max_depth must be at least 1")
    rng = rng if rng is not None else random.Random(seed)
    sampler = _CodeSampler(A, max_depth)
    for _ in range(50):
        dom = _random_code(A, rng, max_depth)
        classes = [sampler.cls[w[-1]] for w in dom]
        if kind is OrderClass.GENERAL:
            counts = [0] * sampler.nclasses
            for c in classes:
                counts[c] += 1
            rng_code = sampler.sample_counts(counts, rng)
            if rng_code is None:
                continue
            by_class = {}
            for w in rng_code:
                by_class.setdefault(sampler.cls[w[-1]], []).append(w)
            for ws in by_class.values():
                rng.shuffle(ws)
            rows = [(nu, by_class[c].pop()) for nu, c in zip(dom, classes)]
        else:
            k = rng.randrange(len(dom)) if kind is OrderClass.CYCLIC_ORDER_PRESERVING else 0
            rotated = classes[k:] + classes[:k]
            rng_code = sampler.sample_sequence(rotated, rng)
            if rng_code is None:
                continue
            # range word for domain row i is the (i - k)-th smallest range word
            m = len(dom)
            rows = [(dom[i], rng_code[(i - k) % m]) for i in range(m)]
        return validate_table(A, rows)
    raise GenerationError("random table generation failed after bounded retries")
