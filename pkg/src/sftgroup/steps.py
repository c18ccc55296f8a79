"""Functions on X_A that are constant on the cylinders of a prefix code."""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Callable, Sequence

from .exceptions import DomainError
from .sft_core import EppPoint, common_refinement, is_prefix


@dataclass(frozen=True)
class StepFunction:
    """``steps`` is a tuple of ``(word, value)`` pairs; the words partition X_A."""

    steps: tuple

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(sorted(self.steps, key=lambda s: s[0])))

    @property
    def words(self) -> tuple:
        return tuple(w for w, _ in self.steps)

    def value_on(self, word: Sequence[int]):
        """Value on a cylinder U_word contained in one step."""
        word = tuple(word)
        for w, v in self.steps:
            if is_prefix(w, word):
                return v
        raise DomainError(f"cylinder {list(word)} is not inside a single step")

    def __call__(self, x: EppPoint):
        for w, v in self.steps:
            if x.prefix(len(w)) == w:
                return v
        raise DomainError(f"no step contains {x}")  # pragma: no cover

    def refine(self, words) -> "StepFunction":
        return StepFunction(tuple((tuple(w), self.value_on(w)) for w in words))

    def map(self, fn: Callable) -> "StepFunction":
        return StepFunction(tuple((w, fn(v)) for w, v in self.steps))

    def combine(self, other: "StepFunction", op: Callable) -> "StepFunction":
        words = common_refinement(self.words, other.words)
        return StepFunction(tuple((w, op(self.value_on(w), other.value_on(w))) for w in words))

    def __add__(self, other):
        return self.combine(other, operator.add)

    def __mul__(self, other):
        return self.combine(other, operator.mul)

    def __neg__(self):
        return self.map(operator.neg)

    def precompose(self, table) -> "StepFunction":
        """The function ``x ↦ self(τ(x))`` for the cylinder map of ``table``.

        ``table`` is anything iterable over ``(domain, range)`` rows.
        """
        out = []
        for nu, mu in table:
            for w, v in self.steps:
                if is_prefix(w, mu):
                    out.append((nu, v))
                elif is_prefix(mu, w):
                    out.append((nu + w[len(mu):], v))
        return StepFunction(tuple(out))

    def equivalent(self, other: "StepFunction") -> bool:
        """Equality as functions on X_A, checked on the common refinement."""
        return all(self.combine(other, operator.eq).values())

    def values(self) -> tuple:
        return tuple(v for _, v in self.steps)
