"""Built-in transition matrices, addressable by name from the CLI."""

from __future__ import annotations

from .exceptions import ValidationError
from .sft_core import TransitionMatrix, validate_matrix

BUILTIN = {
    "full2": ((1, 1), (1, 1)),
    "full3": ((1, 1, 1), (1, 1, 1), (1, 1, 1)),
    "fibonacci": ((1, 1), (1, 0)),
    # β³ = β² + 1
    "cubic": ((1, 1, 0), (0, 0, 1), (1, 0, 0)),
    # characteristic polynomial x(x² - x - 1): β is the golden ratio on 3 symbols
    "golden_edge": ((1, 1, 0), (0, 0, 1), (1, 1, 0)),
}


def builtin(name: str) -> TransitionMatrix:
    try:
        return validate_matrix(BUILTIN[name])
    except KeyError:
        raise ValidationError(
            f"unknown built-in matrix {name!r}; choose from {', '.join(BUILTIN)}") from None


def all_builtins() -> dict:
    return {name: builtin(name) for name in BUILTIN}
