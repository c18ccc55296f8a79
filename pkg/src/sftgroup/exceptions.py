"""Exception classes raised across the package.

Every error carries a short machine-readable ``code`` used by the CLI error
objects.  Input problems derive from :class:`ValidationError`; failures of an
internal consistency check derive from :class:`ComputationError`.
"""


class SFTGroupError(Exception):
    code = "error"

    def to_json(self):
        return {"code": self.code, "message": str(self)}


class ValidationError(SFTGroupError, ValueError):
    code = "invalid_input"


class ComputationError(SFTGroupError, ArithmeticError):
    code = "computation_failed"


class ZeroRowColumnError(ValidationError):
    code = "zero_row_or_column"


class ReducibleMatrixError(ValidationError):
    code = "reducible"


class ConditionIError(ValidationError):
    code = "condition_I"


class InadmissibleWordError(ValidationError):
    code = "inadmissible_word"


class EmptyWordError(ValidationError):
    code = "empty_word"


class PartitionError(ValidationError):
    """A table column does not partition X_A into cylinders."""

    code = "non_partition"


class FollowerMismatchError(ValidationError):
    code = "follower_mismatch"


class DomainError(ValidationError):
    """An argument lies outside the domain of the operation."""

    code = "outside_domain"


class FieldZeroDivisionError(SFTGroupError, ZeroDivisionError):
    code = "division_by_zero"


class GenerationError(ComputationError):
    code = "generation_failed"


class SemiconjugacyError(ComputationError):
    code = "semiconjugacy_failed"
