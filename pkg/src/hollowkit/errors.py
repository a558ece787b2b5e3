"""Exception hierarchy shared by all hollowkit modules."""


class HollowkitError(Exception):
    """Base class for every error raised by hollowkit."""

    #: short machine-readable tag used by the CLI error JSON
    code = "HollowkitError"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class InvalidMatrix(HollowkitError, ValueError):
    code = "InvalidMatrix"


class SizeMismatch(InvalidMatrix):
    code = "SizeMismatch"


class ConditionFailure(HollowkitError):
    """A mathematical hypothesis needed by a construction does not hold."""

    code = "ConditionFailure"


class DefiniteInput(ConditionFailure):
    code = "DefiniteInput"


class ConditionsNotMet(ConditionFailure):
    code = "ConditionsNotMet"


class ZeroingInfeasible(ConditionsNotMet):
    """Hypotheses hold but no orthogonal transform achieves the pattern."""

    code = "ZeroingInfeasible"


class GivensInfeasible(ConditionFailure):
    code = "GivensInfeasible"


class NotTraceless(ConditionFailure):
    code = "NotTraceless"


class SizeTooSmall(ConditionFailure):
    code = "SizeTooSmall"


class StepConditionsNotMet(ConditionFailure):
    code = "StepConditionsNotMet"

    def __init__(self, step, message="", report=None):
        super().__init__(message or f"no admissible construction at step {step}")
        self.step = step
        self.report = report

    def to_dict(self):
        out = super().to_dict()
        out["step"] = self.step
        if self.report is not None:
            out["report"] = self.report
        return out


class FinalStepConditionsNotMet(StepConditionsNotMet):
    code = "FinalStepConditionsNotMet"


class NumericalBreakdown(HollowkitError, ArithmeticError):
    code = "NumericalBreakdown"


class NotFound(NumericalBreakdown):
    code = "NotFound"
