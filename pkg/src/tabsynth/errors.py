"""Exception taxonomy shared across the package.

Execution errors all derive from ExecError so the sampler can treat any of
them as "discard this attempt and retry".
"""
from __future__ import annotations


class TabsynthError(Exception):
    pass


class MalformedInputError(TabsynthError):
    """Unloadable table or context input; message carries diagnostics."""


class TemplateError(TabsynthError):
    pass


class ParseError(TemplateError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class ArityError(TemplateError):
    pass


class DanglingValueError(TemplateError):
    """A value placeholder has no bound column and is not root-decidable."""


class ExecError(TabsynthError):
    pass


class ExecTypeError(ExecError):
    pass


class MissingColumnError(ExecError):
    pass


class EmptyIntermediateError(ExecError):
    pass


class DivideByZeroError(ExecError):
    pass


class UnresolvedCellError(ExecError):
    pass


class NonSingletonDiffError(ExecError):
    pass


class CannotPerturbError(ExecError):
    """No refuted/supported variant of a claim can be constructed."""


class SamplingError(TabsynthError):
    pass


class NoEligibleColumnsError(SamplingError):
    pass


class IncompleteBindingError(SamplingError):
    pass


class ConfigError(TabsynthError):
    pass


class EndpointUnavailableError(TabsynthError):
    """External realizer endpoint failed after bounded retries."""
