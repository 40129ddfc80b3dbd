"""Shared exception types."""


class InputError(ValueError):
    """Malformed input: dimension mismatch, asymmetric matrix, bad parameter."""


class DomainError(ValueError):
    """Evaluation outside the declared open domain of a chart expression."""


class DegenerateMetricError(RuntimeError):
    """An operation requiring a non-degenerate induced metric met a degenerate one."""
