"""Shared exception types."""


class ConfigurationError(ValueError):
    """A run/operator/problem configuration is internally inconsistent."""


class EvaluationError(RuntimeError):
    """An objective returned a non-finite fitness."""


class InsufficientDataError(ValueError):
    """Too few observations for the requested statistic."""


class IncompleteDesignError(ValueError):
    """A task x method score matrix has missing cells."""

    def __init__(self, missing):
        self.missing = list(missing)
        cells = ", ".join(f"({t}, {m})" for t, m in self.missing)
        super().__init__(f"incomplete design, missing cells: {cells}")
