"""Semantic exceptions shared across modules."""

from __future__ import annotations


class DegenerateNormalizationError(ValueError):
    """Raised when an operation needs positive total variance but got zero."""


class UnknownFixtureError(KeyError):
    """Raised for a fixture name missing from the registry."""

    def __init__(self, name: str, known: tuple[str, ...]):
        self.name = name
        self.known = known
        super().__init__(name)

    def __str__(self) -> str:
        return (f"unknown fixture {self.name!r}; known fixtures: "
                + ", ".join(self.known))


class ScenarioParseError(ValueError):
    """Scenario document error, carrying 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
