"""Exception types shared across the package."""

from typing import Optional


class KidModelError(Exception):
    """Base class for every error raised by kidmodel."""


class ParseError(KidModelError, ValueError):
    """Malformed input file, with an optional source position."""

    def __init__(
        self,
        message: str,
        *,
        source: Optional[str] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        self.message = message
        self.source = source
        self.line = line
        self.column = column
        super().__init__(self._render())

    def _render(self) -> str:
        where = []
        if self.source:
            where.append(self.source)
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column}")
        if where:
            return f"{', '.join(where)}: {self.message}"
        return self.message


class UnknownNameError(KidModelError, LookupError):
    """An activity, attribute or dimension name that the context does not define."""

    def __init__(self, kind: str, name: str, valid: Optional[list] = None):
        self.kind = kind
        self.name = name
        self.valid = list(valid) if valid is not None else None
        msg = f"unknown {kind} {name!r}"
        if self.valid:
            msg += f"; valid: {', '.join(self.valid)}"
        super().__init__(msg)

    def __str__(self) -> str:
        return self.args[0]


class ConfigError(KidModelError, ValueError):
    """Invalid configuration value or inconsistent model inputs."""


class TimeRegressionError(KidModelError, ValueError):
    """An event or tick arrived earlier than the engine clock."""


class LatticeTooLargeError(KidModelError, ValueError):
    """Concept enumeration was requested on a context wider than the bitset bound."""
