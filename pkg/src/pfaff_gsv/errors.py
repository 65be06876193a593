"""Exception hierarchy; the CLI maps each family onto an exit code."""


class PfaffError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 2


class InvalidInput(PfaffError):
    """Malformed or inconsistent input (exit code 2)."""


class DimensionError(InvalidInput, ValueError):
    pass


class ParseError(InvalidInput):
    def __init__(self, message: str, text: str = "", position: int | None = None, line: int | None = None):
        self.message = message
        self.text = text
        self.position = position
        self.line = line
        super().__init__(self._render())

    def _render(self) -> str:
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.position is not None:
            where.append(f"column {self.position + 1}")
        loc = f" ({', '.join(where)})" if where else ""
        snippet = ""
        if self.text and self.position is not None:
            snippet = f"\n  {self.text}\n  {' ' * self.position}^"
        return f"{self.message}{loc}{snippet}"

    def at_line(self, line: int | None) -> "ParseError":
        return ParseError(self.message, self.text, self.position, line)


class ValidationError(InvalidInput):
    """A named type invariant does not hold."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}" if detail else invariant)


class ResourceCapExceeded(PfaffError):
    """A Groebner or order computation left desk scale (exit code 3)."""

    exit_code = 3


class ComputationError(PfaffError):
    """A mathematical precondition or consistency check failed (exit code 1)."""

    exit_code = 1
