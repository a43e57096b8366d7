"""Exception hierarchy shared across the package."""


class CausalLoomError(Exception):
    """Base class for every error raised by causal_loom."""


class ModelError(CausalLoomError):
    """Structurally invalid equation or system (construction-time)."""


class ParseError(CausalLoomError):
    """Syntax or semantic error in a model document."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class OverConstrainedError(CausalLoomError):
    """Operation requires a non-over-constrained system."""


class EvaluationError(CausalLoomError):
    """Numeric failure while evaluating an explicit equation."""

    def __init__(self, message: str, equation_id: str | None = None):
        self.equation_id = equation_id
        if equation_id is not None:
            message = f"{message} (equation {equation_id})"
        super().__init__(message)


class KbError(CausalLoomError):
    """Malformed knowledge base document or invalid KB operation."""


class KbPathError(KbError):
    """A KB path that does not resolve to a folder or mechanism."""


class WorkspaceError(CausalLoomError):
    """Invalid workspace action: unknown ids or bad pending state."""
