"""
Exception hierarchy for handlecert.

Every failure the pipeline can report is a HandlecertError; the CLI turns
them into exit code 1 and I/O or usage problems into exit code 2.
"""


class HandlecertError(RuntimeError):
    pass


class DiagramSyntaxError(HandlecertError):
    """Malformed diagram text, with a 1-based line/column position."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class DiagramSemanticError(HandlecertError):
    """Well-formed text that violates diagram invariants."""

    def __init__(self, issues):
        self.issues = tuple(issues)
        summary = "; ".join(issue.message for issue in self.issues) or "invalid diagram"
        super().__init__(summary)


class MoveError(HandlecertError):
    pass


class ComponentError(HandlecertError):
    pass


class SurgeryError(HandlecertError):
    pass


class NormalFormError(HandlecertError):
    pass


class PipelineRefusal(HandlecertError):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class ReplayError(HandlecertError):
    pass


class BundleFormatError(HandlecertError):
    pass
