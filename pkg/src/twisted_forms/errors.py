class TwistedFormsError(Exception):
    pass


class ScalarDivisionError(TwistedFormsError, ZeroDivisionError, ValueError):
    pass


class FieldError(TwistedFormsError, ValueError):
    pass


class EndomorphismError(TwistedFormsError, ValueError):
    pass


class ConfigError(TwistedFormsError, ValueError):
    pass


class ExportError(TwistedFormsError, ValueError):
    pass


class ExpressionError(TwistedFormsError, ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class ExpressionSyntaxError(ExpressionError):
    pass


class UnknownIdentifierError(ExpressionError):
    pass


class UnsupportedContextError(TwistedFormsError):
    pass


class CapExceededError(TwistedFormsError):
    pass


class SingularBlockError(TwistedFormsError):
    pass


class PreconditionError(TwistedFormsError):
    pass


class MalformedGeneratorError(TwistedFormsError):
    pass


class UnstableWindowError(TwistedFormsError):
    def __init__(self, message: str, witnesses: list[str] | None = None) -> None:
        super().__init__(message)
        self.witnesses = witnesses or []
