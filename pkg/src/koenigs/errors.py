class KoenigsError(ValueError):
    """A mathematical precondition failed."""


class InsufficientOrderError(KoenigsError):
    def __init__(self, required: int, available: int, what: str = "check"):
        self.required = required
        self.available = available
        super().__init__(f"{what} needs series order >= {required}, got {available}")


class ParseError(KoenigsError):
    def __init__(self, message: str, position: int, expected: str | None = None):
        self.position = position
        self.expected = expected
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)
