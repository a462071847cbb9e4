class SubbasisError(Exception):
    """Base class for every error raised by this package."""


class FuelExhausted(SubbasisError):
    """A step budget ran out before the computation finished."""

    def __init__(self, used: int, message: str = ""):
        self.used = used
        super().__init__(message or f"fuel exhausted after {used} steps")


class NameExhausted(SubbasisError, IndexError):
    """A name built from a finite prefix was read past its end."""

    def __init__(self, index: int, length: int):
        self.index = index
        self.length = length
        super().__init__(f"name prefix has {length} entries, position {index} was requested")


class RepresentationError(SubbasisError):
    """A representation constructor or translation precondition failed."""


class WorldError(SubbasisError):
    """Unknown world, bad world parameters, or an operation the world refuses."""


class CodingError(SubbasisError, ValueError):
    """A literal (rational, ball, name-prefix line) could not be parsed."""
