from __future__ import annotations


class MonopolyLabError(Exception):
    """
    Base class for every error raised by monopoly-lab.
    """


class InvalidParameterError(MonopolyLabError, ValueError):
    pass


class ThresholdExceedsDegreeError(InvalidParameterError):
    def __init__(self, message: str, vertex: int | None = None, threshold: int | None = None, degree: int | None = None) -> None:
        super().__init__(message)
        self.vertex = vertex
        self.threshold = threshold
        self.degree = degree


class UnsupportedMajorityError(InvalidParameterError):
    def __init__(self, message: str, vertex: int, degree: int) -> None:
        super().__init__(message)
        self.vertex = vertex
        self.degree = degree


class UnsupportedRegimeError(MonopolyLabError):
    def __init__(self, message: str, nearest: str | None = None) -> None:
        super().__init__(message)
        self.nearest = nearest


class ConstructionError(MonopolyLabError):
    """
    A construction failed its own engine check. Treated as a bug, never returned.
    """


class ParseError(MonopolyLabError):
    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
