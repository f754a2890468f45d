"""
Typed errors raised by the omegatile engine
"""

from typing import Optional


class OmegaTileError(Exception):
    """Base class for every error raised by omegatile"""


class DomainMismatch(OmegaTileError):
    """A run or configuration does not cover the same domain as its picture"""


class SizeOverflow(OmegaTileError):
    """A set would exceed the configured enumeration bound"""

    def __init__(self, size: int, bound: int):
        self.size = size
        self.bound = bound
        super().__init__(f"{size} squares exceed the enumeration bound {bound}")


class PrefixTooShort(OmegaTileError):
    """A word prefix does not determine the requested window"""

    def __init__(self, required: int, actual: int):
        self.required = required
        self.actual = actual
        super().__init__(f"prefix of length {actual} is too short, {required} letters required")


class AlphabetMismatch(OmegaTileError):
    """Two systems or machines do not share their input alphabet"""


class LengthMismatch(OmegaTileError):
    """Two words that must have equal length do not"""


class NonPositive(OmegaTileError):
    """An index that must be at least 1 is not"""


class ShapeMismatch(OmegaTileError):
    """Two windows or grids have different shapes, or a shape is malformed"""


class OutOfWindow(OmegaTileError):
    """An ordinal or coordinate lies outside the window"""


class WidthOverflow(OmegaTileError):
    """A state index does not fit the declared code width"""


class InvariantViolation(OmegaTileError):
    """A value breaks one of the model invariants"""

    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(detail)


class ParseError(OmegaTileError):
    """A text file could not be parsed"""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class PrefixExhausted(OmegaTileError):
    """A machine head moved past the end of the supplied input prefix"""

    def __init__(self, position: int, length: int):
        self.position = position
        self.length = length
        super().__init__(f"head position {position} lies past the prefix of length {length}")


class BudgetExhausted(OmegaTileError):
    """A bounded search or simulation ran out of budget"""

    def __init__(self, limit: int, explored: int, what: str = "search nodes"):
        self.limit = limit
        self.explored = explored
        self.what = what
        super().__init__(f"budget of {limit} {what} exhausted after {explored}")


def suggest(name: str, choices, cutoff: int = 70) -> Optional[str]:
    """Closest known name to a misspelled one, or None"""
    from fuzzywuzzy import process

    choices = list(choices)
    if not choices:
        return None
    match = process.extractOne(name, choices)
    if match and match[1] >= cutoff:
        return match[0]
    return None
