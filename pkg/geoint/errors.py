"""
Error hierarchy
Every failure the CLI maps to an exit code derives from GeointError.
"""

from typing import Any, List, Optional


class GeointError(Exception):
    """Base class for all geoint failures"""

    exit_code = 2


class InputError(GeointError, ValueError):
    """Malformed configuration, undeclared symbol or unsupported request"""

    exit_code = 2


class UnsupportedError(InputError):
    """Request outside the supported surface (Lorentzian sgrad, n > 1 multi-bracket)"""


class DegenerateError(GeointError):
    """A normalised quantity was requested where dK vanishes identically"""


class SingularLocusError(GeointError):
    """Derived invariant requested on the locus where its denominator vanishes"""


class InconclusiveError(GeointError):
    """A zero test on the critical path came back Undecided"""

    exit_code = 1

    def __init__(self, message: str, trace: Optional[List[Any]] = None):
        super().__init__(message)
        self.trace = trace or []
