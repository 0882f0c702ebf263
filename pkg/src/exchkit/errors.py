"""Exception hierarchy.

The CLI maps these onto exit codes: bad input is exit 1, resource caps are
exit 2.  Verdicts (not extendible, refuted, unknown) are never exceptions;
they are ordinary data.
"""

from __future__ import annotations


class ExchkitError(Exception):
    """Base class for all library errors."""


class InputError(ExchkitError, ValueError):
    """Malformed or inconsistent input: bad masses, alphabets, schemas."""


class CapacityError(ExchkitError):
    """A computation would exceed the configured resource cap.

    Raised before any work is attempted; never produces a wrong answer.
    """


class RepresentationError(ExchkitError):
    """No signed mixture was found on any tried grid.

    Carries the last infeasibility certificate so the failure is checkable.
    """

    def __init__(self, message: str, *, grid_depth: int, farkas=None):
        super().__init__(message)
        self.grid_depth = grid_depth
        self.farkas = farkas
