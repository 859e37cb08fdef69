"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
1 for malformed input, 2 when the requested inverse does not exist or a
required hypothesis fails, 3 when a numerical guard trips.
"""

from __future__ import annotations


class MdmpError(Exception):
    exit_code = 3

    def __init__(self, message: str = "", **details):
        super().__init__(message)
        self.details = details

    def to_dict(self) -> dict:
        out = {"error": type(self).__name__, "message": str(self)}
        for key, value in self.details.items():
            out[key] = value.to_dict() if hasattr(value, "to_dict") else value
        return out


# -- malformed input (exit 1) -------------------------------------------------

class ParseError(MdmpError):
    exit_code = 1


class ShapeMismatch(MdmpError, ValueError):
    exit_code = 1


# -- nonexistence / hypothesis violations (exit 2) ----------------------------

class NotExists(MdmpError):
    """The Minkowski inverse (and hence the m-DMP inverse) does not exist."""

    exit_code = 2


class SingularDelta(NotExists):
    """rank(A A~) < rank(A); the matrix Delta of the canonical form is singular."""


class SingularG1(NotExists):
    """rank(A~ A) < rank(A); the leading metric block G1 is singular."""


class IndexTooLarge(MdmpError):
    exit_code = 2


class ZeroMatrix(MdmpError):
    exit_code = 2


class NilpotentTermination(MdmpError):
    """A factor C_i B_i vanished before the chain stabilized, i.e. A^k = 0."""

    exit_code = 2


class ZeroPower(MdmpError):
    exit_code = 2


class ConditionFailed(MdmpError):
    exit_code = 2


class FullRank(MdmpError):
    exit_code = 2


# -- numerical guards (exit 3) ------------------------------------------------

class NearSingularFactor(MdmpError):
    exit_code = 3


class SingularWV(MdmpError):
    exit_code = 3


class SingularBordered(MdmpError):
    exit_code = 3


class SingularShift(MdmpError):
    exit_code = 3


class NoConvergence(MdmpError):
    exit_code = 3


class SpectrumNotStable(MdmpError):
    exit_code = 3
