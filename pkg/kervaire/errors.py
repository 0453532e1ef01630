"""
Exception hierarchy for kervaire.

Every error carries an exit code that the CLI reuses directly:
2 for bad or untrustworthy input and violated theorem preconditions,
1 for internal failures.
"""

from typing import Any, Dict, Optional


class KervaireError(Exception):
    """Base class for all library errors"""

    exit_code = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    @property
    def kind(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        payload = {'error': self.kind, 'message': self.message}
        if self.details:
            payload['details'] = self.details
        return payload


class InputError(KervaireError):
    """Input that cannot be accepted as given"""

    exit_code = 2


class ParseError(InputError):
    pass


class ValidationError(InputError):
    pass


class PreconditionViolation(InputError):
    """A theorem precondition does not hold for the supplied data"""


# --- exactlin / simplicial -------------------------------------------------

class MissingFace(ValidationError):
    pass


class DuplicateVertexInSimplex(ValidationError):
    pass


class UnsortedSimplex(ValidationError):
    pass


class DimensionOutOfRange(ValidationError):
    pass


class NotASubcomplex(ValidationError):
    pass


class NotPure(ValidationError):
    pass


class NonManifoldRidge(ValidationError):
    pass


class EmptySide(ValidationError):
    pass


class InterfaceNotSeparating(ValidationError):
    pass


class NonManifoldInterface(ValidationError):
    pass


class NotAnIsomorphism(ValidationError):
    pass


class IdentificationCollision(ValidationError):
    pass


# --- clifford / circleindex ------------------------------------------------

class NotSymmetric(ValidationError):
    pass


class SingularMatrix(ValidationError):
    pass


class BasisNotOrthonormal(ValidationError):
    pass


class InvalidDimension(ValidationError):
    pass


class DimensionTooLarge(ValidationError):
    pass


class NotBoundaryLoop(ValidationError):
    pass


class BlockStructureViolated(ValidationError):
    pass


class NonConstantNegativeIndex(ValidationError):
    pass


class LoopNotClosed(ValidationError):
    pass


class SamplingTooCoarse(InputError):
    """Consecutive kernel lines are too far apart to read a sign"""


class DegenerateGap(InputError):
    """Spectral gap of K too small to trust the kernel numerically"""


class NoConvergence(KervaireError):
    pass


class ResidualTooLarge(KervaireError):
    pass


# --- harness ---------------------------------------------------------------

class EulerPreconditionViolated(PreconditionViolation):
    pass


class NotClosed(PreconditionViolation):
    pass


class NotOrientable(PreconditionViolation):
    pass


class DimensionNotAdmissible(PreconditionViolation):
    pass
