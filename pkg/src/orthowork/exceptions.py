"""Exception hierarchy.

Every failed check raises a subclass of :class:`LatticeError` carrying the
witnessing elements as attributes, so callers (and the CLI) can report the
first violated axiom without re-running the check.
"""


class LatticeError(Exception):
    """Base class for all diagnostics raised by this package."""

    def __init__(self, message, **witness):
        super().__init__(message)
        self.witness = witness
        for key, value in witness.items():
            setattr(self, key, value)


class ValidationError(LatticeError):
    pass


class NotAPartialOrder(ValidationError):
    pass


class MissingBounds(ValidationError):
    pass


class NoMeet(ValidationError):
    pass


class NoJoin(ValidationError):
    pass


class DuplicateName(ValidationError):
    pass


class NotInvolution(ValidationError):
    pass


class NotOrderReversing(ValidationError):
    pass


class ComplementLawFails(ValidationError):
    pass


class MorphismError(LatticeError):
    pass


class NotInjective(MorphismError):
    pass


class NotMeetPreserving(MorphismError):
    pass


class NotJoinPreserving(MorphismError):
    pass


class BoundsNotPreserved(MorphismError):
    pass


class NoGreatestBelow(MorphismError):
    pass


class NotDownwardClosed(MorphismError):
    pass


class NotConvex(MorphismError):
    pass


class PerpNotPreserved(MorphismError):
    pass


class NotComposable(MorphismError):
    pass


class ConstructionError(LatticeError):
    pass


class SizeLimitExceeded(ConstructionError):
    pass


class PreconditionNotCertified(ConstructionError):
    pass


class OrderMismatch(ConstructionError):
    pass


class NotASublattice(ConstructionError):
    pass


class GenerationTooLarge(ConstructionError):
    pass


class TermError(LatticeError):
    pass


class TermSyntaxError(TermError):
    pass


class UnboundVariable(TermError):
    pass


class UnresolvedCoefficient(TermError):
    pass


class NotUnary(TermError):
    pass


class NotAnOrtholattice(TermError):
    pass


class StageFailed(LatticeError):
    pass


class ToldStepFailed(StageFailed):
    pass
