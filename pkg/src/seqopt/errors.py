"""Exception hierarchy shared by all seqopt modules."""


class SeqoptError(Exception):
    """Base class for all seqopt errors."""


class ValidationError(SeqoptError):
    """Bad inputs: wrong shapes, broken invariants, unparseable files."""


class NumericalError(SeqoptError):
    """A numerical procedure failed to reach its contract."""


class NormViolation(ValidationError):
    """Squared chip norm differs from the sequence length beyond tolerance."""


class DimensionMismatch(ValidationError):
    pass


class NonPositiveParameter(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class TauOutsideChip(ValidationError):
    """Delay does not lie in the chip interval it was claimed to."""


class ParseError(ValidationError):
    pass


class InvalidSpec(ValidationError):
    pass


class PreconditionError(ValidationError):
    pass


class NotPreferredPair(ValidationError):
    """The two m-sequences do not have a three-valued crosscorrelation."""


class DegenerateOrbit(ValidationError):
    """Chaotic-map start point sits on (or collapses to) a fixed point."""


class ResolutionTooCoarse(ValidationError):
    """Fewer samples per chip than the simulator contract allows."""


class NonFeasibleStart(ValidationError):
    pass


class NonFeasiblePoint(ValidationError):
    pass


class DegenerateAlpha(NumericalError):
    """No coefficient large enough to recover the norm multiplier from."""


class LineSearchStall(NumericalError):
    """Backtracking produced a step below the minimum before convergence.

    Carries the last iterate so callers can save partial progress.
    """

    def __init__(self, message, last_point=None, grad_norm=None):
        super().__init__(message)
        self.last_point = last_point
        self.grad_norm = grad_norm
