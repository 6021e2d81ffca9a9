"""Exception types raised by the engine."""


class CaloronError(Exception):
    """Base class for all engine errors."""


class DimensionError(CaloronError, ValueError):
    """Operands disagree on matrix size, grid, or form degree."""


class ArityError(CaloronError, ValueError):
    """An invariant polynomial received the wrong number of arguments."""


class BranchError(CaloronError, ValueError):
    """Principal logarithm requested at (or too near) the cut locus."""


class ResolutionError(CaloronError, ValueError):
    """Sampled loop is too coarse for a well-conditioned derivative."""


class InvariantError(CaloronError, ValueError):
    """Input data violates a documented invariant (anti-Hermitian, based, ...)."""


class BandwidthError(CaloronError, ValueError):
    """Requested bandwidth reaches the Nyquist limit of the grid."""
