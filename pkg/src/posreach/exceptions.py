"""Exception hierarchy shared by all engines."""


class PosreachError(Exception):
    """Base class for computation errors raised by this package."""


class InapplicableError(PosreachError):
    """A bound or construction does not apply to the given parameters."""


class InfeasibleError(PosreachError):
    """The sampling condition fails, so no admissible radius exists."""


class DegenerateSimplexError(PosreachError, ValueError):
    """Vertices are (numerically) affinely dependent."""


class ResourceError(PosreachError):
    """A point or simplex budget would be exceeded."""


class DensityError(PosreachError):
    """A discretization density is too coarse for the requested probes."""
