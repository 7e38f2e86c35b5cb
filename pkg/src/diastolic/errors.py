"""Exception taxonomy.

Every failure raised by the library derives from DiastolicError so callers
can catch one base class.  Validation errors carry the offending simplex in
their message; the CLI maps them onto its exit codes.
"""


class DiastolicError(Exception):
    """Base class for all library errors."""


class ValidationError(DiastolicError):
    """Input fails a structural precondition."""


class NonManifoldEdge(ValidationError):
    """An edge is contained in a number of triangles other than two."""


class NonManifoldVertex(ValidationError):
    """A vertex link is not a single cycle."""


class Disconnected(ValidationError):
    """The triangle adjacency graph is not connected."""


class LengthMismatch(ValidationError):
    """A sweep-out has len(certificates) != len(steps) - 1."""


class NotSingleTriangleMoves(ValidationError):
    """An operation requires single-triangle certificates."""


class SignMismatch(ValidationError):
    """Partial families cannot be pasted because their ends disagree."""


class ProvenanceMismatch(ValidationError):
    """A sweep-out does not belong to the coned surface it is restricted by."""


class RecursionDepthExceeded(DiastolicError):
    """The sweep-out recursion exceeded its depth cap."""


class NonAdmissibleAngles(ValidationError):
    """A triangle angle leaves the open interval (pi/4, 3*pi/7)."""


class BalanceViolated(DiastolicError):
    """A coarse edge faces more than two subedges after size uniformization."""


class DegenerateTriangle(ValidationError):
    """A triangle is too flat to carry a bilipschitz certificate."""


class ConvergenceFailure(DiastolicError):
    """The eigenvalue iteration did not reach its tolerance within the cap."""


class MidpointDegeneracy(ValidationError):
    """A cut endpoint sits exactly on an edge midpoint after nudging."""


class SnapDoublingError(DiastolicError):
    """Snapping an arc would more than double its length (strict mode)."""


class NoCutFound(DiastolicError):
    """No admissible split of the surface was found."""


class TooLarge(DiastolicError):
    """The instance exceeds an exhaustive oracle's size cap."""
