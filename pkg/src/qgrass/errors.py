"""Exception types shared across the package."""


class QGrassError(Exception):
    """Base class for all package-specific errors."""


# arithmetic core
class DivisionNotExact(QGrassError):
    """Polynomial division left a nonzero remainder."""


class ZeroDenominator(QGrassError):
    """Attempted to build or divide by a zero rational function."""


class TruncationMismatch(QGrassError):
    """Series operands have different truncation orders."""


class PoleAtPoint(QGrassError):
    """Denominator vanishes at the evaluation point."""


# box combinatorics
class InvalidShape(QGrassError):
    """Grassmannian shape parameters out of range (e.g. k > n)."""


class OutOfBox(QGrassError):
    """Partition does not fit in the k x (n-k) rectangle."""


class NotFullWidth(QGrassError):
    """Operation requires a partition with first part equal to n-k."""


# localization / verification
class SingularLocalization(QGrassError):
    """Restriction matrix is singular (coincident equivariant weights)."""


class DegenerateWeights(QGrassError):
    """Equivariant weights fail a distinctness/nonzero precondition."""


class DegenerateFixedPoint(QGrassError):
    """Coincident fixed-point coordinates make a prefactor singular."""


class ZeroEpsilon(QGrassError):
    """The differential-equation parameter must be nonzero."""


# numerics
class NonConvergence(QGrassError):
    """Newton continuation failed to converge within the step budget."""


class PathCollision(QGrassError):
    """Two tracked roots coalesced during continuation."""


class UnmatchedSpectrum(QGrassError):
    """Eigenvalue multisets could not be paired within tolerance."""


class GaugeNotFound(QGrassError):
    """No diagonal gauge brings the two operator bases within tolerance."""


class SizeLimit(QGrassError):
    """Requested chain length exceeds the dense-operator limit."""
