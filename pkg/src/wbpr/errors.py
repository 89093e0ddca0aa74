"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """A point lies outside the domain the operation requires."""


class RootOnCircle(ValueError):
    """A polynomial root sits too close to the unit circle to classify."""


class DominanceViolated(ValueError):
    """A singular perturbation requests more mass than the base measure holds."""


class OddnessViolated(ValueError):
    """A boundary log-modulus array is not odd on the sample grid."""


class NotUnimodular(ValueError):
    """A constant expected to have unit modulus does not."""


class ZeroReference(ValueError):
    """A reference value h(x) is zero, so its phase factor is undefined."""


class BudgetExceeded(RuntimeError):
    """An enumeration request exceeds the configured combinatorial budget."""


class DepthTooLarge(ValueError):
    """A requested product depth is beyond the supported range."""


class ResamplingError(ValueError):
    """Boundary samples do not cover the grid they must be resampled onto."""


class SpecFormatError(ValueError):
    """A JSON document does not match the expected layout."""


class QuadratureAccuracyWarning(UserWarning):
    """An evaluation point is close enough to the boundary to degrade quadrature."""
