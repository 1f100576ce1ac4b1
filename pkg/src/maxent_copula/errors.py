"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A family parameter is outside its admissible range."""


class TabulatedDataError(ValueError):
    """Tabulated diagonal knots violate monotonicity or the Lipschitz bound."""


class InfeasibleDiagonalError(RuntimeError):
    """The contact set {t: delta(t) = t} has non-negligible Lebesgue measure,
    so no absolutely continuous copula with this diagonal exists."""


class AccuracyError(RuntimeError):
    """A quadrature or refinement loop failed to reach the requested tolerance."""


class SamplingError(RuntimeError):
    """Quantile inversion failed to converge during sampling."""
