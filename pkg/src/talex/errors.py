"""Exception types shared across the package."""


class TalexError(Exception):
    """Base class for all package-specific failures."""


class InexactDivision(TalexError):
    """Laurent long division left a remainder above tolerance.

    For a genuine nonabelian SL2 representation the division defining the
    twisted Alexander polynomial is exact, so this signals either a
    non-representation input or insufficient working precision.
    """


class SingularDenominator(TalexError):
    """det Phi(x_k - 1) is numerically zero; choose another column k."""


class DegenerateContext(TalexError):
    """A parameter point with one of the guarded quantities near zero."""


class AmbiguousAbelianization(TalexError):
    """The abelianized relator matrix does not have a rank-1 kernel."""


class NonConvergence(TalexError):
    """The simultaneous root iteration failed to converge."""
