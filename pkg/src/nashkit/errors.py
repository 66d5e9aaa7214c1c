"""Exception hierarchy shared by all nashkit modules.

Every numerical-failure exception derives from :class:`NashkitError`; the
CLI maps these to exit code 3 and prints the class name on stderr.
Precondition violations raise plain ``ValueError`` (CLI exit code 2).
"""


class NashkitError(Exception):
    """Base class for numerical failures raised by nashkit operations."""


class ZeroPolynomial(NashkitError):
    """An operation that requires a nonzero polynomial received zero."""


class GcdIllConditioned(NashkitError):
    """Approximate-GCD certification failed at the requested tolerance."""


class BothConstantInW(NashkitError):
    """Resultant in w requires at least one input of positive w-degree."""


class NoConvergence(NashkitError):
    """Iterative root finding did not reach the residual target."""


class EmptyRegion(NashkitError):
    """The requested safe region is (or may be) empty."""


class NearExcludedPoint(NashkitError):
    """A base point or path comes too close to an excluded point."""


class StepUnderflow(NashkitError):
    """Continuation step collapsed below 1e-12; path too close to a
    ramification point."""


class NewtonDivergence(NashkitError):
    """The Newton corrector produced non-finite iterates."""


class AmbiguousMatching(NashkitError):
    """Branch end values could not be matched to start values within half
    the minimal start separation."""


class NoZeroBranch(NashkitError):
    """No branch of the curve passes through the origin."""


class MultipleZeroBranches(NashkitError):
    """Several branch values at z=0 vanish within tolerance; the branch
    through the origin is not numerically unique."""


class NotClassB(NashkitError):
    """The polynomial has excluded points (poles or ramification /
    intersection) inside the working disk."""


class NullOnK(NashkitError):
    """max |f| over the compact K is numerically zero."""


class BoundaryZero(NashkitError):
    """Zeros persist on the counting circle after radius perturbations."""


class ConstantBranch(NashkitError):
    """Valency counting rejects numerically constant functions."""
