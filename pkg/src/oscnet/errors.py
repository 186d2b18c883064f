"""Exception hierarchy.

Two families matter to callers: ValidationError covers everything wrong with
the *inputs* (graph construction, file parsing, configuration, preconditions
such as spectrum realness), NumericalError covers failures that arise *during*
computation (unstable steps, blow-ups, solver breakdowns).  The CLI maps them
to exit codes 1 and 2 respectively.
"""


class OscnetError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(OscnetError):
    """Invalid input: graph, file, configuration, or violated precondition."""


class NumericalError(OscnetError):
    """Failure during numerical computation."""


# --- graph construction ----------------------------------------------------

class IndexOutOfRange(ValidationError):
    """Edge endpoint outside 0..n-1."""


class SelfLoop(ValidationError):
    """Edge with identical source and destination."""


class DuplicateEdge(ValidationError):
    """Same (source, destination) pair listed twice."""


class NonPositiveWeight(ValidationError):
    """Edge weight not a strictly positive finite real."""


class InvalidSize(ValidationError):
    """Node count outside the allowed range for the requested construction."""


class InvalidSubset(ValidationError):
    """Node subset empty, too small, out of range, or with repeats."""


class ZeroOutDegree(ValidationError):
    """Degree-normalized matrices requested for nodes without out-edges."""

    def __init__(self, nodes):
        self.nodes = tuple(int(i) for i in nodes)
        super().__init__(
            "zero out-degree at node(s) %s: degree-normalized matrices "
            "are undefined" % (list(self.nodes),)
        )


# --- state and sampling ----------------------------------------------------

class DimensionMismatch(ValidationError):
    """Array shapes inconsistent with the graph or with each other."""


class OddLength(ValidationError):
    """Doubled state vector must have even length."""


class TooFewSamples(ValidationError):
    """Operation needs more trajectory samples than provided."""


class NonUniformSampling(ValidationError):
    """Trajectory samples are not equally spaced."""


class EmptyTrajectory(ValidationError):
    """Trajectory holds no samples."""


class ZeroAmplitude(ValidationError):
    """Phase is undefined for a zero oscillator amplitude."""


# --- parsing and configuration ---------------------------------------------

class ParseError(ValidationError):
    """Malformed graph file, config file, or time-series file."""


class MissingKey(ValidationError):
    """Required configuration key absent."""


class InvalidValue(ValidationError):
    """Configuration or argument value outside its legal range."""


class IoError(ValidationError):
    """File could not be read or written."""


# --- spectral preconditions ------------------------------------------------

class ComplexSpectrum(ValidationError):
    """Matrix has eigenvalues off the real axis beyond tolerance."""


class NegativeEigenvalue(ValidationError):
    """Matrix has a real eigenvalue below -tolerance."""


# --- numerical failures ----------------------------------------------------

class UnstableStep(NumericalError):
    """Time step exceeds the stability bound for the stiffest mode."""


class NonFiniteState(NumericalError):
    """Integration produced NaN or infinity."""


class ConvergenceFailure(NumericalError):
    """Matrix algorithm failed to converge or broke down."""


class Overflow(NumericalError):
    """Intermediate quantity exceeds floating-point range."""
