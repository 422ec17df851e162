"""Exception hierarchy shared by the solvers and the CLI."""


class KinklabError(Exception):
    """Base class for every error raised by kinklab."""


class InvalidParams(KinklabError, ValueError):
    pass


class NonPositiveCurvature(KinklabError):
    pass


class QuadratureFailure(KinklabError):
    pass


class BracketFailure(KinklabError):
    pass


class NewtonDivergence(KinklabError):
    pass


class ContinuationFailure(NewtonDivergence):
    """Newton diverged inside a continuation sweep; ``k`` is the failing coefficient."""

    def __init__(self, message, k):
        super().__init__(message)
        self.k = k


class SingularJacobian(KinklabError):
    pass


class ConvexityViolation(KinklabError, ValueError):
    pass


class NoPhaseFound(KinklabError):
    pass


class NotDegenerate(KinklabError):
    pass


class BranchJump(KinklabError):
    pass


class ConfigError(KinklabError, ValueError):
    pass
