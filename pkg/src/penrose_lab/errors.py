"""Exception hierarchy shared by the pipeline stages."""


class PenroseLabError(Exception):
    pass


class DegenerateInputError(PenroseLabError, ValueError):
    """Input data produced non-finite derived quantities."""


class GridRangeError(PenroseLabError, ValueError):
    pass


class PreconditionError(PenroseLabError, ValueError):
    pass


class SolverFailure(PenroseLabError, RuntimeError):
    pass


class DomainError(PenroseLabError, ValueError):
    pass


class NonConvexProfileError(PenroseLabError, ValueError):
    """Metric cannot be realised as a surface of revolution graph."""


class EmbeddingQualityError(PenroseLabError, RuntimeError):
    pass


class NoAdmissibleObserverError(PenroseLabError, RuntimeError):
    pass


class UnsupportedGeometryError(PenroseLabError, ValueError):
    pass


class ConsistencyError(PenroseLabError, RuntimeError):
    pass


class IncompletePipelineError(PenroseLabError, RuntimeError):
    pass


class ScenarioError(PenroseLabError, ValueError):
    pass
