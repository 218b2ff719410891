"""Exception types shared across the library."""


class LayercastError(Exception):
    """Base class for all library errors."""


class CycleDetected(LayercastError):
    pass


class NodeIsSource(LayercastError):
    pass


class NotAPath(LayercastError):
    pass


class NotABasis(LayercastError):
    pass


class PreconditionViolated(LayercastError):
    pass


class BudgetExceeded(LayercastError):
    pass


class InvalidFanExtension(LayercastError):
    pass


class FieldTooSmall(LayercastError):
    pass


class ConditionsViolated(LayercastError):
    pass


class ImproperDemand(LayercastError):
    pass


class NotTwoLayer(LayercastError):
    pass


class NotThreeLayer(LayercastError):
    pass


class SourceHasNoStep(LayercastError):
    pass


class AssignmentNotSatisfying(LayercastError):
    pass


class NotACover(LayercastError):
    pass


class MissingPerformance(LayercastError):
    pass
