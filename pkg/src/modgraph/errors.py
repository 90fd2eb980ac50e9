"""Exception hierarchy shared by all modgraph modules."""


class ModgraphError(Exception):
    """Base class for all library errors."""


class InvolutionFixedPoint(ModgraphError):
    pass


class InvolutionNotPairing(ModgraphError):
    pass


class UnknownArcOrVertex(ModgraphError):
    pass


class UnknownVertex(UnknownArcOrVertex):
    pass


class NodelessLoopUnrepresentable(ModgraphError):
    pass


class Disconnected(ModgraphError):
    pass


class BettiUndefined(ModgraphError):
    pass


class SearchBudgetExceeded(ModgraphError):
    pass


class CompositionIncompatible(ModgraphError):
    pass


class FactorizationFailed(ModgraphError):
    """Raised when a validated map cannot be factored; indicates an internal bug."""


class ProfileMismatch(ModgraphError):
    pass


class NotSegal(ModgraphError):
    pass


class IncompatibleLevels(ModgraphError):
    pass


class LambdaEven(ModgraphError):
    pass


class NotGenerated(ModgraphError):
    pass


class UnsupportedRelation(ModgraphError):
    pass
