"""Exception types raised by threshold_lab."""


class ThresholdLabError(Exception):
    pass


class CensusTooLarge(ThresholdLabError):
    def __init__(self, edges, cap):
        super().__init__(f"host has {edges} edges, census cap is {cap}")
        self.edges = edges
        self.cap = cap


class HostTooSmall(ThresholdLabError):
    def __init__(self, n, needed):
        super().__init__(f"n={n} is smaller than the {needed} vertices required")
        self.n = n
        self.needed = needed


class RootArityMismatch(ThresholdLabError):
    pass


class SearchBudgetExceeded(ThresholdLabError):
    pass


class BudgetExceeded(SearchBudgetExceeded):
    """A search or suite hit its cap; ``partial`` holds what was produced."""

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = partial


class MalformedGraph6(ThresholdLabError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class NotSparse(ThresholdLabError):
    def __init__(self, witness):
        super().__init__("graph is not q-sparse")
        self.witness = witness


class PreconditionUnmet(ThresholdLabError):
    def __init__(self, which, detail=""):
        super().__init__(f"precondition unmet: {which}" + (f" ({detail})" if detail else ""))
        self.which = which


class HypothesisUnmet(PreconditionUnmet):
    pass


class DomainError(ThresholdLabError, ValueError):
    pass


class Inconclusive(ThresholdLabError):
    """Monte Carlo bisection ran out of budget; ``interval`` brackets the answer."""

    def __init__(self, interval, result=None):
        lo, hi = interval
        super().__init__(f"budget exhausted with p_c in [{lo:.6g}, {hi:.6g}]")
        self.interval = interval
        self.result = result
