class UnstableState(Exception):
    """Unstable state.

    Exception raised when a stability model is requested for a search state
    that does not satisfy every saturation condition.
    """


class LabelCapExceeded(Exception):
    """Label cap exceeded.

    Exception raised when a search thread creates more labels than the
    configured cap. This signals an internal error, never a verdict.
    """


class BudgetExhausted(Exception):
    """Budget exhausted.

    Exception raised when a search run exceeds its step budget.

    Attributes:
        steps (int): Number of rule applications performed.
        labels (int): Number of labels on the thread being expanded.
    """

    def __init__(self, steps: int, labels: int):
        super().__init__(f"step budget exhausted after {steps} steps ({labels} labels)")
        self.steps = steps
        self.labels = labels


class OracleDisagreement(Exception):
    """Oracle disagreement.

    Exception raised when the bounded model finder contradicts a verdict.
    """
