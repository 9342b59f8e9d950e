"""Exception types shared across the package."""

from __future__ import annotations


class FRLogicError(Exception):
    """Base class for every error raised by frlogic."""


class NotNormalized(FRLogicError):
    def __init__(self, deficit) -> None:
        super().__init__(f"state is not normalized (deficit {deficit})")
        self.deficit = deficit


class UnknownRegister(FRLogicError):
    def __init__(self, name: str) -> None:
        super().__init__(f"unknown register {name!r}")
        self.name = name


class DuplicateRegister(FRLogicError):
    def __init__(self, name: str) -> None:
        super().__init__(f"register {name!r} already exists")
        self.name = name


class RegisterMismatch(FRLogicError):
    pass


class BasisError(FRLogicError):
    """A basis is malformed or unusable in the requested mode."""


class TargetIsRecord(FRLogicError):
    def __init__(self, name: str) -> None:
        super().__init__(f"register {name!r} is already an agent record")
        self.name = name


class ZeroProbabilityCollapse(FRLogicError):
    def __init__(self, step: int, outcome: str) -> None:
        super().__init__(f"collapse at step {step} onto {outcome!r} has zero probability")
        self.step = step
        self.outcome = outcome


class StepOrderError(FRLogicError):
    pass


class NonUnitarySegment(FRLogicError):
    def __init__(self, step: int) -> None:
        super().__init__(f"step {step} collapses; it cannot be inverted")
        self.step = step


class OutsideRange(FRLogicError):
    def __init__(self, step: int) -> None:
        super().__init__(
            f"state has support outside the range of step {step} (record not correlated with target)"
        )
        self.step = step


class UnsortedEvents(FRLogicError):
    pass


class IllFormedEvents(FRLogicError):
    """Two events sit at the same step on the same register in different bases."""


class ChainMismatch(FRLogicError):
    pass


class BothZero(FRLogicError):
    pass


class IncompleteOutcomeSet(FRLogicError):
    pass
