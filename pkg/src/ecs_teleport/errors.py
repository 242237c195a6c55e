"""Exception types shared across the package."""


class EcsError(Exception):
    """Base class for all package errors."""


class DegenerateAlpha(EcsError, ValueError):
    """Coherent amplitude is zero, so the odd cat state does not exist."""


class DomainError(EcsError, ValueError):
    """An angle or grid parameter lies outside its allowed range."""


class NormError(EcsError, ValueError):
    """A state flagged or required as normalized is not."""


class CutoffTooSmall(EcsError, ValueError):
    """Fock truncation would drop more probability than the tail tolerance."""


class ModeIndexError(EcsError, KeyError):
    """A mode label does not exist in the register."""


class ZeroBranch(EcsError, ArithmeticError):
    """A measurement branch has zero probability, so its state is undefined."""
