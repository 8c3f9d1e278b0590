"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class CurvelabError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1

    def record(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class UsageError(CurvelabError, ValueError):
    exit_code = 2


class DomainError(UsageError):
    """An argument is outside the domain of an operation."""


class UnsupportedOperation(UsageError):
    """The operation needs geometry the metric space does not have."""


class ValidationError(CurvelabError, ValueError):
    """Input data is malformed or is not a metric."""

    exit_code = 3


class DisconnectedError(CurvelabError):
    """The net graph could not be connected at the literal 8*eps radius.

    ``components`` holds one representative id per side and ``gap`` the
    distance between the two sides, which is at least the connection radius.
    """

    exit_code = 4

    def __init__(self, message: str, components: tuple[list[int], list[int]], gap: float, radius: float):
        super().__init__(message)
        self.components = components
        self.gap = gap
        self.radius = radius

    def record(self) -> dict:
        rec = super().record()
        rec.update(
            component_a=self.components[0],
            component_b=self.components[1],
            gap=self.gap,
            radius=self.radius,
        )
        return rec
