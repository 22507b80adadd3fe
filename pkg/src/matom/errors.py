"""Exception types shared across the package."""

from __future__ import annotations


class InputError(ValueError):
    """Raised when user-supplied data (files, flags, kernel specs) is invalid."""


class InvariantViolation(RuntimeError):
    """A structural identity that must hold by theory failed numerically.

    Every violation carries a stable ``check_id`` naming the identity that
    failed (e.g. ``"basis-matrix-structure"``), so callers and the CLI can
    report which cross-check broke without parsing the message.
    """

    def __init__(self, check_id: str, message: str):
        super().__init__(f"[{check_id}] {message}")
        self.check_id = check_id


class PowerIterationError(RuntimeError):
    """Power iteration failed to converge within the iteration budget."""

    def __init__(self, message: str, last_estimate: float, gap: float, iterations: int):
        super().__init__(
            f"{message} (last estimate {last_estimate!r}, last gap {gap:.3e}, "
            f"{iterations} iterations)"
        )
        self.last_estimate = last_estimate
        self.gap = gap
        self.iterations = iterations
