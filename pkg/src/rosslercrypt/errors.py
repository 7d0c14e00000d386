"""Exception types shared across the package."""

from __future__ import annotations

import numpy as np


class DivergenceError(ArithmeticError):
    """Integration produced a non-finite component.

    Attributes:
        step: 1-based index of the first step whose stages or result went
            non-finite, or None when no step context exists.
        entry: index of the failing entry when the failure happened inside
            a batch run (the plaintext byte, for codebook builds).
        partial_states: states computed before the failure, when the caller
            was collecting a trajectory.
    """

    def __init__(
        self,
        message: str,
        *,
        step: int | None = None,
        entry: int | None = None,
        partial_states: np.ndarray | None = None,
    ):
        super().__init__(message)
        self.step = step
        self.entry = entry
        self.partial_states = partial_states


class FormatError(ValueError):
    """A serialized key, ciphertext, or digest does not match its format."""


class NoMatchError(ValueError):
    """A ciphertext value matches no codebook entry (wrong key or corruption)."""

    def __init__(self, position: int, message: str | None = None):
        super().__init__(message or f"no codebook entry matches value at position {position}")
        self.position = position


class AmbiguousError(ValueError):
    """Tolerant decryption found two codebook entries within tolerance."""

    def __init__(self, position: int, message: str | None = None):
        super().__init__(message or f"ambiguous codebook match at position {position}")
        self.position = position


class KeygenExhausted(RuntimeError):
    """Key generation failed to find a valid key after many candidates."""
