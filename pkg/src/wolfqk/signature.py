"""The two real forms handled by the package: R^7 and R^{3,4}."""

from __future__ import annotations

import enum

import numpy as np


class DomainError(ValueError):
    """Raised when an input lies outside the domain of an operation."""


class Signature(enum.Enum):
    """Metric signature of V, which also fixes the normed algebra O(V).

    ``COMPACT`` is Euclidean R^7 with the octonions, ``SPLIT`` is R^{3,4}
    with the split octonions.
    """

    COMPACT = "7,0"
    SPLIT = "3,4"

    @property
    def epsilon(self) -> int:
        return 1 if self is Signature.COMPACT else -1

    @property
    def eta(self) -> np.ndarray:
        return np.diag([1.0, 1.0, 1.0] + [float(self.epsilon)] * 4)

    @property
    def algebra_name(self) -> str:
        return "O" if self is Signature.COMPACT else "Osplit"

    @classmethod
    def parse(cls, value) -> "Signature":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            key = value.replace(" ", "").replace("(", "").replace(")", "")
            for member in cls:
                if key in (member.value, member.name.lower(), member.algebra_name):
                    return member
        if value in (1, +1):
            return cls.COMPACT
        if value == -1:
            return cls.SPLIT
        raise DomainError(f"unknown signature {value!r}; expected '7,0' or '3,4'")

    def __str__(self) -> str:
        return self.value


COMPACT = Signature.COMPACT
SPLIT = Signature.SPLIT
