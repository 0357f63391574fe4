"""Two-level (Givens) rotations and ordered plans of them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def givens(dim: int, i: int, j: int, angle: float) -> np.ndarray:
    """Identity except ``[[c, -s], [s, c]]`` on rows/columns ``(i, j)``."""
    g = np.eye(dim)
    c, s = np.cos(angle), np.sin(angle)
    g[i, i] = g[j, j] = c
    g[i, j] = -s
    g[j, i] = s
    return g


def rotate_rows(m: np.ndarray, i: int, j: int, angle: float) -> None:
    """In place: ``m <- G(i, j, angle) @ m``."""
    c, s = np.cos(angle), np.sin(angle)
    ri, rj = m[i].copy(), m[j].copy()
    m[i] = c * ri - s * rj
    m[j] = s * ri + c * rj


def wrap_angle(angle: float) -> float:
    """Map to (-pi, pi]."""
    a = float(np.mod(angle + np.pi, 2 * np.pi) - np.pi)
    return np.pi if a == -np.pi else a


@dataclass(frozen=True)
class RotationPlan:
    """Ordered two-level rotations ``(i, j, angle)``, first entry applied first.

    ``reflection`` optionally names an axis that is negated before any
    rotation; it is how determinant -1 matrices are represented.
    """

    dim: int
    rotations: tuple = field(default_factory=tuple)
    reflection: int | None = None

    @property
    def count(self) -> int:
        return len(self.rotations)

    def matrix(self) -> np.ndarray:
        m = np.eye(self.dim)
        if self.reflection is not None:
            m[self.reflection, self.reflection] = -1.0
        for i, j, angle in self.rotations:
            rotate_rows(m, i, j, angle)
        return m

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "count": self.count,
            "rotations": [{"i": i, "j": j, "angle": a} for i, j, a in self.rotations],
            "reflection": self.reflection,
        }
