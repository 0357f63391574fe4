"""Optical cost of real versus general operations, counted in unset wave plates.

A real orthogonal ``m x m`` matrix factors into at most ``(m^2 - m)/2``
two-level rotations, each realisable by one wave plate; a general unitary
needs ``m^2 - 1`` real parameters. The counts here are exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import Config, resolve
from .errors import ImproperRotation, NonSquare, NotOrthogonal, OutOfRange, TooFewOutcomes
from .rotations import RotationPlan, rotate_rows, wrap_angle


@dataclass(frozen=True)
class CostReport:
    general_count: int
    real_count: int
    # dimension of the dilation unitary, when the report is about a dilation
    dilation_dim: int | None = None
    real_only: bool = False

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.real_count, self.general_count)

    @property
    def selected(self) -> int:
        return self.real_count if self.real_only else self.general_count

    def as_dict(self) -> dict:
        out = {"general": self.general_count, "real": self.real_count}
        if self.dilation_dim is not None:
            out["dilation_dim"] = self.dilation_dim
        return out


def decompose_orthogonal(o, allow_reflection: bool = True, config: Config | None = None) -> RotationPlan:
    """Factor a real orthogonal matrix into two-level rotations.

    Column by column, entries below the diagonal are annihilated from the
    bottom up with rotations on adjacent rows ``(i-1, i)``. Angles come from
    ``atan2`` so every pivot ends up ``+1``; the final diagonal entry is
    ``det(o)``. A determinant of -1 is recorded as a reflection of the last
    axis, or rejected with ImproperRotation if ``allow_reflection`` is false.

    ``plan.matrix()`` reproduces ``o``.
    """
    cfg = resolve(config)
    o = np.asarray(o)
    if o.ndim != 2 or o.shape[0] != o.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {o.shape}")
    if np.iscomplexobj(o):
        if np.abs(o.imag).max() > cfg.real:
            raise NotOrthogonal("matrix has imaginary entries")
        o = o.real
    m = o.shape[0]
    resid = float(np.abs(o.T @ o - np.eye(m)).max())
    if resid > cfg.orth:
        raise NotOrthogonal(f"max |O^T O - I| = {resid:.3e} > {cfg.orth:.1e}")

    work = o.astype(float).copy()
    elim = []
    for col in range(m - 1):
        for i in range(m - 1, col, -1):
            x, y = work[i - 1, col], work[i, col]
            if abs(y) <= 1e-15 and x >= 0:
                continue
            theta = float(np.arctan2(y, x))
            # G(-theta) sends (x, y) to (r, 0)
            rotate_rows(work, i - 1, i, -theta)
            work[i, col] = 0.0
            elim.append((i - 1, i, theta))

    reflection = None
    if work[m - 1, m - 1] < 0:
        if not allow_reflection:
            raise ImproperRotation("determinant is -1; no product of rotations reproduces it")
        reflection = m - 1
    # o = G(t_1) G(t_2) ... G(t_n) F, so G(t_n) is applied first
    rotations = tuple((i, j, wrap_angle(t)) for i, j, t in reversed(elim))
    return RotationPlan(m, rotations, reflection)


def measurement_cost(n_outcomes: int, real_only: bool = False) -> CostReport:
    """Unset wave plates for an ``n``-outcome qubit measurement:
    ``8n - 5`` in general, ``4n - 3`` with real Kraus operators."""
    n = int(n_outcomes)
    if n < 2:
        raise TooFewOutcomes(f"a measurement needs at least 2 outcomes, got {n}")
    return CostReport(8 * n - 5, 4 * n - 3, real_only=real_only)


def dilation_cost(d: int, real_only: bool = False) -> CostReport:
    """Unset wave plates for a channel on dimension ``d`` through a dilation
    of size ``d^3``: ``d^6 - 1`` for a unitary, ``(d^6 - d^3)/2`` for an
    orthogonal matrix."""
    d = int(d)
    if d < 2:
        raise OutOfRange(f"dimension must be >= 2, got {d}")
    m = d**3
    return CostReport(unitary_param_count(m), orthogonal_rotation_count(m), dilation_dim=m, real_only=real_only)


def unitary_param_count(m: int) -> int:
    """Real parameters of an ``m x m`` unitary up to global phase: ``m^2 - 1``."""
    m = int(m)
    if m < 1:
        raise OutOfRange(f"m must be >= 1, got {m}")
    return m * m - 1


def orthogonal_rotation_count(m: int) -> int:
    """Two-level rotations needed for an ``m x m`` orthogonal matrix: ``(m^2 - m)/2``."""
    m = int(m)
    if m < 1:
        raise OutOfRange(f"m must be >= 1, got {m}")
    return (m * m - m) // 2
