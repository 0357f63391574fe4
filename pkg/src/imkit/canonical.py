"""Normal form of pure states under real orthogonal transformations.

Any pure state can be rotated by a real orthogonal ``O`` into

    sqrt((1 + c)/2) |0> + i sqrt((1 - c)/2) |1>,   c = |<psi*|psi>|,

up to a global phase. ``c`` is therefore the only invariant of a pure state
under real orthogonal maps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Config, resolve
from .errors import DimTooSmall
from .linalg import PureState, as_pure, complete_orthonormal_rows


@dataclass(frozen=True, eq=False)
class GammaDecomposition:
    """``psi = phase * (a gamma1 + i b gamma2)`` with real unit gamma vectors.

    ``degenerate`` is set when ``b`` vanishes (``psi`` real up to phase); then
    ``gamma2`` is a fallback direction orthogonal to ``gamma1``.
    """

    a: float
    b: float
    gamma1: np.ndarray
    gamma2: np.ndarray
    phase: complex
    degenerate: bool

    def reconstruct(self) -> np.ndarray:
        return self.phase * (self.a * self.gamma1 + 1j * self.b * self.gamma2)


@dataclass(frozen=True, eq=False)
class CanonicalPureForm:
    orthogonal: np.ndarray
    overlap_mod: float
    canonical: PureState
    # O psi = phase * canonical
    phase: complex


def conjugate_overlap(psi) -> complex:
    """<psi*|psi> = sum_j c_j**2."""
    v = as_pure(psi).amplitudes
    return complex(np.sum(v * v))


def canonical_amplitudes(overlap_mod: float, dim: int = 2) -> np.ndarray:
    c = min(max(float(overlap_mod), 0.0), 1.0)
    out = np.zeros(dim, dtype=complex)
    out[0] = np.sqrt((1 + c) / 2)
    out[1] = 1j * np.sqrt((1 - c) / 2)
    return out


def _fallback_direction(g1: np.ndarray) -> np.ndarray:
    # lowest-index basis vector not parallel to g1, orthogonalised against it
    for j in range(g1.shape[0]):
        e = np.zeros_like(g1)
        e[j] = 1.0
        e = e - (g1 @ e) * g1
        n = np.linalg.norm(e)
        if n > 1e-6:
            return e / n
    return np.zeros_like(g1)


def gamma_decompose(psi, config: Config | None = None) -> GammaDecomposition:
    """Split ``psi`` into real and imaginary directions.

    The global phase is first fixed so that ``<psi*|psi>`` is real and
    non-negative. After that the real and imaginary parts of the amplitude
    vector are orthogonal, and ``a**2 = (1 + |<psi*|psi>|)/2 >= 1/2``.
    """
    cfg = resolve(config)
    v = as_pure(psi, cfg).amplitudes
    ov = np.sum(v * v)
    phase = np.exp(1j * np.angle(ov) / 2) if abs(ov) > 0 else 1.0 + 0j
    w = v / phase
    re, im = w.real, w.imag
    a, b = float(np.linalg.norm(re)), float(np.linalg.norm(im))
    g1 = re / a
    if b < cfg.deg:
        return GammaDecomposition(a, b, g1, _fallback_direction(g1), complex(phase), True)
    g2 = im / b
    # re/im are orthogonal analytically; remove rounding residue
    g2 = g2 - (g1 @ g2) * g1
    g2 = g2 / np.linalg.norm(g2)
    return GammaDecomposition(a, b, g1, g2, complex(phase), False)


def canonical_form(psi, config: Config | None = None) -> CanonicalPureForm:
    cfg = resolve(config)
    p = as_pure(psi, cfg)
    d = p.dim
    if d < 2:
        raise DimTooSmall("canonical form needs dimension >= 2")
    g = gamma_decompose(p, cfg)
    o = complete_orthonormal_rows(np.array([g.gamma1, g.gamma2]), d)
    c = min(abs(conjugate_overlap(p)), 1.0)
    # (a, b) from the decomposition are more accurate than sqrt((1 +- c)/2)
    # when c is close to 1
    amps = np.zeros(d, dtype=complex)
    amps[0], amps[1] = g.a, 1j * g.b
    can = PureState(amps)
    # with <gamma1|gamma2> = 0 the rotation O' onto the positive y-z plane is
    # the identity, so only the phase bookkeeping is left
    return CanonicalPureForm(o, c, can, g.phase)
