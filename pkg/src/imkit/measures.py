"""Imaginarity quantifiers and the bounds derived from them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .canonical import gamma_decompose
from .channels import KrausSet
from .config import Config, resolve
from .errors import DimMismatch, GeometricRequiresPure, InvalidEnsemble, InvalidPOVM, OutOfRange
from .linalg import PLUS_I, PureState, QuantumState, as_pure, as_state, trace_norm


@dataclass(frozen=True)
class MeasureReport:
    robustness: float
    fidelity_of_imaginarity: float
    # only defined for pure inputs; the convex roof is not evaluated
    geometric: float | None = None

    def as_dict(self) -> dict:
        out = {"robustness": self.robustness, "fidelity_of_imaginarity": self.fidelity_of_imaginarity}
        if self.geometric is not None:
            out["geometric"] = self.geometric
        return out


def geometric_imaginarity_pure(psi) -> float:
    """Geometric imaginarity of a pure state, ``(1 - |<psi*|psi>|) / 2``.

    Evaluated as ``b**2`` from the gamma decomposition, which equals the
    formula exactly and keeps precision for nearly real states.
    """
    return gamma_decompose(psi).b ** 2


def robustness(rho) -> float:
    """Robustness of imaginarity ``||rho - rho^T||_1 / 2``."""
    m = as_state(rho).matrix
    return 0.5 * trace_norm(m - m.T)


def robustness_pure(psi) -> float:
    """``sqrt(1 - |<psi*|psi>|^2)``, evaluated as ``2ab``."""
    g = gamma_decompose(psi)
    return 2 * g.a * g.b


def fidelity_of_imaginarity(rho) -> float:
    """Best fidelity with |+i> reachable by real operations: ``(1 + I_R)/2``."""
    return (1 + robustness(rho)) / 2


def plus_i_overlap(rho) -> float:
    """<+i|rho|+i> for a qubit state."""
    m = as_state(rho).matrix
    if m.shape != (2, 2):
        raise DimMismatch(f"expected a qubit state, got dimension {m.shape[0]}")
    return float(np.real(PLUS_I.conj() @ m @ PLUS_I))


def pure_vector(x, config: Config | None = None) -> PureState:
    """Return ``x`` as a PureState, extracting the eigenvector of a rank-one
    density matrix. Raises GeometricRequiresPure for mixed input."""
    cfg = resolve(config)
    if isinstance(x, PureState) or np.ndim(x) == 1:
        return as_pure(x, cfg)
    m = as_state(x, cfg).matrix
    w, v = np.linalg.eigh(m)
    if w[-1] < 1 - 1e3 * cfg.psd:
        raise GeometricRequiresPure(f"state is mixed (largest eigenvalue {w[-1]:.12g})")
    return PureState(v[:, -1])


def _is_pure(x, cfg: Config) -> bool:
    if isinstance(x, PureState) or np.ndim(x) == 1:
        return True
    w = np.linalg.eigvalsh(as_state(x, cfg).matrix)
    return bool(w[-1] >= 1 - 1e3 * cfg.psd)


def measure_report(rho, config: Config | None = None) -> MeasureReport:
    cfg = resolve(config)
    r = robustness(as_state(rho, cfg))
    g = geometric_imaginarity_pure(pure_vector(rho, cfg)) if _is_pure(rho, cfg) else None
    return MeasureReport(r, (1 + r) / 2, g)


def conversion_probability_bound(rho, sigma, measure: str = "robustness",
                                 config: Config | None = None) -> float:
    """``min{R(rho)/R(sigma), 1}`` for a convex strong monotone ``R``.

    ``measure`` is ``"robustness"`` or ``"geometric"``; the latter needs
    pure inputs.
    """
    cfg = resolve(config)
    if measure == "robustness":
        num, den = robustness(as_state(rho, cfg)), robustness(as_state(sigma, cfg))
    elif measure in ("geometric", "geometric-pure"):
        num = geometric_imaginarity_pure(pure_vector(rho, cfg))
        den = geometric_imaginarity_pure(pure_vector(sigma, cfg))
    else:
        raise ValueError(f"unknown measure {measure!r}")
    if den <= cfg.p0:
        return 1.0
    return min(num / den, 1.0)


class AdvantageRatio(NamedTuple):
    ratio: float
    success: float
    best_free_success: float
    # denominator below p0: ratio reported as +inf
    unbounded: bool


def real_qubit_grid(n_radial: int = 200, n_angular: int = 200) -> np.ndarray:
    """Polar grid over the real (x-z) disc of the Bloch ball, shape (N, 2, 2)."""
    r = np.linspace(0.0, 1.0, n_radial)
    phi = np.linspace(0.0, 2 * np.pi, n_angular, endpoint=False)
    rr, pp = np.meshgrid(r, phi, indexing="ij")
    x, z = (rr * np.sin(pp)).ravel(), (rr * np.cos(pp)).ravel()
    grid = np.empty((x.size, 2, 2))
    grid[:, 0, 0] = (1 + z) / 2
    grid[:, 1, 1] = (1 - z) / 2
    grid[:, 0, 1] = grid[:, 1, 0] = x / 2
    return grid


def _stack(states) -> np.ndarray:
    if isinstance(states, np.ndarray) and states.ndim == 3:
        return states
    return np.array([as_state(s).matrix for s in states])


def success_operator(ensemble: Sequence[tuple[float, KrausSet]], povm: Sequence,
                     config: Config | None = None) -> np.ndarray:
    """Operator ``W`` with ``p_succ(rho) = tr[W rho]``.

    Channel ``j`` is paired with POVM element ``j``; channels without a
    matching element never count as identified.
    """
    cfg = resolve(config)
    if not ensemble:
        raise InvalidEnsemble("empty ensemble")
    probs = np.array([float(p) for p, _ in ensemble])
    if probs.min() < -cfg.fid or abs(probs.sum() - 1) > cfg.tr:
        raise InvalidEnsemble(f"ensemble probabilities must be >= 0 and sum to 1 (sum {probs.sum():.12g})")
    chans = [c for _, c in ensemble]
    din, dout = chans[0].dim_in, chans[0].dim_out
    for c in chans:
        if (c.dim_in, c.dim_out) != (din, dout):
            raise InvalidEnsemble("all channels must share input and output dimensions")
        if not c.is_complete(cfg.recon):
            raise InvalidEnsemble(f"channel {c!r} is not trace preserving")
    elems = [np.asarray(m, dtype=complex) for m in povm]
    if not elems:
        raise InvalidPOVM("empty POVM")
    total = np.zeros((dout, dout), dtype=complex)
    for j, m in enumerate(elems):
        if m.shape != (dout, dout):
            raise InvalidPOVM(f"POVM element {j} has shape {m.shape}, channels output dimension {dout}")
        if np.abs(m - m.conj().T).max() > cfg.herm:
            raise InvalidPOVM(f"POVM element {j} is not Hermitian")
        if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -cfg.psd:
            raise InvalidPOVM(f"POVM element {j} is not positive semidefinite")
        total += m
    if np.abs(total - np.eye(dout)).max() > cfg.recon:
        raise InvalidPOVM("POVM elements do not sum to the identity")
    w = np.zeros((din, din), dtype=complex)
    for p, c, m in zip(probs, chans, elems):
        w += p * c.adjoint_apply(m)
    return (w + w.conj().T) / 2


def discrimination_advantage_ratio(rho, ensemble, povm, free_state_grid=None,
                                   config: Config | None = None) -> AdvantageRatio:
    """Success probability of ``rho`` in a channel-discrimination game relative
    to the best free state on ``free_state_grid``.

    The default grid is :func:`real_qubit_grid` (qubit inputs only). For any
    input the ratio is at most ``1 + robustness(rho)``.
    """
    cfg = resolve(config)
    m = as_state(rho, cfg).matrix
    w = success_operator(ensemble, povm, cfg)
    if w.shape[0] != m.shape[0]:
        raise DimMismatch(f"channels act on dimension {w.shape[0]}, state has {m.shape[0]}")
    if free_state_grid is None:
        if m.shape[0] != 2:
            raise DimMismatch("the default free-state grid only covers qubits")
        free_state_grid = real_qubit_grid()
    grid = _stack(free_state_grid)
    succ = float(np.real(np.trace(w @ m)))
    free = np.real(np.einsum("ij,nji->n", w, grid))
    best = float(free.max())
    if best <= cfg.p0:
        return AdvantageRatio(float("inf"), succ, best, True)
    return AdvantageRatio(succ / best, succ, best, False)


def direct_sum(rho1, rho2, p: float) -> QuantumState:
    a, b = as_state(rho1).matrix, as_state(rho2).matrix
    d1, d2 = a.shape[0], b.shape[0]
    out = np.zeros((d1 + d2, d1 + d2), dtype=complex)
    out[:d1, :d1] = p * a
    out[d1:, d1:] = (1 - p) * b
    return QuantumState(out)


def direct_sum_robustness_check(rho1, rho2, p: float) -> tuple[float, float]:
    """(I_R(p rho1 + (1-p) rho2 as a direct sum), p I_R(rho1) + (1-p) I_R(rho2))"""
    if not 0 <= p <= 1:
        raise OutOfRange(f"p = {p} outside [0, 1]")
    lhs = robustness(direct_sum(rho1, rho2, p))
    rhs = p * robustness(rho1) + (1 - p) * robustness(rho2)
    return lhs, rhs
