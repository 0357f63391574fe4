"""Perfect discrimination of two orthogonal real bipartite pure states with
local real operations and classical communication (one-way, Alice first).

Writing ``psi = sum_j |j>|a_j>`` and ``phi = sum_j |j>|b_j>``, Alice rotates
her side by a real orthogonal ``O`` chosen so that the correlation matrix
``C_jk = <a_j|b_k>`` becomes zero on the diagonal, then measures in the
computational basis. Bob's conditional states are then orthogonal and a
real projective measurement tells them apart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Config, resolve
from .errors import BadFactorization, NotOrthogonal, NotReal
from .linalg import SeedLike, as_pure
from .rotations import RotationPlan, rotate_rows


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    dim_a: int
    entries: np.ndarray


@dataclass(frozen=True, eq=False)
class DiscriminationProtocol:
    """Alice applies ``alice_rotation`` on her (zero-padded) system and
    measures outcome ``k``. Bob then measures ``bob_measurements[k]``, a
    stack ``(P_psi, P_phi, P_discard)`` of real projectors."""

    alice_rotation: np.ndarray
    padded_dim: int
    dim_a: int
    dim_b: int
    bob_states: tuple
    bob_measurements: tuple
    rotation_plan: RotationPlan
    psi: np.ndarray
    phi: np.ndarray

    def alice_povm(self) -> list[np.ndarray]:
        """Alice's effective measurement on the unpadded system."""
        w = self.alice_rotation[:, : self.dim_a]
        return [np.outer(row, row) for row in w]

    def operators(self) -> list[np.ndarray]:
        ops = [self.alice_rotation, *self.alice_povm()]
        for m in self.bob_measurements:
            ops.extend(m)
        return ops

    def as_dict(self) -> dict:
        return {
            "dim_a": self.dim_a,
            "dim_b": self.dim_b,
            "padded_dim": self.padded_dim,
            "alice_rotation": self.alice_rotation.tolist(),
            "rotations": self.rotation_plan.as_dict()["rotations"],
            "bob": [
                {"a": a.tolist(), "b": b.tolist(), "P_psi": m[0].tolist(), "P_phi": m[1].tolist()}
                for (a, b), m in zip(self.bob_states, self.bob_measurements)
            ],
        }


def _real_vector(x, what: str, cfg: Config) -> np.ndarray:
    v = as_pure(x, cfg).amplitudes
    im = float(np.abs(v.imag).max())
    if im > cfg.real:
        raise NotReal(f"{what} has imaginary amplitudes (max {im:.3e})")
    return v.real.copy()


def _factor(n: int, dim_a: int) -> int:
    if dim_a < 1 or n % dim_a:
        raise BadFactorization(f"total dimension {n} is not divisible by dim_a = {dim_a}")
    dim_b = n // dim_a
    if dim_a > dim_b:
        raise BadFactorization(f"dim_a = {dim_a} exceeds dim_b = {dim_b}; swap the parties")
    return dim_b


def _pair(psi, phi, dim_a: int, cfg: Config):
    a = _real_vector(psi, "psi", cfg)
    b = _real_vector(phi, "phi", cfg)
    if a.shape != b.shape:
        raise BadFactorization(f"states have different dimensions {a.size} and {b.size}")
    dim_b = _factor(a.size, dim_a)
    ov = abs(float(a @ b))
    if ov > cfg.fid:
        raise NotOrthogonal(f"|<psi|phi>| = {ov:.3e} > {cfg.fid:.1e}")
    return a.reshape(dim_a, dim_b), b.reshape(dim_a, dim_b)


def correlation_matrix(psi, phi, dim_a: int, config: Config | None = None) -> CorrelationMatrix:
    """``C_jk = <a_j|b_k>`` from the expansion over Alice's basis."""
    cfg = resolve(config)
    a, b = _pair(psi, phi, dim_a, cfg)
    return CorrelationMatrix(dim_a, a @ b.T)


def padded_dimension(dim_a: int) -> int:
    p = 1
    while p < dim_a:
        p *= 2
    return p


def equalizing_angle(c: np.ndarray, i: int, j: int) -> float:
    """Angle in [0, pi/2) of the rotation on (i, j) making the two diagonal
    entries of ``G c G^T`` equal."""
    delta = c[i, i] - c[j, j]
    s = c[i, j] + c[j, i]
    if delta == 0:
        return 0.0
    t = float(np.mod(0.5 * np.arctan2(delta, s), np.pi / 2))
    return 0.0 if np.isclose(t, np.pi / 2, rtol=0, atol=1e-15) else t


def zero_diagonal_plan(c, config: Config | None = None) -> RotationPlan:
    """Rotations that make every diagonal entry of a trace-zero matrix vanish.

    The matrix is zero-padded to a power of two ``p``. Stage ``h = 1, 2, 4, ...``
    pairs index ``i`` with ``i + h`` inside blocks of size ``2h`` and
    equalises their diagonal entries; after ``log2 p`` stages all diagonal
    entries equal ``tr C / p = 0``.
    """
    cfg = resolve(config)
    c = np.asarray(c.entries if isinstance(c, CorrelationMatrix) else c, dtype=float)
    n = c.shape[0]
    p = padded_dimension(n)
    work = np.zeros((p, p))
    work[:n, :n] = c
    rotations = []
    h = 1
    while h < p:
        for start in range(0, p, 2 * h):
            for i in range(start, start + h):
                j = i + h
                if abs(work[i, i] - work[j, j]) <= cfg.diag * 1e-3:
                    continue
                t = equalizing_angle(work, i, j)
                if t == 0.0:
                    continue
                rotate_rows(work, i, j, t)
                rotate_rows(work.T, i, j, t)
                rotations.append((i, j, t))
        h *= 2
    return RotationPlan(p, tuple(rotations))


def zero_diagonal_rotation(c, config: Config | None = None) -> np.ndarray:
    return zero_diagonal_plan(c, config).matrix()


def _bob_measurement(a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    d = a.size
    eye = np.eye(d)
    na = np.linalg.norm(a)
    if na <= tol:
        # branch impossible under psi
        return np.array([np.zeros((d, d)), eye, np.zeros((d, d))])
    u = a / na
    p_psi = np.outer(u, u)
    v = b - (u @ b) * u
    nv = np.linalg.norm(v)
    p_phi = np.outer(v, v) / nv**2 if nv > tol else np.zeros((d, d))
    return np.array([p_psi, p_phi, eye - p_psi - p_phi])


def synthesize_protocol(psi, phi, dim_a: int, config: Config | None = None) -> DiscriminationProtocol:
    cfg = resolve(config)
    a, b = _pair(psi, phi, dim_a, cfg)
    dim_b = a.shape[1]
    plan = zero_diagonal_plan(a @ b.T, cfg)
    o = plan.matrix()
    p = plan.dim
    pad_a, pad_b = np.zeros((p, dim_b)), np.zeros((p, dim_b))
    pad_a[:dim_a], pad_b[:dim_a] = a, b
    ta, tb = o @ pad_a, o @ pad_b
    tol = np.sqrt(cfg.p0)
    states = tuple((ta[k], tb[k]) for k in range(p))
    meas = tuple(_bob_measurement(ta[k], tb[k], tol) for k in range(p))
    return DiscriminationProtocol(o, p, dim_a, dim_b, states, meas, plan,
                                  a.ravel().copy(), b.ravel().copy())


def _branches(protocol: DiscriminationProtocol, which: str):
    if which not in ("psi", "phi"):
        raise ValueError(f"which must be 'psi' or 'phi', got {which!r}")
    vec = protocol.psi if which == "psi" else protocol.phi
    x = np.zeros((protocol.padded_dim, protocol.dim_b))
    x[: protocol.dim_a] = vec.reshape(protocol.dim_a, protocol.dim_b)
    x = protocol.alice_rotation @ x
    weights = np.einsum("kb,kb->k", x, x)
    slot = 0 if which == "psi" else 1
    hits = np.array([x[k] @ protocol.bob_measurements[k][slot] @ x[k] for k in range(x.shape[0])])
    return weights, hits


def simulate_protocol(protocol: DiscriminationProtocol, which: str = "psi", trials: int = 0,
                      seed: SeedLike = None, config: Config | None = None) -> float:
    """Success rate of identifying ``which`` (``"psi"`` or ``"phi"``).

    ``trials = 0`` sums the branches exactly. Otherwise Alice's outcome is
    sampled by the Born rule and Bob's verdict from his conditional
    measurement, and the empirical rate is returned.
    """
    cfg = resolve(config)
    weights, hits = _branches(protocol, which)
    keep = weights > cfg.p0
    weights, hits = weights[keep], hits[keep]
    total = weights.sum()
    if trials == 0:
        return float(hits.sum() / total)
    rng = np.random.default_rng(seed)
    k = rng.choice(weights.size, size=trials, p=weights / total)
    correct = rng.random(trials) < np.clip(hits / weights, 0, 1)[k]
    return float(correct.mean())
