"""Dense matrix primitives, state containers and random sampling.

Everything downstream works on plain ``numpy`` arrays wrapped in a few small
immutable containers. Public functions accept either the containers or raw
array-likes and validate on entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .config import Config, resolve
from .errors import (
    DimMismatch,
    InvalidBloch,
    NonSquare,
    NotAntisymmetric,
    NotHermitian,
    NotNormalized,
    NotPositive,
    NotUnitTrace,
)

SeedLike = Union[int, np.random.Generator, None]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# maximally imaginary state (|0> + i|1>)/sqrt(2)
PLUS_I = np.array([1, 1j], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Density matrix. Construct through :func:`validate_state` unless the
    matrix is valid by construction."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_real(self, tol: float = 1e-9) -> bool:
        return bool(np.abs(self.matrix.imag).max() <= tol)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def conjugate(self) -> "PureState":
        return PureState(self.amplitudes.conj())

    def density(self) -> QuantumState:
        v = self.amplitudes
        return QuantumState(np.outer(v, v.conj()))

    def overlap(self, other: "PureState") -> complex:
        """<self|other>"""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        n2 = self.x**2 + self.y**2 + self.z**2
        if n2 > 1 + 1e-9:
            raise InvalidBloch(f"Bloch vector norm^2 = {n2:.12g} exceeds 1")

    @classmethod
    def parse(cls, text: str) -> "BlochVector":
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 3:
            raise InvalidBloch(f"expected three comma-separated numbers, got {text!r}")
        return cls(*parts)

    @classmethod
    def from_state(cls, rho) -> "BlochVector":
        m = np.asarray(rho, dtype=complex)
        if m.shape != (2, 2):
            raise DimMismatch(f"Bloch vectors need a qubit state, got shape {m.shape}")
        return cls(
            float(2 * m[0, 1].real),
            float(-2 * m[0, 1].imag),
            float((m[0, 0] - m[1, 1]).real),
        )

    def to_state(self) -> QuantumState:
        m = (np.eye(2) + self.x * PAULI_X + self.y * PAULI_Y + self.z * PAULI_Z) / 2
        return QuantumState(m)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def norm(self) -> float:
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))


@dataclass(frozen=True, eq=False)
class AntisymBlockForm:
    """Real orthogonal ``orthogonal`` with ``O a O^T`` equal to the 2x2 blocks
    ``lam_k [[0, 1], [-1, 0]]`` on index pairs (2k, 2k+1), followed by a zero
    block of size ``zero_block_size``."""

    orthogonal: np.ndarray
    lambdas: np.ndarray
    zero_block_size: int

    @property
    def rank(self) -> int:
        return 2 * len(self.lambdas)

    def block_matrix(self) -> np.ndarray:
        d = self.orthogonal.shape[0]
        out = np.zeros((d, d))
        for k, lam in enumerate(self.lambdas):
            out[2 * k, 2 * k + 1] = lam
            out[2 * k + 1, 2 * k] = -lam
        return out


def _square(m, what: str = "matrix") -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise NonSquare(f"{what} must be square and non-empty, got shape {m.shape}")
    return m


def validate_state(m, config: Config | None = None) -> QuantumState:
    """Check the density-matrix invariants and wrap ``m``.

    The stored matrix is the exact Hermitian part of the input so later
    arithmetic never sees the tolerated skew.
    """
    cfg = resolve(config)
    m = _square(np.asarray(m, dtype=complex), "density matrix")
    herm = float(np.abs(m - m.conj().T).max())
    if herm > cfg.herm:
        raise NotHermitian(f"max |rho - rho^dagger| = {herm:.3e} > {cfg.herm:.1e}")
    m = (m + m.conj().T) / 2
    tr = float(np.trace(m).real)
    if abs(tr - 1) > cfg.tr:
        raise NotUnitTrace(f"trace = {tr:.12g}, |trace - 1| = {abs(tr - 1):.3e} > {cfg.tr:.1e}")
    lmin = float(np.linalg.eigvalsh(m).min())
    if lmin < -cfg.psd:
        raise NotPositive(f"minimum eigenvalue {lmin:.3e} < -{cfg.psd:.1e}")
    return QuantumState(m)


def validate_pure(v, config: Config | None = None) -> PureState:
    cfg = resolve(config)
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1 or v.shape[0] < 1:
        raise DimMismatch(f"pure state must be a non-empty vector, got shape {v.shape}")
    n = float(np.linalg.norm(v))
    if abs(n - 1) > cfg.norm:
        raise NotNormalized(f"||psi|| = {n:.12g}, deviation {abs(n - 1):.3e} > {cfg.norm:.1e}")
    return PureState(v)


def as_state(x, config: Config | None = None) -> QuantumState:
    """Coerce a QuantumState, PureState, state vector or matrix to a QuantumState."""
    if isinstance(x, QuantumState):
        return x
    if isinstance(x, PureState):
        return x.density()
    arr = np.asarray(x)
    if arr.ndim == 1:
        return validate_pure(arr, config).density()
    return validate_state(arr, config)


def as_pure(x, config: Config | None = None) -> PureState:
    if isinstance(x, PureState):
        return x
    return validate_pure(x, config)


def real_imag_split(rho) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(Re rho, Im rho)`` as real arrays, symmetric and antisymmetric."""
    m = as_state(rho).matrix
    re = (m + m.T).real / 2
    im = ((m - m.T) / 2j).real
    return re, im


def trace_norm(m) -> float:
    m = _square(m)
    return float(np.linalg.svd(m, compute_uv=False).sum())


def complete_orthonormal_rows(rows: np.ndarray, dim: int, tol: float = 1e-7) -> np.ndarray:
    """Extend orthonormal real ``rows`` to a full orthogonal matrix.

    Missing rows come from Gram-Schmidt over the canonical basis vectors,
    lowest index first, so the completion is deterministic.
    """
    basis = [np.asarray(r, dtype=float) for r in rows]
    for j in range(dim):
        if len(basis) == dim:
            break
        e = np.zeros(dim)
        e[j] = 1.0
        for _ in range(2):
            for b in basis:
                e = e - (b @ e) * b
        n = np.linalg.norm(e)
        if n > tol:
            basis.append(e / n)
    return np.array(basis).reshape(dim, dim)


def antisym_block_diagonalize(a, config: Config | None = None) -> AntisymBlockForm:
    """Real orthogonal block-diagonalisation of a real antisymmetric matrix.

    ``i a`` is Hermitian with spectrum ``{+lam_k, -lam_k, 0...}``. For each
    eigenvector ``x + i y`` with eigenvalue ``lam > 0`` the real pair
    ``(sqrt2 y, sqrt2 x)`` spans an invariant plane on which ``a`` acts as
    ``lam [[0, 1], [-1, 0]]``.
    """
    cfg = resolve(config)
    a = _square(np.asarray(a), "antisymmetric matrix")
    if np.iscomplexobj(a):
        im = float(np.abs(a.imag).max())
        if im > cfg.real:
            raise NotAntisymmetric(f"matrix has imaginary entries (max {im:.3e})")
        a = a.real
    a = a.astype(float)
    resid = float(np.abs(a + a.T).max())
    if resid > cfg.antisym:
        raise NotAntisymmetric(f"max |a + a^T| = {resid:.3e} > {cfg.antisym:.1e}")
    a = (a - a.T) / 2
    d = a.shape[0]

    w, v = np.linalg.eigh(1j * a)
    order = np.argsort(-w, kind="stable")
    pairs, lambdas = [], []
    for k in order:
        if w[k] < cfg.lam0:
            break
        x, y = v[:, k].real, v[:, k].imag
        pairs.extend([np.sqrt(2) * y, np.sqrt(2) * x])
        lambdas.append(float(w[k]))

    if pairs:
        q, r = np.linalg.qr(np.array(pairs).T)
        q = q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))
        rows = q.T
    else:
        rows = np.zeros((0, d))
    o = complete_orthonormal_rows(rows, d)
    return AntisymBlockForm(o, np.array(lambdas), d - 2 * len(lambdas))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``(tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``."""
    r = as_state(rho).matrix
    s = as_state(sigma).matrix
    if r.shape != s.shape:
        raise DimMismatch(f"dimensions differ: {r.shape[0]} vs {s.shape[0]}")
    sr = _psd_sqrt(r)
    inner = sr @ s @ sr
    ev = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    f = float(np.sqrt(np.clip(ev, 0, None)).sum() ** 2)
    return min(max(f, 0.0), 1.0)


def bloch_vector(rho) -> BlochVector:
    return BlochVector.from_state(as_state(rho).matrix)


def _rng(seed: SeedLike) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_pure(dim: int, seed: SeedLike = None) -> PureState:
    """Haar-random pure state (normalised complex Gaussian vector)."""
    g = _rng(seed)
    v = g.standard_normal(dim) + 1j * g.standard_normal(dim)
    return PureState(v / np.linalg.norm(v))


def random_real_pure(dim: int, seed: SeedLike = None) -> PureState:
    g = _rng(seed)
    v = g.standard_normal(dim)
    return PureState((v / np.linalg.norm(v)).astype(complex))


def random_state(dim: int, seed: SeedLike = None, rank: int | None = None) -> QuantumState:
    """Ginibre-induced mixed state ``G G^dagger / tr``; full rank by default."""
    g = _rng(seed)
    k = dim if rank is None else rank
    G = g.standard_normal((dim, k)) + 1j * g.standard_normal((dim, k))
    m = G @ G.conj().T
    return QuantumState(m / np.trace(m).real)


def random_real_state(dim: int, seed: SeedLike = None, rank: int | None = None) -> QuantumState:
    g = _rng(seed)
    k = dim if rank is None else rank
    G = g.standard_normal((dim, k))
    m = G @ G.T
    return QuantumState((m / np.trace(m)).astype(complex))


def random_orthogonal(dim: int, seed: SeedLike = None) -> np.ndarray:
    """Haar-random element of O(dim) via sign-corrected QR."""
    g = _rng(seed)
    q, r = np.linalg.qr(g.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def random_unitary(dim: int, seed: SeedLike = None) -> np.ndarray:
    g = _rng(seed)
    z = (g.standard_normal((dim, dim)) + 1j * g.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
