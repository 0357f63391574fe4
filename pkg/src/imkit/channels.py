"""Kraus-operator channels, with the real (free) subclass."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import Config, resolve
from .errors import DimMismatch, Incomplete, NotReal, Overcomplete
from .linalg import QuantumState, SeedLike, as_state, random_orthogonal, random_unitary


class KrausSet:
    """Ordered Kraus operators ``K_j`` of shape ``(dim_out, dim_in)``.

    The set may be incomplete (``sum K^dagger K <= 1``); :meth:`is_complete`
    and :func:`complete_set` deal with that.
    """

    def __init__(self, kraus: Sequence, dim_in: int | None = None, dim_out: int | None = None):
        ops = [np.atleast_2d(np.asarray(k)) for k in kraus]
        if not ops:
            if dim_in is None or dim_out is None:
                raise DimMismatch("empty Kraus set needs explicit dimensions")
        else:
            shapes = {k.shape for k in ops}
            if len(shapes) != 1:
                raise DimMismatch(f"Kraus operators have inconsistent shapes {sorted(shapes)}")
            dim_out, dim_in = ops[0].shape
        self.kraus = tuple(self._coerce(k) for k in ops)
        self.dim_in = int(dim_in)
        self.dim_out = int(dim_out)

    @staticmethod
    def _coerce(k: np.ndarray) -> np.ndarray:
        return k.astype(complex)

    def __len__(self) -> int:
        return len(self.kraus)

    def __iter__(self):
        return iter(self.kraus)

    def __getitem__(self, j) -> np.ndarray:
        return self.kraus[j]

    def gram(self) -> np.ndarray:
        """sum_j K_j^dagger K_j"""
        g = np.zeros((self.dim_in, self.dim_in), dtype=complex)
        for k in self.kraus:
            g += k.conj().T @ k
        return g

    def completeness_residual(self) -> float:
        return float(np.abs(self.gram() - np.eye(self.dim_in)).max())

    def is_complete(self, tol: float = 1e-9) -> bool:
        return self.completeness_residual() <= tol

    def adjoint_apply(self, m: np.ndarray) -> np.ndarray:
        """Heisenberg picture: sum_j K_j^dagger M K_j."""
        return sum((k.conj().T @ m @ k for k in self.kraus), np.zeros((self.dim_in, self.dim_in), complex))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={len(self)}, {self.dim_out}x{self.dim_in})"


class RealKrausSet(KrausSet):
    """Kraus set whose operators have real entries. Stored as float arrays."""

    def __init__(self, kraus: Sequence, dim_in: int | None = None, dim_out: int | None = None,
                 config: Config | None = None):
        cfg = resolve(config)
        for j, k in enumerate(kraus):
            k = np.asarray(k)
            if np.iscomplexobj(k) and k.size:
                im = float(np.abs(k.imag).max())
                if im > cfg.real:
                    raise NotReal(f"Kraus operator {j} has imaginary part up to {im:.3e}")
        super().__init__(kraus, dim_in, dim_out)

    @staticmethod
    def _coerce(k: np.ndarray) -> np.ndarray:
        return np.real(k).astype(float)


def validate_real(k, complete: bool = False, config: Config | None = None) -> RealKrausSet:
    """Check reality and ``sum K^T K <= 1`` (``== 1`` if ``complete``)."""
    cfg = resolve(config)
    if isinstance(k, RealKrausSet):
        ks = k
    elif isinstance(k, KrausSet):
        ks = RealKrausSet(list(k.kraus), k.dim_in, k.dim_out, config=cfg)
    else:
        ks = RealKrausSet(list(k), config=cfg)
    _check_not_overcomplete(ks, cfg)
    if complete:
        resid = ks.completeness_residual()
        if resid > cfg.recon:
            raise Incomplete(f"max |sum K^T K - I| = {resid:.3e} > {cfg.recon:.1e}")
    return ks


def _check_not_overcomplete(ks: KrausSet, cfg: Config) -> np.ndarray:
    g = ks.gram()
    g = (g + g.conj().T) / 2
    w, v = np.linalg.eigh(g)
    if w.max(initial=0.0) > 1 + cfg.psd:
        raise Overcomplete(f"largest eigenvalue of sum K^dagger K is {w.max():.12g} > 1")
    return w, v


def complete_set(k: KrausSet, config: Config | None = None) -> KrausSet:
    """Append ``L0 = sqrt(1 - sum K^dagger K)`` so that the set becomes complete.

    For real sets ``L0`` is real symmetric. When ``dim_out`` differs from
    ``dim_in`` the rows of ``L0`` are zero-padded (``dim_out > dim_in``) or
    split into several ``dim_out``-row operators. An already complete set is
    returned unchanged.
    """
    cfg = resolve(config)
    w, v = _check_not_overcomplete(k, cfg)
    rest = np.clip(1 - w, 0, None)
    if rest.max(initial=0.0) <= cfg.recon:
        return k
    l0 = (v * np.sqrt(rest)) @ v.conj().T
    if isinstance(k, RealKrausSet):
        l0 = l0.real
    extra = []
    for start in range(0, k.dim_in, k.dim_out):
        block = np.zeros((k.dim_out, k.dim_in), dtype=l0.dtype)
        chunk = l0[start:start + k.dim_out]
        block[: chunk.shape[0]] = chunk
        if np.abs(block).max() > 0:
            extra.append(block)
    return type(k)(list(k.kraus) + extra, k.dim_in, k.dim_out)


@dataclass(frozen=True, eq=False)
class ChannelOutcome:
    index: int
    probability: float
    post_state: QuantumState


def _input(k: KrausSet, rho, config: Config) -> np.ndarray:
    m = as_state(rho, config).matrix
    if m.shape[0] != k.dim_in:
        raise DimMismatch(f"channel expects dimension {k.dim_in}, state has {m.shape[0]}")
    return m


def _hermitian(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def apply(k: KrausSet, rho, config: Config | None = None) -> QuantumState:
    """rho -> sum_j K_j rho K_j^dagger for a complete Kraus set."""
    cfg = resolve(config)
    m = _input(k, rho, cfg)
    resid = k.completeness_residual()
    if resid > cfg.recon:
        raise Incomplete(f"apply needs a complete set (residual {resid:.3e}); use apply_outcomes")
    out = np.zeros((k.dim_out, k.dim_out), dtype=complex)
    for op in k.kraus:
        out += op @ m @ op.conj().T
    return QuantumState(_hermitian(out))


def apply_outcomes(k: KrausSet, rho, config: Config | None = None) -> list[ChannelOutcome]:
    """Measurement picture: one outcome per Kraus operator with its
    probability and normalised post-measurement state. Outcomes with
    probability below ``p0`` are dropped."""
    cfg = resolve(config)
    m = _input(k, rho, cfg)
    outcomes = []
    for j, op in enumerate(k.kraus):
        s = op @ m @ op.conj().T
        p = float(np.trace(s).real)
        if p <= cfg.p0:
            continue
        outcomes.append(ChannelOutcome(j, p, QuantumState(_hermitian(s) / p)))
    return outcomes


def identity_channel(dim: int) -> RealKrausSet:
    return RealKrausSet([np.eye(dim)])


def unitary_channel(u) -> KrausSet:
    u = np.asarray(u)
    if np.isrealobj(u):
        return RealKrausSet([u])
    return KrausSet([u])


def random_real_channel(dim_in: int, dim_out: int, n_kraus: int, seed: SeedLike = None) -> RealKrausSet:
    """Complete real channel cut from the first ``dim_in`` columns of a Haar
    orthogonal matrix of size ``n_kraus * dim_out``."""
    size = n_kraus * dim_out
    if size < dim_in:
        raise DimMismatch(f"{n_kraus} Kraus operators of shape {dim_out}x{dim_in} cannot be complete")
    v = random_orthogonal(size, seed)[:, :dim_in]
    return RealKrausSet([v[j * dim_out:(j + 1) * dim_out] for j in range(n_kraus)])


def random_channel(dim_in: int, dim_out: int, n_kraus: int, seed: SeedLike = None) -> KrausSet:
    size = n_kraus * dim_out
    if size < dim_in:
        raise DimMismatch(f"{n_kraus} Kraus operators of shape {dim_out}x{dim_in} cannot be complete")
    v = random_unitary(size, seed)[:, :dim_in]
    return KrausSet([v[j * dim_out:(j + 1) * dim_out] for j in range(n_kraus)])


def random_real_kraus_stack(batch: int, dim_in: int, dim_out: int, n_kraus: int,
                            seed: SeedLike = None) -> np.ndarray:
    """``batch`` independent random complete real channels as one array of
    shape ``(batch, n_kraus, dim_out, dim_in)``.

    Same distribution as :func:`random_real_channel`: the Q factor of a real
    Gaussian matrix, sign-corrected, has Haar-distributed orthonormal columns.
    """
    size = n_kraus * dim_out
    if size < dim_in:
        raise DimMismatch(f"{n_kraus} Kraus operators of shape {dim_out}x{dim_in} cannot be complete")
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((batch, size, dim_in)))
    q = q * np.sign(np.diagonal(r, axis1=1, axis2=2))[:, None, :]
    return q.reshape(batch, n_kraus, dim_out, dim_in)


def apply_stack(kraus: np.ndarray, rho) -> np.ndarray:
    """Apply every channel of a ``(batch, n_kraus, dim_out, dim_in)`` stack to
    one state; returns ``(batch, dim_out, dim_out)`` output matrices."""
    m = np.asarray(rho.matrix if isinstance(rho, QuantumState) else rho)
    return np.einsum("bkoi,ij,bkpj->bop", kraus, m, kraus.conj())
