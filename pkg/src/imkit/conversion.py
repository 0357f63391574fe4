"""State conversion under real operations.

Three regimes are covered:

* stochastic conversion between pure states (optimal probability and an
  explicit Kraus protocol reaching it),
* deterministic conversion between qubit states (Bloch-vector criterion,
  accessible regions and the channels tracing their boundary),
* approximate distillation of the maximally imaginary state |+i>.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, NamedTuple

import numpy as np

from .canonical import canonical_form, gamma_decompose
from .channels import RealKrausSet, apply
from .config import Config, resolve
from .errors import DimTooSmall, OutOfPlane, OutOfRange
from .linalg import BlochVector, QuantumState, as_pure, as_state, antisym_block_diagonalize, real_imag_split
from .measures import plus_i_overlap

# real Kraus patterns in the y-z setting
_FLIP_Y = np.diag([1.0, -1.0])  # sigma_z: (x, y, z) -> (-x, -y, z)
_FLIP_Z = np.array([[0.0, -1.0], [1.0, 0.0]])  # pi rotation about y: (x, y, z) -> (-x, y, -z)
_ANTI = np.array([[0.0, 1.0], [-1.0, 0.0]])  # i sigma_y: (x, y, z) -> (-x, y, -z)


def _one_minus_overlap(psi) -> float:
    # 1 - |<psi*|psi>| = 2 b^2, without cancellation for nearly real states
    return 2 * gamma_decompose(psi).b ** 2


def pure_conversion_probability(psi, phi, config: Config | None = None) -> float:
    """Optimal probability of ``psi -> phi`` under real operations,
    ``min{(1 - |<psi*|psi>|) / (1 - |<phi*|phi>|), 1}``; 1 for real targets."""
    cfg = resolve(config)
    num = _one_minus_overlap(as_pure(psi, cfg))
    den = _one_minus_overlap(as_pure(phi, cfg))
    if den <= cfg.p0:
        return 1.0
    return min(num / den, 1.0)


@dataclass(frozen=True, eq=False)
class PureConversionPlan:
    """Protocol: rotate ``psi`` to its canonical qubit form, apply the 2x2
    Kraus operators, rotate the canonical target back to ``phi``.

    Every operator in ``kraus_success`` maps the canonical ``psi`` onto a
    multiple of the canonical ``phi``; ``kraus_fail`` collects the rest. In
    the stochastic regime there is one of each, ``K0 = diag(a, 1)`` and
    ``K1 = sqrt(1 - K0^2)``; in the deterministic regime both operators
    succeed.
    """

    probability: float
    pre_rotation: np.ndarray
    kraus_success: tuple
    kraus_fail: tuple
    post_rotation: np.ndarray

    @property
    def deterministic(self) -> bool:
        return not self.kraus_fail and self.probability == 1.0

    @property
    def n_success(self) -> int:
        return len(self.kraus_success)

    def kraus_set(self) -> RealKrausSet:
        """The whole protocol as one complete real Kraus set, ``dim_phi x dim_psi``.

        Outcomes ``0 .. n_success-1`` are the successful ones. Levels of the
        input outside the canonical qubit support are routed to extra failure
        operators so the set is complete.
        """
        d_in, d_out = self.pre_rotation.shape[0], self.post_rotation.shape[0]
        embed = np.eye(d_out)[:, :2]
        project = np.eye(d_in)[:2, :]
        ops = [self.post_rotation @ embed @ k @ project @ self.pre_rotation
               for k in (*self.kraus_success, *self.kraus_fail)]
        for j in range(2, d_in):
            m = np.zeros((d_out, d_in))
            m[0, j] = 1.0
            ops.append(self.post_rotation @ m @ self.pre_rotation)
        return RealKrausSet(ops, d_in, d_out)


def _stochastic_kraus(src, dst, cfg: Config):
    # src = (c, s), dst = (c', s'): canonical amplitudes (c, i s) -> (c', i s')
    (c, s), (c2, s2) = src, dst
    if s2 * s2 <= cfg.p0:
        a = 1.0
    else:
        # sqrt((1 - c_psi)/(1 - c_phi) * (1 + c_phi)/(1 + c_psi))
        a = (s / s2) * (c2 / c)
    a = min(float(a), 1.0)
    k0 = np.diag([a, 1.0])
    k1 = np.diag([np.sqrt(max(1 - a * a, 0.0)), 0.0])
    fail = (k1,) if np.abs(k1).max() > 0 else ()
    return (k0,), fail


def _deterministic_kraus(src, dst):
    # two Kraus operators diag(a1, b1) and [[0, b2], [-a2, 0]], both sending
    # (c, i s) to multiples of (c', i s'); requires c_psi < c_phi
    (c, s), (c2, s2) = src, dst
    c_psi, c_phi = c * c - s * s, c2 * c2 - s2 * s2
    p1 = (c_psi + c_phi) / (2 * c_phi)
    p2 = 1 - p1
    k1 = np.diag([np.sqrt(p1) * c2 / c, np.sqrt(p1) * s2 / s])
    k2 = np.array([[0.0, np.sqrt(p2) * c2 / s], [-np.sqrt(p2) * s2 / c, 0.0]])
    return (k1, k2), ()


def pure_conversion_plan(psi, phi, config: Config | None = None) -> PureConversionPlan:
    cfg = resolve(config)
    p, q = as_pure(psi, cfg), as_pure(phi, cfg)
    if p.dim < 2 or q.dim < 2:
        raise DimTooSmall("pure conversion plans need dimension >= 2 on both sides")
    fp, fq = canonical_form(p, cfg), canonical_form(q, cfg)
    src = (fp.canonical.amplitudes[0].real, fp.canonical.amplitudes[1].imag)
    dst = (fq.canonical.amplitudes[0].real, fq.canonical.amplitudes[1].imag)
    if fp.overlap_mod >= fq.overlap_mod:
        success, fail = _stochastic_kraus(src, dst, cfg)
    else:
        success, fail = _deterministic_kraus(src, dst)
    prob = pure_conversion_probability(p, q, cfg)
    return PureConversionPlan(prob, fp.orthogonal, success, fail, fq.orthogonal.T)


# -- deterministic qubit conversion ------------------------------------------

def _bloch(r) -> BlochVector:
    return r if isinstance(r, BlochVector) else BlochVector(*map(float, r))


def _convertible(r: np.ndarray, sx, sy, sz, tol: float = 1e-12):
    # both inequalities multiplied out so that s_y = 0 and r_y = 0 need no
    # special casing: s_y = 0 makes the second one vacuous
    rx, ry, rz = r
    first = np.abs(sy) <= abs(ry) + tol
    second = (1 - sz * sz - sx * sx) * ry * ry >= (1 - rz * rz - rx * rx) * sy * sy - tol
    return first & second


def qubit_deterministic_convertible(r, s) -> bool:
    """Whether the qubit state with Bloch vector ``r`` can be turned into the
    one with Bloch vector ``s`` by a real operation."""
    r, s = _bloch(r), _bloch(s)
    return bool(_convertible(r.as_array(), s.x, s.y, s.z))


class QubitRegionSample(NamedTuple):
    target_sy: float
    target_sz: float
    accessible: bool


def region_grid(r, grid_n: int = 401) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Arrays ``(s_y, s_z, accessible)`` on an inclusive ``grid_n x grid_n``
    grid over [-1, 1]^2 of the y-z plane (``s_x = 0``). Points outside the
    unit disc are inaccessible. Rows run over ``s_z``, columns over ``s_y``."""
    if grid_n < 2:
        raise OutOfRange("grid_n must be >= 2")
    r = _bloch(r)
    # correctly rounded grid values, e.g. exactly 0.6 where linspace gives 0.6000000000000001
    axis = (2.0 * np.arange(grid_n) - (grid_n - 1)) / (grid_n - 1)
    sz, sy = np.meshgrid(axis, axis, indexing="ij")
    inside = sy * sy + sz * sz <= 1 + 1e-12
    mask = inside & _convertible(r.as_array(), 0.0, sy, sz)
    return sy, sz, mask


def qubit_accessible_region(r, grid_n: int = 401) -> list[QubitRegionSample]:
    sy, sz, mask = region_grid(r, grid_n)
    return [QubitRegionSample(float(a), float(b), bool(c))
            for a, b, c in zip(sy.ravel(), sz.ravel(), mask.ravel())]


def write_region_csv(r, grid_n: int, stream: IO[str]) -> None:
    sy, sz, mask = region_grid(r, grid_n)
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["s_y", "s_z", "accessible"])
    for a, b, c in zip(sy.ravel(), sz.ravel(), mask.ravel()):
        w.writerow([repr(float(a)), repr(float(b)), int(c)])


def accessible_boundary(r, s_z):
    """Largest accessible ``|s_y|`` at height ``s_z`` (``s_x = 0``)."""
    r = _bloch(r)
    s_z = np.asarray(s_z, dtype=float)
    free = 1 - r.x**2 - r.z**2
    disc = np.sqrt(np.clip(1 - s_z**2, 0, None))
    if free <= 0 or r.y == 0:
        return np.zeros_like(s_z)
    curve = abs(r.y) * np.sqrt(np.clip(1 - s_z**2, 0, None) / free)
    return np.minimum(np.minimum(abs(r.y), curve), disc)


def _in_plane(r, cfg: Config) -> BlochVector:
    r = _bloch(r)
    if abs(r.x) > cfg.bloch:
        raise OutOfPlane(f"Bloch vector must lie in the y-z plane (r_x = {r.x:.3e})")
    return r


def _quadrant_map(r: BlochVector) -> np.ndarray:
    # real unitary taking r to the quadrant r_y >= 0, r_z >= 0
    u = np.eye(2)
    if r.y < 0:
        u = _FLIP_Y @ u
    if r.z < 0:
        u = _FLIP_Z @ u
    return u


def yz_boundary_channel(r, theta: float, config: Config | None = None) -> RealKrausSet:
    """Two-operator real channel sending ``r`` onto the curved edge of its
    accessible region.

    The output has ``s_y = |r_y| sin(theta)`` and
    ``s_z = sqrt(cos^2(theta) + r_z^2 sin^2(theta))``, which satisfies
    ``(1 - s_z^2)/s_y^2 = (1 - r_z^2)/r_y^2``. ``theta = pi/2`` is the
    identity on the (quadrant-normalised) input, ``theta = 0`` gives |0>.
    """
    cfg = resolve(config)
    r = _in_plane(r, cfg)
    if not -cfg.bloch <= theta <= np.pi / 2 + cfg.bloch:
        raise OutOfRange(f"theta = {theta} outside [0, pi/2]")
    rz = abs(r.z)
    nu = np.arctan2(rz * np.sin(theta), np.cos(theta))
    a1, a2 = np.cos((theta - nu) / 2), np.sin((theta - nu) / 2)
    b1, b2 = np.sin((theta + nu) / 2), np.cos((theta + nu) / 2)
    k1 = np.diag([a1, b1])
    k2 = np.array([[0.0, b2], [-a2, 0.0]])
    u = _quadrant_map(r)
    return RealKrausSet([k1 @ u, k2 @ u])


def qubit_mixing_channel(p: float) -> RealKrausSet:
    """``rho -> (1-p) rho + p A rho A^T`` with ``A = [[0, 1], [-1, 0]]``.

    Keeps ``s_y`` and contracts ``s_x``, ``s_z`` by ``1 - 2p``.
    """
    if not 0 <= p <= 0.5:
        raise OutOfRange(f"p = {p} outside [0, 1/2]")
    return RealKrausSet([np.sqrt(1 - p) * np.eye(2), np.sqrt(p) * _ANTI])


# -- distillation -------------------------------------------------------------

def distillation_channel(dim: int) -> RealKrausSet:
    """Real channel ``dim -> 2`` folding each level pair (2m, 2m+1) onto the
    qubit as ``|1><2m| + |0><2m+1|``; an odd last level goes to |0>."""
    if dim < 2:
        raise DimTooSmall("distillation needs dimension >= 2")
    ops = []
    for m in range(dim // 2):
        k = np.zeros((2, dim))
        k[1, 2 * m] = 1.0
        k[0, 2 * m + 1] = 1.0
        ops.append(k)
    if dim % 2:
        k = np.zeros((2, dim))
        k[0, dim - 1] = 1.0
        ops.append(k)
    return RealKrausSet(ops)


def optimal_distillation_channel(rho, config: Config | None = None) -> RealKrausSet:
    """Real channel reaching fidelity ``(1 + I_R(rho))/2`` with |+i>: block
    diagonalise Im(rho) and fold the blocks onto a qubit."""
    cfg = resolve(config)
    st = as_state(rho, cfg)
    _, im = real_imag_split(st)
    o = antisym_block_diagonalize(im, cfg).orthogonal
    return RealKrausSet([k @ o for k in distillation_channel(st.dim)])


class DistillationResult(NamedTuple):
    output: QuantumState
    achieved: float


def distill(rho, config: Config | None = None) -> DistillationResult:
    cfg = resolve(config)
    st = as_state(rho, cfg)
    out = apply(optimal_distillation_channel(st, cfg), st, cfg)
    return DistillationResult(out, plus_i_overlap(out))
