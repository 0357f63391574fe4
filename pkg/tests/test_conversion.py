import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bloch_state, plus_i
from imkit.canonical import canonical_amplitudes
from imkit.channels import apply, apply_outcomes, random_real_channel, validate_real
from imkit.conversion import (
    accessible_boundary,
    distill,
    distillation_channel,
    pure_conversion_plan,
    pure_conversion_probability,
    qubit_accessible_region,
    qubit_deterministic_convertible,
    qubit_mixing_channel,
    region_grid,
    write_region_csv,
    yz_boundary_channel,
)
from imkit.errors import DimTooSmall, OutOfPlane, OutOfRange
from imkit.linalg import PLUS_I, bloch_vector, fidelity, random_orthogonal, random_pure, random_real_pure, random_real_state, random_state
from imkit.measures import conversion_probability_bound, fidelity_of_imaginarity, robustness


def with_overlap(c, d=2, seed=None):
    """Pure state with |<psi*|psi>| = c, optionally scrambled by a random rotation."""
    v = canonical_amplitudes(c, d)
    return v if seed is None else random_orthogonal(d, seed) @ v


def test_probability_examples(rng):
    assert pure_conversion_probability(random_pure(3, rng), random_real_pure(2, rng)) == 1
    for _ in range(5):
        assert pure_conversion_probability(plus_i(), random_pure(4, rng)) == 1
    assert np.isclose(pure_conversion_probability(with_overlap(0.8, 3, 1), with_overlap(0.6, 4, 2)), 0.5)


def test_probability_equals_geometric_bound(rng):
    for _ in range(100):
        psi, phi = random_pure(int(rng.integers(2, 5)), rng), random_pure(int(rng.integers(2, 5)), rng)
        assert pure_conversion_probability(psi, phi) == pytest.approx(
            conversion_probability_bound(psi, phi, "geometric"), abs=1e-12)


def test_deterministic_iff_robustness_decreases(rng):
    for _ in range(200):
        psi, phi = random_pure(3, rng), random_pure(2, rng)
        det = pure_conversion_probability(psi, phi) == 1
        assert det == (robustness(psi) >= robustness(phi) - 1e-9)


def test_plan_identity():
    psi = with_overlap(0.3)
    plan = pure_conversion_plan(psi, psi)
    assert plan.probability == 1
    assert np.allclose(plan.kraus_success[0], np.eye(2))
    assert plan.kraus_fail == ()


def test_plan_stochastic_coefficient():
    plan = pure_conversion_plan(with_overlap(0.8), with_overlap(0.6))
    assert np.isclose(plan.kraus_success[0][0, 0], 2 / 3)
    assert np.isclose(plan.probability, 0.5)
    k0, k1 = plan.kraus_success[0], plan.kraus_fail[0]
    assert np.allclose(k0.T @ k0 + k1.T @ k1, np.eye(2))


def test_plan_rejects_dim_one():
    with pytest.raises(DimTooSmall):
        pure_conversion_plan([1.0], plus_i())


def _run_plan(psi, phi):
    plan = pure_conversion_plan(psi, phi)
    k = validate_real(plan.kraus_set(), complete=True)
    outs = apply_outcomes(k, psi)
    target = np.outer(phi, phi.conj())
    win = [o for o in outs if o.index < plan.n_success]
    return plan, sum(o.probability for o in win), [fidelity(o.post_state, target) for o in win]


def test_canonical_execution():
    psi, phi = canonical_amplitudes(0.8), canonical_amplitudes(0.6)
    plan, p, fids = _run_plan(psi, phi)
    assert np.isclose(p, 0.5)
    assert min(fids) > 1 - 1e-9


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d1=st.integers(2, 5), d2=st.integers(2, 5))
def test_plan_execution_reaches_target(seed, d1, d2):
    rng = np.random.default_rng(seed)
    psi, phi = random_pure(d1, rng).amplitudes, random_pure(d2, rng).amplitudes
    plan, p, fids = _run_plan(psi, phi)
    assert abs(p - pure_conversion_probability(psi, phi)) < 1e-9
    assert min(fids) > 1 - 1e-9
    assert plan.deterministic == (plan.probability == 1.0)


def test_deterministic_plan_has_no_failure(rng):
    psi, phi = with_overlap(0.2, 3, 5), with_overlap(0.7, 2, 6)
    plan, p, fids = _run_plan(psi, phi)
    assert plan.deterministic and plan.n_success == 2
    assert np.isclose(p, 1)


def test_convertible_examples():
    r = (0, 0.6, 0.4)
    assert qubit_deterministic_convertible(r, r)
    assert qubit_deterministic_convertible(r, (0, 0.3, 0.8))
    assert not qubit_deterministic_convertible(r, (0, 0.7, 0))
    # real targets are free
    assert qubit_deterministic_convertible((0, 0, 1), (0.3, 0, -0.5))
    assert not qubit_deterministic_convertible((0, 0, 1), (0, 0.1, 0))


@settings(max_examples=200, deadline=None)
@given(r=st.tuples(*[st.floats(-0.57, 0.57)] * 3), s=st.tuples(*[st.floats(-0.57, 0.57)] * 3))
def test_convertible_implies_robustness_drop(r, s):
    if qubit_deterministic_convertible(r, s):
        assert abs(s[1]) <= abs(r[1]) + 1e-12


def test_region_real_initial_state():
    sy, sz, mask = region_grid((0, 0, 0.5), 41)
    assert mask.any()
    assert np.all(sy[mask] == 0)


def test_region_plus_i_fills_disc():
    sy, sz, mask = region_grid((0, 1, 0), 101)
    assert np.array_equal(mask, sy**2 + sz**2 <= 1 + 1e-12)


def test_region_samples_match_predicate():
    r = (0, 0.6, 0.4)
    for smp in qubit_accessible_region(r, 21):
        inside = smp.target_sy**2 + smp.target_sz**2 <= 1
        expect = inside and qubit_deterministic_convertible(r, (0, smp.target_sy, smp.target_sz))
        assert smp.accessible == expect


def test_region_boundary_on_equality_curve():
    r = (0, 0.6, 0.4)
    sz = np.linspace(0.41, 0.99, 50)
    edge = accessible_boundary(r, sz)
    assert np.allclose((1 - sz**2) / edge**2, (1 - 0.16) / 0.36)
    assert np.all(edge <= 0.6)


def test_region_csv_format():
    buf = io.StringIO()
    write_region_csv((0, 0.6, 0.4), 3, buf)
    lines = buf.getvalue().split("\n")
    assert lines[0] == "s_y,s_z,accessible"
    assert len(lines) == 1 + 9 + 1 and lines[-1] == ""
    assert lines[5] == "0.0,0.0,1"


def test_region_grid_too_small():
    with pytest.raises(OutOfRange):
        region_grid((0, 0.5, 0), 1)


def _apply_bloch(k, r):
    return bloch_vector(apply(k, bloch_state(*r))).as_array()


def test_boundary_channel_endpoints():
    r = (0, 0.6, 0.4)
    assert np.allclose(_apply_bloch(yz_boundary_channel(r, np.pi / 2), r), r)
    assert np.allclose(_apply_bloch(yz_boundary_channel(r, 0.0), r), [0, 0, 1])
    k = yz_boundary_channel(r, 0.0)
    assert np.allclose(k[0], np.diag([1, 0]))


def test_boundary_channel_saturates_curve():
    r = (0, 0.6, 0.4)
    for theta in np.linspace(0.05, np.pi / 2, 20):
        k = yz_boundary_channel(r, theta)
        assert k.completeness_residual() < 1e-12
        s = _apply_bloch(k, r)
        assert abs(s[0]) < 1e-12
        assert np.isclose(s[1], 0.6 * np.sin(theta))
        assert np.isclose((1 - s[2] ** 2) / s[1] ** 2, 0.84 / 0.36)
        assert qubit_deterministic_convertible(r, s)


def test_boundary_channel_other_quadrants():
    for r in [(0, -0.7, -np.sqrt(0.51)), (0, 0.5, -0.3), (0, -0.2, 0.9)]:
        for theta in (0.3, 1.0):
            s = _apply_bloch(yz_boundary_channel(r, theta), r)
            lhs = (1 - s[2] ** 2) * r[1] ** 2
            rhs = (1 - r[2] ** 2) * s[1] ** 2
            assert abs(lhs - rhs) < 1e-9


def test_boundary_channel_errors():
    with pytest.raises(OutOfPlane):
        yz_boundary_channel((0.3, 0.5, 0), 0.5)
    with pytest.raises(OutOfRange):
        yz_boundary_channel((0, 0.5, 0), 2.0)


def test_mixing_channel():
    r = (0, 0.6, 0.4)
    assert np.allclose(_apply_bloch(qubit_mixing_channel(0.0), r), r)
    assert np.allclose(_apply_bloch(qubit_mixing_channel(0.5), r), [0, 0.6, 0])
    assert np.allclose(_apply_bloch(qubit_mixing_channel(0.25), r), [0, 0.6, 0.2])
    with pytest.raises(OutOfRange):
        qubit_mixing_channel(0.7)


def test_mixed_boundary_outputs_are_accessible():
    r = (0, 0.6, 0.4)
    for theta in np.linspace(0, np.pi / 2, 7):
        for p in np.linspace(0, 0.5, 5):
            s = _apply_bloch(qubit_mixing_channel(p), _apply_bloch(yz_boundary_channel(r, theta), r))
            assert qubit_deterministic_convertible(r, s)


def test_distillation_channel_shapes():
    k2 = distillation_channel(2)
    assert len(k2) == 1 and np.array_equal(k2[0], [[0, 1], [1, 0]])
    k3 = distillation_channel(3)
    assert len(k3) == 2 and np.array_equal(k3[1], [[0, 0, 1], [0, 0, 0]])
    k4 = distillation_channel(4)
    assert len(k4) == 2 and np.allclose(k4.gram(), np.eye(4))
    with pytest.raises(DimTooSmall):
        distillation_channel(1)


def test_distill_examples(rng):
    assert np.isclose(distill(random_real_state(4, rng)).achieved, 0.5)
    res = distill(plus_i())
    assert np.isclose(res.achieved, 1)
    assert np.allclose(res.output.matrix, np.outer(PLUS_I, PLUS_I.conj()))
    assert np.isclose(distill(bloch_state(0, 0.6, 0.4)).achieved, 0.8)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 7))
def test_distill_reaches_fidelity_of_imaginarity(seed, d):
    rho = random_state(d, seed)
    assert abs(distill(rho).achieved - fidelity_of_imaginarity(rho)) < 1e-9


def test_random_real_channels_do_not_beat_distill(rng):
    rho = random_state(3, rng)
    best = distill(rho).achieved
    for _ in range(200):
        out = apply(random_real_channel(3, 2, int(rng.integers(2, 5)), rng), rho).matrix
        assert np.real(PLUS_I.conj() @ out @ PLUS_I) <= best + 1e-9
