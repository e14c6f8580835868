from __future__ import annotations

import numpy as np
import pytest

from qdsim.errors import (DimensionMismatchError, LatticeMismatchError,
                          MeasurementConsistencyError, ZeroStateError)
from qdsim.lattice import torus
from qdsim.ops import (CharDiagonal, EdgeDense, EdgeProjector, IdentityOp,
                       LeftMult, ProductOp, RightMultInv, SumOp)
from qdsim.state import (GaugeFixing, SparseState, measure, measure_edge,
                         random_state)


@pytest.fixture
def lat():
    return torus(2, 2, region="S3")


def test_left_mult_definition(lat):
    g = lat.edge_group(0)
    c, t, ct = g.index_of("c"), g.index_of("t"), g.index_of("ct")
    cfg = list(SparseState.identity_config(lat))
    cfg[0] = t
    state = SparseState.basis_state(lat, tuple(cfg))
    out = state.apply(LeftMult(0, c))
    ((new_cfg, amp),) = out.amps.items()
    assert new_cfg[0] == ct
    assert amp == 1.0


def test_right_mult_inv_definition(lat):
    g = lat.edge_group(0)
    c = g.index_of("c")
    state = SparseState.basis_state(lat)
    out = state.apply(RightMultInv(0, c))
    ((new_cfg, _),) = out.amps.items()
    assert new_cfg[0] == g.inv(c)


def test_projector_keeps_single_component(lat):
    g = lat.edge_group(0)
    c = g.index_of("c")
    base = SparseState.basis_state(lat)
    shifted = base.apply(LeftMult(0, c))
    sup = base.add(shifted).scaled(1 / np.sqrt(2))
    kept = sup.apply(EdgeProjector(0, 0), prune=0.0)
    assert abs(kept.norm() - 1 / np.sqrt(2)) < 1e-12
    assert all(cfg[0] == 0 for cfg in kept.amps)


def test_unitarity_roundtrip(lat):
    rng = np.random.default_rng(7)
    state = random_state(lat, rng)
    g = lat.edge_group(3)
    c = g.index_of("c")
    back = state.apply(LeftMult(3, c)).apply(LeftMult(3, g.inv(c)))
    assert abs(back.add(state, -1.0).norm()) < 1e-12
    assert abs(state.apply(LeftMult(3, c)).norm() - 1.0) < 1e-12


def test_apply_is_linear(lat):
    rng = np.random.default_rng(3)
    a = random_state(lat, rng)
    b = random_state(lat, rng)
    op = SumOp(((0.5, LeftMult(0, 2)), (0.25j, EdgeProjector(1, 0))))
    lhs = a.scaled(0.3).add(b, -1.2j).apply(op, prune=0.0)
    rhs = a.apply(op, prune=0.0).scaled(0.3).add(b.apply(op, prune=0.0), -1.2j)
    assert lhs.add(rhs, -1.0).norm() < 1e-12


def test_inner_product_properties(lat):
    rng = np.random.default_rng(11)
    a = random_state(lat, rng)
    b = random_state(lat, rng)
    assert abs(a.inner(a) - 1.0) < 1e-12
    assert abs(a.inner(b) - np.conj(b.inner(a))) < 1e-12


def test_lattice_mismatch_raises(lat):
    other = torus(2, 2, region="S3")
    a = SparseState.basis_state(lat)
    b = SparseState.basis_state(other)
    with pytest.raises(LatticeMismatchError):
        a.inner(b)


def test_dimension_mismatch_raises():
    latz = torus(2, 2, region="Z2")
    state = SparseState.basis_state(latz)
    with pytest.raises(DimensionMismatchError):
        state.apply(LeftMult(0, 4))


def test_char_diagonal_and_dense(lat):
    rng = np.random.default_rng(5)
    state = random_state(lat, rng)
    chi = (1, -1, 1, -1, 1, -1)
    twice = state.apply(CharDiagonal(0, chi)).apply(CharDiagonal(0, chi))
    assert twice.add(state, -1.0).norm() < 1e-12
    mat = [[0] * 6 for _ in range(6)]
    for z in range(6):
        mat[z][z] = chi[z]
    dense = state.apply(EdgeDense(0, mat))
    assert dense.add(state.apply(CharDiagonal(0, chi)), -1.0).norm() < 1e-12


def test_prune_reports_discarded_weight(lat):
    cfg = SparseState.identity_config(lat)
    cfg2 = tuple([1] + list(cfg[1:]))
    state = SparseState(lat, {cfg: 1.0, cfg2: 1e-15})
    out = state.pruned(1e-12)
    assert cfg2 not in out.amps
    assert out.discarded_weight == pytest.approx(1e-30)
    intact = state.pruned(0.0)
    assert cfg2 in intact.amps


def test_measure_trivial_family(lat):
    rng = np.random.default_rng(0)
    state = SparseState.basis_state(lat)
    family = [EdgeProjector(0, 0), SumOp(tuple(
        (1.0, EdgeProjector(0, g)) for g in range(1, 6)))]
    res = measure(state, family, rng)
    assert res.index == 0
    assert res.probability == pytest.approx(1.0)


def test_measure_repeatability(lat):
    rng = np.random.default_rng(1)
    base = SparseState.basis_state(lat)
    plus = base.add(base.apply(LeftMult(0, 2))).normalized()
    res = measure_edge(plus, 0, rng)
    assert res.probability == pytest.approx(0.5)
    again = measure_edge(res.state, 0, rng)
    assert again.index == res.index
    assert again.probability == pytest.approx(1.0)


def test_measure_seeded_determinism(lat):
    base = SparseState.basis_state(lat)
    plus = base.add(base.apply(LeftMult(0, 2))).normalized()
    res1 = measure_edge(plus, 0, np.random.default_rng(42))
    res2 = measure_edge(plus, 0, np.random.default_rng(42))
    assert res1.index == res2.index


def test_measure_incomplete_family_raises(lat):
    rng = np.random.default_rng(0)
    state = SparseState.basis_state(lat)
    with pytest.raises(MeasurementConsistencyError):
        measure(state, [EdgeProjector(0, 1), EdgeProjector(0, 2)], rng)


def test_zero_state_raises(lat):
    state = SparseState.basis_state(lat)
    annihilated = state.apply(EdgeProjector(0, 3), prune=0.0)
    with pytest.raises(ZeroStateError):
        annihilated.normalized()


def test_expectation_identity(lat):
    rng = np.random.default_rng(9)
    state = random_state(lat, rng)
    assert state.expectation(IdentityOp()) == pytest.approx(1.0)
    proj_other = EdgeProjector(0, 5)
    forced = state.apply(EdgeProjector(0, 0), prune=0.0)
    if forced.norm() > 0:
        assert forced.normalized().expectation(proj_other) == pytest.approx(0.0)


def test_gauge_fixed_ground_state_support():
    from qdsim.doubles import ground_state
    lat = torus(2, 2, region="S3")
    full = ground_state(lat)
    assert len(full.amps) == 6 ** (lat.n_vertices - 1)
    gauge = GaugeFixing.for_lattice(lat, [lat.vertex_id(0, 0)])
    fixed = ground_state(lat, gauge=gauge)
    assert len(fixed.amps) == 1


def test_gauge_fixed_expectations_match_full():
    from qdsim.doubles import ground_state, stabilizer_projectors
    lat = torus(2, 2, region="S3")
    full = ground_state(lat)
    gauge = GaugeFixing.for_lattice(lat, [lat.vertex_id(0, 0)])
    fixed = ground_state(lat, gauge=gauge)
    projs = stabilizer_projectors(lat)
    for op in list(projs["vertex"].values()) + list(projs["plaquette"].values()):
        a = full.expectation(op)
        b = fixed.expectation(op)
        assert abs(a - b) < 1e-9


def test_refix_roundtrip():
    from qdsim.doubles import ground_state
    lat = torus(2, 2, region="S3")
    v0, v1 = lat.vertex_id(0, 0), lat.vertex_id(1, 1)
    g1 = GaugeFixing.for_lattice(lat, [v0])
    g2 = GaugeFixing.for_lattice(lat, [v0, v1])
    state = ground_state(lat, gauge=g1)
    moved = state.refixed(g2)
    assert abs(moved.norm() - 1.0) < 1e-9
    back = moved.refixed(g1)
    assert back.add(state, -1.0).norm() < 1e-9
