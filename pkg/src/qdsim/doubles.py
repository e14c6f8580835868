"""Vertex/plaquette operators, particle projectors, ground states, syndromes.

Vertex operators act with left multiplication on edges pointing toward the
vertex and inverse right multiplication on edges pointing away.  The flux
of a plaquette is read counterclockwise starting from a chosen corner,
taking the edge value itself on clockwise-pointing edges and its inverse
on counterclockwise-pointing ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from qdsim.errors import DisabledStabilizerError, MeasurementConsistencyError
from qdsim.groups import OMEGA, conjugacy_class_of, sign_character
from qdsim.lattice import (REGION_S3, REGION_WALL, REGION_Z2, WALL_PAIRED,
                           Lattice, Site)
from qdsim.ops import (AmpDict, LeftMult, Operator, ProductOp, RightMultInv,
                       SumOp, average)
from qdsim.state import SparseState


# ---------------------------------------------------------------------------
# Vertex operators


def vertex_unitary(lattice: Lattice, v: int, g: int) -> Operator:
    """A_v^g without hole bookkeeping (also used for gauge transformations)."""
    factors = []
    for e, toward in lattice.star(v):
        factors.append(LeftMult(e, g) if toward else RightMultInv(e, g))
    return ProductOp(factors)


def vertex_op(lattice: Lattice, v: int, g: int) -> Operator:
    """A_v^g for a vertex in the Z2 or S3 region."""
    if v in lattice.hole_mask:
        raise DisabledStabilizerError(f"vertex {v} lies inside a hole")
    if lattice.vertex_region(v) == REGION_WALL:
        raise DisabledStabilizerError(
            f"vertex {v} is a wall vertex; use the wall module")
    return vertex_unitary(lattice, v, g)


def vertex_projector(lattice: Lattice, v: int) -> Operator:
    """The stabilizer projector (1/|G|) sum_g A_v^g."""
    group = lattice.region_group(lattice.vertex_region(v))
    return average([vertex_op(lattice, v, g) for g in group.elements()])


# ---------------------------------------------------------------------------
# Plaquette flux


def _edge_value_in_region(lattice: Lattice, e: int, z: int, region: str) -> int:
    """Map an edge value to the given region's group (wall edges project)."""
    er = lattice.edge_region[e]
    if er == region:
        return z
    if er != REGION_WALL:
        raise ValueError("edge does not border the requested region")
    if lattice.wall_representation == WALL_PAIRED:
        a, b = divmod(z, 6)
        return a if region == REGION_Z2 else b
    # merged single six-level spin: Z2 side reads the parity
    return z % 2 if region == REGION_Z2 else z


def flux_factors(lattice: Lattice, p: int, v: int) -> list[tuple[int, bool]]:
    """Boundary (edge, invert) factors counterclockwise starting from v."""
    x, y = lattice.plaquette_coords[p]
    corners = [lattice.vertex_id(x + 1, y + 1), lattice.vertex_id(x, y + 1),
               lattice.vertex_id(x, y), lattice.vertex_id(x + 1, y)]
    if v not in corners:
        raise ValueError(f"vertex {v} is not a corner of plaquette {p}")
    order = lattice.boundary(p)
    start = corners.index(v)
    rotated = order[start:] + order[:start]
    return [(e, not clockwise) for e, clockwise in rotated]


def config_flux(lattice: Lattice, p: int, v: int, cfg: tuple) -> int:
    region = lattice.plaquette_region(p)
    group = lattice.region_group(region)
    acc = group.identity
    for e, invert in flux_factors(lattice, p, v):
        z = _edge_value_in_region(lattice, e, cfg[e], region)
        acc = group.mul(acc, group.inv(z) if invert else z)
    return acc


class FluxProjector(Operator):
    """Diagonal projector onto configurations with given flux values at a site.

    ``fluxes`` is the set of accepted group elements; a full conjugacy
    class makes the projector commute with every vertex stabilizer.
    """

    def __init__(self, lattice: Lattice, p: int, v: int, fluxes) -> None:
        self.p = p
        self.v = v
        self.fluxes = frozenset(fluxes) if not isinstance(fluxes, int) \
            else frozenset((fluxes,))

    def apply_dict(self, amps: AmpDict, lattice: Lattice) -> AmpDict:
        return {cfg: a for cfg, a in amps.items()
                if config_flux(lattice, self.p, self.v, cfg) in self.fluxes}


def plaquette_proj(lattice: Lattice, p: int, v: int, h: int) -> FluxProjector:
    """B^h_{p,v}: projector onto flux h at p measured from v."""
    return FluxProjector(lattice, p, v, h)


def plaquette_stabilizer(lattice: Lattice, p: int) -> FluxProjector:
    site = lattice.canonical_site(p)
    group = lattice.region_group(lattice.plaquette_region(p))
    return plaquette_proj(lattice, p, site.vertex, group.identity)


def stabilizer_projectors(lattice: Lattice) -> dict[str, dict[int, Operator]]:
    """All bulk stabilizer projectors, keyed by vertex / plaquette id.

    Wall vertices and wall plaquettes are covered by the wall module.
    """
    vertex = {v: vertex_projector(lattice, v)
              for v in range(lattice.n_vertices)
              if lattice.vertex_region(v) != REGION_WALL
              and v not in lattice.hole_mask}
    plaquette = {p: plaquette_stabilizer(lattice, p)
                 for p in range(lattice.n_plaquettes)}
    return {"vertex": vertex, "plaquette": plaquette}


def ground_state(lattice: Lattice, gauge=None,
                 extra_projectors: list[Operator] | None = None) -> SparseState:
    """Project the all-identity product state onto the stabilizer space."""
    state = SparseState.basis_state(lattice, gauge=gauge)
    for v in range(lattice.n_vertices):
        region = lattice.vertex_region(v)
        if region == REGION_WALL:
            continue
        group = lattice.region_group(region)
        proj = average([vertex_unitary(lattice, v, g) for g in group.elements()])
        state = state.apply(proj)
    for op in extra_projectors or ():
        state = state.apply(op)
    return state.normalized()


# ---------------------------------------------------------------------------
# Particle projectors (S3: labels A..H, Z2: labels 1, e, m, eps)

S3_LABELS = ("A", "B", "C", "D", "E", "F", "G", "H")
Z2_LABELS = ("1", "e", "m", "eps")


def _s3_vertex_charge(lattice: Lattice, v: int, weights) -> Operator:
    ops = [(w, vertex_op(lattice, v, g)) for g, w in enumerate(weights) if w != 0]
    return SumOp(ops)


def charge_projector(lattice: Lattice, v: int, label: str) -> Operator:
    """Pure-charge projectors at a vertex: A, B, C (S3) or 1, e (Z2)."""
    region = lattice.vertex_region(v)
    if region == REGION_S3:
        if label == "A":
            return _s3_vertex_charge(lattice, v, [1 / 6] * 6)
        if label == "B":
            chi = sign_character(lattice.region_group(REGION_S3))
            return _s3_vertex_charge(lattice, v, [c / 6 for c in chi])
        if label == "C":
            return _s3_vertex_charge(lattice, v, [2 / 3, 0, -1 / 3, 0, -1 / 3, 0])
        raise ValueError(f"unknown S3 charge label {label!r}")
    if region == REGION_Z2:
        if label == "1":
            return _s3_vertex_charge(lattice, v, [1 / 2, 1 / 2])
        if label == "e":
            return _s3_vertex_charge(lattice, v, [1 / 2, -1 / 2])
        raise ValueError(f"unknown Z2 charge label {label!r}")
    raise ValueError("charge projectors are not defined on wall vertices")


def particle_projector(lattice: Lattice, site: Site, label: str) -> Operator:
    """Projector onto one particle type at a site.

    S3 sites use the eight-label family; the three flux-free labels are
    combined with the trivial-flux projector so the family sums to the
    identity.  Z2 sites use {1, e, m, eps}.
    """
    p, v = site.plaquette, site.vertex
    region = lattice.plaquette_region(p)
    group = lattice.region_group(region)
    if region == REGION_Z2:
        if label not in Z2_LABELS:
            raise ValueError(f"unknown Z2 particle label {label!r}")
        e_part = charge_projector(lattice, v, "e" if label in ("e", "eps") else "1")
        m_flux = 1 if label in ("m", "eps") else 0
        return ProductOp((plaquette_proj(lattice, p, v, m_flux), e_part))
    if label not in S3_LABELS:
        raise ValueError(f"unknown S3 particle label {label!r}")
    idx = {name: group.index_of(name) for name in ("e", "t", "c", "ct", "c2", "c2t")}
    if label in ("A", "B", "C"):
        return ProductOp((plaquette_proj(lattice, p, v, idx["e"]),
                          charge_projector(lattice, v, label)))
    if label in ("D", "E"):
        sgn = 1 if label == "D" else -1
        terms = []
        for f in ("t", "ct", "c2t"):
            charge = SumOp(((0.5, vertex_op(lattice, v, idx["e"])),
                            (0.5 * sgn, vertex_op(lattice, v, idx[f]))))
            terms.append((1.0, ProductOp((plaquette_proj(lattice, p, v, idx[f]),
                                          charge))))
        return SumOp(terms)
    weights = {"F": (1.0, 1.0), "G": (OMEGA, OMEGA.conjugate()),
               "H": (OMEGA.conjugate(), OMEGA)}[label]
    terms = []
    for f, w in (("c", weights[0]), ("c2", weights[1])):
        charge = SumOp(((1 / 3, vertex_op(lattice, v, idx["e"])),
                        (w / 3, vertex_op(lattice, v, idx["c"])),
                        (w.conjugate() / 3, vertex_op(lattice, v, idx["c2"]))))
        terms.append((1.0, ProductOp((plaquette_proj(lattice, p, v, idx[f]),
                                      charge))))
    return SumOp(terms)


def site_family(lattice: Lattice, site: Site) -> tuple[tuple[str, Operator], ...]:
    region = lattice.plaquette_region(site.plaquette)
    labels = S3_LABELS if region == REGION_S3 else Z2_LABELS
    return tuple((lab, particle_projector(lattice, site, lab)) for lab in labels)


# ---------------------------------------------------------------------------
# Syndrome extraction by direct projector evaluation


@dataclass
class SiteSyndrome:
    site: Site
    region: str
    label: str
    expectations: dict[str, float]
    local_flux: dict[str, float] = field(default_factory=dict)

    def is_vacuum(self, atol: float = 1e-9) -> bool:
        return self.label in ("A", "1") and \
            abs(self.expectations[self.label] - 1.0) < atol


@dataclass
class SyndromeRecord:
    entries: list[SiteSyndrome]

    def by_site(self) -> dict[Site, SiteSyndrome]:
        return {e.site: e for e in self.entries}

    def nonvacuum(self, atol: float = 1e-6) -> list[SiteSyndrome]:
        return [e for e in self.entries if not e.is_vacuum(atol)]

    def violation_count(self, atol: float = 1e-6) -> int:
        return len(self.nonvacuum(atol))

    def to_text(self) -> str:
        lines = []
        for e in self.entries:
            exp = " ".join(f"{k}={v:.6f}" for k, v in sorted(e.expectations.items()))
            lines.append(f"site p={e.site.plaquette} v={e.site.vertex} "
                         f"region={e.region} label={e.label} {exp}")
        return "\n".join(lines) + "\n"


def site_syndrome(state: SparseState, site: Site,
                  atol: float = 1e-9) -> SiteSyndrome:
    """Expectations of the full particle family at one site."""
    lattice = state.lattice
    region = lattice.plaquette_region(site.plaquette)
    expectations = {}
    for lab, op in site_family(lattice, site):
        val = state.expectation(op)
        if abs(val.imag) > 1e-9:
            raise MeasurementConsistencyError(
                f"projector expectation has imaginary part {val.imag}")
        expectations[lab] = val.real
    total = sum(expectations.values())
    if abs(total - 1.0) > 1e-9:
        raise MeasurementConsistencyError(
            f"site projector family sums to {total}")
    label = max(expectations, key=expectations.get)
    if abs(expectations[label] - 1.0) > atol:
        label = "mixed"
    entry = SiteSyndrome(site, region, label, expectations)
    if region == REGION_S3 and label in ("D", "E", "F", "G", "H"):
        group = lattice.region_group(region)
        flux_class = ("t", "ct", "c2t") if label in ("D", "E") else ("c", "c2")
        for name in flux_class:
            proj = plaquette_proj(lattice, site.plaquette, site.vertex,
                                  group.index_of(name))
            entry.local_flux[name] = state.expectation(proj).real
    return entry


def syndrome_scan(state: SparseState, atol: float = 1e-9) -> SyndromeRecord:
    """Direct projector syndrome for every canonical site outside holes/wall."""
    lattice = state.lattice
    entries = []
    for site in lattice.canonical_sites():
        if site.vertex in lattice.hole_mask:
            continue
        if lattice.vertex_region(site.vertex) == REGION_WALL:
            continue
        entries.append(site_syndrome(state, site, atol))
    return SyndromeRecord(entries)


# ---------------------------------------------------------------------------
# Dense-matrix helpers for small-lattice oracles


def dense_operator(op: Operator, lattice: Lattice) -> np.ndarray:
    """Materialize an operator as a dense matrix (tiny lattices only)."""
    dims = lattice.edge_dim
    total = 1
    for d in dims:
        total *= d
    if total > 4096:
        raise ValueError("lattice too large for dense materialization")
    configs = [()]
    for d in dims:
        configs = [c + (z,) for c in configs for z in range(d)]
    index = {c: i for i, c in enumerate(configs)}
    mat = np.zeros((total, total), dtype=complex)
    for j, cfg in enumerate(configs):
        out = op.apply_dict({cfg: 1.0 + 0.0j}, lattice)
        for c2, a in out.items():
            mat[index[c2], j] = a
    return mat
