"""Sparse state vectors over mixed-dimension group-basis qudits.

States are hash maps from edge configurations to complex amplitudes.  An
optional gauge fixing compresses states that are invariant under the
vertex transformations of all "spectator" vertices: amplitudes are stored
on the canonical slice where every gauge-forest edge carries the identity,
and each operator application is followed by re-canonicalization.  This is
exact for operators that commute with the spectator vertex stabilizers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from qdsim.errors import (LatticeMismatchError, MeasurementConsistencyError,
                          ZeroStateError)
from qdsim.lattice import REGION_WALL, Lattice
from qdsim.ops import Operator

PRUNE_THRESHOLD = 1e-12


def _gauge_action(lattice: Lattice, v: int, gamma: int, cfg: tuple) -> tuple:
    """Apply the vertex transformation by gamma at v to a basis config."""
    region = lattice.vertex_region(v)
    out = list(cfg)
    if region == REGION_WALL:
        # merged representation: gamma is an S3 element, acting on Z2-side
        # qubits through its parity and on six-level spins directly
        parity = gamma % 2
        s3g = lattice.region_group("S3")
        for e, toward in lattice.star(v):
            if lattice.edge_region[e] == "Z2":
                out[e] = (out[e] + parity) % 2
            elif toward:
                out[e] = s3g.mul(gamma, out[e])
            else:
                out[e] = s3g.mul(out[e], s3g.inv(gamma))
    else:
        for e, toward in lattice.star(v):
            group = lattice.edge_group(e)
            if toward:
                out[e] = group.mul(gamma, out[e])
            else:
                out[e] = group.mul(out[e], group.inv(gamma))
    return tuple(out)


@dataclass(frozen=True)
class GaugeFixing:
    """Spanning-forest gauge fixing rooted at the active vertices."""

    active: frozenset[int]
    forest: tuple[tuple[int, int, bool], ...]

    @classmethod
    def for_lattice(cls, lattice: Lattice, active: Sequence[int]) -> "GaugeFixing":
        return cls(frozenset(active), tuple(lattice.gauge_forest(active)))

    def fixed_vertices(self) -> tuple[int, ...]:
        return tuple(w for w, _, _ in self.forest)

    def canonicalize(self, lattice: Lattice, cfg: tuple) -> tuple:
        for w, e, toward in self.forest:
            z = cfg[e]
            group = lattice.edge_group(e)
            if lattice.vertex_region(w) == REGION_WALL and group.name != "S3":
                raise ValueError("wall vertex attached through a non-S3 edge")
            gamma = group.inv(z) if toward else z
            if gamma != group.identity:
                cfg = _gauge_action(lattice, w, gamma, cfg)
        return cfg

    def log_orbit_size(self, lattice: Lattice) -> float:
        total = 0.0
        for w, _, _ in self.forest:
            region = lattice.vertex_region(w)
            total += math.log(2 if region == "Z2" else 6)
        return total


class SparseState:
    """Sparse complex vector over basis configurations of a lattice."""

    def __init__(self, lattice: Lattice, amps: dict | None = None,
                 gauge: GaugeFixing | None = None) -> None:
        self.lattice = lattice
        self.amps = amps if amps is not None else {}
        self.gauge = gauge
        self.discarded_weight = 0.0

    @classmethod
    def identity_config(cls, lattice: Lattice) -> tuple:
        return tuple(0 for _ in range(lattice.n_edges))

    @classmethod
    def basis_state(cls, lattice: Lattice, cfg: tuple | None = None,
                    gauge: GaugeFixing | None = None) -> "SparseState":
        if cfg is None:
            cfg = cls.identity_config(lattice)
        if gauge is not None:
            cfg = gauge.canonicalize(lattice, cfg)
        return cls(lattice, {cfg: 1.0 + 0.0j}, gauge)

    # -- linear algebra -------------------------------------------------

    def copy(self) -> "SparseState":
        out = SparseState(self.lattice, dict(self.amps), self.gauge)
        out.discarded_weight = self.discarded_weight
        return out

    def norm_sq(self) -> float:
        return sum((a * a.conjugate()).real for a in self.amps.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def normalized(self) -> "SparseState":
        n = self.norm()
        if n == 0:
            raise ZeroStateError("cannot normalize the zero vector")
        return self.scaled(1.0 / n)

    def scaled(self, s: complex) -> "SparseState":
        out = SparseState(self.lattice, {c: a * s for c, a in self.amps.items()},
                          self.gauge)
        out.discarded_weight = self.discarded_weight
        return out

    def add(self, other: "SparseState", coeff: complex = 1.0) -> "SparseState":
        self._check_compatible(other)
        amps = dict(self.amps)
        for cfg, a in other.amps.items():
            amps[cfg] = amps.get(cfg, 0.0) + coeff * a
        return SparseState(self.lattice, amps, self.gauge)

    def inner(self, other: "SparseState") -> complex:
        """<self|other>, conjugate-linear in self."""
        self._check_compatible(other)
        small, big = (self.amps, other.amps)
        conj_small = True
        if len(big) < len(small):
            small, big = big, small
            conj_small = False
        acc = 0.0 + 0.0j
        for cfg, a in small.items():
            b = big.get(cfg)
            if b is not None:
                acc += (a.conjugate() * b) if conj_small else (b.conjugate() * a)
        return complex(acc)

    def fidelity(self, other: "SparseState") -> float:
        """|<self|other>|^2 for normalized states."""
        return abs(self.inner(other)) ** 2 / (self.norm_sq() * other.norm_sq())

    def _check_compatible(self, other: "SparseState") -> None:
        if self.lattice is not other.lattice:
            raise LatticeMismatchError("states live on different lattices")
        if self.gauge != other.gauge:
            raise LatticeMismatchError("states use different gauge fixings")

    # -- operators ------------------------------------------------------

    def apply(self, op: Operator, prune: float = PRUNE_THRESHOLD) -> "SparseState":
        amps = op.apply_dict(self.amps, self.lattice)
        if self.gauge is not None:
            canon = {}
            for cfg, a in amps.items():
                key = self.gauge.canonicalize(self.lattice, cfg)
                canon[key] = canon.get(key, 0.0) + a
            amps = canon
        out = SparseState(self.lattice, amps, self.gauge)
        out.discarded_weight = self.discarded_weight
        if prune:
            out = out.pruned(prune)
        return out

    def expectation(self, op: Operator) -> complex:
        n = self.norm_sq()
        if n == 0:
            raise ZeroStateError("expectation value of the zero vector")
        return self.inner(self.apply(op, prune=0.0)) / n

    def pruned(self, threshold: float = PRUNE_THRESHOLD) -> "SparseState":
        kept = {}
        dropped = 0.0
        for cfg, a in self.amps.items():
            if abs(a) < threshold:
                dropped += (a * a.conjugate()).real
            else:
                kept[cfg] = a
        out = SparseState(self.lattice, kept, self.gauge)
        out.discarded_weight = self.discarded_weight + dropped
        return out

    # -- gauge fixing ----------------------------------------------------

    def refixed(self, new_gauge: GaugeFixing | None) -> "SparseState":
        """Re-express the state under a different gauge fixing.

        Valid when the state is invariant under the vertex stabilizers of
        every vertex fixed by either gauge.  Unfixing vertices expands the
        stored support by their orbit; keep the unfixed set small.
        """
        lattice = self.lattice
        old_fixed = set(self.gauge.fixed_vertices()) if self.gauge else set()
        new_fixed = set(new_gauge.fixed_vertices()) if new_gauge else set()
        to_unfix = sorted(old_fixed - new_fixed)
        log_scale = 0.0
        if self.gauge is not None:
            log_scale -= self.gauge.log_orbit_size(lattice)
        if new_gauge is not None:
            log_scale += new_gauge.log_orbit_size(lattice)
        scale = math.exp(0.5 * log_scale)
        expanded: dict = {}
        for cfg, a in self.amps.items():
            self._expand_orbit(cfg, a, to_unfix, 0, expanded)
        out: dict = {}
        for cfg, a in expanded.items():
            key = new_gauge.canonicalize(lattice, cfg) if new_gauge else cfg
            out[key] = a * scale
        result = SparseState(lattice, out, new_gauge)
        result.discarded_weight = self.discarded_weight
        return result

    def _expand_orbit(self, cfg: tuple, amp: complex, vertices: list[int],
                      k: int, out: dict) -> None:
        if k == len(vertices):
            out[cfg] = amp
            return
        v = vertices[k]
        region = self.lattice.vertex_region(v)
        order = 2 if region == "Z2" else 6
        for gamma in range(order):
            nxt = _gauge_action(self.lattice, v, gamma, cfg) if gamma else cfg
            self._expand_orbit(nxt, amp, vertices, k + 1, out)


def random_state(lattice: Lattice, rng: np.random.Generator,
                 support: int = 24, gauge: GaugeFixing | None = None) -> SparseState:
    """Normalized state with random support; for operator identity tests."""
    amps: dict = {}
    dims = lattice.edge_dim
    while len(amps) < support:
        cfg = tuple(int(rng.integers(d)) for d in dims)
        if gauge is not None:
            cfg = gauge.canonicalize(lattice, cfg)
        amps[cfg] = complex(rng.normal(), rng.normal())
    return SparseState(lattice, amps, gauge).normalized()


@dataclass
class MeasurementResult:
    index: int
    probability: float
    state: SparseState


def measure(state: SparseState, projectors: Sequence[Operator],
            rng: np.random.Generator, atol: float = 1e-9) -> MeasurementResult:
    """Projectively measure a complete family of orthogonal projectors."""
    norm = state.norm_sq()
    branches = [state.apply(p, prune=0.0) for p in projectors]
    probs = [b.norm_sq() / norm for b in branches]
    if abs(sum(probs) - 1.0) > atol:
        raise MeasurementConsistencyError(
            f"projector family probabilities sum to {sum(probs):.12f}")
    r = rng.random()
    acc = 0.0
    chosen = None
    for k, p in enumerate(probs):
        if p <= 0:
            continue
        chosen = k
        acc += p
        if r < acc:
            break
    if chosen is None:
        raise MeasurementConsistencyError("no outcome with positive probability")
    return MeasurementResult(chosen, probs[chosen], branches[chosen].normalized())


def measure_edge(state: SparseState, edge: int,
                 rng: np.random.Generator) -> MeasurementResult:
    """Computational-basis measurement of a single edge qudit."""
    from qdsim.ops import EdgeProjector
    dim = state.lattice.edge_dim[edge]
    return measure(state, [EdgeProjector(edge, g) for g in range(dim)], rng)
