"""Operators on sparse group-basis states.

Every operator transforms an amplitude dictionary {config: amplitude},
where a config is a tuple with one group-element index per edge.  Products
apply their rightmost factor first, matching operator composition order.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from qdsim.errors import DimensionMismatchError
from qdsim.lattice import Lattice

AmpDict = dict


class Operator:
    def apply_dict(self, amps: AmpDict, lattice: Lattice) -> AmpDict:
        raise NotImplementedError

    def __mul__(self, other: "Operator") -> "Operator":
        return ProductOp((self, other))

    def __rmul__(self, scalar: complex) -> "Operator":
        return ScaledOp(scalar, self)

    def __add__(self, other: "Operator") -> "Operator":
        return SumOp(((1.0, self), (1.0, other)))

    def __sub__(self, other: "Operator") -> "Operator":
        return SumOp(((1.0, self), (-1.0, other)))


class IdentityOp(Operator):
    def apply_dict(self, amps: AmpDict, lattice: Lattice) -> AmpDict:
        return dict(amps)


class EdgeOp(Operator):
    """Base for single-edge operators; validates the element index."""

    def __init__(self, edge: int, g: int) -> None:
        self.edge = edge
        self.g = g

    def _check(self, lattice: Lattice) -> None:
        dim = lattice.edge_dim[self.edge]
        if not 0 <= self.g < dim:
            raise DimensionMismatchError(
                f"element {self.g} out of range for edge {self.edge} (dim {dim})")


class LeftMult(EdgeOp):
    """|z> -> |g z> on one edge."""

    def apply_dict(self, amps: AmpDict, lattice: Lattice) -> AmpDict:
        self._check(lattice)
        e = self.edge
        row = lattice.edge_group(e).mult[self.g]
        return {cfg[:e] + (row[cfg[e]],) + cfg[e + 1:]: a for cfg, a in amps.items()}


class RightMultInv(EdgeOp):
    """|z> -> |z g^-1> on one edge."""

    def apply_dict(self, amps: AmpDict, lattice: Lattice) -> AmpDict:
        self._check(lattice)
        e = self.edge
        group = lattice.edge_group(e)
        ginv = group.inv(self.g)
        mult = group.mult
        return {cfg[:e] + (mult[cfg[e]][ginv],) + cfg[e + 1:]: a
                for cfg, a in amps.items()}


class EdgeProjector(EdgeOp):
    """|g><g| on one edge."""

    def apply_dict(self, amps: AmpDict, lattice: Lattice) -> AmpDict:
        self._check(lattice)
        e, g = self.edge, self.g
        return {cfg: a for cfg, a in amps.items() if cfg[e] == g}


class CharDiagonal(Operator):
    """Diagonal operator with one weight per group element of an edge."""

    def __init__(self, edge: int, values: Sequence[complex]) -> None:
        self.edge = edge
        self.values = tuple(values)

    def apply_dict(self, amps: AmpDict, lattice: Lattice) -> AmpDict:
        if len(self.values) != lattice.edge_dim[self.edge]:
            raise DimensionMismatchError(
                f"diagonal length {len(self.values)} does not match edge "
                f"{self.edge} (dim {lattice.edge_dim[self.edge]})")
        e, vals = self.edge, self.values
        out: AmpDict = {}
        for cfg, a in amps.items():
            w = vals[cfg[e]]
            if w != 0:
                out[cfg] = a * w
        return out


class EdgeDense(Operator):
    """Arbitrary single-edge matrix in the group basis."""

    def __init__(self, edge: int, matrix) -> None:
        self.edge = edge
        self.matrix = matrix

    def apply_dict(self, amps: AmpDict, lattice: Lattice) -> AmpDict:
        dim = lattice.edge_dim[self.edge]
        m = self.matrix
        if len(m) != dim or any(len(row) != dim for row in m):
            raise DimensionMismatchError(
                f"matrix shape does not match edge {self.edge} (dim {dim})")
        e = self.edge
        out: AmpDict = {}
        for cfg, a in amps.items():
            z = cfg[e]
            for z2 in range(dim):
                w = m[z2][z]
                if w != 0:
                    key = cfg[:e] + (z2,) + cfg[e + 1:]
                    out[key] = out.get(key, 0.0) + a * w
        return out


class ProductOp(Operator):
    """Operator product; the last factor acts first."""

    def __init__(self, factors: Iterable[Operator]) -> None:
        self.factors = tuple(factors)

    def apply_dict(self, amps: AmpDict, lattice: Lattice) -> AmpDict:
        for op in reversed(self.factors):
            amps = op.apply_dict(amps, lattice)
        return amps


class ScaledOp(Operator):
    def __init__(self, scalar: complex, op: Operator) -> None:
        self.scalar = scalar
        self.op = op

    def apply_dict(self, amps: AmpDict, lattice: Lattice) -> AmpDict:
        out = self.op.apply_dict(amps, lattice)
        s = self.scalar
        return {cfg: a * s for cfg, a in out.items()}


class SumOp(Operator):
    def __init__(self, terms: Iterable[tuple[complex, Operator]]) -> None:
        self.terms = tuple(terms)

    def apply_dict(self, amps: AmpDict, lattice: Lattice) -> AmpDict:
        out: AmpDict = {}
        for coeff, op in self.terms:
            if coeff == 0:
                continue
            for cfg, a in op.apply_dict(amps, lattice).items():
                out[cfg] = out.get(cfg, 0.0) + coeff * a
        return out


def average(ops: Sequence[Operator]) -> SumOp:
    w = 1.0 / len(ops)
    return SumOp(tuple((w, op) for op in ops))
