"""Exact simulator for quantum double models over small finite groups.

The package provides finite-group tables and representation data, oriented
square lattices with mixed qubit/qudit regions, a sparse state engine,
vertex/plaquette/ribbon operators, a subgroup-parametrized domain wall,
syndrome-extraction circuits, and the end-to-end logical protocols built
from them (fusion-space encoding, double exchange, encoding switch, wall
crossing, and gate teleportation).
"""

from qdsim.groups import FiniteGroup, s3, z2, z3, z2_x_s3

__all__ = ["FiniteGroup", "s3", "z2", "z3", "z2_x_s3"]
