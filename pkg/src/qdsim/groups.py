"""Finite-group tables, conjugacy data, and irreps for Z2, Z3, S3, Z2xS3.

Elements are 0-based indices into a fixed element list.  S3 is ordered
(e, t, c, ct, c2, c2t): writing g = c^r t^s, the index is 2*r + s, which is
also the flattened qutrit-qubit index |r>|s>.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

OMEGA = np.exp(2j * np.pi / 3)


class FiniteGroup:
    """Finite group given by 0-based multiplication/inverse tables.

    Tables are validated at construction: identity, inverses and
    associativity are all checked, so the arithmetic methods are total.
    """

    def __init__(self, name: str, mult: Sequence[Sequence[int]],
                 element_names: Sequence[str]) -> None:
        self.name = name
        self.order = len(mult)
        self.mult = tuple(tuple(int(x) for x in row) for row in mult)
        self.element_names = tuple(str(s) for s in element_names)
        if len(self.element_names) != self.order:
            raise ValueError("element_names length does not match order")
        self.identity = 0
        self._validate()
        self.inverse_table = tuple(self._find_inverse(a) for a in range(self.order))

    def _validate(self) -> None:
        n = self.order
        for row in self.mult:
            if len(row) != n or any(x < 0 or x >= n for x in row):
                raise ValueError(f"bad multiplication table for {self.name}")
        for a in range(n):
            if self.mult[0][a] != a or self.mult[a][0] != a:
                raise ValueError(f"element 0 is not an identity in {self.name}")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.mult[self.mult[a][b]][c] != self.mult[a][self.mult[b][c]]:
                        raise ValueError(f"associativity fails in {self.name}")

    def _find_inverse(self, a: int) -> int:
        for b in range(self.order):
            if self.mult[a][b] == self.identity:
                return b
        raise ValueError(f"element {a} of {self.name} has no inverse")

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def inv(self, a: int) -> int:
        return self.inverse_table[a]

    def conjugate(self, g: int, a: int) -> int:
        """Return g a g^-1."""
        return self.mul(self.mul(g, a), self.inv(g))

    def elements(self) -> range:
        return range(self.order)

    def name_of(self, a: int) -> str:
        return self.element_names[a]

    def index_of(self, name: str) -> int:
        return self.element_names.index(name)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    def table_text(self) -> str:
        """Render element names and the multiplication table as plain text."""
        lines = [f"group {self.name} order {self.order}"]
        lines.append("elements " + " ".join(self.element_names))
        width = max(len(s) for s in self.element_names)
        for a in range(self.order):
            row = " ".join(self.element_names[self.mult[a][b]].ljust(width)
                           for b in range(self.order))
            lines.append(f"{self.element_names[a].ljust(width)} | {row}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: frozenset[int]

    def __post_init__(self) -> None:
        ms = self.members
        if self.parent.identity not in ms:
            raise ValueError("subgroup must contain the identity")
        for a in ms:
            if self.parent.inv(a) not in ms:
                raise ValueError("subgroup not closed under inverse")
            for b in ms:
                if self.parent.mul(a, b) not in ms:
                    raise ValueError("subgroup not closed under multiplication")

    @property
    def order(self) -> int:
        return len(self.members)

    def conjugated(self, g: int) -> "Subgroup":
        par = self.parent
        return Subgroup(par, frozenset(par.conjugate(g, a) for a in self.members))


@dataclass(frozen=True)
class ConjugacyClass:
    """A conjugacy class with the commutant of its representative.

    ``normalizer`` holds the elements commuting with the representative;
    its irreps label the charge of anyons with this flux.
    """

    representative: int
    members: frozenset[int]
    normalizer: Subgroup


@dataclass(frozen=True)
class Irrep:
    label: str
    dim: int
    matrices: tuple  # per-element dim x dim complex ndarrays

    def __call__(self, g: int) -> np.ndarray:
        return self.matrices[g]

    def character(self, g: int) -> complex:
        return complex(np.trace(self.matrices[g]))


# ---------------------------------------------------------------------------
# Concrete groups


def _s3_index(r: int, s: int) -> int:
    return 2 * (r % 3) + (s % 2)


def _s3_rs(idx: int) -> tuple[int, int]:
    return idx // 2, idx % 2


@lru_cache(maxsize=None)
def s3() -> FiniteGroup:
    """The permutation group of three objects, ordered (e, t, c, ct, c2, c2t)."""
    names = ["e", "t", "c", "ct", "c2", "c2t"]
    mult = [[0] * 6 for _ in range(6)]
    for a in range(6):
        r1, s1 = _s3_rs(a)
        for b in range(6):
            r2, s2 = _s3_rs(b)
            # (c^r1 t^s1)(c^r2 t^s2) = c^(r1 + (-1)^s1 r2) t^(s1+s2)
            r = r1 + (r2 if s1 == 0 else -r2)
            mult[a][b] = _s3_index(r, s1 + s2)
    return FiniteGroup("S3", mult, names)


@lru_cache(maxsize=None)
def z2() -> FiniteGroup:
    return FiniteGroup("Z2", [[0, 1], [1, 0]], ["e", "x"])


@lru_cache(maxsize=None)
def z3() -> FiniteGroup:
    mult = [[(a + b) % 3 for b in range(3)] for a in range(3)]
    return FiniteGroup("Z3", mult, ["e", "c", "c2"])


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Componentwise product; element (a, b) has index a*|H| + b."""
    n, m = g.order, h.order
    names = [f"({g.element_names[a]},{h.element_names[b]})"
             for a in range(n) for b in range(m)]
    mult = [[0] * (n * m) for _ in range(n * m)]
    for a1 in range(n):
        for b1 in range(m):
            for a2 in range(n):
                for b2 in range(m):
                    mult[a1 * m + b1][a2 * m + b2] = (
                        g.mul(a1, a2) * m + h.mul(b1, b2))
    return FiniteGroup(f"{g.name}x{h.name}", mult, names)


@lru_cache(maxsize=None)
def z2_x_s3() -> FiniteGroup:
    return direct_product(z2(), s3())


def product_index(pair: tuple[int, int], second_order: int = 6) -> int:
    return pair[0] * second_order + pair[1]


def product_pair(idx: int, second_order: int = 6) -> tuple[int, int]:
    return divmod(idx, second_order)


# ---------------------------------------------------------------------------
# Conjugacy classes and subgroups


def centralizer(group: FiniteGroup, a: int) -> Subgroup:
    members = frozenset(g for g in group.elements()
                        if group.mul(g, a) == group.mul(a, g))
    return Subgroup(group, members)


def conjugacy_classes(group: FiniteGroup) -> list[ConjugacyClass]:
    """Classes in order of their smallest member."""
    seen: set[int] = set()
    classes = []
    for a in group.elements():
        if a in seen:
            continue
        orbit = frozenset(group.conjugate(g, a) for g in group.elements())
        seen |= orbit
        classes.append(ConjugacyClass(a, orbit, centralizer(group, a)))
    return classes


def conjugacy_class_of(group: FiniteGroup, a: int) -> frozenset[int]:
    return frozenset(group.conjugate(g, a) for g in group.elements())


def subgroups_up_to_conjugation(group: FiniteGroup) -> list[Subgroup]:
    """Enumerate subgroups by brute force, one per conjugacy class.

    Intended for orders <= 12; every subset containing the identity is
    tested for closure under multiplication.
    """
    if group.order > 12:
        raise ValueError("exhaustive subgroup search is limited to order <= 12")
    others = [a for a in group.elements() if a != group.identity]
    found: list[frozenset[int]] = []
    seen: set[frozenset[int]] = set()
    for k in range(len(others) + 1):
        for combo in itertools.combinations(others, k):
            cand = frozenset((group.identity,) + combo)
            if cand in seen:
                continue
            if all(group.mul(a, b) in cand for a in cand for b in cand):
                orbit = {frozenset(group.conjugate(g, a) for a in cand)
                         for g in group.elements()}
                if not any(s in seen for s in orbit):
                    found.append(cand)
                seen |= orbit
    found.sort(key=lambda s: (len(s), sorted(s)))
    return [Subgroup(group, s) for s in found]


def z2_x_s3_subgroup(label: str) -> Subgroup:
    """Named subgroups K1..K10 of Z2 x S3 (pairs are (z2 element, s3 element))."""
    g = z2_x_s3()
    s3g = s3()
    t, c, ct, c2, c2t = (s3g.index_of(n) for n in ("t", "c", "ct", "c2", "c2t"))
    pairs: dict[str, list[tuple[int, int]]] = {
        "K1": [(0, 0)],
        "K2": [(0, 0), (0, t)],
        "K3": [(0, 0), (1, 0)],
        "K4": [(0, 0), (1, t)],
        "K5": [(0, 0), (0, c), (0, c2)],
        "K6": [(0, 0), (0, t), (1, 0), (1, t)],
        "K7": [(a, b) for a in (0, 1) for b in (0, c, c2)],
        "K8": [(0, b) for b in range(6)],
        "K9": [(0, 0), (0, c), (0, c2), (1, t), (1, ct), (1, c2t)],
        "K10": [(a, b) for a in (0, 1) for b in range(6)],
    }
    if label not in pairs:
        raise ValueError(f"unknown subgroup label {label!r} (expected K1..K10)")
    return Subgroup(g, frozenset(product_index(p) for p in pairs[label]))


# ---------------------------------------------------------------------------
# Irreducible representations


def _mat(rows) -> np.ndarray:
    m = np.array(rows, dtype=complex)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def irrep_table(group_name: str) -> tuple[Irrep, ...]:
    """Complete irrep list for Z2, Z3 or S3 (sum of dim^2 = |G|)."""
    if group_name == "Z2":
        return (
            Irrep("triv", 1, (_mat([[1]]), _mat([[1]]))),
            Irrep("sign", 1, (_mat([[1]]), _mat([[-1]]))),
        )
    if group_name == "Z3":
        reps = []
        for k, label in enumerate(("triv", "omega", "omegabar")):
            reps.append(Irrep(label, 1, tuple(_mat([[OMEGA ** (k * r)]])
                                              for r in range(3))))
        return tuple(reps)
    if group_name == "S3":
        theta = 2 * np.pi / 3
        rot = np.array([[np.cos(theta), -np.sin(theta)],
                        [np.sin(theta), np.cos(theta)]])
        ref = np.array([[1.0, 0.0], [0.0, -1.0]])
        triv, sign, two = [], [], []
        for idx in range(6):
            r, s = _s3_rs(idx)
            triv.append(_mat([[1]]))
            sign.append(_mat([[(-1) ** s]]))
            two.append(_mat(np.linalg.matrix_power(rot, r) @
                            (ref if s else np.eye(2))))
        return (
            Irrep("triv", 1, tuple(triv)),
            Irrep("sign", 1, tuple(sign)),
            Irrep("two", 2, tuple(two)),
        )
    raise ValueError(f"no irrep table for group {group_name!r}")


def irreps(group: FiniteGroup) -> tuple[Irrep, ...]:
    return irrep_table(group.name)


def sign_character(group: FiniteGroup) -> tuple[int, ...]:
    """The nontrivial one-dimensional character (parity) of Z2 or S3."""
    if group.name == "Z2":
        return (1, -1)
    if group.name == "S3":
        return tuple((-1) ** (idx % 2) for idx in range(6))
    raise ValueError(f"no sign character for {group.name!r}")


# ---------------------------------------------------------------------------
# Regular representation and the qutrit-qubit factorization of C[S3]


def left_regular(group: FiniteGroup, g: int) -> np.ndarray:
    """Matrix of |h> -> |gh>."""
    n = group.order
    m = np.zeros((n, n))
    for h in range(n):
        m[group.mul(g, h), h] = 1.0
    return m


def right_regular(group: FiniteGroup, g: int) -> np.ndarray:
    """Matrix of |h> -> |hg>."""
    n = group.order
    m = np.zeros((n, n))
    for h in range(n):
        m[group.mul(h, g), h] = 1.0
    return m


def qubit_qutrit_encode(g: int) -> tuple[int, int]:
    """S3 element index -> (qutrit value r, qubit value s) with g = c^r t^s."""
    if not 0 <= g < 6:
        raise ValueError("expected an S3 element index in 0..5")
    return _s3_rs(g)


def qubit_qutrit_decode(r: int, s: int) -> int:
    if not (0 <= r < 3 and 0 <= s < 2):
        raise ValueError("expected qutrit in 0..2 and qubit in 0..1")
    return _s3_index(r, s)
