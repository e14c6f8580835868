"""Oriented square lattices with region labels, sites, triangles and ribbons.

Geometry conventions (fixed once, all operator identities are tested
against them):

* horizontal edges point right (+x), vertical edges point up (+y);
* ``star(v)`` lists edges in the order W, S, N, E with a toward/away flag;
* ``boundary(p)`` lists edges counterclockwise starting from the
  plaquette's top-right vertex: top, left, bottom, right; top and left
  point clockwise around p, bottom and right counterclockwise;
* the canonical site of a plaquette uses its top-right vertex.

A hybrid lattice is an open patch split by one vertical wall column:
plaquette columns left of ``wall_x`` are Z2 (qubits), columns from
``wall_x`` on are S3 (six-level qudits), and the vertical edges at
``wall_x`` are wall edges carrying either a (qubit, six-level) pair or a
single six-level spin.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from qdsim.groups import FiniteGroup, s3, z2, z2_x_s3

REGION_Z2 = "Z2"
REGION_S3 = "S3"
REGION_WALL = "WALL"

WALL_PAIRED = "paired"
WALL_MERGED = "merged"


@dataclass(frozen=True)
class Site:
    """A plaquette/vertex pair; excitations live on sites."""

    plaquette: int
    vertex: int


@dataclass(frozen=True)
class Triangle:
    """A dual or direct triangle connecting two adjacent sites.

    ``mult_left`` (dual) and ``proj_plain`` (direct) are the effective
    operator branches after folding in the canonical corner ordering:
    a dual triangle multiplies its qudit on the left iff ``mult_left``,
    a direct triangle projects onto g (rather than g^-1) iff ``proj_plain``.
    """

    kind: str
    start: Site
    end: Site
    edge: int
    mult_left: bool = False
    proj_plain: bool = False


@dataclass(frozen=True)
class Ribbon:
    triangles: tuple[Triangle, ...]
    start: Site
    end: Site

    @property
    def closed(self) -> bool:
        return self.start == self.end

    def edges(self) -> tuple[int, ...]:
        return tuple(t.edge for t in self.triangles)

    def __add__(self, other: "Ribbon") -> "Ribbon":
        if self.end != other.start:
            raise ValueError("ribbons are not composable")
        return Ribbon(self.triangles + other.triangles, self.start, other.end)


@dataclass(frozen=True)
class HoleSchedule:
    """Qudit measurements and stabilizer toggles implied by a hole update."""

    reset_edges: tuple[int, ...]
    disable_vertices: tuple[int, ...]
    enable_vertices: tuple[int, ...]


class Lattice:
    """Square lattice on a torus or an open patch, with optional wall."""

    def __init__(self, topology: str, width: int, height: int,
                 wall_x: int | None = None,
                 wall_representation: str = WALL_MERGED,
                 region: str = REGION_S3,
                 hole_mask: frozenset[int] = frozenset()) -> None:
        if topology not in ("torus", "patch"):
            raise ValueError(f"unknown topology {topology!r}")
        if width < 1 or height < 1:
            raise ValueError("lattice dimensions must be at least 1")
        if topology == "torus" and (width < 2 or height < 2):
            raise ValueError("torus dimensions below 2 create self-loop edges")
        if wall_x is not None:
            if topology != "patch":
                raise ValueError("a domain wall requires an open patch")
            if not 0 < wall_x < width:
                raise ValueError("wall column must be interior to the patch")
            if wall_representation not in (WALL_PAIRED, WALL_MERGED):
                raise ValueError(f"unknown wall representation {wall_representation!r}")
        elif region not in (REGION_Z2, REGION_S3):
            raise ValueError(f"unknown region {region!r}")
        self.topology = topology
        self.width = width
        self.height = height
        self.wall_x = wall_x
        self.wall_representation = wall_representation
        self.uniform_region = None if wall_x is not None else region
        self.hole_mask = hole_mask
        self._build()

    # -- construction -------------------------------------------------

    def _build(self) -> None:
        torus = self.topology == "torus"
        w, h = self.width, self.height
        vx = range(w if torus else w + 1)
        vy = range(h if torus else h + 1)
        self._vertex_ids: dict[tuple[int, int], int] = {}
        self.vertex_coords: list[tuple[int, int]] = []
        for y in vy:
            for x in vx:
                self._vertex_ids[(x, y)] = len(self.vertex_coords)
                self.vertex_coords.append((x, y))
        self._plaq_ids: dict[tuple[int, int], int] = {}
        self.plaquette_coords: list[tuple[int, int]] = []
        for y in range(h):
            for x in range(w):
                self._plaq_ids[(x, y)] = len(self.plaquette_coords)
                self.plaquette_coords.append((x, y))
        self._h_ids: dict[tuple[int, int], int] = {}
        self._v_ids: dict[tuple[int, int], int] = {}
        self.edge_kind: list[str] = []
        self.edge_coords: list[tuple[int, int]] = []
        self.edge_tail: list[int] = []
        self.edge_head: list[int] = []
        self.edge_region: list[str] = []
        for y in vy:
            for x in range(w):
                self._h_ids[(x, y)] = len(self.edge_kind)
                self.edge_kind.append("h")
                self.edge_coords.append((x, y))
                self.edge_tail.append(self.vertex_id(x, y))
                self.edge_head.append(self.vertex_id(x + 1, y))
                self.edge_region.append(self._region_of_h_edge(x))
        for y in range(h):
            for x in vx:
                self._v_ids[(x, y)] = len(self.edge_kind)
                self.edge_kind.append("v")
                self.edge_coords.append((x, y))
                self.edge_tail.append(self.vertex_id(x, y))
                self.edge_head.append(self.vertex_id(x, y + 1))
                self.edge_region.append(self._region_of_v_edge(x))
        self.n_edges = len(self.edge_kind)
        self.n_vertices = len(self.vertex_coords)
        self.n_plaquettes = len(self.plaquette_coords)
        self.edge_dim = [self._dim_of_region(r) for r in self.edge_region]

    def _region_of_h_edge(self, x: int) -> str:
        if self.wall_x is None:
            return self.uniform_region
        return REGION_Z2 if x < self.wall_x else REGION_S3

    def _region_of_v_edge(self, x: int) -> str:
        if self.wall_x is None:
            return self.uniform_region
        if x < self.wall_x:
            return REGION_Z2
        if x == self.wall_x:
            return REGION_WALL
        return REGION_S3

    def _dim_of_region(self, region: str) -> int:
        if region == REGION_Z2:
            return 2
        if region == REGION_S3:
            return 6
        return 12 if self.wall_representation == WALL_PAIRED else 6

    # -- id helpers ----------------------------------------------------

    def _wrap(self, x: int, y: int) -> tuple[int, int]:
        if self.topology == "torus":
            return x % self.width, y % self.height
        return x, y

    def vertex_id(self, x: int, y: int) -> int:
        return self._vertex_ids[self._wrap(x, y)]

    def plaquette_id(self, x: int, y: int) -> int:
        return self._plaq_ids[self._wrap(x, y)]

    def h_edge(self, x: int, y: int) -> int:
        return self._h_ids[self._wrap(x, y)]

    def v_edge(self, x: int, y: int) -> int:
        return self._v_ids[self._wrap(x, y)]

    def has_vertex(self, x: int, y: int) -> bool:
        return self._wrap(x, y) in self._vertex_ids

    def vertex_region(self, v: int) -> str:
        if self.wall_x is None:
            return self.uniform_region
        x, _ = self.vertex_coords[v]
        if x < self.wall_x:
            return REGION_Z2
        if x == self.wall_x:
            return REGION_WALL
        return REGION_S3

    def plaquette_region(self, p: int) -> str:
        if self.wall_x is None:
            return self.uniform_region
        x, _ = self.plaquette_coords[p]
        return REGION_Z2 if x < self.wall_x else REGION_S3

    def edge_group(self, e: int) -> FiniteGroup:
        region = self.edge_region[e]
        if region == REGION_Z2:
            return z2()
        if region == REGION_S3:
            return s3()
        return z2_x_s3() if self.wall_representation == WALL_PAIRED else s3()

    def region_group(self, region: str) -> FiniteGroup:
        return z2() if region == REGION_Z2 else s3()

    # -- incidence -----------------------------------------------------

    def star(self, v: int) -> list[tuple[int, bool]]:
        """Edges at v in W, S, N, E order, flagged True when pointing toward v."""
        x, y = self.vertex_coords[v]
        out: list[tuple[int, bool]] = []
        for dx, dy, kind, toward in (
                (-1, 0, "h", True), (0, -1, "v", True),
                (0, 0, "v", False), (0, 0, "h", False)):
            table = self._h_ids if kind == "h" else self._v_ids
            key = self._wrap(x + dx, y + dy)
            if key in table:
                out.append((table[key], toward))
        return out

    def boundary(self, p: int) -> list[tuple[int, bool]]:
        """Boundary edges of p counterclockwise from its top-right vertex.

        Returns (edge, clockwise) pairs in the order top, left, bottom,
        right; the flag marks edges pointing clockwise around p.
        """
        x, y = self.plaquette_coords[p]
        return [
            (self.h_edge(x, y + 1), True),
            (self.v_edge(x, y), True),
            (self.h_edge(x, y), False),
            (self.v_edge(x + 1, y), False),
        ]

    def plaquettes_at_vertex(self, v: int) -> dict[str, int]:
        """Existing plaquettes around v keyed by corner (NE, NW, SW, SE)."""
        x, y = self.vertex_coords[v]
        out = {}
        for name, (px, py) in (("NE", (x, y)), ("NW", (x - 1, y)),
                               ("SW", (x - 1, y - 1)), ("SE", (x, y - 1))):
            key = self._wrap(px, py)
            if key in self._plaq_ids:
                out[name] = self._plaq_ids[key]
        return out

    def canonical_site(self, p: int) -> Site:
        x, y = self.plaquette_coords[p]
        return Site(p, self.vertex_id(x + 1, y + 1))

    def canonical_sites(self) -> list[Site]:
        return [self.canonical_site(p) for p in range(self.n_plaquettes)
                if self._wrap(self.plaquette_coords[p][0] + 1,
                              self.plaquette_coords[p][1] + 1) in self._vertex_ids]

    def site(self, px: int, py: int) -> Site:
        return self.canonical_site(self.plaquette_id(px, py))

    # -- triangles and ribbons ------------------------------------------

    _CORNER_POS = {"NE": (0.5, 0.5), "NW": (-0.5, 0.5),
                   "SW": (-0.5, -0.5), "SE": (0.5, -0.5)}

    def dual_triangle(self, p0: int, p1: int, v: int) -> Triangle:
        """Triangle from site (p0, v) to (p1, v) crossing one star edge."""
        if p0 == p1:
            raise ValueError("a dual triangle needs two distinct plaquettes")
        around = self.plaquettes_at_vertex(v)
        pos = {pid: self._CORNER_POS[name] for name, pid in around.items()}
        if p0 not in pos or p1 not in pos:
            raise ValueError("plaquettes are not adjacent to the vertex")
        pairs = {frozenset(("NW", "SW")): ("h", (-1, 0)),
                 frozenset(("SW", "SE")): ("v", (0, -1)),
                 frozenset(("NE", "NW")): ("v", (0, 0)),
                 frozenset(("SE", "NE")): ("h", (0, 0))}
        name0 = next(n for n, pid in around.items() if pid == p0)
        name1 = next(n for n, pid in around.items() if pid == p1 and n != name0)
        key = frozenset((name0, name1))
        if key not in pairs:
            raise ValueError("plaquettes do not share a star edge at the vertex")
        kind, (dx, dy) = pairs[key]
        x, y = self.vertex_coords[v]
        edge = (self._h_ids if kind == "h" else self._v_ids)[self._wrap(x + dx, y + dy)]
        toward = self.edge_head[edge] == v
        ax, ay = self._CORNER_POS[name0]
        bx, by = self._CORNER_POS[name1]
        cross = (bx - ax) * (0 - by) - (by - ay) * (0 - bx)
        reversed_canonical = cross < 0
        return Triangle("dual", Site(p0, v), Site(p1, v), edge,
                        mult_left=toward != reversed_canonical)

    def direct_triangle(self, v0: int, v1: int, p: int) -> Triangle:
        """Triangle from site (p, v0) to (p, v1) along one boundary edge."""
        x, y = self.plaquette_coords[p]
        corners = {self.vertex_id(x, y): (0, 0), self.vertex_id(x + 1, y): (1, 0),
                   self.vertex_id(x + 1, y + 1): (1, 1), self.vertex_id(x, y + 1): (0, 1)}
        if v0 not in corners or v1 not in corners:
            raise ValueError("vertices are not corners of the plaquette")
        (ax, ay), (bx, by) = corners[v0], corners[v1]
        if abs(ax - bx) + abs(ay - by) != 1:
            raise ValueError("vertices are not adjacent corners")
        if ay == by:
            edge = self.h_edge(x + min(ax, bx), y + ay)
        else:
            edge = self.v_edge(x + ax, y + min(ay, by))
        clockwise = None
        for eid, flag in self.boundary(p):
            if eid == edge:
                clockwise = flag
                break
        # p center at (0.5, 0.5) in corner coordinates; canonical iff the
        # corner triple (v0, v1, p) winds clockwise.
        cross = (bx - ax) * (0.5 - by) - (by - ay) * (0.5 - bx)
        reversed_canonical = cross > 0
        return Triangle("direct", Site(p, v0), Site(p, v1), edge,
                        proj_plain=clockwise != reversed_canonical)

    def triangle_between(self, a: Site, b: Site) -> Triangle:
        if a == b:
            raise ValueError("sites coincide; no triangle connects a site to itself")
        if a.vertex == b.vertex:
            return self.dual_triangle(a.plaquette, b.plaquette, a.vertex)
        if a.plaquette == b.plaquette:
            return self.direct_triangle(a.vertex, b.vertex, a.plaquette)
        raise ValueError("sites share neither a vertex nor a plaquette")

    def make_ribbon(self, sites: Sequence[Site]) -> Ribbon:
        """Build a ribbon through consecutive adjacent sites.

        Repeated triangles are rejected; repeated edges are allowed (closed
        ribbons around small regions legitimately visit an edge twice, once
        from each side).
        """
        if len(sites) < 2:
            raise ValueError("a ribbon needs at least two sites")
        triangles = []
        seen: set[tuple] = set()
        for a, b in zip(sites, sites[1:]):
            tri = self.triangle_between(a, b)
            key = (tri.kind, tri.start, tri.end)
            if key in seen:
                raise ValueError(f"ribbon repeats triangle {key}")
            seen.add(key)
            triangles.append(tri)
        return Ribbon(tuple(triangles), sites[0], sites[-1])

    def site_neighbors(self, site: Site) -> list[Site]:
        out = []
        around = self.plaquettes_at_vertex(site.vertex)
        pos = {pid: name for name, pid in around.items()}
        if site.plaquette in pos:
            mine = pos[site.plaquette]
            adjacency = {"NE": ("NW", "SE"), "NW": ("NE", "SW"),
                         "SW": ("NW", "SE"), "SE": ("SW", "NE")}
            for other in adjacency[mine]:
                if other in around:
                    out.append(Site(around[other], site.vertex))
        x, y = self.plaquette_coords[site.plaquette]
        corners = [self.vertex_id(x, y), self.vertex_id(x + 1, y),
                   self.vertex_id(x + 1, y + 1), self.vertex_id(x, y + 1)]
        if site.vertex in corners:
            i = corners.index(site.vertex)
            out.append(Site(site.plaquette, corners[(i + 1) % 4]))
            out.append(Site(site.plaquette, corners[(i - 1) % 4]))
        return out

    def ribbon_path(self, start: Site, goal: Site,
                    avoid_vertices: Iterable[int] = (),
                    avoid_edges: Iterable[int] = ()) -> Ribbon:
        """Shortest ribbon between two sites by BFS over the site graph."""
        avoid_v = set(avoid_vertices)
        avoid_e = set(avoid_edges)
        prev: dict[Site, Site] = {start: start}
        queue = [start]
        while queue:
            current = queue.pop(0)
            if current == goal:
                path = [current]
                while path[-1] != start:
                    path.append(prev[path[-1]])
                path.reverse()
                return self.make_ribbon(path)
            for nxt in self.site_neighbors(current):
                if nxt in prev:
                    continue
                if nxt != goal and nxt.vertex in avoid_v:
                    continue
                if self.triangle_between(current, nxt).edge in avoid_e:
                    continue
                prev[nxt] = current
                queue.append(nxt)
        raise ValueError("no ribbon path between the sites under the constraints")

    def staircase_loop(self, x0: int, y0: int, x1: int, y1: int) -> Ribbon:
        """Closed ribbon around the vertex rectangle [x0..x1] x [y0..y1].

        Encloses exactly those vertices, together with the plaquettes
        p(x, y) for x in [x0, x1), y in [y0, y1).  Reduces to the star
        ribbon of a single vertex when the rectangle is a point.
        """
        if x1 < x0 or y1 < y0:
            raise ValueError("empty rectangle")
        if self.topology == "torus":
            if x1 - x0 + 2 >= self.width or y1 - y0 + 2 >= self.height:
                raise ValueError("rectangle too large to enclose on this torus")
        try:
            sites = [Site(self.plaquette_id(x0 - 1, y0), self.vertex_id(x0, y0)),
                     Site(self.plaquette_id(x0 - 1, y0 - 1), self.vertex_id(x0, y0)),
                     Site(self.plaquette_id(x0, y0 - 1), self.vertex_id(x0, y0))]
            for x in range(x0, x1):
                sites.append(Site(self.plaquette_id(x, y0 - 1), self.vertex_id(x + 1, y0)))
                sites.append(Site(self.plaquette_id(x + 1, y0 - 1), self.vertex_id(x + 1, y0)))
            sites.append(Site(self.plaquette_id(x1, y0), self.vertex_id(x1, y0)))
            for y in range(y0, y1):
                sites.append(Site(self.plaquette_id(x1, y), self.vertex_id(x1, y + 1)))
                sites.append(Site(self.plaquette_id(x1, y + 1), self.vertex_id(x1, y + 1)))
            sites.append(Site(self.plaquette_id(x1 - 1, y1), self.vertex_id(x1, y1)))
            for x in range(x1, x0, -1):
                sites.append(Site(self.plaquette_id(x - 1, y1), self.vertex_id(x - 1, y1)))
                sites.append(Site(self.plaquette_id(x - 2, y1), self.vertex_id(x - 1, y1)))
            if sites[-1] != sites[0]:
                sites.append(Site(self.plaquette_id(x0 - 1, y1 - 1), self.vertex_id(x0, y1)))
                for y in range(y1, y0, -1):
                    sites.append(Site(self.plaquette_id(x0 - 1, y - 1),
                                      self.vertex_id(x0, y - 1)))
                    if y - 1 > y0:
                        sites.append(Site(self.plaquette_id(x0 - 1, y - 2),
                                          self.vertex_id(x0, y - 1)))
        except KeyError as exc:
            raise ValueError("loop rectangle does not fit on the lattice") from exc
        ribbon = self.make_ribbon(sites)
        if not ribbon.closed:
            raise AssertionError("staircase loop failed to close")
        return ribbon

    def loop_rect_vertices(self, x0: int, y0: int, x1: int, y1: int) -> set[int]:
        return {self.vertex_id(x, y)
                for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)}

    def loop_rect_plaquettes(self, x0: int, y0: int, x1: int, y1: int) -> set[int]:
        return {self.plaquette_id(x, y)
                for x in range(x0, x1) for y in range(y0, y1)}

    # -- holes -----------------------------------------------------------

    def with_holes(self, vertices: Iterable[int]) -> "Lattice":
        clone = Lattice.__new__(Lattice)
        clone.__dict__.update(self.__dict__)
        clone.hole_mask = frozenset(vertices)
        return clone

    def _interior_edges(self, vertices: frozenset[int]) -> tuple[int, ...]:
        return tuple(e for e in range(self.n_edges)
                     if self.edge_tail[e] in vertices and self.edge_head[e] in vertices)

    def hole_create(self, vertices: Iterable[int]) -> tuple["Lattice", HoleSchedule]:
        new = frozenset(vertices) | self.hole_mask
        schedule = HoleSchedule(self._interior_edges(new),
                                tuple(sorted(frozenset(vertices) - self.hole_mask)), ())
        return self.with_holes(new), schedule

    def hole_expand(self, vertices: Iterable[int]) -> tuple["Lattice", HoleSchedule]:
        extra = frozenset(vertices)
        if not any(self._adjacent_vertices(v) & self.hole_mask or v in self.hole_mask
                   for v in extra):
            raise ValueError("expansion vertices are not adjacent to the hole")
        new = self.hole_mask | extra
        fresh = self._interior_edges(new)
        old = set(self._interior_edges(self.hole_mask))
        schedule = HoleSchedule(tuple(e for e in fresh if e not in old),
                                tuple(sorted(extra - self.hole_mask)), ())
        return self.with_holes(new), schedule

    def hole_contract(self, vertices: Iterable[int]) -> tuple["Lattice", HoleSchedule]:
        gone = frozenset(vertices) & self.hole_mask
        if not gone:
            return self, HoleSchedule((), (), ())
        new = self.hole_mask - gone
        schedule = HoleSchedule((), (), tuple(sorted(gone)))
        return self.with_holes(new), schedule

    def _adjacent_vertices(self, v: int) -> set[int]:
        out = set()
        for e, toward in self.star(v):
            out.add(self.edge_tail[e] if toward else self.edge_head[e])
        return out

    # -- gauge-fixing forest ----------------------------------------------

    def gauge_forest(self, active_vertices: Iterable[int]) -> list[tuple[int, int, bool]]:
        """Spanning forest rooted at the active vertices, for gauge fixing.

        Returns (vertex, parent_edge, toward) triples in BFS order for every
        non-active vertex; ``toward`` tells whether the parent edge points
        toward the vertex.  Wall vertices only attach through six-level
        edges so their residual gauge freedom is fully fixed.
        """
        roots = set(active_vertices)
        if self.wall_x is not None and self.wall_representation == WALL_PAIRED:
            roots |= {v for v in range(self.n_vertices)
                      if self.vertex_region(v) == REGION_WALL}
        if not roots:
            roots = {0}
        order: list[tuple[int, int, bool]] = []
        visited = set(roots)
        queue = sorted(roots)
        while queue:
            v = queue.pop(0)
            for e, toward_v in self.star(v):
                w = self.edge_tail[e] if toward_v else self.edge_head[e]
                if w in visited:
                    continue
                if (self.vertex_region(w) == REGION_WALL
                        and self.edge_region[e] == REGION_Z2):
                    continue
                visited.add(w)
                order.append((w, e, not toward_v))
                queue.append(w)
        if len(visited) != self.n_vertices:
            raise ValueError("gauge forest does not reach every vertex")
        return order

    def __repr__(self) -> str:
        wall = f", wall_x={self.wall_x}" if self.wall_x is not None else ""
        return (f"Lattice({self.topology}, {self.width}x{self.height}, "
                f"region={self.uniform_region or 'hybrid'}{wall})")


def torus(width: int, height: int, region: str = REGION_S3) -> Lattice:
    return Lattice("torus", width, height, region=region)


def patch(width: int, height: int, region: str = REGION_S3) -> Lattice:
    return Lattice("patch", width, height, region=region)


def hybrid_patch(z2_cols: int, s3_cols: int, height: int,
                 wall_representation: str = WALL_MERGED) -> Lattice:
    """Open patch with z2_cols Z2 plaquette columns, a wall, then S3 columns."""
    return Lattice("patch", z2_cols + s3_cols, height, wall_x=z2_cols,
                   wall_representation=wall_representation)
