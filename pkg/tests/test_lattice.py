from __future__ import annotations

import pytest

from qdsim.lattice import (REGION_S3, REGION_WALL, REGION_Z2, Lattice, Site,
                           hybrid_patch, patch, torus)


def test_torus_counts():
    lat = torus(3, 2)
    assert lat.n_vertices == 6
    assert lat.n_plaquettes == 6
    assert lat.n_edges == 12
    assert lat.n_edges == 2 * lat.n_plaquettes == 2 * lat.n_vertices


def test_patch_counts():
    lat = patch(2, 2)
    assert lat.n_vertices == 9
    assert lat.n_plaquettes == 4
    assert lat.n_edges == 2 * 2 * 3


def test_degenerate_torus_rejected():
    with pytest.raises(ValueError):
        torus(1, 3)


def test_star_order_and_orientation():
    lat = torus(3, 3)
    v = lat.vertex_id(1, 1)
    star = lat.star(v)
    assert len(star) == 4
    # W, S point toward the vertex; N, E away
    assert [toward for _, toward in star] == [True, True, False, False]
    assert star[0][0] == lat.h_edge(0, 1)
    assert star[1][0] == lat.v_edge(1, 0)
    assert star[2][0] == lat.v_edge(1, 1)
    assert star[3][0] == lat.h_edge(1, 1)


def test_patch_corner_star_truncated():
    lat = patch(2, 2)
    corner = lat.vertex_id(0, 0)
    assert len(lat.star(corner)) == 2
    edge_mid = lat.vertex_id(0, 1)
    assert len(lat.star(edge_mid)) == 3


def test_boundary_order():
    lat = torus(3, 3)
    p = lat.plaquette_id(1, 1)
    edges = lat.boundary(p)
    assert [flag for _, flag in edges] == [True, True, False, False]
    assert edges[0][0] == lat.h_edge(1, 2)
    assert edges[1][0] == lat.v_edge(1, 1)
    assert edges[2][0] == lat.h_edge(1, 1)
    assert edges[3][0] == lat.v_edge(2, 1)
    flipped = [(e, not f) for e, f in edges]
    assert [f for _, f in flipped] == [False, False, True, True]


def test_canonical_site_top_right():
    lat = torus(3, 3)
    site = lat.site(1, 1)
    assert site.vertex == lat.vertex_id(2, 2)


def test_hybrid_regions():
    lat = hybrid_patch(2, 3, 2)
    assert lat.width == 5
    assert lat.vertex_region(lat.vertex_id(0, 0)) == REGION_Z2
    assert lat.vertex_region(lat.vertex_id(2, 0)) == REGION_WALL
    assert lat.vertex_region(lat.vertex_id(4, 1)) == REGION_S3
    assert lat.edge_region[lat.v_edge(2, 0)] == REGION_WALL
    assert lat.edge_region[lat.v_edge(1, 0)] == REGION_Z2
    assert lat.edge_region[lat.h_edge(1, 0)] == REGION_Z2
    assert lat.edge_region[lat.h_edge(2, 0)] == REGION_S3
    assert lat.edge_dim[lat.v_edge(2, 0)] == 6
    paired = hybrid_patch(2, 3, 2, wall_representation="paired")
    assert paired.edge_dim[paired.v_edge(2, 0)] == 12


def test_wall_requires_patch():
    with pytest.raises(ValueError):
        Lattice("torus", 4, 2, wall_x=2)


def test_dual_triangle_star_ring_matches_vertex_rule():
    lat = torus(3, 3)
    v = lat.vertex_id(1, 1)
    around = lat.plaquettes_at_vertex(v)
    # counterclockwise ring SW -> SE -> NE -> NW
    tri1 = lat.dual_triangle(around["SW"], around["SE"], v)
    assert tri1.edge == lat.v_edge(1, 0) and tri1.mult_left
    tri2 = lat.dual_triangle(around["SE"], around["NE"], v)
    assert tri2.edge == lat.h_edge(1, 1) and not tri2.mult_left
    tri3 = lat.dual_triangle(around["NE"], around["NW"], v)
    assert tri3.edge == lat.v_edge(1, 1) and not tri3.mult_left
    tri4 = lat.dual_triangle(around["NW"], around["SW"], v)
    assert tri4.edge == lat.h_edge(0, 1) and tri4.mult_left


def test_direct_triangle_reversal_flips_branch():
    lat = torus(3, 3)
    p = lat.plaquette_id(1, 1)
    bl = lat.vertex_id(1, 1)
    br = lat.vertex_id(2, 1)
    tri = lat.direct_triangle(bl, br, p)
    rev = lat.direct_triangle(br, bl, p)
    assert tri.edge == rev.edge == lat.h_edge(1, 1)
    assert tri.proj_plain != rev.proj_plain


def test_make_ribbon_requires_adjacency():
    lat = torus(4, 4)
    s0 = lat.site(0, 0)
    s_far = lat.site(2, 2)
    with pytest.raises(ValueError):
        lat.make_ribbon([s0, s_far])


def test_make_ribbon_single_triangles():
    lat = torus(4, 4)
    v = lat.vertex_id(1, 1)
    around = lat.plaquettes_at_vertex(v)
    dual = lat.make_ribbon([Site(around["SW"], v), Site(around["SE"], v)])
    assert dual.triangles[0].kind == "dual"
    p = lat.plaquette_id(1, 1)
    direct = lat.make_ribbon([Site(p, lat.vertex_id(1, 1)),
                              Site(p, lat.vertex_id(2, 1))])
    assert direct.triangles[0].kind == "direct"
    assert not direct.closed


def test_staircase_loop_closes():
    lat = torus(5, 4)
    for rect in ((2, 1, 2, 1), (1, 1, 2, 1), (1, 1, 1, 2), (1, 1, 2, 2)):
        loop = lat.staircase_loop(*rect)
        assert loop.closed
    point = lat.staircase_loop(2, 2, 2, 2)
    assert len(point.triangles) == 4
    assert all(t.kind == "dual" for t in point.triangles)


def test_staircase_loop_too_big_on_torus():
    lat = torus(4, 3)
    with pytest.raises(ValueError):
        lat.staircase_loop(0, 0, 2, 1)


def test_ribbon_path_bfs():
    lat = torus(4, 4)
    a = lat.site(0, 0)
    b = lat.site(2, 1)
    ribbon = lat.ribbon_path(a, b)
    assert ribbon.start == a and ribbon.end == b
    for t1, t2 in zip(ribbon.triangles, ribbon.triangles[1:]):
        assert t1.end == t2.start
    avoid = lat.ribbon_path(a, b, avoid_vertices={lat.vertex_id(1, 1)})
    assert all(t.start.vertex != lat.vertex_id(1, 1) for t in avoid.triangles[1:])


def test_holes_roundtrip():
    lat = torus(4, 4)
    v1, v2 = lat.vertex_id(1, 1), lat.vertex_id(2, 1)
    holed, sched = lat.hole_create([v1])
    assert holed.hole_mask == {v1}
    assert sched.reset_edges == ()
    assert sched.disable_vertices == (v1,)
    bigger, sched2 = holed.hole_expand([v2])
    assert bigger.hole_mask == {v1, v2}
    assert lat.h_edge(1, 1) in sched2.reset_edges
    back, sched3 = bigger.hole_contract([v2])
    assert back.hole_mask == {v1}
    assert sched3.enable_vertices == (v2,)
    same, noop = back.hole_contract([v2])
    assert noop == type(noop)((), (), ())


def test_gauge_forest_covers_all_vertices():
    lat = torus(4, 3)
    active = [lat.vertex_id(1, 1), lat.vertex_id(2, 2)]
    forest = lat.gauge_forest(active)
    fixed = {w for w, _, _ in forest}
    assert len(fixed) == lat.n_vertices - len(active)
    assert not fixed & set(active)


def test_gauge_forest_hybrid_wall_attaches_via_s3():
    lat = hybrid_patch(2, 2, 2)
    forest = lat.gauge_forest([lat.vertex_id(4, 2)])
    for w, e, _ in forest:
        if lat.vertex_region(w) == REGION_WALL:
            assert lat.edge_region[e] != REGION_Z2
