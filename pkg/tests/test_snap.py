"""Tests for polyline cuts and skeleton snapping: length doubling bounds,
the mod-2 cycle output, and the area audit."""

import math

import pytest

from diastolic import corpus
from diastolic.errors import SnapDoublingError, ValidationError
from diastolic.snap import (
    Arc,
    EdgePoint,
    PolylineCut,
    arc_chord,
    cut_from_json_dict,
    lens_cut,
    skeletal_cut,
    snap_area_audit,
    snap_to_skeleton,
    vertex_fan,
    vertex_star_cut,
)
from diastolic.surface import UNIT_TRIANGLE_AREA

SQRT3 = math.sqrt(3.0)


def test_edge_point_canonicalization():
    p = EdgePoint(3, 1, 0.3)
    assert (p.u, p.v) == (1, 3)
    assert p.t == pytest.approx(0.7)
    assert p.nearest_vertex == 3
    assert EdgePoint(0, 1, 0.0).at_vertex == 0
    assert EdgePoint(0, 1, 1.0).at_vertex == 1
    assert EdgePoint(0, 1, 0.4).at_vertex is None
    with pytest.raises(ValidationError):
        EdgePoint(2, 2, 0.5)
    with pytest.raises(ValidationError):
        EdgePoint(0, 1, 1.5)


def test_edge_point_midpoint_nudge():
    # midpoint parameters land just below 1/2, toward the lower vertex
    p = EdgePoint(0, 1, 0.5)
    assert p.t == pytest.approx(0.5 - 1e-6)
    assert p.nearest_vertex == 0
    q = EdgePoint(1, 0, 0.5)  # flipped input, same canonical nudge
    assert (q.u, q.v) == (0, 1)
    assert q.nearest_vertex == 0
    r = EdgePoint(0, 1, 0.5 + 4e-7)
    assert r.t == pytest.approx(0.5 - 1e-6)


def test_same_point_across_vertex():
    a = EdgePoint(0, 1, 1.0)
    b = EdgePoint(1, 2, 0.0)
    assert a.same_point(b)
    assert not a.same_point(EdgePoint(0, 1, 0.99))


def test_arc_chord_value():
    # entry 0.6 along the low edge, exit 0.7 up the left edge of the unit
    # equilateral triangle
    s = corpus.mesh("tetrahedron")
    arc = Arc(0, EdgePoint(0, 1, 0.6), EdgePoint(0, 2, 0.7))
    assert arc_chord(s, arc) == pytest.approx(0.6557438524302)


def test_vertex_fan_is_rotational():
    s = corpus.mesh("icosahedron")
    tris, edges = vertex_fan(s, 0)
    assert len(tris) == len(edges) == 5
    assert all(0 in s.triangles[t] for t in tris)
    assert sorted(set(tris)) == sorted(tris)


def test_star_cut_inside_half_collapses_to_vertex():
    s = corpus.mesh("tetrahedron")
    cut = vertex_star_cut(s, 0, 0.3)
    cycle, report = snap_to_skeleton(cut)
    assert cycle.is_zero()
    assert report.arcs_to_vertex == 3
    assert report.arcs_to_edge == 0
    assert report.total_after == 0.0
    assert report.doubling_ok


def test_star_cut_outside_half_snaps_to_link():
    s = corpus.mesh("icosahedron")
    cut = vertex_star_cut(s, 0, 0.6)
    cycle, report = snap_to_skeleton(cut)
    assert cycle.mass == 5
    assert report.arcs_to_edge == 5
    assert report.total_after == 5.0
    # every chord is 0.6 across the 60-degree wedge
    for chord, snapped in report.per_arc:
        assert chord == pytest.approx(0.6)
        assert snapped <= 2.0 * chord
    assert cycle.is_cycle()
    # the snapped cycle is the link of the vertex
    link = set(s.triangles[t][i] for t in range(20) if 0 in s.triangles[t]
               for i in range(3)) - {0}
    for e in cycle.coeffs:
        u, v = s.edges[e]
        assert u in link and v in link


def test_star_cut_near_half_stays_within_factor_two():
    s = corpus.mesh("octahedron")
    cut = vertex_star_cut(s, 0, 0.5 + 2e-6)
    cycle, report = snap_to_skeleton(cut)
    assert report.doubling_ok
    for chord, snapped in report.per_arc:
        assert snapped <= 2.0 * chord + 1e-9


def test_mixed_star_params_can_break_the_arc_bound():
    # entry at 0.3 from the center, exit just past the midpoint: the arc
    # chord is about 0.44 but the snap needs a whole unit edge
    s = corpus.mesh("tetrahedron")
    cut = vertex_star_cut(s, 0, [0.3, 0.51, 0.51])
    with pytest.raises(SnapDoublingError):
        snap_to_skeleton(cut)
    cycle, report = snap_to_skeleton(cut, strict=False)
    assert not report.doubling_ok
    assert cycle.is_cycle()


def test_skeletal_cut_is_identity():
    s = corpus.mesh("tetrahedron")
    cut = skeletal_cut(s, [0, 1, 2])
    cycle, report = snap_to_skeleton(cut)
    assert report.total_before == pytest.approx(3.0)
    assert report.total_after == pytest.approx(3.0)
    assert cycle.mass == 3
    assert sorted(s.edges[e] for e in cycle.coeffs) == [(0, 1), (0, 2), (1, 2)]


def test_lens_same_side_collapses():
    s = corpus.mesh("octahedron")
    u, w = s.edges[0]
    cut = lens_cut(s, u, w, 0.2, 0.4)
    cycle, report = snap_to_skeleton(cut)
    assert cycle.is_zero()
    assert report.arcs_to_vertex == 2


def test_lens_straddling_midpoint_raises():
    s = corpus.mesh("octahedron")
    u, w = s.edges[0]
    cut = lens_cut(s, u, w, 0.45, 0.55)
    with pytest.raises(SnapDoublingError):
        snap_to_skeleton(cut)
    cycle, report = snap_to_skeleton(cut, strict=False)
    assert not report.doubling_ok
    # both arcs collapse onto the same edge, cancelling mod 2
    assert cycle.is_zero()
    assert report.total_after == pytest.approx(2.0)


def test_cut_validation_rejects_broken_loops():
    s = corpus.mesh("tetrahedron")
    p1, p2 = EdgePoint(0, 1, 0.4), EdgePoint(0, 2, 0.4)
    with pytest.raises(ValidationError):
        PolylineCut(s, [[Arc(0, p1, p2)]])  # single-arc loop
    with pytest.raises(ValidationError):
        # exit and next entry disagree
        PolylineCut(s, [[Arc(0, p1, p2), Arc(0, EdgePoint(0, 2, 0.9), p1)]])
    with pytest.raises(ValidationError):
        # point on an edge that does not bound the named triangle
        PolylineCut(s, [[Arc(0, EdgePoint(1, 3, 0.4), p2),
                         Arc(0, p2, EdgePoint(1, 3, 0.4))]])
    with pytest.raises(ValidationError):
        # both arcs claim the same triangle: not a transversal crossing
        PolylineCut(s, [[Arc(0, p1, p2), Arc(0, p2, p1)]])


def test_cut_json_roundtrip():
    s = corpus.mesh("icosahedron")
    cut = vertex_star_cut(s, 3, 0.37)
    doc = cut.to_json_dict()
    assert doc["format"] == "dias-cut/1"
    back = cut_from_json_dict(s, doc)
    assert len(back.arcs) == len(cut.arcs)
    for a, b in zip(back.arcs, cut.arcs):
        assert a.triangle == b.triangle
        assert a.entry.same_point(b.entry)
        assert a.exit.same_point(b.exit)
    with pytest.raises(ValidationError):
        cut_from_json_dict(s, {"format": "dias-cut/9", "loops": []})


def full_share(side):
    return (UNIT_TRIANGLE_AREA, 0.0) if side == 0 else (0.0, UNIT_TRIANGLE_AREA)


def test_area_audit_skeletal_identity():
    s = corpus.mesh("tetrahedron")
    cut = skeletal_cut(s, [0, 1, 2])
    # triangle 0 = (0,1,2) sits alone on side 1
    domains = [full_share(1)] + [full_share(0)] * 3
    report = snap_area_audit(cut, domains)
    assert report.area_before == pytest.approx(report.area_after)
    assert report.area_after[1] == pytest.approx(UNIT_TRIANGLE_AREA)
    assert all(report.half_area_ok)


def test_area_audit_corner_clip():
    # a small triangle clipped off a corner: snapping absorbs it entirely,
    # and the certified floor explains the loss
    s = corpus.mesh("icosahedron")
    depth = 0.1
    cut = vertex_star_cut(s, 0, depth)
    clip = depth * depth * UNIT_TRIANGLE_AREA  # corner wedge per triangle
    domains = []
    for t in range(20):
        if 0 in s.triangles[t]:
            domains.append((UNIT_TRIANGLE_AREA - clip, clip))
        else:
            domains.append(full_share(0))
    report = snap_area_audit(cut, domains)
    assert report.area_after[1] == 0.0
    assert report.arc_length_total == pytest.approx(5 * depth)
    floor = report.area_before[1] - 0.5 * SQRT3 * report.arc_length_total
    assert report.lower_bounds[1] == pytest.approx(floor)
    assert report.area_after[1] >= floor
    assert all(report.half_area_ok)
    # per-arc loss bounds follow the quadratic isoperimetric rule; every
    # chord here has length equal to the clip depth
    assert len(report.per_arc_loss_bounds) == 5
    for bound in report.per_arc_loss_bounds:
        assert bound == pytest.approx(min(1.5 / math.pi * depth ** 2,
                                          UNIT_TRIANGLE_AREA))


def test_area_audit_long_arc_capped_by_triangle_area():
    s = corpus.mesh("octahedron")
    u, w = s.edges[0]
    cut = lens_cut(s, u, w, 0.0, 1.0)
    domains = [full_share(0)] * 8
    report = snap_area_audit(cut, domains)
    for bound in report.per_arc_loss_bounds:
        assert bound == pytest.approx(UNIT_TRIANGLE_AREA)


def test_area_audit_rejects_bad_shares():
    s = corpus.mesh("tetrahedron")
    cut = skeletal_cut(s, [0, 1, 2])
    with pytest.raises(ValidationError):
        snap_area_audit(cut, [(0.1, 0.1)] * 4)
    with pytest.raises(ValidationError):
        snap_area_audit(cut, [full_share(0)] * 3)
