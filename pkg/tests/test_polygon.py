import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symmkit import polygon as pg
from symmkit.geom import LineSubspace, RotationOp
from symmkit.polygon import ConvexPolygon

from conftest import angles, lines, polygons

S2 = math.sqrt(2.0)
X_AXIS = LineSubspace.from_angle(0.0)
TRIANGLE = ConvexPolygon([[0, 0], [1, 0], [0, 1]])
# (+-(2+sqrt2)/4, +-sqrt2/4), (+-sqrt2/4, +-(2+sqrt2)/4)
OCTAGON = ConvexPolygon([[(2 + S2) / 4, S2 / 4], [S2 / 4, (2 + S2) / 4], [-S2 / 4, (2 + S2) / 4],
                         [-(2 + S2) / 4, S2 / 4], [-(2 + S2) / 4, -S2 / 4], [-S2 / 4, -(2 + S2) / 4],
                         [S2 / 4, -(2 + S2) / 4], [(2 + S2) / 4, -S2 / 4]])


def same(P, Q, tol=1e-12):
    return pg.hausdorff_distance(P, Q) <= tol


# -- construction -------------------------------------------------------------

def test_canonical_form():
    P = ConvexPolygon([[0, 0], [0.5, 0], [1, 0], [1, 1], [0, 1], [0, 1]])
    assert P.kind == pg.FULL and len(P) == 4
    assert P.area == pytest.approx(1.0)
    H = ConvexPolygon.hull([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0], [0.5, 0.5]])
    assert np.array_equal(H.vertices, P.vertices)
    assert ConvexPolygon([[0, 0], [1, 1], [2, 2]]).kind == pg.SEGMENT
    assert ConvexPolygon([[1, 2], [1, 2]]).kind == pg.POINT


def test_cw_input_is_reoriented():
    P = ConvexPolygon([[0, 0], [0, 1], [1, 1], [1, 0]])
    assert P.area == pytest.approx(1.0)


@given(polygons())
def test_no_collinear_triples(P):
    v = P.vertices
    a, b = np.roll(v, -1, axis=0) - v, np.roll(v, -2, axis=0) - v
    assert np.all(pg._cross(a, b) > 0)


# -- measures -----------------------------------------------------------------

def test_measures_examples(diamond):
    disk = ConvexPolygon.regular(4096)
    assert pg.mean_width(disk) == pytest.approx(2.0, abs=1e-5)
    seg = ConvexPolygon.segment([0, 0], [1, 0])
    m = pg.measures(seg)
    assert m.area == 0
    assert m.mean_width == pytest.approx(2 / math.pi, abs=1e-9)
    assert m.mean_width_quadrature == pytest.approx(2 / math.pi, abs=1e-9)
    assert diamond.area == 2.0


@given(polygons())
def test_mean_width_two_ways(P):
    m = pg.measures(P)
    assert m.mean_width_quadrature == pytest.approx(m.mean_width, rel=1e-6)


def test_support_examples(diamond):
    sq = ConvexPolygon.box(0, 1, 0, 1)
    assert pg.support_value(sq, [1, 0]) == 1.0
    assert pg.support_value(ConvexPolygon.point([2, 3]), [0.6, 0.8]) == pytest.approx(3.6)
    assert diamond.support(math.pi / 4) == pytest.approx(S2 / 2)


@given(polygons(), polygons(), st.floats(0, 2 * math.pi))
def test_support_additive(P, Q, t):
    S = pg.minkowski_sum(P, Q)
    assert S.support(t) == pytest.approx(P.support(t) + Q.support(t), abs=1e-12)


# -- Minkowski sums -------------------------------------------------------------

def test_minkowski_sum_examples(diamond):
    sq = ConvexPolygon.box(0, 1, 0, 1)
    assert same(pg.minkowski_sum(sq, sq), ConvexPolygon.box(0, 2, 0, 2))
    h, v = ConvexPolygon.segment([0, 0], [1, 0]), ConvexPolygon.segment([0, 0], [0, 1])
    assert same(pg.minkowski_sum(h, v), sq)
    r = S2 / 2
    tilted = ConvexPolygon([[r, r], [-r, r], [-r, -r], [r, -r]])
    a = 1 + r
    expect = ConvexPolygon([[a, r], [r, a], [-r, a], [-a, r], [-a, -r], [-r, -a], [r, -a], [a, -r]])
    got = pg.minkowski_sum(diamond, tilted)
    assert len(got) == 8 and same(got, expect)


def test_minkowski_sum_degenerate():
    p = ConvexPolygon.point([1, 1])
    assert same(pg.minkowski_sum(p, p), ConvexPolygon.point([2, 2]))
    s = ConvexPolygon.segment([0, 0], [1, 0])
    two = pg.minkowski_sum(s, s)
    assert two.kind == pg.SEGMENT and same(two, ConvexPolygon.segment([0, 0], [2, 0]))
    assert same(pg.minkowski_sum(TRIANGLE, p), TRIANGLE.translate([1, 1]))


def test_parallel_edges_merged():
    sq = ConvexPolygon.box(0, 1, 0, 1)
    assert len(pg.minkowski_sum(sq, sq)) == 4


@given(polygons(), polygons())
def test_brunn_minkowski(P, Q):
    S = pg.minkowski_sum(P, Q)
    assert math.sqrt(S.area) >= math.sqrt(P.area) + math.sqrt(Q.area) - 1e-10


@given(polygons(), st.floats(0.1, 5.0))
def test_brunn_minkowski_equality_for_homothets(P, t):
    S = pg.minkowski_sum(P, pg.scale_polygon(P, t))
    assert math.sqrt(S.area) == pytest.approx(math.sqrt(P.area) * (1 + t), abs=1e-9)


# -- maps -------------------------------------------------------------------------

def test_maps_examples(diamond):
    sq = ConvexPolygon.box(0, 1, 0, 1)
    assert same(pg.reflect_polygon(sq, X_AXIS), ConvexPolygon.box(0, 1, -1, 0))
    assert same(pg.rotate_polygon(sq, RotationOp.identity()), sq, 0.0)
    half = pg.scale_polygon(diamond, 0.5)
    assert same(half, ConvexPolygon([[0.5, 0], [0, 0.5], [-0.5, 0], [0, -0.5]]))
    with pytest.raises(ValueError):
        pg.scale_polygon(diamond, 0.0)


# -- symmetrizations ------------------------------------------------------------------

def test_steiner_triangle():
    expect = ConvexPolygon([[0, 0.5], [1, 0], [0, -0.5]])
    assert same(pg.steiner_symmetrize(TRIANGLE, X_AXIS), expect)
    assert same(pg.fiber_symmetrize(TRIANGLE, X_AXIS), expect)


def test_steiner_degenerate():
    vert = ConvexPolygon.segment([2, 0], [2, 3])
    assert same(pg.steiner_symmetrize(vert, X_AXIS), ConvexPolygon.segment([2, -1.5], [2, 1.5]))
    assert same(pg.steiner_symmetrize(ConvexPolygon.point([1, 2]), X_AXIS), ConvexPolygon.point([1, 0]))
    horiz = ConvexPolygon.segment([0, 1], [2, 1])
    assert same(pg.steiner_symmetrize(horiz, X_AXIS), ConvexPolygon.segment([0, 0], [2, 0]))


def test_minkowski_symmetrize_octagon(diamond):
    H = LineSubspace.from_angle(math.pi / 8)
    M = pg.minkowski_symmetrize(diamond, H)
    assert len(M) == 8 and same(M, OCTAGON)


def test_central_examples():
    assert same(pg.central_symmetrize(ConvexPolygon.point([3, -1])), ConvexPolygon.point([0, 0]))
    seg = pg.central_symmetrize(ConvexPolygon.segment([0, 0], [2, 0]))
    assert same(seg, ConvexPolygon.segment([-1, 0], [1, 0]))
    hexagon = pg.central_symmetrize(TRIANGLE)
    assert len(hexagon) == 6 and hexagon.area >= TRIANGLE.area
    # (T - T)/2 for this triangle has area 3/4
    assert hexagon.area == pytest.approx(0.75)


@given(polygons())
def test_central_idempotent(P):
    C = pg.central_symmetrize(P)
    assert same(pg.central_symmetrize(C), C, 1e-12 * max(1, P.diameter))
    assert same(-C, C, 1e-12 * max(1, P.diameter))


@given(polygons(), lines())
def test_steiner_preserves_area_and_symmetry(P, H):
    S = pg.steiner_symmetrize(P, H)
    assert S.area == pytest.approx(P.area, rel=1e-12)
    assert same(pg.reflect_polygon(S, H), S, 1e-12 * max(1, P.diameter))


@given(polygons(), lines())
def test_fiber_equals_steiner(P, H):
    assert same(pg.fiber_symmetrize(P, H), pg.steiner_symmetrize(P, H), 1e-12 * max(1, P.diameter))


@given(polygons(), lines())
def test_minkowski_laws(P, H):
    M = pg.minkowski_symmetrize(P, H)
    assert pg.mean_width(M) == pytest.approx(pg.mean_width(P), rel=1e-12)
    assert M.area >= P.area * (1 - 1e-12)
    assert same(pg.reflect_polygon(M, H), M, 1e-12 * max(1, P.diameter))


@given(polygons(), lines())
def test_symmetric_bodies_fixed(P, H):
    K = pg.minkowski_symmetrize(P, H)   # H-symmetric
    tol = 1e-12 * max(1, P.diameter)
    for op in (pg.steiner_symmetrize, pg.fiber_symmetrize, pg.minkowski_symmetrize):
        assert same(op(K, H), K, tol)


@given(polygons(), lines(), st.floats(-2, 2))
def test_translation_invariance_along_normal(P, H, s):
    K = pg.steiner_symmetrize(P, H)
    shifted = K.translate(s * H.normal)
    tol = 1e-12 * max(1, P.diameter + abs(s))
    for op in (pg.steiner_symmetrize, pg.minkowski_symmetrize):
        assert same(op(shifted, H), K, tol * 10)


@given(polygons(), lines(), st.floats(0.0, 0.5))
def test_monotone(P, H, grow):
    Q = pg.minkowski_sum(P, ConvexPolygon.regular(16, grow + 1e-3))   # P inside Q
    assert pg.support_gap(P, Q) <= 1e-12
    for op in (pg.steiner_symmetrize, pg.minkowski_symmetrize):
        assert pg.support_gap(op(P, H), op(Q, H)) <= 1e-12 * max(1, Q.diameter)


@given(polygons(), lines())
def test_inclusion_chain(P, H):
    F, M = pg.fiber_symmetrize(P, H), pg.minkowski_symmetrize(P, H)
    t = np.linspace(0, 2 * math.pi, 720, endpoint=False)
    assert np.all(F.support(t) <= M.support(t) + 1e-12)


# -- distances ----------------------------------------------------------------------

def test_hausdorff_examples(diamond):
    assert pg.hausdorff_distance(diamond, diamond) == 0
    b1, b2 = ConvexPolygon.regular(4096, 1.0), ConvexPolygon.regular(4096, 2.0)
    assert pg.hausdorff_distance(b1, b2) == pytest.approx(1.0, abs=1e-12)


@given(polygons(), st.floats(-3, 3), st.floats(-3, 3))
def test_hausdorff_translation(P, x, y):
    d = pg.hausdorff_distance(P, P.translate([x, y]))
    assert d == pytest.approx(math.hypot(x, y), abs=1e-12)


@given(polygons(), polygons())
def test_hausdorff_against_sampling(P, Q):
    t = np.random.default_rng(0).uniform(0, 2 * math.pi, 10_000)
    sampled = np.abs(P.support(t) - Q.support(t)).max()
    exact = pg.hausdorff_distance(P, Q)
    assert sampled <= exact + 1e-12
    assert exact - sampled < 1e-9 + 5e-3 * exact   # 10^4 samples resolve the max to O(dt^2)


def test_symmetric_difference_examples():
    sq = ConvexPolygon.box(0, 1, 0, 1)
    assert pg.symmetric_difference_area(sq, sq) == pytest.approx(0.0, abs=1e-15)
    assert pg.symmetric_difference_area(sq, ConvexPolygon.box(3, 4, 0, 1)) == pytest.approx(2.0)
    assert pg.symmetric_difference_area(sq, ConvexPolygon.box(0.5, 1.5, 0, 1)) == pytest.approx(1.0)


def test_ball_gap_examples():
    assert pg.ball_gap(ConvexPolygon.regular(4096)) <= 3e-6
    assert pg.ball_gap(ConvexPolygon.box(-1, 1, -1, 1)) == pytest.approx(S2 - 1, abs=1e-12)
    with pytest.raises(pg.DegenerateBodyError):
        pg.ball_gap(ConvexPolygon.segment([0, 0], [1, 0]))


@given(polygons(), st.floats(-3, 3), st.floats(-3, 3))
def test_ball_gap_translation_invariant(P, x, y):
    assert pg.ball_gap(P.translate([x, y])) == pytest.approx(pg.ball_gap(P), abs=1e-11)


def test_sections(diamond):
    assert pg.line_section(diamond, [1, 0]) == pytest.approx((-1, 1))
    d = np.array([1, 1]) / S2
    assert pg.section_length(diamond, d) == pytest.approx(S2)
    shifted = diamond.translate([5, 0])
    assert pg.line_section(shifted, [0, 1]) is None
    assert pg.support_range(shifted)[0] == pytest.approx(-4.0)


@given(polygons())
def test_simplify_bounded_deviation(P):
    Q = pg.steiner_symmetrize(pg.steiner_symmetrize(P, X_AXIS), LineSubspace.from_angle(0.3))
    eta = 1e-3 * Q.diameter
    R, dev = pg.simplify(Q, eta)
    assert pg.hausdorff_distance(Q, R) <= dev + 1e-12
    assert pg.support_gap(R, Q) <= 1e-12   # only vertices are dropped
