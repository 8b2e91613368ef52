import textwrap

import pytest
from hypothesis import given, strategies as st

from sphtherm.errors import GeometryError, ProfileParseError, UnknownReferenceError
from sphtherm.geometry import (
    R_SE,
    R_SI,
    R_SI_CORNER,
    BoundaryFace,
    FaceKind,
    Material,
    Point2,
    ProfileSpec,
    RegionSpec,
    apply_corner_rule,
    load_profile,
    material_at,
    outward_normal,
    validate_profile,
)

from conftest import load_fixture

SQUARE = textwrap.dedent(
    """
    materials: {wood: 0.13}
    ambient: {internal: 20, external: 0}
    regions:
      - {name: sq, rectangle: [0, 0, 0.1, 0.1], material: wood}
    boundary:
      - {segment: [[0, 0.1], [0, 0]], kind: internal}
      - {segment: [[0.1, 0], [0.1, 0.1]], kind: external}
      - {segment: [[0, 0], [0.1, 0]], kind: adiabatic}
      - {segment: [[0.1, 0.1], [0, 0.1]], kind: adiabatic}
    """
)


def square(x0, y0, x1, y1):
    return ((x0, y0), (x1, y0), (x1, y1), (x0, y1))


def faces_around(*pts, kind=FaceKind.ADIABATIC):
    out = []
    for a, b in zip(pts, pts[1:] + pts[:1]):
        out.append(BoundaryFace(Point2(*a), Point2(*b), kind))
    return tuple(out)


def test_load_minimal_square():
    p = load_profile(SQUARE)
    assert len(p.regions) == 1
    assert len(p.boundary) == 4
    assert p.regions[0].material == Material("wood", 0.13)
    internal = p.faces(FaceKind.INTERNAL)[0]
    assert internal.resistance == R_SI and internal.ambient == 20
    assert p.faces(FaceKind.EXTERNAL)[0].resistance == R_SE


def test_undeclared_material():
    with pytest.raises(UnknownReferenceError, match="pvc"):
        load_profile(SQUARE.replace("material: wood", "material: pvc"))


def test_malformed_documents():
    with pytest.raises(ProfileParseError):
        load_profile("materials: [unclosed")
    with pytest.raises(ProfileParseError):
        load_profile("- just a list")
    with pytest.raises(ProfileParseError, match="unknown top-level"):
        load_profile(SQUARE + "\nextras: 1\n")
    with pytest.raises(ProfileParseError, match="kind"):
        load_profile(SQUARE.replace("kind: external", "kind: sideways"))


def test_json_documents_are_accepted():
    doc = (
        '{"materials": {"wood": 0.13}, "regions": [{"rectangle": [0, 0, 0.1, 0.1], "material": "wood"}],'
        ' "boundary": [{"polyline": [[0, 0], [0.1, 0], [0.1, 0.1], [0, 0.1], [0, 0]], "kind": "adiabatic"}]}'
    )
    p = load_profile(doc)
    assert len(p.boundary) == 4


def test_two_layer_slab_shared_edge_has_no_face(two_layer):
    assert [r.material.conductivity for r in two_layer.regions] == [0.13, 0.035]
    assert validate_profile(two_layer) == []
    on_interface = [f for f in two_layer.boundary if f.start.x == f.end.x == 0.01]
    assert on_interface == []


def test_face_on_shared_edge_is_flagged(two_layer):
    extra = BoundaryFace(Point2(0.01, 0.0), Point2(0.01, 0.05), FaceKind.ADIABATIC)
    bad = ProfileSpec(two_layer.regions, two_layer.boundary + (extra,))
    assert "off-boundary" in {v.code for v in validate_profile(bad)}


def test_overlap_names_both_regions():
    m = Material("m", 1.0)
    p = ProfileSpec(
        (RegionSpec("a", square(0, 0, 2, 2), m), RegionSpec("b", square(1, 1, 3, 3), m)),
        (),
    )
    (v,) = validate_profile(p)
    assert v.code == "overlap" and "a" in v.message and "b" in v.message


def test_uncovered_edge():
    m = Material("m", 1.0)
    pts = ((0, 0), (1, 0), (1, 1), (0, 1))
    faces = faces_around(*pts)[:3]
    p = ProfileSpec((RegionSpec("a", pts, m),), faces)
    assert [v.code for v in validate_profile(p)] == ["uncovered-edge"]


def test_double_covered_edge():
    m = Material("m", 1.0)
    pts = ((0, 0), (1, 0), (1, 1), (0, 1))
    faces = faces_around(*pts) + (BoundaryFace(Point2(0.2, 0), Point2(0.6, 0), FaceKind.ADIABATIC),)
    p = ProfileSpec((RegionSpec("a", pts, m),), faces)
    assert "double-coverage" in [v.code for v in validate_profile(p)]


def test_shape_violations():
    m = Material("m", 1.0)
    bowtie = ((0, 0), (2, 2), (2, 0), (0, 1))
    assert [v.code for v in validate_profile(ProfileSpec((RegionSpec("x", bowtie, m),), ()))] == [
        "self-intersection"
    ]
    line = ((0, 0), (1, 0), (2, 0))
    assert validate_profile(ProfileSpec((RegionSpec("x", line, m),), ()))[0].code == "degenerate"
    two = ((0, 0), (1, 0))
    assert validate_profile(ProfileSpec((RegionSpec("x", two, m),), ()))[0].code == "vertices"


def test_disconnected_regions():
    m = Material("m", 1.0)
    p = ProfileSpec((RegionSpec("a", square(0, 0, 1, 1), m), RegionSpec("b", square(2, 0, 3, 1), m)), ())
    assert [v.code for v in validate_profile(p)] == ["disconnected"]


def test_face_invariants():
    m = Material("m", 1.0)
    pts = ((0, 0), (1, 0), (1, 1), (0, 1))
    faces = list(faces_around(*pts))
    faces[0] = BoundaryFace(faces[0].start, faces[0].end, FaceKind.INTERNAL, resistance=-1.0, ambient=20.0)
    faces[1] = BoundaryFace(faces[1].start, faces[1].end, FaceKind.ADIABATIC, resistance=0.1)
    codes = [v.code for v in validate_profile(ProfileSpec((RegionSpec("a", pts, m),), tuple(faces)))]
    assert codes == ["face", "face"]


def test_polygon_orientation_is_normalised():
    cw = RegionSpec("r", ((0, 0), (0, 1), (1, 1), (1, 0)), Material("m", 1))
    xs, ys = zip(*cw.polygon)
    signed = sum(xs[i - 1] * ys[i] - xs[i] * ys[i - 1] for i in range(len(xs)))
    assert signed > 0


def test_material_at(two_layer):
    assert material_at(two_layer, (0.005, 0.025)).name == "wood"
    assert material_at(two_layer, (0.015, 0.025)).name == "insulation"
    assert material_at(two_layer, (0.05, 0.025)) is None
    # shared edge: first declared region wins
    assert material_at(two_layer, (0.01, 0.025)).name == "wood"


def test_material_at_cavity_returns_equivalent_material():
    p = load_fixture("slab_cavity.yaml")
    mat = material_at(p, (0.015, 0.025))
    assert mat.name == "air"
    # closed 10 mm deep, 30 mm wide cavity: h_a = max(2.5, 1.57), h_r = c4 (1 + sqrt(1 + 1/9) - 1/3)
    h_r = 2.11 * (1 + (1 + 1 / 9) ** 0.5 - 1 / 3)
    assert mat.conductivity == pytest.approx(0.01 * (2.5 + h_r), rel=1e-12)


@given(x=st.floats(1e-6, 0.02 - 1e-6), y=st.floats(1e-6, 0.05 - 1e-6))
def test_interior_points_get_their_region_material(x, y):
    p = load_fixture("two_layer_slab.yaml")
    mat = material_at(p, (x, y))
    if abs(x - 0.01) < 1e-12:
        return
    assert mat.name == ("wood" if x < 0.01 else "insulation")


def test_outward_normal(slab):
    internal = slab.faces(FaceKind.INTERNAL)[0]
    external = slab.faces(FaceKind.EXTERNAL)[0]
    assert outward_normal(slab, internal) == pytest.approx([-1, 0])
    assert outward_normal(slab, external) == pytest.approx([1, 0])


# corner rule -----------------------------------------------------------------

LONG_INTERNAL = textwrap.dedent(
    """
    materials: {pvc: 0.17}
    ambient: {internal: 20, external: 0}
    regions:
      - {name: leg, polygon: [[0, 0], [0.2, 0], [0.2, 0.1], [0.1, 0.1], [0.1, 0.2], [0, 0.2]], material: pvc}
    boundary:
      - {polyline: [[0.2, 0.1], [0.1, 0.1], [0.1, 0.2]], kind: internal}
      - {polyline: [[0, 0.2], [0, 0], [0.2, 0]], kind: external}
      - {segment: [[0.2, 0], [0.2, 0.1]], kind: adiabatic}
      - {segment: [[0.1, 0.2], [0, 0.2]], kind: adiabatic}
    junctions:
      - {point: [0.1, 0.1], depth: DEPTH}
    """
)


def corner_lengths(p):
    return sorted(round(f.length, 12) for f in p.boundary if f.corner_zone)


@pytest.mark.parametrize("depth, zone", [(0.05, 0.03), (0.02, 0.02)])
def test_corner_zone_extent(depth, zone):
    p = apply_corner_rule(load_profile(LONG_INTERNAL.replace("DEPTH", str(depth))))
    assert corner_lengths(p) == [zone, zone]
    for f in p.boundary:
        if f.corner_zone:
            assert f.resistance == R_SI_CORNER
            assert min(abs(f.start.x - 0.1) + abs(f.start.y - 0.1), abs(f.end.x - 0.1) + abs(f.end.y - 0.1)) < 1e-12


def test_corner_rule_junction_mid_face():
    doc = LONG_INTERNAL.replace("[0.1, 0.1], depth: DEPTH", "[0.15, 0.1], depth: 0.01")
    p = apply_corner_rule(load_profile(doc))
    assert corner_lengths(p) == [0.01, 0.01]


def test_corner_rule_walks_across_vertices():
    # zone longer than the first face: continues onto the next internal face
    doc = LONG_INTERNAL.replace("[0.1, 0.1], depth: DEPTH", "[0.11, 0.1], depth: 0.03")
    p = apply_corner_rule(load_profile(doc))
    assert corner_lengths(p) == [0.01, 0.02, 0.03]


def test_corner_rule_identity_without_junctions(slab):
    assert apply_corner_rule(slab) is slab


def test_corner_rule_idempotent_and_length_preserving():
    p = load_profile(LONG_INTERNAL.replace("DEPTH", "0.05"))
    once = apply_corner_rule(p)
    twice = apply_corner_rule(once)
    assert once.boundary == twice.boundary
    total = lambda q: sum(f.length for f in q.boundary)
    assert total(once) == pytest.approx(total(p), rel=1e-12)
    assert {f.resistance for f in once.boundary if f.convective} <= {R_SE, R_SI, R_SI_CORNER}
    assert validate_profile(once) == []


def test_corner_rule_rejects_junction_off_internal_faces():
    p = load_profile(LONG_INTERNAL.replace("[0.1, 0.1], depth: DEPTH", "[0.0, 0.1], depth: 0.02"))
    with pytest.raises(GeometryError, match="junction"):
        apply_corner_rule(p)


def test_l_profile_fixture_corner():
    p = apply_corner_rule(load_fixture("l_profile.yaml"))
    assert corner_lengths(p) == [0.01, 0.01]


# ventilated cavities -------------------------------------------------------------

VENTED = textwrap.dedent(
    """
    materials: {alu: 160.0}
    cavities:
      groove: {gap_width: GAP, side: external}
    ambient: {internal: 20, external: 0}
    regions:
      - {name: frame, polygon: [[0, 0], [0.03, 0], [0.03, 0.01], [0.02, 0.01], [0.02, 0.02], [0.03, 0.02], [0.03, 0.03], [0, 0.03]], material: alu}
      - {name: slot, rectangle: [0.02, 0.01, 0.03, 0.02], cavity: groove}
    boundary:
      - {segment: [[0, 0.03], [0, 0]], kind: internal}
      - {polyline: [[0.03, 0], [0.03, 0.01]], kind: external}
      - {segment: [[0.03, 0.01], [0.03, 0.02]], kind: external}
      - {polyline: [[0.03, 0.02], [0.03, 0.03]], kind: external}
      - {segment: [[0, 0], [0.03, 0]], kind: adiabatic}
      - {segment: [[0.03, 0.03], [0, 0.03]], kind: adiabatic}
    """
)


def test_fully_ventilated_cavity_becomes_faces():
    # the slot's mouth face is declared for the closed variant only
    doc = VENTED.replace("GAP", "0.02").replace("  - {segment: [[0.03, 0.01], [0.03, 0.02]], kind: external}\n", "")
    p = load_profile(doc)
    assert [r.name for r in p.regions] == ["frame"]
    new = [f for f in p.boundary if f.kind is FaceKind.EXTERNAL and 0.02 <= min(f.start.x, f.end.x) < 0.03]
    assert sum(f.length for f in new) == pytest.approx(0.03)
    assert all(f.resistance == R_SE and f.ambient == 0 for f in new)


def test_closed_slot_is_a_conducting_region():
    p = load_profile(VENTED.replace("GAP", "0.0"))
    assert [r.name for r in p.regions] == ["frame", "slot"]
    assert material_at(p, (0.025, 0.015)).name == "groove"
