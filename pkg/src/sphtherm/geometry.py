"""Cross-section description: regions, cavities, boundary faces, junctions.

A profile is read from a YAML (or JSON) document, see ``docs/profile-format.md``
for the schema. Polygon work that is not specific to heat transfer (validity,
overlap, union boundary) is delegated to shapely.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
import shapely
import yaml
from shapely.geometry import LineString, MultiLineString, Polygon
from shapely.ops import linemerge, unary_union

from .cavity import CavityConstants, CavitySpec, VentilationClass, cavity_coefficients
from .errors import GeometryError, ProfileParseError, UnknownReferenceError

# Surface resistances in m^2 K/W for plane surfaces and, on the internal side,
# for the reduced-convection zone at the junction of two surfaces.
R_SE = 0.04
R_SI = 0.13
R_SI_CORNER = 0.20
CORNER_ZONE_MAX = 0.030

SNAP = 1e-9  # m; coordinates closer than this are the same point


class Point2(NamedTuple):
    x: float
    y: float


class FaceKind(str, enum.Enum):
    INTERNAL = "internal"
    EXTERNAL = "external"
    ADIABATIC = "adiabatic"

    @classmethod
    def parse(cls, text):
        key = str(text).strip().lower().replace("_", "-")
        key = key.removesuffix("-convection")
        try:
            return cls(key)
        except ValueError:
            raise ProfileParseError(f"unknown boundary kind {text!r}") from None


DEFAULT_RESISTANCE = {FaceKind.INTERNAL: R_SI, FaceKind.EXTERNAL: R_SE}


@dataclass(frozen=True)
class Material:
    name: str
    conductivity: float


@dataclass(frozen=True)
class Cavity:
    """A named air cavity as declared in a profile document.

    ``side`` and ``ambient`` only matter when the cavity turns out to be
    fully ventilated: its walls then take the surface resistance and ambient
    temperature of that side.
    """

    name: str
    spec: CavitySpec
    side: FaceKind | None = None
    ambient: float | None = None

    @property
    def ventilation(self):
        return cavity_coefficients(self.spec).ventilation


@dataclass(frozen=True)
class RegionSpec:
    name: str
    polygon: tuple[Point2, ...]
    material: Material | None = None
    cavity: Cavity | None = None

    def __post_init__(self):
        pts = tuple(Point2(float(x), float(y)) for x, y in self.polygon)
        if len(pts) > 1 and pts[0] == pts[-1]:
            pts = pts[:-1]
        if signed_area(pts) < 0:
            pts = pts[::-1]
        object.__setattr__(self, "polygon", pts)

    @property
    def shape(self):
        return Polygon(self.polygon)

    @property
    def area(self):
        return signed_area(self.polygon)


@dataclass(frozen=True)
class BoundaryFace:
    start: Point2
    end: Point2
    kind: FaceKind
    resistance: float | None = None
    ambient: float | None = None
    corner_zone: bool = False

    @property
    def length(self):
        return math.dist(self.start, self.end)

    @property
    def convective(self):
        return self.kind is not FaceKind.ADIABATIC

    @property
    def h(self):
        """Surface heat transfer coefficient 1/R in W/(m^2 K)."""
        return 1.0 / self.resistance

    def split(self, t):
        """Two faces meeting at parameter ``t`` in (0, 1) along start->end."""
        p = Point2(
            self.start.x + t * (self.end.x - self.start.x),
            self.start.y + t * (self.end.y - self.start.y),
        )
        return replace(self, end=p), replace(self, start=p)


@dataclass(frozen=True)
class Junction:
    point: Point2
    depth: float

    @property
    def zone_length(self):
        return min(self.depth, CORNER_ZONE_MAX)


@dataclass(frozen=True)
class PanelSpec:
    u_p: float  # W/(m^2 K)
    b_p: float  # m
    b_f: float  # m


@dataclass(frozen=True)
class ReferenceSpec:
    """Reference case named in a profile; values absent means "look it up"."""

    name: str
    l2d: float | None = None
    uf: float | None = None


@dataclass(frozen=True)
class ProfileSpec:
    regions: tuple[RegionSpec, ...]
    boundary: tuple[BoundaryFace, ...]
    junctions: tuple[Junction, ...] = ()
    panel: PanelSpec | None = None
    reference: ReferenceSpec | None = None
    constants: CavityConstants = field(default_factory=CavityConstants)

    @property
    def shape(self):
        return unary_union([r.shape for r in self.regions])

    def faces(self, kind):
        return [f for f in self.boundary if f.kind is kind]

    def ambient(self, kind):
        """The single ambient temperature of one convective side."""
        temps = {f.ambient for f in self.faces(kind)}
        if not temps:
            raise GeometryError(f"profile has no {kind.value} convective faces")
        if len(temps) > 1:
            raise GeometryError(f"{kind.value} faces disagree on ambient temperature: {sorted(temps)}")
        return temps.pop()

    def bounds(self):
        xy = np.array([p for r in self.regions for p in r.polygon])
        return (*xy.min(axis=0), *xy.max(axis=0))


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self):
        return f"[{self.code}] {self.message}"


def signed_area(pts):
    if len(pts) < 3:
        return 0.0
    xy = np.asarray(pts, dtype=float)
    x, y = xy[:, 0], xy[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


# ---------------------------------------------------------------------------
# document parsing


def _point(value, what):
    try:
        x, y = value
        p = Point2(float(x), float(y))
    except (TypeError, ValueError):
        raise ProfileParseError(f"{what}: expected [x, y], got {value!r}") from None
    if not (math.isfinite(p.x) and math.isfinite(p.y)):
        raise ProfileParseError(f"{what}: non-finite coordinate {value!r}")
    return p


def _number(value, what):
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ProfileParseError(f"{what}: expected a number, got {value!r}") from None
    if not math.isfinite(v):
        raise ProfileParseError(f"{what}: non-finite value {value!r}")
    return v


def _mapping(value, what):
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ProfileParseError(f"{what}: expected a mapping")
    return value


def _polygon_from(entry, what):
    if "polygon" in entry:
        pts = entry["polygon"]
        if not isinstance(pts, (list, tuple)):
            raise ProfileParseError(f"{what}: polygon must be a list of points")
        return tuple(_point(p, f"{what} vertex {k}") for k, p in enumerate(pts))
    if "rectangle" in entry:
        r = entry["rectangle"]
        if isinstance(r, dict):
            x0, y0 = _point(r.get("min"), f"{what} rectangle min")
            x1, y1 = _point(r.get("max"), f"{what} rectangle max")
        else:
            try:
                x0, y0, x1, y1 = (_number(v, f"{what} rectangle") for v in r)
            except ValueError:
                raise ProfileParseError(f"{what}: rectangle is [x0, y0, x1, y1]") from None
        return (Point2(x0, y0), Point2(x1, y0), Point2(x1, y1), Point2(x0, y1))
    raise ProfileParseError(f"{what}: needs 'polygon' or 'rectangle'")


def _cavity_spec(entry, polygon, what):
    gap = _number(entry.get("gap_width", 0.0), f"{what} gap_width")
    axis = str(entry.get("flow_axis", "x")).lower()
    if axis not in ("x", "y"):
        raise ProfileParseError(f"{what}: flow_axis must be 'x' or 'y'")
    try:
        if "rectangle" in entry and isinstance(entry["rectangle"], dict) and "width" in entry["rectangle"]:
            r = entry["rectangle"]
            return CavitySpec(_number(r["width"], what), _number(r["depth"], what), gap)
        if "polygon" in entry and isinstance(entry["polygon"], dict):
            g = entry["polygon"]
            return CavitySpec(
                _number(g["width"], what), _number(g["depth"], what), gap, area=_number(g["area"], what)
            )
        if polygon is None:
            raise ProfileParseError(f"{what}: no geometry and no region uses it")
        xy = np.asarray(polygon)
        ext = xy.max(axis=0) - xy.min(axis=0)
        depth, width = (ext[0], ext[1]) if axis == "x" else (ext[1], ext[0])
        area = abs(signed_area(polygon))
        is_rect = len(polygon) == 4 and abs(area - depth * width) <= 1e-9 * depth * width
        return CavitySpec(float(width), float(depth), gap, area=None if is_rect else area)
    except KeyError as exc:
        raise ProfileParseError(f"{what}: missing field {exc}") from None


def parse_profile(doc, constants: CavityConstants | None = None) -> ProfileSpec:
    """Build a ProfileSpec from an already-decoded document (no validation)."""
    if not isinstance(doc, dict):
        raise ProfileParseError("profile document must be a mapping at top level")
    known = {"materials", "cavities", "regions", "boundary", "junctions", "panel", "reference_case", "ambient"}
    unknown = set(doc) - known
    if unknown:
        raise ProfileParseError(f"unknown top-level sections: {sorted(unknown)}")

    materials = {}
    for name, k in _mapping(doc.get("materials"), "materials").items():
        materials[str(name)] = Material(str(name), _number(k, f"material {name}"))

    ambient_defaults = {}
    for side, t in _mapping(doc.get("ambient"), "ambient").items():
        ambient_defaults[FaceKind.parse(side)] = _number(t, f"ambient {side}")

    cavity_entries = _mapping(doc.get("cavities"), "cavities")
    raw_regions = doc.get("regions") or []
    if not isinstance(raw_regions, list) or not raw_regions:
        raise ProfileParseError("'regions' must be a non-empty list")

    region_polys = []
    for n, entry in enumerate(raw_regions):
        if not isinstance(entry, dict):
            raise ProfileParseError(f"region {n}: expected a mapping")
        region_polys.append(_polygon_from(entry, f"region {entry.get('name', n)}"))

    cavities = {}
    for name, entry in cavity_entries.items():
        entry = _mapping(entry, f"cavity {name}")
        owner = next(
            (poly for poly, r in zip(region_polys, raw_regions) if str(r.get("cavity")) == str(name)), None
        )
        spec = _cavity_spec(entry, owner, f"cavity {name}")
        side = FaceKind.parse(entry["side"]) if "side" in entry else None
        amb = _number(entry["ambient"], f"cavity {name} ambient") if "ambient" in entry else None
        cavities[str(name)] = Cavity(str(name), spec, side, amb)

    regions = []
    for n, (entry, poly) in enumerate(zip(raw_regions, region_polys)):
        name = str(entry.get("name", f"region{n}"))
        if ("material" in entry) == ("cavity" in entry):
            raise ProfileParseError(f"region {name}: give exactly one of 'material' or 'cavity'")
        if "material" in entry:
            key = str(entry["material"])
            if key not in materials:
                raise UnknownReferenceError(f"region {name}: undeclared material {key!r}")
            regions.append(RegionSpec(name, poly, material=materials[key]))
        else:
            key = str(entry["cavity"])
            if key not in cavities:
                raise UnknownReferenceError(f"region {name}: undeclared cavity {key!r}")
            regions.append(RegionSpec(name, poly, cavity=cavities[key]))

    faces = []
    for n, entry in enumerate(doc.get("boundary") or []):
        if not isinstance(entry, dict):
            raise ProfileParseError(f"boundary {n}: expected a mapping")
        kind = FaceKind.parse(entry.get("kind"))
        if "segment" in entry:
            pts = entry["segment"]
            if not isinstance(pts, (list, tuple)) or len(pts) != 2:
                raise ProfileParseError(f"boundary {n}: segment needs exactly two points")
        elif "polyline" in entry:
            pts = entry["polyline"]
        else:
            raise ProfileParseError(f"boundary {n}: needs 'segment' or 'polyline'")
        pts = [_point(p, f"boundary {n}") for p in pts]
        if kind is FaceKind.ADIABATIC:
            if "resistance" in entry or "ambient" in entry:
                raise ProfileParseError(f"boundary {n}: adiabatic faces take no resistance or ambient")
            resistance = ambient = None
        else:
            resistance = _number(entry.get("resistance", DEFAULT_RESISTANCE[kind]), f"boundary {n} resistance")
            if "ambient" in entry:
                ambient = _number(entry["ambient"], f"boundary {n} ambient")
            elif kind in ambient_defaults:
                ambient = ambient_defaults[kind]
            else:
                raise ProfileParseError(f"boundary {n}: no ambient temperature for {kind.value} face")
        for a, b in zip(pts, pts[1:]):
            faces.append(BoundaryFace(a, b, kind, resistance, ambient))

    junctions = []
    for n, entry in enumerate(doc.get("junctions") or []):
        entry = _mapping(entry, f"junction {n}")
        junctions.append(
            Junction(_point(entry.get("point"), f"junction {n}"), _number(entry.get("depth"), f"junction {n} depth"))
        )

    panel = None
    if doc.get("panel") is not None:
        p = _mapping(doc["panel"], "panel")
        try:
            panel = PanelSpec(_number(p["U_p"], "panel U_p"), _number(p["b_p"], "panel b_p"), _number(p["b_f"], "panel b_f"))
        except KeyError as exc:
            raise ProfileParseError(f"panel: missing field {exc}") from None

    reference = None
    ref = doc.get("reference_case")
    if isinstance(ref, dict):
        reference = ReferenceSpec(
            str(ref.get("name", "custom")),
            _number(ref["L2D"], "reference_case L2D") if "L2D" in ref else None,
            _number(ref["U_f"], "reference_case U_f") if "U_f" in ref else None,
        )
    elif ref is not None:
        reference = ReferenceSpec(str(ref))

    return ProfileSpec(
        tuple(regions), tuple(faces), tuple(junctions), panel, reference, constants or CavityConstants()
    )


def load_profile(text, constants: CavityConstants | None = None) -> ProfileSpec:
    """Parse, resolve and validate a profile document.

    Fully ventilated cavities are removed from the region list and their walls
    turned into boundary faces, so the returned profile is ready for particle
    generation (after ``apply_corner_rule``).
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ProfileParseError(f"malformed document: {exc}") from None
    profile = parse_profile(doc, constants)
    shape_errors = [v for v in validate_profile(profile) if v.code in _SHAPE_CODES]
    if shape_errors:
        raise GeometryError("; ".join(map(str, shape_errors)), shape_errors)
    profile = ventilate(profile)
    violations = validate_profile(profile)
    if violations:
        raise GeometryError("; ".join(map(str, violations)), violations)
    return profile


# ---------------------------------------------------------------------------
# validation

_SHAPE_CODES = {"vertices", "degenerate", "self-intersection", "material", "overlap"}


def _tolerance(profile):
    if not profile.regions:
        return SNAP
    x0, y0, x1, y1 = profile.bounds()
    return max(SNAP, 1e-9 * max(x1 - x0, y1 - y0))


def validate_profile(p: ProfileSpec) -> list[Violation]:
    out = []
    good = []
    for r in p.regions:
        if len(r.polygon) < 3:
            out.append(Violation("vertices", f"region {r.name} has {len(r.polygon)} vertices, need >= 3"))
            continue
        if abs(r.area) <= 0.0:
            out.append(Violation("degenerate", f"region {r.name} has zero area"))
            continue
        if not r.shape.exterior.is_simple:
            out.append(Violation("self-intersection", f"region {r.name} polygon is not simple"))
            continue
        if r.material is not None and not r.material.conductivity > 0:
            out.append(Violation("material", f"material {r.material.name} has non-positive conductivity"))
        good.append(r)

    for a_idx, a in enumerate(good):
        for b in good[a_idx + 1 :]:
            inter = a.shape.intersection(b.shape).area
            if inter > 1e-9 * min(a.area, b.area):
                out.append(Violation("overlap", f"regions {a.name} and {b.name} overlap (area {inter:.3g} m^2)"))
    if out:
        return out

    for f in p.boundary:
        if f.length <= SNAP:
            out.append(Violation("face", f"boundary face at {tuple(f.start)} has zero length"))
        if f.kind is FaceKind.ADIABATIC:
            if f.resistance is not None or f.ambient is not None:
                out.append(Violation("face", f"adiabatic face at {tuple(f.start)} carries R or ambient"))
        else:
            if f.resistance is None or not f.resistance > 0:
                out.append(Violation("face", f"convective face at {tuple(f.start)} needs R > 0"))
            if f.ambient is None or not math.isfinite(f.ambient):
                out.append(Violation("face", f"convective face at {tuple(f.start)} needs an ambient temperature"))

    union = p.shape
    if union.geom_type != "Polygon":
        out.append(Violation("disconnected", f"regions form {len(union.geoms)} separate pieces"))
        return out

    tol = _tolerance(p)
    boundary = union.boundary
    lines = [LineString([f.start, f.end]) for f in p.boundary if f.length > SNAP]
    covered = unary_union(lines).buffer(tol * 10) if lines else None
    uncovered = boundary if covered is None else boundary.difference(covered)
    for piece in _linear_parts(uncovered):
        if piece.length > tol * 100:
            c = [tuple(round(v, 9) for v in xy) for xy in piece.coords]
            out.append(Violation("uncovered-edge", f"exterior edge {c[0]} -> {c[-1]} has no boundary face"))

    band = boundary.buffer(tol * 10)
    for f, line in zip([f for f in p.boundary if f.length > SNAP], lines):
        off = line.difference(band).length
        if off > tol * 100:
            out.append(Violation("off-boundary", f"face {tuple(f.start)} -> {tuple(f.end)} is not on the exterior"))
    for m, a in enumerate(lines):
        grown = a.buffer(tol * 10)
        for b in lines[m + 1 :]:
            if grown.intersection(b).length > tol * 100:
                out.append(
                    Violation("double-coverage", f"faces {list(a.coords)} and {list(b.coords)} overlap")
                )
    return out


def _linear_parts(geom):
    if geom.is_empty:
        return []
    if isinstance(geom, LineString):
        return [geom]
    if isinstance(geom, MultiLineString):
        merged = linemerge(geom)
        return [merged] if isinstance(merged, LineString) else list(merged.geoms)
    return [g for part in getattr(geom, "geoms", []) for g in _linear_parts(part)]


# ---------------------------------------------------------------------------
# queries


def region_material(region: RegionSpec, constants=CavityConstants()):
    """Material of a region; cavities become a material with their k_eq."""
    if region.material is not None:
        return region.material
    coeffs = cavity_coefficients(region.cavity.spec, constants)
    if coeffs.k_eq is None:
        return None
    return Material(region.cavity.name, coeffs.k_eq)


def region_index_at(p: ProfileSpec, xy):
    """Index of the first-declared region covering each point, -1 outside.

    ``xy`` is an (n, 2) array. Points on shared edges go to the earlier region.
    """
    xy = np.atleast_2d(np.asarray(xy, dtype=float))
    idx = np.full(len(xy), -1, dtype=np.int64)
    for n, r in enumerate(p.regions):
        free = idx < 0
        if not free.any():
            break
        hit = shapely.intersects_xy(r.shape, xy[free, 0], xy[free, 1])
        sub = np.flatnonzero(free)[hit]
        idx[sub] = n
    return idx


def material_at(p: ProfileSpec, point) -> Material | None:
    n = int(region_index_at(p, [tuple(point)])[0])
    if n < 0:
        return None
    return region_material(p.regions[n], p.constants)


def outward_normal(p: ProfileSpec, face: BoundaryFace, union=None):
    union = p.shape if union is None else union
    dx, dy = face.end.x - face.start.x, face.end.y - face.start.y
    length = math.hypot(dx, dy)
    n = np.array([dy, -dx]) / length
    mid = np.array([(face.start.x + face.end.x) / 2, (face.start.y + face.end.y) / 2])
    probe = mid + n * max(1e-7, 1e-6 * length)
    if shapely.intersects_xy(union, probe[0], probe[1]):
        n = -n
    return n


# ---------------------------------------------------------------------------
# fully ventilated cavities


def ventilate(p: ProfileSpec) -> ProfileSpec:
    """Drop fully ventilated cavity regions and expose their walls.

    Each wall segment the cavity shares with the remaining solid becomes a
    convective face on the cavity's declared side, with that side's default
    surface resistance and ambient temperature.
    """
    vented = [
        r for r in p.regions if r.cavity is not None and r.cavity.ventilation is VentilationClass.FULLY_VENTILATED
    ]
    if not vented:
        return p
    keep = tuple(r for r in p.regions if r not in vented)
    if not keep:
        raise GeometryError("profile has no solid regions once ventilated cavities are removed")
    solid = unary_union([r.shape for r in keep])
    faces = list(p.boundary)
    for r in vented:
        cav = r.cavity
        if cav.side is None or cav.side is FaceKind.ADIABATIC:
            raise GeometryError(f"fully ventilated cavity {cav.name} needs side: internal or external")
        ambient = cav.ambient
        if ambient is None:
            temps = {f.ambient for f in p.boundary if f.kind is cav.side}
            if len(temps) != 1:
                raise GeometryError(f"cannot infer ambient temperature for ventilated cavity {cav.name}")
            ambient = temps.pop()
        shared = r.shape.exterior.intersection(solid.boundary)
        for piece in _linear_parts(shared):
            coords = [Point2(*c) for c in piece.coords]
            for a, b in zip(coords, coords[1:]):
                if math.dist(a, b) > SNAP:
                    faces.append(BoundaryFace(a, b, cav.side, DEFAULT_RESISTANCE[cav.side], ambient))
    return replace(p, regions=keep, boundary=tuple(faces))


# ---------------------------------------------------------------------------
# corner rule


def _key(pt):
    return (round(pt[0] / SNAP), round(pt[1] / SNAP))


def _param_on(face, pt):
    """Parameter of ``pt`` along ``face`` if it lies on it, else None."""
    ax, ay = face.start
    dx, dy = face.end.x - ax, face.end.y - ay
    L2 = dx * dx + dy * dy
    t = ((pt[0] - ax) * dx + (pt[1] - ay) * dy) / L2
    if t < -SNAP / math.sqrt(L2) or t > 1 + SNAP / math.sqrt(L2):
        return None
    px, py = ax + t * dx, ay + t * dy
    if math.hypot(px - pt[0], py - pt[1]) > 10 * SNAP:
        return None
    return min(max(t, 0.0), 1.0)


def _split_at(faces, idx, t):
    """Split faces[idx] at t unless t is (numerically) an endpoint."""
    f = faces[idx]
    eps = SNAP / f.length
    if t <= eps or t >= 1 - eps:
        return faces
    a, b = f.split(t)
    return faces[:idx] + [a, b] + faces[idx + 1 :]


def apply_corner_rule(p: ProfileSpec) -> ProfileSpec:
    """Raise R to the corner value along internal faces near each junction.

    The zone extends ``min(depth, 30 mm)`` of arc length along the chain of
    internal faces in both directions from the junction point.
    """
    if not p.junctions:
        return p
    faces = list(p.boundary)
    for jn in p.junctions:
        pt = jn.point
        hits = [
            (n, t)
            for n, f in enumerate(faces)
            if f.kind is FaceKind.INTERNAL and (t := _param_on(f, pt)) is not None
        ]
        if not hits:
            raise GeometryError(f"junction {tuple(pt)} does not lie on an internal-convection face")
        n, t = hits[0]
        faces = _split_at(faces, n, t)
        for heading in [_heading(f, pt) for f in _incident(faces, pt)]:
            first = next(n for n, f in enumerate(faces) if f in _incident(faces, pt) and _heading(f, pt) == heading)
            faces = _walk_zone(faces, first, pt, jn.zone_length)
    return replace(p, boundary=tuple(faces))


def _incident(faces, pt):
    k = _key(pt)
    return [f for f in faces if f.kind is FaceKind.INTERNAL and k in (_key(f.start), _key(f.end))]


def _heading(face, pt):
    """Direction (rounded) in which ``face`` leaves the point ``pt``."""
    far = face.end if _key(face.start) == _key(pt) else face.start
    return (round((far.x - pt[0]) / face.length, 9), round((far.y - pt[1]) / face.length, 9))


def _walk_zone(faces, idx, origin, remaining):
    here = _key(origin)
    visited = set()
    while remaining > SNAP:
        f = faces[idx]
        visited.add((_key(f.start), _key(f.end)))
        forward = _key(f.start) == here
        if f.length <= remaining + SNAP:
            faces[idx] = replace(f, resistance=R_SI_CORNER, corner_zone=True)
            remaining -= f.length
            here = _key(f.end) if forward else _key(f.start)
            nxt = [
                m
                for m, g in enumerate(faces)
                if m != idx
                and g.kind is FaceKind.INTERNAL
                and here in (_key(g.start), _key(g.end))
                and (_key(g.start), _key(g.end)) not in visited
            ]
            if len(nxt) != 1:
                break
            idx = nxt[0]
        else:
            t = remaining / f.length if forward else 1 - remaining / f.length
            faces = _split_at(faces, idx, t)
            near = idx if forward else idx + 1
            g = faces[near]
            faces[near] = replace(g, resistance=R_SI_CORNER, corner_zone=True)
            break
    return faces
