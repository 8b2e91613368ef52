"""Particle lattice, per-particle properties and neighbour lists."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import shapely

from .errors import ResolutionError
from .geometry import BoundaryFace, FaceKind, ProfileSpec, outward_normal, region_index_at, region_material
from .kernels import KernelSpec


@dataclass(frozen=True)
class ResolutionSpec:
    dp: float = 0.001
    h_over_dp: float = 1.3
    kernel: str = "quintic_spline"

    def __post_init__(self):
        if not self.dp > 0:
            raise ResolutionError("particle spacing dp must be positive")
        if not self.h_over_dp >= 1:
            raise ResolutionError("h_over_dp must be >= 1")

    def kernel_spec(self):
        return KernelSpec(self.h_over_dp * self.dp, self.kernel)


@dataclass
class ParticleSet:
    """Struct-of-arrays particle state.

    Neighbour lists are stored CSR-style: the neighbours of particle ``i`` are
    ``nbr_index[nbr_start[i]:nbr_start[i + 1]]`` in ascending order, with the
    matching distances and kernel derivatives alongside.
    """

    position: np.ndarray  # (n, 2) m
    volume: np.ndarray  # (n,) m^2 per unit depth
    conductivity: np.ndarray  # (n,) W/(m K)
    temperature: np.ndarray  # (n,) degC
    face: np.ndarray  # (n,) int, index into ``faces`` or -1
    faces: tuple[BoundaryFace, ...] = ()
    face_normal: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    region: np.ndarray | None = None
    kernel: KernelSpec | None = None
    domain: object = None  # shapely geometry used for line-of-sight pruning
    nbr_start: np.ndarray | None = None
    nbr_index: np.ndarray | None = None
    nbr_distance: np.ndarray | None = None
    nbr_dwdr: np.ndarray | None = None

    def __len__(self):
        return len(self.volume)

    @property
    def has_neighbors(self):
        return self.nbr_start is not None

    def neighbors(self, i):
        a, b = self.nbr_start[i], self.nbr_start[i + 1]
        return self.nbr_index[a:b]

    def pair_rows(self):
        """Row index of every stored neighbour entry."""
        return np.repeat(np.arange(len(self)), np.diff(self.nbr_start))

    def with_temperature(self, temperature):
        return replace(self, temperature=np.asarray(temperature, dtype=float).copy())


def make_particles(position, conductivity, volume, temperature=0.0, kernel=None):
    """Bare particle set without faces (tests, insulated systems)."""
    position = np.asarray(position, dtype=float).reshape(-1, 2)
    n = len(position)
    return ParticleSet(
        position=position,
        volume=np.broadcast_to(np.asarray(volume, dtype=float), (n,)).copy(),
        conductivity=np.broadcast_to(np.asarray(conductivity, dtype=float), (n,)).copy(),
        temperature=np.broadcast_to(np.asarray(temperature, dtype=float), (n,)).copy(),
        face=np.full(n, -1, dtype=np.int64),
        kernel=kernel,
    )


def _segment_distance(xy, a, b):
    a = np.asarray(a, dtype=float)
    d = np.asarray(b, dtype=float) - a
    t = np.clip(((xy - a) @ d) / (d @ d), 0.0, 1.0)
    return np.hypot(*(xy - a - t[:, None] * d).T)


def generate_particles(p: ProfileSpec, res: ResolutionSpec = ResolutionSpec()) -> ParticleSet:
    """Fill the profile with a square lattice and assign particle properties.

    A lattice site belongs to the first region whose polygon covers it. Each
    particle within the support radius of a convective face is tagged with
    the nearest such face; adiabatic faces are never tagged because they
    exchange nothing.
    """
    dp = res.dp
    kernel = res.kernel_spec()
    for r in p.regions:
        if r.shape.buffer(-dp).is_empty:
            raise ResolutionError(f"region {r.name} is thinner than 2*dp = {2 * dp:g} m")

    x0, y0, x1, y1 = p.bounds()
    nx = int(np.ceil((x1 - x0) / dp - 1e-9))
    ny = int(np.ceil((y1 - y0) / dp - 1e-9))
    gx = x0 + (np.arange(nx) + 0.5) * dp
    gy = y0 + (np.arange(ny) + 0.5) * dp
    xy = np.stack(np.meshgrid(gx, gy, indexing="ij"), axis=-1).reshape(-1, 2)
    region = region_index_at(p, xy)
    inside = region >= 0
    xy, region = xy[inside], region[inside]
    if len(xy) == 0:
        raise ResolutionError("no lattice sites fall inside the profile")
    for n, r in enumerate(p.regions):
        if not np.any(region == n):
            raise ResolutionError(f"region {r.name} received no particles at dp = {dp:g} m")

    k_region = []
    for r in p.regions:
        mat = region_material(r, p.constants)
        if mat is None:
            raise ResolutionError(f"region {r.name} is a fully ventilated cavity; ventilate the profile first")
        k_region.append(mat.conductivity)
    conductivity = np.asarray(k_region)[region]

    union = p.shape
    faces = tuple(f for f in p.boundary if f.convective)
    normals = np.array([outward_normal(p, f, union) for f in faces]).reshape(-1, 2)
    tag = np.full(len(xy), -1, dtype=np.int64)
    if faces:
        dist = np.stack([_segment_distance(xy, f.start, f.end) for f in faces])
        nearest = np.argmin(dist, axis=0)
        near = dist[nearest, np.arange(len(xy))] <= kernel.support_radius
        tag[near] = nearest[near]

    ambients = [f.ambient for f in faces]
    sides = {f.kind: f.ambient for f in faces}
    if FaceKind.INTERNAL in sides and FaceKind.EXTERNAL in sides:
        t0 = 0.5 * (sides[FaceKind.INTERNAL] + sides[FaceKind.EXTERNAL])
    else:
        t0 = float(np.mean(ambients)) if ambients else 0.0

    return ParticleSet(
        position=xy,
        volume=np.full(len(xy), dp * dp),
        conductivity=conductivity,
        temperature=np.full(len(xy), t0),
        face=tag,
        faces=faces,
        face_normal=normals,
        region=region,
        kernel=kernel,
        domain=union,
    )


# ---------------------------------------------------------------------------
# neighbour search


def _ragged_arange(starts, counts):
    """Concatenation of arange(s, s + c) for each (s, c)."""
    counts = np.asarray(counts, dtype=np.int64)
    total = int(counts.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    offsets = np.repeat(np.cumsum(counts) - counts, counts)
    return np.repeat(np.asarray(starts, dtype=np.int64), counts) + np.arange(total) - offsets


def cell_list_pairs(position, radius):
    """All ordered pairs (i, j), i != j, with |r_i - r_j| <= radius.

    Uses a uniform background grid of cell size ``radius``; each particle
    only tests the 3x3 block of cells around its own. Returned pairs are
    sorted by (i, j).
    """
    pos = np.asarray(position, dtype=float)
    n = len(pos)
    if n < 2:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy()
    lo = pos.min(axis=0)
    cell = np.floor((pos - lo) / radius).astype(np.int64)
    ncx, ncy = cell.max(axis=0) + 1
    key = cell[:, 0] * ncy + cell[:, 1]
    order = np.argsort(key, kind="stable")
    sorted_key = key[order]
    ncell = ncx * ncy
    cell_start = np.searchsorted(sorted_key, np.arange(ncell + 1))

    rows, cols = [], []
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            cx, cy = cell[:, 0] + dx, cell[:, 1] + dy
            ok = (cx >= 0) & (cx < ncx) & (cy >= 0) & (cy < ncy)
            src = np.flatnonzero(ok)
            nk = cx[ok] * ncy + cy[ok]
            starts, stops = cell_start[nk], cell_start[nk + 1]
            counts = stops - starts
            j = order[_ragged_arange(starts, counts)]
            i = np.repeat(src, counts)
            d = pos[i] - pos[j]
            keep = (i != j) & (np.hypot(d[:, 0], d[:, 1]) <= radius)
            rows.append(i[keep])
            cols.append(j[keep])
    i = np.concatenate(rows)
    j = np.concatenate(cols)
    s = np.lexsort((j, i))
    return i[s], j[s]


def brute_force_pairs(position, radius):
    """O(n^2) reference for :func:`cell_list_pairs`."""
    pos = np.asarray(position, dtype=float)
    d = pos[:, None, :] - pos[None, :, :]
    r = np.hypot(d[..., 0], d[..., 1])
    np.fill_diagonal(r, np.inf)
    i, j = np.nonzero(r <= radius)
    return i, j


def _line_of_sight(pos, i, j, domain, radius):
    """Mask of pairs whose connecting segment stays inside ``domain``.

    Only pairs with both ends within ``radius`` of the domain boundary can
    leave it, so only those are tested.
    """
    keep = np.ones(len(i), dtype=bool)
    near = shapely.distance(domain.boundary, shapely.points(pos)) <= radius
    test = np.flatnonzero(near[i] & near[j] & (i < j))
    if len(test) == 0:
        return keep
    segs = shapely.linestrings(np.stack([pos[i[test]], pos[j[test]]], axis=1))
    shapely.prepare(domain)
    bad = test[~shapely.covers(domain, segs)]
    if len(bad):
        blocked = set(zip(i[bad].tolist(), j[bad].tolist()))
        blocked |= {(b, a) for a, b in blocked}
        keep = np.array([(a, b) not in blocked for a, b in zip(i.tolist(), j.tolist())])
    return keep


def build_neighborhoods(ps: ParticleSet, spec: KernelSpec | None = None) -> ParticleSet:
    """Attach sorted neighbour lists with cached distances and dW/dr.

    When the particle set carries a ``domain`` polygon, pairs whose straight
    connection leaves the domain (across a notch or an open cavity) are
    dropped: material on the far side of a gap is not in thermal contact.
    """
    spec = spec or ps.kernel
    radius = spec.support_radius
    i, j = cell_list_pairs(ps.position, radius)
    if ps.domain is not None and len(i):
        keep = _line_of_sight(ps.position, i, j, ps.domain, radius)
        i, j = i[keep], j[keep]
    d = ps.position[i] - ps.position[j]
    r = np.hypot(d[:, 0], d[:, 1])
    start = np.zeros(len(ps) + 1, dtype=np.int64)
    np.cumsum(np.bincount(i, minlength=len(ps)), out=start[1:])
    return replace(ps, kernel=spec, nbr_start=start, nbr_index=j, nbr_distance=r, nbr_dwdr=spec.dwdr(r))


# ---------------------------------------------------------------------------
# field export


def write_field_csv(ps: ParticleSet, path, temperature=None):
    t = ps.temperature if temperature is None else np.asarray(temperature)
    with open(path, "w", newline="\n") as fh:
        fh.write("x,y,k,T\n")
        for (x, y), k, tt in zip(ps.position.tolist(), ps.conductivity.tolist(), np.asarray(t, dtype=float).tolist()):
            fh.write(f"{x!r},{y!r},{k!r},{tt!r}\n")


def write_field_vtk(ps: ParticleSet, path, temperature=None):
    """Legacy ASCII VTK polydata: one vertex per particle, k and T as point data."""
    t = ps.temperature if temperature is None else np.asarray(temperature)
    n = len(ps)
    lines = ["# vtk DataFile Version 3.0", "sphtherm particle field", "ASCII", "DATASET POLYDATA", f"POINTS {n} double"]
    lines += [f"{x!r} {y!r} 0.0" for x, y in ps.position.tolist()]
    lines.append(f"VERTICES {n} {2 * n}")
    lines += [f"1 {i}" for i in range(n)]
    lines.append(f"POINT_DATA {n}")
    for name, values in (("conductivity", ps.conductivity), ("temperature", t)):
        lines += [f"SCALARS {name} double 1", "LOOKUP_TABLE default"]
        lines += [repr(float(v)) for v in values]
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_field_csv(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, :2], data[:, 2], data[:, 3]
