"""Pseudo-time integration of the SPH heat equation to steady state.

With density and heat capacity set to one, particle ``i`` evolves as

    dT_i/dt = sum_j kbar_ij (T_i - T_j) / r_ij * V_j * dW_ij/dr
              + g_i (T_inf - T_i)

where ``kbar_ij = 4 k_i k_j / (k_i + k_j)`` and the second term is non-zero
only for particles tagged with a convective face. ``g_i`` is built by
:func:`convection_coefficients`.

Two evaluation routes exist on purpose: :func:`conduction_rate` and
:func:`convection_rate` sum one particle's neighbours with ``math.fsum``;
:class:`HeatOperator` assembles the same sums as a sparse matrix for the
time loop. Tests check one against the other.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import SolverDomainError
from .kernels import KernelSpec
from .particles import ParticleSet

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    steady_tolerance: float = 1e-6  # K per unit pseudo-time
    max_steps: int = 5_000_000
    dt_safety: float = 1.0
    report_interval: int = 10_000
    threads: int = 1

    def __post_init__(self):
        if not self.steady_tolerance > 0:
            raise SolverDomainError("steady_tolerance must be positive")
        if not self.max_steps > 0:
            raise SolverDomainError("max_steps must be positive")
        if not 0 < self.dt_safety <= 1:
            raise SolverDomainError("dt_safety must lie in (0, 1]")
        if not self.threads >= 1:
            raise SolverDomainError("threads must be >= 1")


@dataclass
class SteadyState:
    temperatures: np.ndarray
    steps_taken: int
    final_residual: float
    converged: bool
    dt: float
    history: list[tuple[int, float]] = field(default_factory=list)

    @property
    def pseudo_time(self):
        return self.steps_taken * self.dt


def effective_conductivity(k_i, k_j):
    """Pairwise conductivity 4 k_i k_j / (k_i + k_j); scalars or arrays."""
    k_i = np.asarray(k_i, dtype=float)
    k_j = np.asarray(k_j, dtype=float)
    if np.any(k_i <= 0) or np.any(k_j <= 0):
        raise SolverDomainError("conductivities must be positive")
    out = 4.0 * k_i * k_j / (k_i + k_j)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# convective boundary weights


def convection_pairs(ps: ParticleSet):
    """Mask over stored neighbour entries that carry boundary convection.

    An entry (i, j) counts when i is tagged with a face and the point
    mirrored from j through i, ``2 r_i - r_j``, lies beyond the face line.
    Those are exactly the neighbour slots the free surface removed from i's
    kernel support.
    """
    rows = ps.pair_rows()
    face = ps.face[rows]
    tagged = face >= 0
    mask = np.zeros(len(rows), dtype=bool)
    if not tagged.any():
        return mask, np.zeros(len(ps))
    depth = face_depth(ps)
    idx = np.flatnonzero(tagged)
    r, j, f = rows[idx], ps.nbr_index[idx], face[idx]
    inward = np.einsum("ij,ij->i", ps.position[r] - ps.position[j], ps.face_normal[f])
    mask[idx] = inward > depth[r]
    return mask, depth


def face_depth(ps: ParticleSet):
    """Distance from each tagged particle to its face line (0 if untagged)."""
    depth = np.zeros(len(ps))
    tagged = np.flatnonzero(ps.face >= 0)
    if len(tagged) == 0:
        return depth
    starts = np.array([f.start for f in ps.faces], dtype=float)
    f = ps.face[tagged]
    depth[tagged] = np.maximum(
        np.einsum("ij,ij->i", starts[f] - ps.position[tagged], ps.face_normal[f]), 0.0
    )
    return depth


def _raw_weights(ps: ParticleSet):
    mask, depth = convection_pairs(ps)
    rows = ps.pair_rows()[mask]
    cols = ps.nbr_index[mask]
    raw = np.bincount(rows, ps.volume[cols] * -ps.nbr_dwdr[mask], minlength=len(ps))
    return raw, depth


def face_scales(ps: ParticleSet, raw=None):
    """Per-face factor making the kernel-weighted surface measure equal the face length."""
    if raw is None:
        raw, _ = _raw_weights(ps)
    scales = np.zeros(len(ps.faces))
    for fi, face in enumerate(ps.faces):
        members = ps.face == fi
        total = float(np.dot(ps.volume[members], raw[members]))
        if total > 0:
            scales[fi] = face.length / total
    return scales


def convection_coefficients(ps: ParticleSet):
    """Per-particle coupling ``g`` (1/pseudo-time) and ambient ``T_inf``.

    For a tagged particle on face f,

        g_i = c_f / (R_f + d_i / k_i) * sum_{j in X_i} V_j |dW_ij/dr|

    where X_i are the slots picked by :func:`convection_pairs`, d_i the
    particle's depth below the face (the conduction path from the surface
    to the particle centre), and c_f scales the face so that
    ``sum_i V_i c_f sum_j V_j |dW_ij/dr|`` equals the face length, i.e. a
    uniform temperature difference drives exactly ``h * length * dT``.
    """
    n = len(ps)
    g = np.zeros(n)
    t_inf = np.zeros(n)
    if not np.any(ps.face >= 0):
        return g, t_inf
    raw, depth = _raw_weights(ps)
    scales = face_scales(ps, raw)
    tagged = np.flatnonzero(ps.face >= 0)
    f = ps.face[tagged]
    resistance = np.array([face.resistance for face in ps.faces])[f] + depth[tagged] / ps.conductivity[tagged]
    g[tagged] = scales[f] * raw[tagged] / resistance
    t_inf[tagged] = np.array([face.ambient for face in ps.faces])[f]
    return g, t_inf


# ---------------------------------------------------------------------------
# single-particle reference sums


def conduction_rate(ps: ParticleSet, i: int) -> float:
    a, b = ps.nbr_start[i], ps.nbr_start[i + 1]
    j = ps.nbr_index[a:b]
    k_i = ps.conductivity[i]
    terms = (
        4.0 * k_i * ps.conductivity[j] / (k_i + ps.conductivity[j])
        * (ps.temperature[i] - ps.temperature[j])
        / ps.nbr_distance[a:b]
        * ps.volume[j]
        * ps.nbr_dwdr[a:b]
    )
    return math.fsum(terms.tolist())


def convection_rate(ps: ParticleSet, i: int, scales=None) -> float:
    """Boundary term for particle ``i``; zero for untagged particles.

    Walks i's neighbour list directly instead of going through
    :func:`convection_coefficients`; only the per-face scale is shared.
    """
    fi = int(ps.face[i])
    if fi < 0:
        return 0.0
    if scales is None:
        scales = face_scales(ps)
    face = ps.faces[fi]
    nx, ny = ps.face_normal[fi]
    xi, yi = ps.position[i]
    depth = max((face.start.x - xi) * nx + (face.start.y - yi) * ny, 0.0)
    a, b = ps.nbr_start[i], ps.nbr_start[i + 1]
    terms = []
    for j, dwdr in zip(ps.nbr_index[a:b].tolist(), ps.nbr_dwdr[a:b].tolist()):
        xj, yj = ps.position[j]
        if (xi - xj) * nx + (yi - yj) * ny > depth:
            terms.append(ps.volume[j] * dwdr)
    h_i = 1.0 / (face.resistance + depth / ps.conductivity[i])
    return -scales[fi] * h_i * (face.ambient - ps.temperature[i]) * math.fsum(terms)


# ---------------------------------------------------------------------------
# assembled operator


class HeatOperator:
    """Sparse form of the rate equation: ``dT/dt = L @ T + g * (T_inf - T)``.

    Row ``i`` of ``L`` lists particle i's neighbours in ascending index order,
    so each rate is summed in a fixed order. Rows are split into contiguous
    blocks for threading; a row's sum never depends on the block layout, so
    results are bitwise identical for any thread count.
    """

    def __init__(self, ps: ParticleSet, threads=1):
        n = len(ps)
        rows = ps.pair_rows()
        cols = ps.nbr_index
        kbar = effective_conductivity(ps.conductivity[rows], ps.conductivity[cols]) if len(rows) else np.zeros(0)
        c = kbar * ps.volume[cols] * -ps.nbr_dwdr / ps.nbr_distance
        off = sp.csr_matrix((c, cols, ps.nbr_start), shape=(n, n))
        off.sort_indices()
        self.laplacian = (off - sp.diags(np.asarray(off.sum(axis=1)).ravel())).tocsr()
        self.laplacian.sort_indices()
        self.g, self.t_inf = convection_coefficients(ps)
        self.volume = ps.volume
        self.threads = max(1, int(threads))
        bounds = np.linspace(0, n, self.threads + 1).astype(int)
        self._blocks = [(a, b, self.laplacian[a:b]) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        self._pool = ThreadPoolExecutor(self.threads) if self.threads > 1 else None

    def _block(self, a, b, mat, t, out):
        out[a:b] = mat @ t + self.g[a:b] * (self.t_inf[a:b] - t[a:b])

    def rates(self, t, out=None):
        out = np.empty_like(t) if out is None else out
        if self._pool is None:
            self._block(0, len(t), self.laplacian, t, out)
        else:
            list(self._pool.map(lambda blk: self._block(blk[0], blk[1], blk[2], t, out), self._blocks))
        return out

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None


def stable_dt(ps: ParticleSet, spec: KernelSpec | None = None, cfg: SolverConfig = SolverConfig()):
    """dt_safety * 0.5 h^2 / k_max."""
    spec = spec or ps.kernel
    return diffusion_dt(spec.smoothing_length, float(np.max(ps.conductivity))) * cfg.dt_safety


def diffusion_dt(h, k_max):
    return 0.5 * h * h / k_max


def step(ps: ParticleSet, dt, operator: HeatOperator | None = None) -> ParticleSet:
    """One forward-Euler step from the current temperature snapshot."""
    op = operator or HeatOperator(ps)
    t = ps.temperature
    return ps.with_temperature(t + dt * op.rates(t))


def run_to_steady(
    ps: ParticleSet,
    cfg: SolverConfig = SolverConfig(),
    history_every: int = 0,
) -> SteadyState:
    """Step until max |dT/dt| <= tolerance or ``max_steps`` updates were made.

    The residual is checked before every update, so an already-steady field
    returns after one check with ``steps_taken == 0``. With ``history_every``
    set, (step, residual) is recorded at that interval.
    """
    dt = stable_dt(ps, ps.kernel, cfg)
    op = HeatOperator(ps, cfg.threads)
    t = ps.temperature.astype(float).copy()
    rate = np.empty_like(t)
    history = []
    steps = 0
    try:
        while True:
            op.rates(t, rate)
            residual = float(np.max(np.abs(rate))) if len(t) else 0.0
            if history_every and steps % history_every == 0:
                history.append((steps, residual))
            if cfg.report_interval and steps % cfg.report_interval == 0:
                log.info("step %d  pseudo-time %.6e  residual %.6e", steps, steps * dt, residual)
            if residual <= cfg.steady_tolerance or steps >= cfg.max_steps:
                break
            t += dt * rate
            steps += 1
    finally:
        op.close()
    converged = residual <= cfg.steady_tolerance
    if history_every and history[-1][0] != steps:
        history.append((steps, residual))
    return SteadyState(t, steps, residual, converged, dt, history)


def write_convergence_log(state: SteadyState, path):
    with open(path, "w", newline="\n") as fh:
        fh.write("step,residual\n")
        for s, r in state.history:
            fh.write(f"{s},{r!r}\n")
