"""End-to-end composition: profile -> particles -> steady state -> report."""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import ProfileSpec, apply_corner_rule, load_profile
from .particles import ParticleSet, ResolutionSpec, build_neighborhoods, generate_particles
from .report import SteadyStateReport, assemble_report
from .solver import SolverConfig, SteadyState, run_to_steady


@dataclass
class Simulation:
    profile: ProfileSpec
    particles: ParticleSet  # temperatures are the final field
    state: SteadyState
    report: SteadyStateReport


def prepare(profile: ProfileSpec, res: ResolutionSpec = ResolutionSpec()) -> ParticleSet:
    profile = apply_corner_rule(profile)
    return build_neighborhoods(generate_particles(profile, res))


def simulate(
    profile: ProfileSpec,
    res: ResolutionSpec = ResolutionSpec(),
    cfg: SolverConfig = SolverConfig(),
    history_every: int = 0,
) -> Simulation:
    profile = apply_corner_rule(profile)
    ps = build_neighborhoods(generate_particles(profile, res))
    state = run_to_steady(ps, cfg, history_every=history_every)
    ps = ps.with_temperature(state.temperatures)
    return Simulation(profile, ps, state, assemble_report(profile, ps, state, dp=res.dp))


def simulate_file(path, res=ResolutionSpec(), cfg=SolverConfig(), history_every=0) -> Simulation:
    with open(path) as fh:
        profile = load_profile(fh.read())
    return simulate(profile, res, cfg, history_every)
