"""Mesh-free (SPH) steady-state heat transfer through multi-material frame sections."""

from .cavity import CavityConstants, CavitySpec, VentilationClass, equivalent_conductivity
from .geometry import ProfileSpec, apply_corner_rule, load_profile, material_at, validate_profile
from .kernels import KernelSpec
from .particles import ParticleSet, ResolutionSpec, build_neighborhoods, generate_particles
from .pipeline import simulate, simulate_file
from .report import REFERENCE_CASES, SteadyStateReport, validate
from .solver import SolverConfig, run_to_steady, stable_dt

__version__ = "0.1.0"

__all__ = [
    "CavityConstants",
    "CavitySpec",
    "VentilationClass",
    "equivalent_conductivity",
    "ProfileSpec",
    "apply_corner_rule",
    "load_profile",
    "material_at",
    "validate_profile",
    "KernelSpec",
    "ParticleSet",
    "ResolutionSpec",
    "build_neighborhoods",
    "generate_particles",
    "simulate",
    "simulate_file",
    "REFERENCE_CASES",
    "SteadyStateReport",
    "validate",
    "SolverConfig",
    "run_to_steady",
    "stable_dt",
]
