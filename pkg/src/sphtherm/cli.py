"""Command-line entry point: ``sphtherm {simulate,validate,cavity,export-field}``.

Exit codes: 0 success, 1 a validation band failed, 2 input or configuration
error, 3 solver did not converge.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field

from .cavity import CavityConstants, CavitySpec, cavity_coefficients
from .errors import ConfigurationError, SphThermError
from .geometry import load_profile
from .particles import ResolutionSpec, write_field_csv, write_field_vtk
from .pipeline import simulate
from .solver import SolverConfig, write_convergence_log

EXIT_OK = 0
EXIT_FAILED_VALIDATION = 1
EXIT_INPUT_ERROR = 2
EXIT_NOT_CONVERGED = 3


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    resolution: ResolutionSpec = field(default_factory=ResolutionSpec)
    solver: SolverConfig = field(default_factory=SolverConfig)
    field_csv: str | None = None
    field_vtk: str | None = None
    report_json: str | None = None
    report_text: str | None = None
    convergence_log: str | None = None
    log_every: int = 100


def _add_run_options(p):
    p.add_argument("input", help="profile document (YAML or JSON)")
    g = p.add_argument_group("resolution")
    g.add_argument("--dp", type=float, default=0.001, help="particle spacing in m (default 0.001)")
    g.add_argument("--h-over-dp", type=float, default=1.3, help="smoothing length / spacing (default 1.3)")
    g.add_argument("--kernel", default="quintic_spline", choices=["quintic_spline", "wendland_c2"])
    g = p.add_argument_group("solver")
    g.add_argument("--tolerance", type=float, default=1e-6, help="steady residual max|dT/dt| (default 1e-6)")
    g.add_argument("--max-steps", type=int, default=5_000_000)
    g.add_argument("--dt-safety", type=float, default=1.0)
    g.add_argument("--threads", type=int, default=1)
    g.add_argument("--report-interval", type=int, default=10_000, help="progress line every N steps")
    g = p.add_argument_group("output")
    g.add_argument("--field-csv", help="write x,y,k,T per particle")
    g.add_argument("--vtk", dest="field_vtk", help="write legacy VTK point data")
    g.add_argument("--report", dest="report_json", help="write the structured (JSON) report")
    g.add_argument("--report-text", help="write the text report to a file as well")
    g.add_argument("--convergence-log", help="write step,residual CSV")
    g.add_argument("--log-every", type=int, default=100, help="convergence log sampling interval")
    p.add_argument("-q", "--quiet", action="store_true", help="no progress output on stderr")


def build_parser():
    parser = argparse.ArgumentParser(prog="sphtherm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_options(sub.add_parser("simulate", help="solve to steady state and report Q, L2D, U_f"))
    _add_run_options(sub.add_parser("validate", help="simulate and check against the reference case"))
    _add_run_options(sub.add_parser("export-field", help="simulate and write only the particle field"))

    c = sub.add_parser("cavity", help="equivalent conductivity of an air cavity")
    c.add_argument("--width", "-b", type=float, required=True, help="b (or b' for --area) in m")
    c.add_argument("--depth", "-d", type=float, required=True, help="d along the heat flow (or d') in m")
    c.add_argument("--area", type=float, help="A' for a non-rectangular cavity in m^2")
    c.add_argument("--gap-width", type=float, default=0.0, help="opening to the surroundings in m")
    c.add_argument("--c1", type=float, default=0.025)
    c.add_argument("--c3", type=float, default=1.57)
    c.add_argument("--c4", type=float, default=2.11)
    c.add_argument("--format", choices=["text", "csv"], default="text")
    return parser


def run_config(args) -> RunConfig:
    try:
        res = ResolutionSpec(args.dp, args.h_over_dp, args.kernel)
        cfg = SolverConfig(args.tolerance, args.max_steps, args.dt_safety, args.report_interval, args.threads)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None
    return RunConfig(
        args.command,
        args.input,
        res,
        cfg,
        args.field_csv,
        args.field_vtk,
        args.report_json,
        args.report_text,
        args.convergence_log,
        args.log_every,
    )


def _run(rc: RunConfig, out):
    with open(rc.input) as fh:
        profile = load_profile(fh.read())
    if rc.command == "validate" and profile.reference is None:
        raise ConfigurationError("profile declares no reference_case; nothing to validate against")
    history = rc.log_every if rc.convergence_log else 0
    sim = simulate(profile, rc.resolution, rc.solver, history_every=history)

    if rc.field_csv:
        write_field_csv(sim.particles, rc.field_csv)
    if rc.field_vtk:
        write_field_vtk(sim.particles, rc.field_vtk)
    if rc.convergence_log:
        write_convergence_log(sim.state, rc.convergence_log)
    if rc.command != "export-field":
        text = sim.report.to_text()
        out.write(text)
        if rc.report_text:
            with open(rc.report_text, "w", newline="\n") as fh:
                fh.write(text)
        if rc.report_json:
            with open(rc.report_json, "w", newline="\n") as fh:
                fh.write(sim.report.to_json())

    if not sim.state.converged:
        print(
            f"solver: not converged after {sim.state.steps_taken} steps "
            f"(residual {sim.state.final_residual:.3e})",
            file=sys.stderr,
        )
        return EXIT_NOT_CONVERGED
    if rc.command == "validate" and not sim.report.all_pass:
        return EXIT_FAILED_VALIDATION
    return EXIT_OK


def _cavity(args, out):
    spec = CavitySpec(args.width, args.depth, args.gap_width, area=args.area)
    c = cavity_coefficients(spec, CavityConstants(args.c1, args.c3, args.c4))
    k_eq = "" if c.k_eq is None else repr(c.k_eq)
    rows = [
        ("ventilation", c.ventilation.value),
        ("b", repr(c.b)),
        ("d", repr(c.d)),
        ("h_a", repr(c.h_a)),
        ("h_r", repr(c.h_r)),
        ("R", repr(c.resistance)),
        ("k_eq", k_eq or "n/a (surfaces exposed)"),
    ]
    if args.format == "csv":
        out.write(",".join(k for k, _ in rows) + "\n")
        out.write(",".join(v if k != "k_eq" else k_eq for k, v in rows) + "\n")
    else:
        for k, v in rows:
            out.write(f"{k:<12}{v}\n")
    return EXIT_OK


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command != "cavity" and not args.quiet:
        logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(name)s: %(message)s")
    try:
        if args.command == "cavity":
            return _cavity(args, out)
        return _run(run_config(args), out)
    except SphThermError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except OSError as exc:
        print(f"error: cli: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
