"""Exception hierarchy. Every error carries the pipeline stage that raised it."""


class SphThermError(Exception):
    module = "sphtherm"

    def __str__(self):
        return f"{self.module}: {super().__str__()}"


class ProfileParseError(SphThermError):
    module = "geometry"


class UnknownReferenceError(SphThermError):
    module = "geometry"


class GeometryError(SphThermError):
    module = "geometry"

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class CavityDomainError(SphThermError, ValueError):
    module = "cavity"


class KernelDomainError(SphThermError, ValueError):
    module = "particles"


class ResolutionError(SphThermError):
    module = "particles"


class SolverDomainError(SphThermError, ValueError):
    module = "solver"


class ReportError(SphThermError):
    module = "report"


class ConfigurationError(SphThermError):
    module = "cli"
