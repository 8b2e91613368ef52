"""Equivalent thermal conductivity of air cavities in frame sections.

Cavities are classified by the width of the gap connecting them to the
surroundings. Closed and slightly ventilated cavities are replaced by a solid
with an equivalent conductivity; fully ventilated cavities are not a material
at all and become exposed surfaces (see :func:`equivalent_conductivity`).

The coefficients assume a temperature difference of 10 K across the cavity and
a mean temperature of 283 K, which is how ``c3`` and ``c4`` absorb the
Stefan-Boltzmann constant, emissivity, view factor and the ``dT**(1/3)`` term.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import CavityDomainError

UNVENTILATED_MAX_GAP = 0.002
SLIGHTLY_VENTILATED_MAX_GAP = 0.010
NARROW_CAVITY_WIDTH = 0.005


class VentilationClass(str, enum.Enum):
    UNVENTILATED = "unventilated"
    SLIGHTLY_VENTILATED = "slightly-ventilated"
    FULLY_VENTILATED = "fully-ventilated"


# Returned by equivalent_conductivity in place of a number.
FULLY_VENTILATED = VentilationClass.FULLY_VENTILATED


@dataclass(frozen=True)
class CavityConstants:
    c1: float = 0.025  # W/(m K)
    c3: float = 1.57  # W/(m^2 K)
    c4: float = 2.11  # W/(m^2 K)

    def __post_init__(self):
        for name in ("c1", "c3", "c4"):
            if not getattr(self, name) > 0:
                raise CavityDomainError(f"cavity constant {name} must be positive")


@dataclass(frozen=True)
class CavitySpec:
    """Air cavity geometry.

    ``depth`` is measured along the heat-flow direction, ``width`` across it.
    With ``area`` left as None the cavity is a ``width x depth`` rectangle;
    otherwise it is an arbitrary shape of that area whose bounding extents are
    ``depth`` and ``width``.
    """

    width: float
    depth: float
    gap_width: float = 0.0
    area: float | None = None

    def __post_init__(self):
        if not (self.width > 0 and self.depth > 0):
            raise CavityDomainError("cavity width and depth must be positive")
        if not self.gap_width >= 0:
            raise CavityDomainError("gap width must be non-negative")
        if self.area is not None:
            if not self.area > 0:
                raise CavityDomainError("cavity area must be positive")
            # small slack for polygons traced from rounded coordinates
            if self.area > self.width * self.depth * (1 + 1e-9):
                raise CavityDomainError(
                    f"cavity area {self.area:g} exceeds its bounding box "
                    f"{self.width:g} x {self.depth:g}"
                )

    @property
    def is_rectangle(self):
        return self.area is None

    def rectangle(self):
        """(b, d) of the rectangle used by the coefficient formulas."""
        if self.is_rectangle:
            return self.width, self.depth
        return equivalent_rectangle(self.area, self.depth, self.width)


def classify_ventilation(gap_width):
    if gap_width < 0:
        raise CavityDomainError("gap width must be non-negative")
    if gap_width <= UNVENTILATED_MAX_GAP:
        return VentilationClass.UNVENTILATED
    if gap_width <= SLIGHTLY_VENTILATED_MAX_GAP:
        return VentilationClass.SLIGHTLY_VENTILATED
    return VentilationClass.FULLY_VENTILATED


def _require_positive(**values):
    for name, v in values.items():
        if not v > 0:
            raise CavityDomainError(f"{name} must be positive, got {v!r}")


def equivalent_rectangle(area, depth, width):
    """Rectangle ``(b, d)`` with the given area and the aspect ratio depth/width."""
    _require_positive(area=area, depth=depth, width=width)
    b = math.sqrt(area * width / depth)
    d = math.sqrt(area * depth / width)
    return b, d


def convective_coefficient(d, b, c=CavityConstants()):
    _require_positive(d=d, b=b)
    if b <= NARROW_CAVITY_WIDTH:
        return c.c1 / d
    return max(c.c1 / d, c.c3)


def radiative_coefficient(d, b, c=CavityConstants()):
    _require_positive(d=d, b=b)
    ratio = d / b
    return c.c4 * (1.0 + math.sqrt(1.0 + ratio * ratio) - ratio)


@dataclass(frozen=True)
class CavityCoefficients:
    ventilation: VentilationClass
    b: float
    d: float
    h_a: float
    h_r: float
    resistance: float
    k_eq: float | None  # None for fully ventilated cavities


def cavity_coefficients(spec: CavitySpec, c=CavityConstants()) -> CavityCoefficients:
    ventilation = classify_ventilation(spec.gap_width)
    b, d = spec.rectangle()
    h_a = convective_coefficient(d, b, c)
    h_r = radiative_coefficient(d, b, c)
    k_eq = d * (h_a + h_r)
    if ventilation is VentilationClass.SLIGHTLY_VENTILATED:
        k_eq = 2.0 * k_eq
    elif ventilation is VentilationClass.FULLY_VENTILATED:
        k_eq = None
    return CavityCoefficients(ventilation, b, d, h_a, h_r, 1.0 / (h_a + h_r), k_eq)


def equivalent_conductivity(spec: CavitySpec, c=CavityConstants()):
    """Equivalent conductivity in W/(m K), or ``FULLY_VENTILATED``.

    A fully ventilated cavity has no conductivity; its walls must be turned
    into convective boundary faces instead (``geometry.ventilate``).
    """
    coeffs = cavity_coefficients(spec, c)
    if coeffs.k_eq is None:
        return FULLY_VENTILATED
    return coeffs.k_eq
