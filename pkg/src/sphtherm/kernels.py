"""Radial SPH smoothing kernels with 2D normalisation.

``q = r / h``. Each family provides ``W(q) * h**2`` and ``dW/dq * h**2``; the
public functions rescale to physical units (1/m^2 and 1/m^3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import KernelDomainError


def _quintic_w(q):
    t3 = np.maximum(3.0 - q, 0.0)
    t2 = np.maximum(2.0 - q, 0.0)
    t1 = np.maximum(1.0 - q, 0.0)
    return (7.0 / (478.0 * math.pi)) * (t3**5 - 6.0 * t2**5 + 15.0 * t1**5)


def _quintic_dw(q):
    t3 = np.maximum(3.0 - q, 0.0)
    t2 = np.maximum(2.0 - q, 0.0)
    t1 = np.maximum(1.0 - q, 0.0)
    return (7.0 / (478.0 * math.pi)) * (-5.0 * t3**4 + 30.0 * t2**4 - 75.0 * t1**4)


def _wendland_c2_w(q):
    t = np.maximum(1.0 - 0.5 * q, 0.0)
    return (7.0 / (4.0 * math.pi)) * t**4 * (2.0 * q + 1.0)


def _wendland_c2_dw(q):
    t = np.maximum(1.0 - 0.5 * q, 0.0)
    return (7.0 / (4.0 * math.pi)) * (-5.0 * q * t**3)


# family -> (support radius in units of h, W, dW/dq)
FAMILIES = {
    "quintic_spline": (3.0, _quintic_w, _quintic_dw),
    "wendland_c2": (2.0, _wendland_c2_w, _wendland_c2_dw),
}


@dataclass(frozen=True)
class KernelSpec:
    smoothing_length: float
    family: str = "quintic_spline"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise KernelDomainError(f"unknown kernel family {self.family!r}; have {sorted(FAMILIES)}")
        if not self.smoothing_length > 0:
            raise KernelDomainError("smoothing length must be positive")

    @property
    def h(self):
        return self.smoothing_length

    @property
    def support_radius(self):
        return FAMILIES[self.family][0] * self.smoothing_length

    def w(self, r):
        """Kernel value for an array of distances (zero beyond the support)."""
        h = self.smoothing_length
        return FAMILIES[self.family][1](np.asarray(r, dtype=float) / h) / (h * h)

    def dwdr(self, r):
        """Radial derivative for an array of distances (zero beyond the support)."""
        h = self.smoothing_length
        return FAMILIES[self.family][2](np.asarray(r, dtype=float) / h) / (h * h * h)


def kernel_value(r, spec: KernelSpec):
    if r < 0 or r > spec.support_radius:
        raise KernelDomainError(f"r={r!r} outside [0, {spec.support_radius}]")
    return float(spec.w(r))


def kernel_derivative(r, spec: KernelSpec):
    """dW/dr at a single distance 0 < r <= support radius."""
    if not (0 < r <= spec.support_radius):
        raise KernelDomainError(f"r={r!r} outside (0, {spec.support_radius}]")
    return float(spec.dwdr(r))
