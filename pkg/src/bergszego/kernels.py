"""Closed-form Szegő and Bergman kernels of the unit disc and the unit ball in C^2.

Every kernel here has the shape ``constant / (1 - <z, zeta>)**p`` with
``<z, zeta> = sum z_j conj(zeta_j)``, so each is stored as data.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import EvalPoint, ExactValue, RationalComplex, as_point, int_power

SINGULAR_CUTOFF = 1e-14


class KernelId(enum.Enum):
    SzegoDisc = "szego_disc"
    BergmanDisc = "bergman_disc"
    SzegoBall2 = "szego_ball2"
    BergmanBall2 = "bergman_ball2"


@dataclass(frozen=True)
class KernelSpec:
    constant: ExactValue
    exponent: int
    dimension: int

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("kernel exponent must be positive")

    @property
    def constant_float(self) -> float:
        return complex(self.constant).real


KERNELS = {
    KernelId.SzegoDisc: KernelSpec(ExactValue(RationalComplex(Fraction(1, 2)), -1), 1, 1),
    KernelId.BergmanDisc: KernelSpec(ExactValue(RationalComplex(1), -1), 2, 1),
    KernelId.SzegoBall2: KernelSpec(ExactValue(RationalComplex(Fraction(1, 2)), -2), 2, 2),
    KernelId.BergmanBall2: KernelSpec(ExactValue(RationalComplex(2), -2), 3, 2),
}

# (szego, bergman) per model domain
DOMAIN_KERNELS = {
    "disc": (KernelId.SzegoDisc, KernelId.BergmanDisc),
    "ball2": (KernelId.SzegoBall2, KernelId.BergmanBall2),
}


def kernel_spec(kid: KernelId | str) -> KernelSpec:
    return KERNELS[KernelId(kid) if isinstance(kid, str) else kid]


class KernelSingularityError(ArithmeticError):
    def __init__(self, distance: float):
        self.distance = distance
        super().__init__(f"|1 - <z, zeta>| = {distance:.3e} is below {SINGULAR_CUTOFF:g}")


def _pairing(z: EvalPoint, zeta: EvalPoint) -> complex:
    if z.dim != zeta.dim:
        raise ValueError(f"dimension mismatch: {z.dim} vs {zeta.dim}")
    return sum(a * b.conjugate() for a, b in zip(z.coords, zeta.coords))


def _point(p, region=None) -> EvalPoint:
    if isinstance(p, EvalPoint):
        return p
    coords = (p,) if np.isscalar(p) else tuple(p)
    norm2 = sum(abs(complex(c)) ** 2 for c in coords)
    if region is None:
        region = "interior" if norm2 < 1 else "boundary"
    return as_point(coords, region)


def kernel_eval(kid: KernelId | str, z, zeta) -> complex:
    spec = kernel_spec(kid)
    z = _point(z, "interior")
    zeta = _point(zeta)
    if z.region != "interior":
        raise ValueError("kernel_eval needs an interior first argument")
    if z.dim != spec.dimension:
        raise ValueError(f"{kid} expects points of dimension {spec.dimension}")
    denom = 1 - _pairing(z, zeta)
    if abs(denom) <= SINGULAR_CUTOFF:
        raise KernelSingularityError(abs(denom))
    return spec.constant_float / denom**spec.exponent


def kernel_array(kid: KernelId | str, z: EvalPoint, coords) -> np.ndarray:
    """Kernel ``K(z, zeta)`` for a fixed ``z`` and arrays of ``zeta`` coordinates."""
    spec = kernel_spec(kid)
    if z.dim != spec.dimension or len(coords) != spec.dimension:
        raise ValueError(f"{kid} expects points of dimension {spec.dimension}")
    w = sum(zj * np.conj(c) for zj, c in zip(z.coords, coords))
    denom = 1 - w
    small = np.abs(denom) <= SINGULAR_CUTOFF
    if np.any(small):
        raise KernelSingularityError(float(np.abs(denom)[small].min()))
    return spec.constant_float * int_power(1 / denom, spec.exponent)


def neumann_partial_sum(kid: KernelId | str, z, zeta, order: int) -> complex:
    """``constant * sum_{j<=order} binom(j+p-1, p-1) <z,zeta>**j``."""
    spec = kernel_spec(kid)
    w = _pairing(_point(z), _point(zeta))
    if abs(w) >= 1:
        raise ValueError(f"Neumann series diverges for |<z, zeta>| = {abs(w)}")
    p = spec.exponent
    total = 0j
    wj = 1 + 0j
    for j in range(order + 1):
        total += math.comb(j + p - 1, p - 1) * wj
        wj *= w
    return spec.constant_float * total


def neumann_tail_bound(kid: KernelId | str, w_abs: float, order: int) -> float:
    """Upper bound ``constant * sum_{j>order} binom(j+p-1, p-1) |w|**j`` on the truncation error."""
    spec = kernel_spec(kid)
    p = spec.exponent
    head = sum(math.comb(j + p - 1, p - 1) * w_abs**j for j in range(order + 1))
    return spec.constant_float * ((1 - w_abs) ** (-p) - head)


def kernel_diag_ratio(domain: str, z) -> float:
    """S(z, z) / K(z, z) on the disc (``'disc'``) or ball (``'ball2'``)."""
    try:
        s_id, k_id = DOMAIN_KERNELS[domain]
    except KeyError:
        raise ValueError(f"unknown model domain {domain!r}") from None
    z = _point(z, "interior")
    return (kernel_eval(s_id, z, z) / kernel_eval(k_id, z, z)).real


def boundary_distance(z) -> float:
    return 1 - _point(z, "interior").norm
