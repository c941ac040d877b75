"""Tensor-product quadrature on the circle, disc, unit 3-sphere and unit 4-ball.

All rules integrate polynomials in zeta, conj(zeta) of bounded degree exactly
(up to roundoff).  Angles use the uniform trapezoid rule; radial and latitude
directions use Gauss-Legendre after substitutions that turn the Jacobian
into a polynomial weight:

    disc    t = r^2             dA = 1/2 dt dtheta
    sphere3 u = cos^2 s         dsigma = 1/2 du dtheta1 dtheta2
    ball4   t = rho^2           dV = 1/2 t dt dsigma

Node coordinates are stored as one complex array per axis so integrands can
be evaluated with numpy in bulk.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Callable

import numpy as np

from .core import EvalPoint, ExactValue, MultiIndex, RationalComplex

DOMAINS = ("circle", "disc", "sphere3", "ball4")

MEASURE = {
    "circle": 2 * math.pi,
    "disc": math.pi,
    "sphere3": 2 * math.pi**2,
    "ball4": math.pi**2 / 2,
}

DIMENSION = {"circle": 1, "disc": 1, "sphere3": 2, "ball4": 2}

# Nodes per evaluation chunk.  Fixed so that chunking never depends on the
# number of worker threads.
CHUNK = 1 << 16


class QuadratureError(RuntimeError):
    pass


class NonFiniteIntegrandError(QuadratureError):
    def __init__(self, index: int, value: complex):
        self.index = index
        self.value = value
        super().__init__(f"non-finite integrand value {value!r} at node {index}")


@dataclass(frozen=True)
class Resolution:
    n_theta: int = 64
    n_radial: int = 16

    def __post_init__(self):
        if self.n_theta < 4 or self.n_theta % 2:
            raise ValueError(f"n_theta must be even and >= 4, got {self.n_theta}")
        if self.n_radial < 2:
            raise ValueError(f"n_radial must be >= 2, got {self.n_radial}")


DEFAULT_RESOLUTION = {
    "circle": Resolution(512, 2),
    "disc": Resolution(512, 64),
    "sphere3": Resolution(64, 16),
    "ball4": Resolution(64, 16),
}


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    domain: str
    coords: tuple[np.ndarray, ...]
    weights: np.ndarray
    resolution: Resolution

    def __post_init__(self):
        for c in self.coords:
            c.setflags(write=False)
            if c.shape != self.weights.shape:
                raise ValueError("node and weight arrays differ in length")
        self.weights.setflags(write=False)

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def region(self) -> str:
        return "boundary" if self.domain in ("circle", "sphere3") else "interior"

    @property
    def nodes(self) -> list[EvalPoint]:
        """Nodes as EvalPoint objects.  Slow; for inspection, not integration."""
        region = self.region
        return [
            EvalPoint(tuple(c[i] for c in self.coords), region) for i in range(len(self))
        ]

    def mass(self) -> float:
        return pairwise_sum(self.weights).real

    def check_mass(self, rtol: float = 1e-10) -> None:
        expected = MEASURE[self.domain]
        got = self.mass()
        if abs(got - expected) > rtol * expected:
            raise QuadratureError(
                f"{self.domain} rule mass {got!r} differs from {expected!r}"
            )


def _gauss_unit(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1) / 2, w / 2


def _angles(n: int) -> np.ndarray:
    return 2 * np.pi * np.arange(n) / n


def circle_rule(r: Resolution | None = None) -> QuadratureRule:
    r = r or DEFAULT_RESOLUTION["circle"]
    n = r.n_theta
    nodes = np.exp(1j * _angles(n))
    weights = np.full(n, 2 * np.pi / n)
    return QuadratureRule("circle", (nodes,), weights, r)


def disc_rule(r: Resolution | None = None) -> QuadratureRule:
    r = r or DEFAULT_RESOLUTION["disc"]
    t, wt = _gauss_unit(r.n_radial)
    theta = _angles(r.n_theta)
    rad = np.sqrt(t)
    nodes = (rad[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = (0.5 * wt[:, None] * np.full(r.n_theta, 2 * np.pi / r.n_theta)[None, :]).ravel()
    return QuadratureRule("disc", (nodes,), weights, r)


def _sphere_grid(r: Resolution, latitude: str = "u"):
    if latitude == "u":
        u, wu = _gauss_unit(r.n_radial)
        c = np.sqrt(u)
        s = np.sqrt(1 - u)
        wlat = 0.5 * wu
    elif latitude == "s":
        # Gauss-Legendre directly in s on [0, pi/2]; not polynomial-exact
        x, wx = _gauss_unit(r.n_radial)
        arc = 0.5 * np.pi * x
        c, s = np.cos(arc), np.sin(arc)
        wlat = 0.5 * np.pi * wx * c * s
    else:
        raise ValueError(f"latitude must be 'u' or 's', got {latitude!r}")
    theta = _angles(r.n_theta)
    wth = 2 * np.pi / r.n_theta
    e = np.exp(1j * theta)
    z1 = c[:, None, None] * e[None, :, None]
    z2 = s[:, None, None] * e[None, None, :]
    z1, z2 = np.broadcast_arrays(z1, z2)
    w = np.broadcast_to((wlat * wth * wth)[:, None, None], z1.shape)
    return z1.ravel(), z2.ravel(), np.ascontiguousarray(w).ravel()


def sphere3_rule(r: Resolution | None = None, latitude: str = "u") -> QuadratureRule:
    """Rule on the unit sphere in C^2, chart z1 = cos s e^{i t1}, z2 = sin s e^{i t2}.

    ``latitude='u'`` (default) places Gauss-Legendre nodes in u = cos^2 s, which
    makes monomial integrals exact.  ``latitude='s'`` places them in s itself.
    """
    r = r or DEFAULT_RESOLUTION["sphere3"]
    z1, z2, w = _sphere_grid(r, latitude)
    return QuadratureRule("sphere3", (z1, z2), w, r)


def ball4_rule(r: Resolution | None = None) -> QuadratureRule:
    r = r or DEFAULT_RESOLUTION["ball4"]
    s1, s2, ws = _sphere_grid(r)
    t, wt = _gauss_unit(r.n_radial)
    rho = np.sqrt(t)
    wr = 0.5 * t * wt
    z1 = (rho[:, None] * s1[None, :]).ravel()
    z2 = (rho[:, None] * s2[None, :]).ravel()
    w = (wr[:, None] * ws[None, :]).ravel()
    return QuadratureRule("ball4", (z1, z2), w, r)


RULES = {
    "circle": circle_rule,
    "disc": disc_rule,
    "sphere3": sphere3_rule,
    "ball4": ball4_rule,
}


def make_rule(domain: str, r: Resolution | None = None) -> QuadratureRule:
    """Rule for ``domain``; rules are immutable, so repeated requests share one."""
    if domain not in RULES:
        raise ValueError(f"unknown domain {domain!r}; expected one of {DOMAINS}")
    return _cached_rule(domain, r or DEFAULT_RESOLUTION[domain])


@lru_cache(maxsize=16)
def _cached_rule(domain: str, r: Resolution) -> QuadratureRule:
    return RULES[domain](r)


def pairwise_sum(values: np.ndarray) -> complex:
    """Sum by a fixed binary tree: element i is paired with element i + half.

    The order of additions depends only on ``len(values)``.
    """
    x = np.asarray(values)
    n = len(x)
    if n == 0:
        return 0j
    size = 1 << (n - 1).bit_length()
    buf = np.zeros(size, dtype=np.result_type(x.dtype, np.complex128))
    buf[:n] = x
    while size > 1:
        size //= 2
        buf = buf[:size] + buf[size:]
    return complex(buf[0])


Integrand = Callable[..., np.ndarray]


def _evaluate_chunks(rule: QuadratureRule, g: Integrand, workers: int) -> np.ndarray:
    n = len(rule)
    bounds = [(i, min(i + CHUNK, n)) for i in range(0, n, CHUNK)]

    def run(b):
        lo, hi = b
        vals = np.asarray(g(*(c[lo:hi] for c in rule.coords)), dtype=complex)
        return np.broadcast_to(vals, (hi - lo,))

    if workers <= 1 or len(bounds) == 1:
        parts = [run(b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    return np.concatenate(parts)


def integrate(rule: QuadratureRule, g: Integrand, workers: int = 1) -> complex:
    """Approximate the integral of ``g`` over the rule's domain.

    ``g`` is called as ``g(z1)`` (n=1) or ``g(z1, z2)`` (n=2) with arrays of
    node coordinates and must return an array of the same length (or a
    scalar).  Nodes may be evaluated on ``workers`` threads; the reduction
    order is fixed, so the result is bit-identical for any worker count.
    """
    vals = _evaluate_chunks(rule, g, workers)
    bad = ~np.isfinite(vals)
    if bad.any():
        idx = int(np.flatnonzero(bad)[0])
        raise NonFiniteIntegrandError(idx, complex(vals[idx]))
    return pairwise_sum(rule.weights * vals)


def integrate_points(rule: QuadratureRule, g: Callable[[EvalPoint], complex]) -> complex:
    """Point-at-a-time variant of :func:`integrate` for scalar callbacks."""
    region = rule.region
    vals = np.empty(len(rule), dtype=complex)
    for i in range(len(rule)):
        vals[i] = g(EvalPoint(tuple(c[i] for c in rule.coords), region))
        if not np.isfinite(vals[i]):
            raise NonFiniteIntegrandError(i, complex(vals[i]))
    return pairwise_sum(rule.weights * vals)


def _as_index(a, n: int) -> MultiIndex:
    idx = a if isinstance(a, MultiIndex) else MultiIndex(tuple(a) if not isinstance(a, int) else (a,))
    if idx.dim != n:
        raise ValueError(f"multi-index of dimension {idx.dim} for a domain of dimension {n}")
    return idx


def exact_moment(domain: str, alpha, beta) -> ExactValue:
    """Exact integral of zeta^alpha conj(zeta)^beta over the domain."""
    if domain not in DOMAINS:
        raise ValueError(f"unknown domain {domain!r}")
    n = DIMENSION[domain]
    alpha = _as_index(alpha, n)
    beta = _as_index(beta, n)
    if alpha != beta:
        return ExactValue()
    a = alpha.total
    if domain == "circle":
        return ExactValue(RationalComplex(2), 1)
    if domain == "disc":
        return ExactValue(RationalComplex(Fraction(1, a + 1)), 1)
    fact = alpha.factorial()
    if domain == "sphere3":
        return ExactValue(RationalComplex(Fraction(2 * fact, math.factorial(a + 1))), 2)
    return ExactValue(RationalComplex(Fraction(fact, math.factorial(a + 2))), 2)
