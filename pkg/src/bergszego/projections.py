"""Szegő and Bergman projections of polynomial test functions.

Two independent routes: quadrature against the closed-form kernels, and an
exact oracle that expands in the orthogonal monomial basis using
:func:`~bergszego.quadrature.exact_moment`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .core import (
    EvalPoint,
    MonomialTerm,
    MultiIndex,
    PolyObservable,
    as_point,
    eval_poly,
    eval_poly_array,
)
from .kernels import DOMAIN_KERNELS, kernel_array
from .quadrature import (
    DEFAULT_RESOLUTION,
    QuadratureError,
    Resolution,
    exact_moment,
    integrate,
    make_rule,
)

BOUNDARY = {"disc": "circle", "ball2": "sphere3"}
INTERIOR = {"disc": "disc", "ball2": "ball4"}
DIMENSION = {"disc": 1, "ball2": 2}
MAX_NORM = 0.95


@dataclass(frozen=True)
class ProjectionResult:
    value: Union[complex, PolyObservable]
    method: str
    resolution: Resolution | None = None

    def at(self, z) -> complex:
        """Numeric value at ``z`` (oracle results are polynomials in z)."""
        if isinstance(self.value, PolyObservable):
            return eval_poly(self.value, z)
        return self.value


def _check_domain(domain: str, f: PolyObservable) -> None:
    if domain not in DIMENSION:
        raise ValueError(f"unknown domain {domain!r}; expected 'disc' or 'ball2'")
    if f.dimension != DIMENSION[domain]:
        raise ValueError(f"polynomial of dimension {f.dimension} on {domain}")


def check_point(domain: str, z, max_norm: float = MAX_NORM) -> EvalPoint:
    z = as_point(z, "interior")
    if z.dim != DIMENSION[domain]:
        raise ValueError(f"point of dimension {z.dim} on {domain}")
    if z.norm > max_norm:
        raise ValueError(f"|z| = {z.norm:.6g} exceeds {max_norm}")
    return z


def _apply(kind: int, domain: str, f: PolyObservable, z, r, workers) -> ProjectionResult:
    _check_domain(domain, f)
    z = check_point(domain, z)
    qdomain = (BOUNDARY if kind == 0 else INTERIOR)[domain]
    r = r or DEFAULT_RESOLUTION[qdomain]
    rule = make_rule(qdomain, r)
    try:
        rule.check_mass()
    except QuadratureError as exc:
        raise QuadratureError(f"resolution {r} too small: {exc}") from exc
    kid = DOMAIN_KERNELS[domain][kind]

    def integrand(*coords):
        return eval_poly_array(f, coords) * kernel_array(kid, z, coords)

    return ProjectionResult(integrate(rule, integrand, workers), "quadrature", r)


def szego_apply(domain: str, f: PolyObservable, z, r: Resolution | None = None, workers: int = 1):
    """Boundary integral of ``f * S(z, .)`` by quadrature."""
    return _apply(0, domain, f, z, r, workers)


def bergman_apply(domain: str, f: PolyObservable, z, r: Resolution | None = None, workers: int = 1):
    """Interior integral of ``f * K(z, .)`` by quadrature."""
    return _apply(1, domain, f, z, r, workers)


def _oracle(qdomain: str, f: PolyObservable) -> PolyObservable:
    n = f.dimension
    zero = MultiIndex.zero(n)
    out = []
    for t in f.terms:
        if not t.holo.dominates(t.anti):
            continue
        gamma = t.holo - t.anti
        # <zeta^a conj(zeta)^b, zeta^g> / <zeta^g, zeta^g>, nonzero only for a = b + g
        ratio = exact_moment(qdomain, t.holo, t.holo) / exact_moment(qdomain, gamma, gamma)
        if ratio.pi_power != 0:
            raise AssertionError("moment ratio is not rational")
        out.append(MonomialTerm(t.coeff * ratio.coeff, gamma, zero))
    return PolyObservable(n, tuple(out))


def szego_oracle(domain: str, f: PolyObservable) -> ProjectionResult:
    """Exact Szegő projection as a holomorphic polynomial in z."""
    _check_domain(domain, f)
    return ProjectionResult(_oracle(BOUNDARY[domain], f), "oracle")


def bergman_oracle(domain: str, f: PolyObservable) -> ProjectionResult:
    """Exact Bergman projection as a holomorphic polynomial in z."""
    _check_domain(domain, f)
    return ProjectionResult(_oracle(INTERIOR[domain], f), "oracle")
