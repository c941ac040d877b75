"""Stokes-theorem term decompositions of the Szegő integral on the disc and ball.

Each decomposition is a :class:`TermSchedule`: a list of interior integrals

    scalar * INT extra(f)(zeta) / (1 - <z, zeta>)**p  (wedge of dzeta, dzetabar)

with a sign in the final grouped sum.  Wedge products are converted to
Lebesgue measure by one fixed rule, dzb_j ^ dz_j = 2i dA_j per variable, with
other orderings picking up the sign of the permutation.  The constants are
stored exactly as printed in the source calculation; nothing here assumes the
grouped sum equals the Szegő side.  The defect is measured.

Two evaluation paths share the schedules: quadrature (``disc_terms``,
``ball_terms``) and exact Neumann expansion with exact moments
(``disc_terms_exact``, ``ball_terms_exact``).
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .core import (
    ExactValue,
    MonomialTerm,
    MultiIndex,
    PolyObservable,
    RationalComplex,
    differentiate,
    eval_poly_array,
    int_power,
    monomials,
)
from .kernels import DOMAIN_KERNELS, kernel_spec
from .projections import (
    BOUNDARY,
    DIMENSION,
    INTERIOR,
    bergman_apply,
    bergman_oracle,
    check_point,
    szego_apply,
    szego_oracle,
)
from .quadrature import DEFAULT_RESOLUTION, Resolution, exact_moment, integrate, make_rule

# dzb1 ^ dz1 ^ dzb2 ^ dz2 = (2i)^2 dV
CANONICAL_WEDGE = ("zb1", "z1", "zb2", "z2")


def wedge_sign(wedge: tuple[str, ...]) -> int:
    """Sign of ``wedge`` relative to the canonical ordering restricted to its variables."""
    order = [v for v in CANONICAL_WEDGE if v in wedge]
    if sorted(order) != sorted(wedge) or len(set(wedge)) != len(wedge):
        raise ValueError(f"wedge {wedge} is not a top-degree form")
    perm = [order.index(v) for v in wedge]
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class Term:
    """One interior integral of a schedule.

    ``extra`` is one of ``("one",)``, ``("pairing",)`` for <z, zeta>,
    ``("pair", j)`` for z_j conj(zeta_j), ``("holo", j)`` for
    zeta_j df/dzeta_j, ``("anti", j)`` for conj(zeta_j) df/dconj(zeta_j).
    """

    label: str
    scalar: ExactValue
    exponent: int
    extra: tuple
    wedge: tuple[str, ...]
    group_sign: int = 1

    @property
    def orientation(self) -> int:
        return wedge_sign(self.wedge)

    def lebesgue_factor(self) -> ExactValue:
        """Constant multiplying the Lebesgue integral once the wedge is converted."""
        n = len(self.wedge) // 2
        return self.scalar * (RationalComplex(0, 2) ** n) * self.orientation

    def integrand_poly(self, f: PolyObservable) -> PolyObservable:
        kind = self.extra[0]
        if kind in ("one", "pairing", "pair"):
            return f
        j = self.extra[1]
        n = f.dimension
        unit = tuple(1 if i == j - 1 else 0 for i in range(n))
        zero = (0,) * n
        if kind == "holo":
            return differentiate(f, "holo", j) * PolyObservable.monomial(unit, zero)
        if kind == "anti":
            return differentiate(f, "anti", j) * PolyObservable.monomial(zero, unit)
        raise ValueError(f"unknown extra factor {self.extra!r}")


@dataclass(frozen=True)
class TermSchedule:
    name: str
    domain: str
    terms: tuple[Term, ...]

    def __post_init__(self):
        labels = [t.label for t in self.terms]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in schedule {self.name}")

    def __iter__(self):
        return iter(self.terms)


def _inv_pi(num, den=1, imag=False, power=1) -> ExactValue:
    q = Fraction(num, den)
    c = RationalComplex(0, q) if imag else RationalComplex(q)
    return ExactValue(c, -power)


# 1/(4 pi i) = -i/(4 pi)
_Q = _inv_pi(-1, 4, imag=True)

DISC_SCHEDULE = TermSchedule(
    "disc A-B+C+D",
    "disc",
    (
        Term("A", _inv_pi(-1, 2, imag=True), 2, ("one",), ("zb1", "z1"), +1),
        Term("B", _Q, 1, ("holo", 1), ("z1", "zb1"), -1),
        Term("C", _Q, 2, ("pairing",), ("z1", "zb1"), +1),
        Term("D", _Q, 1, ("anti", 1), ("zb1", "z1"), +1),
    ),
)

_BALL_1_32 = _inv_pi(1, 32, power=2)

BALL_SCHEDULE = TermSchedule(
    "ball -A+B+C-D+E-F",
    "ball2",
    (
        Term("A", _inv_pi(1, 8, power=2), 3, ("one",), ("zb1", "z1", "zb2", "z2"), -1),
        Term("B", _inv_pi(3, 16, power=2), 3, ("pairing",), ("zb1", "z1", "zb2", "z2"), +1),
        Term("C", _BALL_1_32, 2, ("holo", 1), ("z1", "z2", "zb1", "zb2"), +1),
        Term("D", _BALL_1_32, 2, ("holo", 2), ("z2", "z1", "zb1", "zb2"), -1),
        Term("E", _BALL_1_32, 2, ("anti", 1), ("zb1", "zb2", "z1", "z2"), +1),
        Term("F", _BALL_1_32, 2, ("anti", 2), ("zb2", "zb1", "z1", "z2"), -1),
    ),
)

# The ten integrals before grouping, in printed order.  Term "7" carries the
# factor 2 z1 conj(zeta_1) and term "10" 2 z2 conj(zeta_2) with kernel power 3.
_W12 = ("z1", "z2", "zb1", "zb2")
_W21 = ("z2", "z1", "zb1", "zb2")
_WB12 = ("zb1", "zb2", "z1", "z2")
_WB21 = ("zb2", "zb1", "z1", "z2")
_BALL_2_32 = _inv_pi(2, 32, power=2)

BALL_EXPANDED_SCHEDULE = TermSchedule(
    "ball ungrouped",
    "ball2",
    (
        Term("1", _BALL_1_32, 2, ("holo", 1), _W12, +1),
        Term("2", _BALL_1_32, 2, ("one",), _W12, +1),
        Term("3", _BALL_1_32, 2, ("holo", 2), _W21, -1),
        Term("4", _BALL_1_32, 2, ("one",), _W21, -1),
        Term("5", _BALL_1_32, 2, ("anti", 1), _WB12, +1),
        Term("6", _BALL_1_32, 2, ("one",), _WB12, +1),
        Term("7", _BALL_2_32, 3, ("pair", 1), _WB12, +1),
        Term("8", _BALL_1_32, 2, ("anti", 2), _WB21, -1),
        Term("9", _BALL_1_32, 2, ("one",), _WB21, -1),
        Term("10", _BALL_2_32, 3, ("pair", 2), _WB21, -1),
    ),
)


Value = Union[complex, PolyObservable]


@dataclass
class DecompositionReport:
    domain: str
    f: PolyObservable
    z: object
    szego_side: Value
    terms: dict[str, Value]
    group_signs: dict[str, int]
    bergman_term: Value
    extras: dict[str, Value] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return isinstance(self.szego_side, PolyObservable)

    @property
    def term_sum(self) -> Value:
        vals = [self.group_signs[k] * v if not self.exact else v.scale(self.group_signs[k]) for k, v in self.terms.items()]
        if self.exact:
            out = PolyObservable.zero(self.f.dimension)
            for v in vals:
                out = out + v
            return out
        return sum(vals, 0j)

    @property
    def stokes_gap(self) -> Value:
        """Szegő side minus the signed term sum."""
        return self.szego_side - self.term_sum

    @property
    def stokes_defect(self) -> Union[float, PolyObservable]:
        gap = self.stokes_gap
        return gap if self.exact else abs(gap)

    @property
    def residual(self) -> Value:
        return self.szego_side - self.bergman_term


# numeric path


def _term_integrand(term: Term, f: PolyObservable, z):
    g = term.integrand_poly(f)
    p = term.exponent
    kind = term.extra[0]

    def integrand(*coords):
        w = sum(zj * np.conj(c) for zj, c in zip(z.coords, coords))
        vals = eval_poly_array(g, coords) * int_power(1 / (1 - w), p)
        if kind == "pairing":
            vals = vals * w
        elif kind == "pair":
            j = term.extra[1] - 1
            vals = vals * z.coords[j] * np.conj(coords[j])
        return vals

    return integrand


def schedule_values(schedule: TermSchedule, f: PolyObservable, z, r: Resolution | None = None, workers: int = 1) -> dict[str, complex]:
    qdomain = INTERIOR[schedule.domain]
    rule = make_rule(qdomain, r or DEFAULT_RESOLUTION[qdomain])
    out = {}
    for term in schedule:
        integral = integrate(rule, _term_integrand(term, f, z), workers)
        out[term.label] = complex(term.lebesgue_factor()) * integral
    return out


def _numeric_report(schedule, f, z, r_boundary, r_interior, workers, max_norm):
    domain = schedule.domain
    if f.dimension != DIMENSION[domain]:
        raise ValueError(f"polynomial of dimension {f.dimension} on {domain}")
    z = check_point(domain, z, max_norm)
    terms = schedule_values(schedule, f, z, r_interior, workers)
    return DecompositionReport(
        domain=domain,
        f=f,
        z=z,
        szego_side=szego_apply(domain, f, z, r_boundary, workers).value,
        terms=terms,
        group_signs={t.label: t.group_sign for t in schedule},
        bergman_term=bergman_apply(domain, f, z, r_interior, workers).value,
    )


def disc_terms(f: PolyObservable, z, r: Resolution | None = None, workers: int = 1) -> DecompositionReport:
    """Quadrature values of A, B, C, D with the Szegő and Bergman sides."""
    r_b = Resolution(r.n_theta, 2) if r else None
    return _numeric_report(DISC_SCHEDULE, f, z, r_b, r, workers, 0.95)


def ball_terms(f: PolyObservable, z, r: Resolution | None = None, workers: int = 1) -> DecompositionReport:
    """Quadrature values of the six grouped ball integrals, plus diagnostics.

    ``extras`` holds the ungrouped ten-term sum and the boundary integral of
    ``f * S`` against the 3-form the ten terms were derived from.
    """
    from .boundary_form import form_integral

    report = _numeric_report(BALL_SCHEDULE, f, z, r, r, workers, 0.9)
    z = report.z
    expanded = schedule_values(BALL_EXPANDED_SCHEDULE, f, z, r, workers)
    s_id = DOMAIN_KERNELS["ball2"][0]
    spec = kernel_spec(s_id)

    def g(a, b):
        w = z.coords[0] * np.conj(a) + z.coords[1] * np.conj(b)
        return eval_poly_array(f, (a, b)) * spec.constant_float * int_power(1 / (1 - w), spec.exponent)

    form_side = form_integral(g, r, workers)
    expanded_sum = sum(t.group_sign * expanded[t.label] for t in BALL_EXPANDED_SCHEDULE)
    report.extras.update(
        {
            "expanded_sum": expanded_sum,
            "form_side": form_side,
            "form_defect": abs(form_side - expanded_sum),
            "grouping_gap": abs(expanded_sum - report.term_sum),
        }
    )
    return report


# exact path


def _neumann(p: int, n: int, order: int):
    """Terms ``(c, gamma)`` of (1 - <z, zeta>)^{-p} = sum c z^gamma conj(zeta)^gamma up to |gamma| = order."""
    for gamma in monomials(n, order):
        j = gamma.total
        multinom = math.factorial(j) // gamma.factorial()
        yield math.comb(j + p - 1, p - 1) * multinom, gamma


def _integrate_exact(
    qdomain: str, g: PolyObservable, p: int, extra: tuple, order: int
) -> dict[MultiIndex, ExactValue]:
    """Exact integral of g * extra / (1 - <z, zeta>)^p as coefficients of z^gamma."""
    n = g.dimension
    zero = MultiIndex.zero(n)
    # mixed monomials: (z exponent, zeta exponent, conj zeta exponent) -> coeff
    mixed: dict[tuple, RationalComplex] = defaultdict(RationalComplex)
    for t in g.terms:
        if extra[0] == "pairing":
            for j in range(n):
                e = MultiIndex(tuple(1 if i == j else 0 for i in range(n)))
                mixed[(e, t.holo, t.anti + e)] += t.coeff
        elif extra[0] == "pair":
            e = MultiIndex(tuple(1 if i == extra[1] - 1 else 0 for i in range(n)))
            mixed[(e, t.holo, t.anti + e)] += t.coeff
        else:
            mixed[(zero, t.holo, t.anti)] += t.coeff
    out: dict[MultiIndex, ExactValue] = defaultdict(ExactValue)
    for (ze, a, b), c in mixed.items():
        for k, gamma in _neumann(p, n, order):
            m = exact_moment(qdomain, a, b + gamma)
            if m.is_zero():
                continue
            out[ze + gamma] = out[ze + gamma] + m * (c * k)
    return out


def _to_poly(n: int, coeffs: dict[MultiIndex, ExactValue], scale: ExactValue) -> PolyObservable:
    zero = MultiIndex.zero(n)
    terms = []
    for gamma, v in coeffs.items():
        v = v * scale
        if v.is_zero():
            continue
        if v.pi_power != 0:
            raise ArithmeticError(f"exact term has leftover pi^{v.pi_power}")
        terms.append(MonomialTerm(v.coeff, gamma, zero))
    return PolyObservable(n, tuple(terms))


def truncation_order(f: PolyObservable, p: int) -> int:
    """Neumann order beyond which every moment vanishes."""
    return f.degree + p + 1


def exact_schedule_values(schedule: TermSchedule, f: PolyObservable) -> dict[str, PolyObservable]:
    qdomain = INTERIOR[schedule.domain]
    out = {}
    for term in schedule:
        g = term.integrand_poly(f)
        coeffs = _integrate_exact(qdomain, g, term.exponent, term.extra, truncation_order(f, term.exponent))
        out[term.label] = _to_poly(f.dimension, coeffs, term.lebesgue_factor())
    return out


def exact_projection(domain: str, kind: int, f: PolyObservable) -> PolyObservable:
    """Kernel integral of ``f`` by Neumann expansion (kind 0: Szegő, 1: Bergman)."""
    qdomain = (BOUNDARY if kind == 0 else INTERIOR)[domain]
    spec = kernel_spec(DOMAIN_KERNELS[domain][kind])
    coeffs = _integrate_exact(qdomain, f, spec.exponent, ("one",), truncation_order(f, spec.exponent))
    return _to_poly(f.dimension, coeffs, spec.constant)


def _exact_report(schedule: TermSchedule, f: PolyObservable) -> DecompositionReport:
    domain = schedule.domain
    if f.dimension != DIMENSION[domain]:
        raise ValueError(f"polynomial of dimension {f.dimension} on {domain}")
    return DecompositionReport(
        domain=domain,
        f=f,
        z=None,
        szego_side=exact_projection(domain, 0, f),
        terms=exact_schedule_values(schedule, f),
        group_signs={t.label: t.group_sign for t in schedule},
        bergman_term=exact_projection(domain, 1, f),
    )


def disc_terms_exact(f: PolyObservable) -> DecompositionReport:
    """Exact A, B, C, D as polynomials in a formal z."""
    return _exact_report(DISC_SCHEDULE, f)


def ball_terms_exact(f: PolyObservable) -> DecompositionReport:
    """Exact six grouped ball terms; ``extras['expanded_sum']`` holds the ungrouped sum."""
    report = _exact_report(BALL_SCHEDULE, f)
    expanded = exact_schedule_values(BALL_EXPANDED_SCHEDULE, f)
    total = PolyObservable.zero(f.dimension)
    for t in BALL_EXPANDED_SCHEDULE:
        total = total + expanded[t.label].scale(t.group_sign)
    report.extras["expanded_sum"] = total
    return report


@dataclass(frozen=True)
class ResidualRow:
    holo: MultiIndex
    anti: MultiIndex
    residual: PolyObservable

    @property
    def deviates(self) -> bool:
        """Nonzero residual: the Szegő and Bergman projections differ on this monomial."""
        return not self.residual.is_zero()


def residual_table(domain: str, kmax: int, mmax: int) -> list[ResidualRow]:
    """Exact Szegő-minus-Bergman residual for every monomial up to the given degrees.

    Disc rows are zeta^k conj(zeta)^m for k <= kmax, m <= mmax.  Ball rows run
    over multi-indices with |alpha| <= kmax and |beta| <= mmax.  Rows are in
    lexicographic order of (alpha, beta).
    """
    if kmax > 8 or mmax > 8 or kmax < 0 or mmax < 0:
        raise ValueError("kmax and mmax must lie in 0..8")
    n = DIMENSION[domain]
    alphas = sorted(monomials(n, kmax), key=lambda m: m.degrees)
    betas = sorted(monomials(n, mmax), key=lambda m: m.degrees)
    rows = []
    for a in alphas:
        for b in betas:
            f = PolyObservable(n, (MonomialTerm(1, a, b),))
            res = szego_oracle(domain, f).value - bergman_oracle(domain, f).value
            rows.append(ResidualRow(a, b, res))
    return rows
