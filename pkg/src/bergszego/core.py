"""Exact scalars, monomials and polynomial test functions in zeta and conj(zeta).

Polynomials are kept in canonical form: like terms merged, zero terms
dropped, terms sorted.  Structural equality is therefore value equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

@dataclass(frozen=True)
class RationalComplex:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        # Fraction normalises itself; this only coerces ints.
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value) -> RationalComplex:
        if isinstance(value, RationalComplex):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        raise TypeError(f"cannot convert {type(value).__name__} to RationalComplex exactly")

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> RationalComplex:
        return RationalComplex(self.re, -self.im)

    def __add__(self, other):
        try:
            other = RationalComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return RationalComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return RationalComplex(-self.re, -self.im)

    def __sub__(self, other):
        try:
            other = RationalComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return RationalComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = RationalComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return RationalComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = RationalComplex.coerce(other)
        except TypeError:
            return NotImplemented
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("RationalComplex division by zero")
        num = self * other.conjugate()
        return RationalComplex(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return RationalComplex.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return RationalComplex(1) / (self ** (-n))
        result = RationalComplex(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if not isinstance(other, RationalComplex):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"RationalComplex({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return _frac_str(self.re)
        if self.re == 0:
            return f"{_frac_str(self.im)} i"
        sign = "+" if self.im > 0 else "-"
        return f"{_frac_str(self.re)}{sign}{_frac_str(abs(self.im))} i"


def _frac_str(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


ZERO = RationalComplex(0)
ONE = RationalComplex(1)
I = RationalComplex(0, 1)


@dataclass(frozen=True)
class ExactValue:
    """The number ``coeff * pi**pi_power``; zero is always stored with power 0."""

    coeff: RationalComplex = ZERO
    pi_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", RationalComplex.coerce(self.coeff))
        if self.coeff.is_zero():
            object.__setattr__(self, "pi_power", 0)

    def is_zero(self) -> bool:
        return self.coeff.is_zero()

    def __add__(self, other: ExactValue) -> ExactValue:
        if not isinstance(other, ExactValue):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.pi_power != other.pi_power:
            raise ValueError(
                f"cannot add exact values with pi powers {self.pi_power} and {other.pi_power}"
            )
        return ExactValue(self.coeff + other.coeff, self.pi_power)

    def __neg__(self) -> ExactValue:
        return ExactValue(-self.coeff, self.pi_power)

    def __sub__(self, other: ExactValue) -> ExactValue:
        return self + (-other)

    def __mul__(self, other) -> ExactValue:
        if isinstance(other, ExactValue):
            return ExactValue(self.coeff * other.coeff, self.pi_power + other.pi_power)
        try:
            return ExactValue(self.coeff * other, self.pi_power)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: ExactValue) -> ExactValue:
        if isinstance(other, ExactValue):
            return ExactValue(self.coeff / other.coeff, self.pi_power - other.pi_power)
        return ExactValue(self.coeff / other, self.pi_power)

    def __complex__(self):
        return complex(self.coeff) * math.pi**self.pi_power

    def __str__(self):
        if self.is_zero():
            return "0"
        if self.pi_power == 0:
            return str(self.coeff)
        c = f"({self.coeff})" if not self.coeff.is_real() else str(self.coeff)
        return f"{c}*pi^{self.pi_power}"


@dataclass(frozen=True, order=True)
class MultiIndex:
    degrees: tuple[int, ...]

    def __post_init__(self):
        degs = tuple(int(d) for d in self.degrees)
        if len(degs) not in (1, 2):
            raise ValueError(f"multi-index dimension must be 1 or 2, got {len(degs)}")
        if any(d < 0 for d in degs):
            raise ValueError(f"negative exponent in multi-index {degs}")
        object.__setattr__(self, "degrees", degs)

    @classmethod
    def zero(cls, n: int) -> MultiIndex:
        return cls((0,) * n)

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def total(self) -> int:
        return sum(self.degrees)

    def factorial(self) -> int:
        return math.prod(math.factorial(d) for d in self.degrees)

    def __add__(self, other: MultiIndex) -> MultiIndex:
        _same_dim(self, other)
        return MultiIndex(tuple(a + b for a, b in zip(self.degrees, other.degrees)))

    def __sub__(self, other: MultiIndex) -> MultiIndex:
        # raises ValueError when a component would go negative
        _same_dim(self, other)
        return MultiIndex(tuple(a - b for a, b in zip(self.degrees, other.degrees)))

    def dominates(self, other: MultiIndex) -> bool:
        """True when every component of self is >= the matching one of other."""
        _same_dim(self, other)
        return all(a >= b for a, b in zip(self.degrees, other.degrees))

    def __iter__(self) -> Iterator[int]:
        return iter(self.degrees)

    def __getitem__(self, i: int) -> int:
        return self.degrees[i]


def _same_dim(a: MultiIndex, b: MultiIndex) -> None:
    if a.dim != b.dim:
        raise ValueError(f"multi-index dimension mismatch: {a.dim} vs {b.dim}")


@dataclass(frozen=True)
class MonomialTerm:
    """``coeff * zeta**holo * conj(zeta)**anti``."""

    coeff: RationalComplex
    holo: MultiIndex
    anti: MultiIndex

    def __post_init__(self):
        object.__setattr__(self, "coeff", RationalComplex.coerce(self.coeff))
        if not isinstance(self.holo, MultiIndex):
            object.__setattr__(self, "holo", MultiIndex(tuple(self.holo)))
        if not isinstance(self.anti, MultiIndex):
            object.__setattr__(self, "anti", MultiIndex(tuple(self.anti)))
        _same_dim(self.holo, self.anti)

    @property
    def dim(self) -> int:
        return self.holo.dim

    @property
    def key(self) -> tuple[MultiIndex, MultiIndex]:
        return (self.holo, self.anti)

    @property
    def degree(self) -> int:
        return self.holo.total + self.anti.total


def _sort_key(key: tuple[MultiIndex, MultiIndex]):
    holo, anti = key
    return (holo.total + anti.total, holo.degrees, anti.degrees)


@dataclass(frozen=True)
class PolyObservable:
    """Finite sum of monomials in zeta and conj(zeta), canonical form."""

    dimension: int
    terms: tuple[MonomialTerm, ...] = field(default=())

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.dimension}")
        merged: dict[tuple[MultiIndex, MultiIndex], RationalComplex] = {}
        for t in self.terms:
            if t.dim != self.dimension:
                raise ValueError(
                    f"term of dimension {t.dim} in polynomial of dimension {self.dimension}"
                )
            merged[t.key] = merged.get(t.key, ZERO) + t.coeff
        canon = tuple(
            MonomialTerm(c, h, a)
            for (h, a), c in sorted(merged.items(), key=lambda kv: _sort_key(kv[0]))
            if not c.is_zero()
        )
        object.__setattr__(self, "terms", canon)

    @classmethod
    def from_dict(cls, n: int, coeffs: Mapping) -> PolyObservable:
        """Build from ``{(holo, anti): coeff}`` with tuples or MultiIndex keys."""
        return cls(n, tuple(MonomialTerm(c, h, a) for (h, a), c in coeffs.items()))

    @classmethod
    def monomial(cls, holo: Sequence[int], anti: Sequence[int] | None = None, coeff=1):
        holo = tuple(holo)
        anti = tuple(anti) if anti is not None else (0,) * len(holo)
        return cls(len(holo), (MonomialTerm(coeff, MultiIndex(holo), MultiIndex(anti)),))

    @classmethod
    def constant(cls, n: int, coeff=1) -> PolyObservable:
        return cls.monomial((0,) * n, (0,) * n, coeff)

    @classmethod
    def zero(cls, n: int) -> PolyObservable:
        return cls(n, ())

    def is_zero(self) -> bool:
        return not self.terms

    def is_holomorphic(self) -> bool:
        return all(t.anti.total == 0 for t in self.terms)

    @property
    def degree(self) -> int:
        return max((t.degree for t in self.terms), default=0)

    def coefficient(self, holo: Sequence[int], anti: Sequence[int] | None = None) -> RationalComplex:
        h = MultiIndex(tuple(holo))
        a = MultiIndex(tuple(anti)) if anti is not None else MultiIndex.zero(h.dim)
        for t in self.terms:
            if t.holo == h and t.anti == a:
                return t.coeff
        return ZERO

    def __iter__(self) -> Iterator[MonomialTerm]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: PolyObservable) -> PolyObservable:
        if not isinstance(other, PolyObservable):
            return NotImplemented
        _check_dim(self.dimension, other.dimension)
        return PolyObservable(self.dimension, self.terms + other.terms)

    def __neg__(self) -> PolyObservable:
        return self.scale(-1)

    def __sub__(self, other: PolyObservable) -> PolyObservable:
        return self + (-other)

    def scale(self, c) -> PolyObservable:
        c = RationalComplex.coerce(c)
        return PolyObservable(
            self.dimension, tuple(MonomialTerm(t.coeff * c, t.holo, t.anti) for t in self.terms)
        )

    def __mul__(self, other: PolyObservable) -> PolyObservable:
        if not isinstance(other, PolyObservable):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        _check_dim(self.dimension, other.dimension)
        out = [
            MonomialTerm(s.coeff * t.coeff, s.holo + t.holo, s.anti + t.anti)
            for s in self.terms
            for t in other.terms
        ]
        return PolyObservable(self.dimension, tuple(out))

    def __rmul__(self, other):
        return self.scale(other)

    def __str__(self):
        from .grammar import format_poly

        return format_poly(self)


def _check_dim(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"dimension mismatch: {a} vs {b}")


@dataclass(frozen=True)
class EvalPoint:
    coords: tuple[complex, ...]
    region: str = "interior"

    BOUNDARY_TOL = 1e-14

    def __post_init__(self):
        coords = self.coords
        if isinstance(coords, (int, float, complex)):
            coords = (coords,)
        coords = tuple(complex(c) for c in coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) not in (1, 2):
            raise ValueError(f"point dimension must be 1 or 2, got {len(coords)}")
        norm2 = sum(abs(c) ** 2 for c in coords)
        if self.region == "interior":
            if not norm2 < 1:
                raise ValueError(f"interior point has |z|^2 = {norm2!r} >= 1")
        elif self.region == "boundary":
            if abs(norm2 - 1) > self.BOUNDARY_TOL:
                raise ValueError(f"boundary point has |z|^2 - 1 = {norm2 - 1:.3e}")
        else:
            raise ValueError(f"unknown region {self.region!r}")

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for c in self.coords))


def as_point(z, region: str = "interior") -> EvalPoint:
    if isinstance(z, EvalPoint):
        return z
    if isinstance(z, (int, float, complex, np.number)):
        return EvalPoint((complex(z),), region)
    return EvalPoint(tuple(complex(c) for c in z), region)


def eval_poly(f: PolyObservable, p) -> complex:
    """Evaluate ``f`` at a single point in double precision.

    ``p`` is an EvalPoint or a bare coordinate (scalar for n=1, tuple for n=2).
    """
    coords = p.coords if isinstance(p, EvalPoint) else _raw_coords(p)
    _check_dim(f.dimension, len(coords))
    total = 0j
    for t in f.terms:
        v = complex(t.coeff)
        for zj, a, b in zip(coords, t.holo, t.anti):
            v *= zj**a * zj.conjugate() ** b
        total += v
    return total


def _raw_coords(p) -> tuple[complex, ...]:
    if isinstance(p, (int, float, complex, np.number)):
        return (complex(p),)
    return tuple(complex(c) for c in p)


def int_power(x: np.ndarray, k: int) -> np.ndarray:
    """``x**k`` for a non-negative integer ``k`` by repeated squaring (complex ``**`` is slow)."""
    result = None
    base = x
    while k:
        if k & 1:
            result = base if result is None else result * base
        k >>= 1
        if k:
            base = base * base
    return np.ones_like(x) if result is None else result


def eval_poly_array(f: PolyObservable, coords: Sequence[np.ndarray]) -> np.ndarray:
    """Vectorised evaluation; ``coords[j]`` holds the j-th coordinate of every node."""
    _check_dim(f.dimension, len(coords))
    coords = [np.asarray(c, dtype=complex) for c in coords]
    conj = [np.conj(c) for c in coords]
    cache: dict[tuple[int, bool, int], np.ndarray] = {}

    def power(j, anti, k):
        key = (j, anti, k)
        if key not in cache:
            cache[key] = int_power(conj[j] if anti else coords[j], k)
        return cache[key]

    out = np.zeros(np.shape(coords[0]), dtype=complex)
    for t in f.terms:
        v = None
        for j, (a, b) in enumerate(zip(t.holo, t.anti)):
            for anti, k in ((False, a), (True, b)):
                if k:
                    v = power(j, anti, k) if v is None else v * power(j, anti, k)
        c = complex(t.coeff)
        out = out + (c if v is None else c * v)
    return out


def differentiate(f: PolyObservable, which: str, axis: int) -> PolyObservable:
    """Wirtinger derivative d/dzeta_axis (``which='holo'``) or d/dconj(zeta)_axis (``'anti'``).

    ``axis`` is 1-based, as in ``z1``/``z2``.
    """
    if which not in ("holo", "anti"):
        raise ValueError(f"which must be 'holo' or 'anti', got {which!r}")
    if not 1 <= axis <= f.dimension:
        raise ValueError(f"axis {axis} out of range for dimension {f.dimension}")
    j = axis - 1
    out = []
    for t in f.terms:
        idx = t.holo if which == "holo" else t.anti
        k = idx[j]
        if k == 0:
            continue
        lowered = MultiIndex(tuple(d - 1 if i == j else d for i, d in enumerate(idx)))
        if which == "holo":
            out.append(MonomialTerm(t.coeff * k, lowered, t.anti))
        else:
            out.append(MonomialTerm(t.coeff * k, t.holo, lowered))
    return PolyObservable(f.dimension, tuple(out))


def multiply_coordinate(f: PolyObservable, which: str, axis: int) -> PolyObservable:
    """Multiply by zeta_axis (``'holo'``) or conj(zeta_axis) (``'anti'``)."""
    n = f.dimension
    unit = tuple(1 if i == axis - 1 else 0 for i in range(n))
    zero = (0,) * n
    if which == "holo":
        return f * PolyObservable.monomial(unit, zero)
    return f * PolyObservable.monomial(zero, unit)


def monomials(n: int, max_degree: int) -> Iterable[MultiIndex]:
    """All multi-indices of dimension ``n`` with total degree <= ``max_degree``."""
    if n == 1:
        for k in range(max_degree + 1):
            yield MultiIndex((k,))
    else:
        for total in range(max_degree + 1):
            for a in range(total, -1, -1):
                yield MultiIndex((a, total - a))
