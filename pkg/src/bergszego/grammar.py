"""Plain-text grammar for polynomial test functions.

    poly    := [sign] term (sign term)*
    term    := coeff [factors] | factors
    coeff   := rational | rational sign rational "i" | rational "i"
    factors := factor (["*"] factor)*          (optional "*" after coeff too)
    factor  := name ["^" integer]
    name    := "z" | "zb"                      (n = 1)
             | "z1" | "z2" | "zb1" | "zb2"     (n = 2)

``zb`` stands for the conjugate variable.  Whitespace is ignored.  The
literal ``0`` parses to the empty polynomial.  ``format_poly`` emits text
that parses back to the identical canonical polynomial.
"""

from __future__ import annotations

from fractions import Fraction

from .core import MonomialTerm, MultiIndex, PolyObservable, RationalComplex, _frac_str


class PolyParseError(ValueError):
    """Raised for malformed polynomial text; ``offset`` is a byte offset into the input."""

    def __init__(self, message: str, text: str, pos: int):
        self.offset = len(text[:pos].encode("utf-8"))
        self.text = text
        super().__init__(f"{message} at byte offset {self.offset}")


class PolySyntaxError(PolyParseError):
    pass


class PolyDimensionError(PolyParseError):
    pass


class NegativeExponentError(PolyParseError):
    pass


_NAMES = {
    1: {"z": ("holo", 0), "zb": ("anti", 0)},
    2: {
        "z1": ("holo", 0),
        "z2": ("holo", 1),
        "zb1": ("anti", 0),
        "zb2": ("anti", 1),
    },
}


class _Parser:
    def __init__(self, text: str, n: int):
        if n not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {n}")
        self.text = text
        self.n = n
        self.pos = 0

    def error(self, cls, msg, pos=None):
        return cls(msg, self.text, self.pos if pos is None else pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error(PolySyntaxError, "expected integer")
        return int(self.text[start : self.pos])

    def rational(self) -> Fraction:
        num = self.integer()
        if self.peek() == "/":
            self.pos += 1
            slash = self.pos
            den = self.integer()
            if den == 0:
                raise self.error(PolySyntaxError, "zero denominator", slash)
            return Fraction(num, den)
        return Fraction(num)

    def coefficient(self) -> RationalComplex:
        re = self.rational()
        if self.peek() == "i":
            self.pos += 1
            return RationalComplex(0, re)
        save = self.pos
        ch = self.peek()
        if ch in "+-":
            self.pos += 1
            if self.peek().isdigit():
                im = self.rational()
                if self.peek() == "i":
                    self.pos += 1
                    return RationalComplex(re, im if ch == "+" else -im)
            self.pos = save
        return RationalComplex(re)

    def factor(self, holo: list[int], anti: list[int]):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalnum():
            self.pos += 1
        name = self.text[start : self.pos]
        if name not in _NAMES[self.n]:
            other = 2 if self.n == 1 else 1
            if name in _NAMES[other]:
                raise self.error(
                    PolyDimensionError, f"variable {name!r} not valid for dimension {self.n}", start
                )
            raise self.error(PolySyntaxError, f"unknown variable {name!r}", start)
        kind, axis = _NAMES[self.n][name]
        exp = 1
        if self.peek() == "^":
            self.pos += 1
            if self.peek() == "-":
                raise self.error(NegativeExponentError, "negative exponent")
            exp = self.integer()
        (holo if kind == "holo" else anti)[axis] += exp

    def term(self, sign: int) -> MonomialTerm:
        coeff = RationalComplex(1)
        holo = [0] * self.n
        anti = [0] * self.n
        seen = False
        if self.peek().isdigit():
            coeff = self.coefficient()
            seen = True
        while True:
            ch = self.peek()
            if ch == "*":
                if not seen:
                    raise self.error(PolySyntaxError, "unexpected '*'")
                self.pos += 1
                if self.peek() != "z":
                    raise self.error(PolySyntaxError, "expected variable after '*'")
                continue
            if ch == "z":
                self.factor(holo, anti)
                seen = True
                continue
            break
        if not seen:
            raise self.error(PolySyntaxError, "expected term")
        return MonomialTerm(coeff * sign, MultiIndex(tuple(holo)), MultiIndex(tuple(anti)))

    def poly(self) -> PolyObservable:
        terms = []
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        terms.append(self.term(sign))
        while True:
            ch = self.peek()
            if ch == "":
                break
            if ch not in "+-":
                raise self.error(PolySyntaxError, f"unexpected character {ch!r}")
            self.pos += 1
            terms.append(self.term(-1 if ch == "-" else 1))
        return PolyObservable(self.n, tuple(terms))


def parse_poly(text: str, n: int) -> PolyObservable:
    """Parse ``text`` into a canonical polynomial of dimension ``n``."""
    return _Parser(text, n).poly()


def _factor_names(n: int):
    if n == 1:
        return ["z"], ["zb"]
    return ["z1", "z2"], ["zb1", "zb2"]


def format_term_factors(term: MonomialTerm) -> str:
    holo_names, anti_names = _factor_names(term.dim)
    parts = [f"{nm}^{e}" for nm, e in zip(holo_names, term.holo) if e]
    parts += [f"{nm}^{e}" for nm, e in zip(anti_names, term.anti) if e]
    return " ".join(parts)


def _split_sign(c: RationalComplex) -> tuple[int, RationalComplex]:
    lead = c.re if c.re != 0 else c.im
    return (-1, -c) if lead < 0 else (1, c)


def _coeff_str(c: RationalComplex) -> str:
    if c.im == 0:
        return _frac_str(c.re)
    if c.re == 0:
        return f"{_frac_str(c.im)} i"
    sign = "+" if c.im > 0 else "-"
    return f"{_frac_str(c.re)}{sign}{_frac_str(abs(c.im))} i"


def format_poly(f: PolyObservable) -> str:
    """Render ``f`` in the parse grammar; the zero polynomial renders as ``0``."""
    if f.is_zero():
        return "0"
    out = []
    for i, t in enumerate(f.terms):
        sign, mag = _split_sign(t.coeff)
        factors = format_term_factors(t)
        if not factors:
            body = _coeff_str(mag)
        elif mag == 1:
            body = factors
        else:
            body = f"{_coeff_str(mag)} * {factors}"
        if i == 0:
            out.append(("-" if sign < 0 else "") + body)
        else:
            out.append((" - " if sign < 0 else " + ") + body)
    return "".join(out)
