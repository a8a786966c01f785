"""Homogeneous cubic polynomials with integer coefficients.

Grammar (whitespace insignificant)::

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := [int ['*']] ( '(' expr ')' | monomial )
    monomial := factor ('*'? factor)*
    factor   := 'x' ['_'] index ['^' index]
    index    := int | '{' int '}'

A bare integer term is only accepted when it is 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Tuple

Exponents = Tuple[int, ...]


class CubicParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


@dataclass(frozen=True)
class CubicPolynomial:
    """Cubic form in x_1..x_m; ``terms`` maps exponent vectors to coefficients."""

    m: int
    terms: Mapping[Exponents, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: Dict[Exponents, int] = {}
        for exps, c in self.terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.m:
                raise ValueError(f"exponent vector {exps} does not have length {self.m}")
            if sum(exps) != 3 or min(exps, default=0) < 0:
                raise ValueError(f"monomial {exps} is not of degree 3")
            if c:
                clean[exps] = int(c)
        object.__setattr__(self, "terms", dict(sorted(clean.items(), reverse=True)))

    def evaluate(self, x) -> int:
        total = 0
        for exps, c in self.terms.items():
            t = c
            for xi, e in zip(x, exps):
                if e:
                    t *= int(xi) ** e
            total += t
        return total

    def __str__(self) -> str:
        return format_cubic(self)


def monomial_str(exps: Exponents) -> str:
    parts = []
    for i, e in enumerate(exps, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def format_cubic(f: CubicPolynomial) -> str:
    """Canonical text: lexicographically descending monomials, ``c*x1^2*x2`` style."""
    if not f.terms:
        return "0"
    out: List[str] = []
    for exps, c in f.terms.items():
        mono = monomial_str(exps)
        body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


class _Parser:
    def __init__(self, text: str, m: int):
        self.text = text
        self.m = m
        self.pos = 0

    def error(self, msg: str, pos: int | None = None) -> CubicParseError:
        return CubicParseError(msg, self.pos if pos is None else pos, self.text)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected integer")
        return int(self.text[start:self.pos])

    def index(self) -> int:
        if self.eat("{"):
            v = self.integer()
            if not self.eat("}"):
                raise self.error("expected '}'")
            return v
        return self.integer()

    # expr returns a flat list of (exponents, coefficient) in source order
    def expr(self) -> List[Tuple[Exponents, int]]:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        out = [(e, sign * c) for e, c in self.term()]
        while self.peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
            out.extend((e, sign * c) for e, c in self.term())
        return out

    def term(self) -> List[Tuple[Exponents, int]]:
        start = self.pos
        coeff = None
        if self.peek().isdigit():
            coeff = self.integer()
            self.eat("*")
        ch = self.peek()
        scale = 1 if coeff is None else coeff
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if not self.eat(")"):
                raise self.error("expected ')'")
            return [(e, scale * c) for e, c in inner]
        if ch == "x":
            return [(self.monomial(), scale)]
        if coeff is None:
            raise self.error("expected term" if ch else "unexpected end of input")
        if coeff != 0:
            raise self.error("monomial of degree 0 (expected degree 3)", start)
        return []

    def monomial(self) -> Exponents:
        self.skip()
        start = self.pos
        exps = [0] * self.m
        while True:
            self.factor(exps)
            save = self.pos
            if self.eat("*"):
                if self.peek() != "x":
                    raise self.error("expected factor after '*'")
                continue
            if self.peek() == "x":
                continue
            self.pos = save
            break
        deg = sum(exps)
        if deg != 3:
            raise self.error(f"monomial of degree {deg} (expected degree 3)", start)
        return tuple(exps)

    def factor(self, exps: List[int]) -> None:
        self.skip()
        start = self.pos
        if not self.eat("x"):
            raise self.error("expected variable 'x'")
        self.eat("_")
        i = self.index()
        if i < 1 or i > self.m:
            raise self.error(f"variable index {i} outside 1..{self.m}", start)
        power = 1
        if self.eat("^"):
            power = self.index()
        exps[i - 1] += power

    def parse(self) -> List[Tuple[Exponents, int]]:
        if not self.text.strip():
            raise self.error("empty input")
        out = self.expr()
        self.skip()
        if self.pos != len(self.text):
            raise self.error(f"unexpected character {self.text[self.pos]!r}")
        return out


def parse_cubic_terms(text: str, m: int) -> List[Tuple[Exponents, int]]:
    """Signed monomials in source order, scalars distributed, nothing combined."""
    return _Parser(text, m).parse()


def parse_cubic(text: str, m: int) -> CubicPolynomial:
    terms: Dict[Exponents, int] = {}
    for exps, c in parse_cubic_terms(text, m):
        terms[exps] = terms.get(exps, 0) + c
    return CubicPolynomial(m, terms)


def repeated_monomials(text: str, m: int) -> List[Exponents]:
    """Monomials that are written more than once in ``text``."""
    seen: Dict[Exponents, int] = {}
    for exps, _ in parse_cubic_terms(text, m):
        seen[exps] = seen.get(exps, 0) + 1
    return [e for e, n in seen.items() if n > 1]


def parse_cubic_deduplicated(text: str, m: int) -> CubicPolynomial:
    """Read ``text`` counting each written monomial once (first occurrence wins)."""
    terms: Dict[Exponents, int] = {}
    for exps, c in parse_cubic_terms(text, m):
        terms.setdefault(exps, c)
    return CubicPolynomial(m, terms)


def max_variable_index(text: str) -> int:
    """Largest variable index mentioned in ``text`` (for inferring m)."""
    found = [int(g) for g in re.findall(r"x_?\{?(\d+)", text)]
    return max(found, default=0)
