"""Recursive-descent parser for factored rational expressions.

Grammar (whitespace is ignored between tokens)::

    expr   := factor (('*' | '/') factor)*
    factor := scalar
            | 'z' ('^' int)?
            | '(' 'z' ('-' | '+') scalar ')' ('^' int)?
            | '(' scalar '-' 'z' ')' ('^' int)?
    scalar := term (('+' | '-') term)*          leading sign optional
    term   := rat? 'i'? ('*'? 't')?             at least one part present
    rat    := digits ('/' digits)?

``z`` alone means ``(z - 0)^1``. The parameter ``t`` is only legal when a
value for it is supplied; scalars are then affine in ``t``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ExpressionSyntaxError
from .gaussian import ZERO, GaussianRational
from .rational import FactoredRational


class _Parser:
    def __init__(self, text: str, t: Fraction | GaussianRational | None = None):
        self.text = text
        self.pos = 0
        self.t = None if t is None else GaussianRational.coerce(t)

    def error(self, message: str, pos: int | None = None):
        raise ExpressionSyntaxError(message, self.text, self.pos if pos is None else pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def peek_after(self, offset: int) -> str:
        """Next non-space character after skipping ``offset`` characters."""
        j = self.pos + offset
        while j < len(self.text) and self.text[j].isspace():
            j += 1
        return self.text[j] if j < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def at_end(self) -> bool:
        return self.peek() == ""

    # scalars

    def digits(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("malformed scalar: expected digits")
        return int(self.text[start:self.pos])

    def rat(self) -> Fraction:
        num = self.digits()
        if self.peek() == "/" and self.peek_after(1).isdigit():
            self.pos += 1
            den = self.digits()
            if den == 0:
                self.error("malformed scalar: zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def term(self) -> GaussianRational:
        start = self.pos
        coeff = Fraction(1)
        have = False
        if self.peek().isdigit():
            coeff = self.rat()
            have = True
        value = GaussianRational(coeff)
        if self.peek() == "i":
            self.pos += 1
            value = GaussianRational(0, coeff)
            have = True
        if self.peek() == "*" and self.peek_after(1) == "t":
            if not have:
                self.error("malformed scalar")
            self.skip_ws()
            self.pos += 1
        if self.peek() == "t":
            if self.t is None:
                self.error("parameter 't' is not allowed here")
            self.pos += 1
            value = value * self.t
            have = True
        if not have:
            self.error("malformed scalar", start)
        return value

    def starts_term(self, ch: str) -> bool:
        return ch.isdigit() or ch == "i" or (ch == "t" and self.t is not None)

    def scalar(self) -> GaussianRational:
        total = ZERO
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        total = self.term() * sign
        while self.peek() in ("+", "-") and self.starts_term(self.peek_after(1)):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
            total = total + self.term() * sign
        return total

    # factors

    def exponent(self) -> int:
        if self.peek() != "^":
            return 1
        self.pos += 1
        paren = self.peek() == "("
        if paren:
            self.pos += 1
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        n = sign * self.digits()
        if paren:
            self.expect(")")
        return n

    def factor(self) -> FactoredRational:
        ch = self.peek()
        if ch == "z":
            self.pos += 1
            return FactoredRational(1, {ZERO: 1}) ** self.exponent()
        if ch == "(":
            open_pos = self.pos
            self.pos += 1
            if self.peek() == "z":
                self.pos += 1
                op = self.peek()
                if op not in ("-", "+"):
                    self.error("expected '-' after 'z'")
                self.pos += 1
                a = self.scalar()
                root = a if op == "-" else -a
                self.expect(")")
                return FactoredRational(1, {root: 1}) ** self.exponent()
            if self.peek().isdigit() or self.peek() in ("i", "+", "-", "t"):
                a = self.scalar()
                self.expect("-")
                self.expect("z")
                self.expect(")")
                # (a - z) = -(z - a)
                return FactoredRational(-1, {a: 1}) ** self.exponent()
            self.error("expected 'z' or scalar after '('", open_pos + 1)
        if ch and (ch in "+-" or self.starts_term(ch)):
            start = self.pos
            value = self.scalar()
            if not value:
                self.error("zero unit", start)
            return FactoredRational(value)
        self.error(f"unexpected {ch!r}" if ch else "unexpected end of input")

    def expr(self) -> FactoredRational:
        result = self.factor()
        while self.peek() in ("*", "/") and self.peek():
            op = self.peek()
            self.pos += 1
            rhs = self.factor()
            result = result * rhs if op == "*" else result / rhs
        if not self.at_end():
            self.error(f"unexpected {self.peek()!r}")
        return result


def parse_rational(text: str, t=None) -> FactoredRational:
    """Parse a factored rational expression such as ``"2*(z-1)^2/(z-i)"``.

    ``t`` gives the value of the family parameter when the text uses it.
    """
    if not text or not text.strip():
        raise ExpressionSyntaxError("empty expression", text, 0)
    return _Parser(text, t).expr()


def parse_scalar(text: str, t=None) -> GaussianRational:
    """Parse a single Gaussian-rational literal (optionally affine in ``t``)."""
    p = _Parser(str(text), t)
    if p.at_end():
        p.error("empty scalar")
    value = p.scalar()
    if not p.at_end():
        p.error(f"unexpected {p.peek()!r}")
    return value


def parse_real(text: str, t=None) -> Fraction:
    value = parse_scalar(text, t)
    if not value.is_real():
        raise ExpressionSyntaxError(f"expected a real rational, got {value}", str(text), 0)
    return value.re


__all__ = ["parse_rational", "parse_scalar", "parse_real"]
