"""Text syntax for polynomials and mixed functions.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*        # "/" only by a constant
    unary  := ("+" | "-") unary | power
    power  := atom (("^" | "**") INT)?
    atom   := NUMBER | NAME | "conj" "(" expr ")" | "(" expr ")"

Numbers may be integers or decimals (``0.25`` is read exactly as 1/4).
In mixed mode the name ``I`` is the imaginary unit.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .poly import MixedFunction, Polynomial

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    """Malformed polynomial text; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, text: str, pos: int):
        self.message = message
        self.text = text
        self.pos = pos
        caret = " " * pos + "^"
        super().__init__(f"{message} at position {pos}\n  {text}\n  {caret}")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, atom_factory, const_factory, conj=None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.atom = atom_factory
        self.const = const_factory
        self.conj = conj

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def expect(self, value):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != value:
            self.error(f"expected {value!r}")
        return self.take()

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op_tok = self.take()
            rhs_tok = self.peek()
            rhs = self.unary()
            if op_tok[1] == "*":
                value = value * rhs
            else:
                c = self._constant_of(rhs)
                if c is None:
                    self.error("division only by a nonzero constant", rhs_tok)
                value = value * c
        return value

    def _constant_of(self, value):
        if isinstance(value, Polynomial):
            if value.is_constant() and not value.is_zero():
                return Polynomial.const(value.nvars, 1 / value.constant_term())
            return None
        if value.is_constant():
            re_, im = value.constant_value()
            den = re_ * re_ + im * im
            if den == 0:
                return None
            return MixedFunction.const(value.nvars_complex, re_ / den, -im / den)
        return None

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            value = self.unary()
            return -value if tok[1] == "-" else value
        return self.power()

    def power(self):
        base = self.atom_()
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("^", "**"):
            self.take()
            exp_tok = self.take()
            if exp_tok[0] != "num" or not exp_tok[1].isdigit():
                self.error("exponent must be a nonnegative integer", exp_tok)
            return base ** int(exp_tok[1])
        return base

    def atom_(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "num":
            return self.const(Fraction(value))
        if kind == "name":
            if value == "conj":
                if self.conj is None:
                    self.error("conj() is only allowed in mixed expressions", tok)
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return self.conj(inner)
            result = self.atom(value)
            if result is None:
                self.error(f"unknown variable {value!r}", tok)
            return result
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected token {value!r}", tok)


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` as a real polynomial in the named variables."""
    variables = list(variables)
    n = len(variables)
    lookup = {name: i for i, name in enumerate(variables)}

    def atom(name):
        if name in lookup:
            return Polynomial.var(n, lookup[name])
        return None

    return _Parser(text, atom, lambda c: Polynomial.const(n, c)).parse()


def parse_mixed(text: str, cvariables: Sequence[str]) -> MixedFunction:
    """Parse ``text`` as a mixed function of the complex variables and their conjugates."""
    cvariables = list(cvariables)
    n = len(cvariables)
    lookup = {name: i for i, name in enumerate(cvariables)}

    def atom(name):
        if name in lookup:
            return MixedFunction.var(n, lookup[name])
        if name == "I":
            return MixedFunction.const(n, 0, 1)
        return None

    return _Parser(text, atom, lambda c: MixedFunction.const(n, c),
                   conj=lambda f: f.conj()).parse()
