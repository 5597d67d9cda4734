"""Concrete syntax: tokenizer, recursive-descent parser and printer.

    formula := "exists" var "." disj | disj
    disj    := conj ("|" conj)*
    conj    := lit ("&" lit)*
    lit     := "!" lit | "(" formula ")" | "true" | "false" | "sqf" "(" term ")" | atom
    atom    := term "in" ("U[" int "," int "]" | "P[" int "]") | term relop term
    relop   := "=" | "!=" | "<" | ">" | "<=" | ">="
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .core import (FALSE, TRUE, And, EqZero, Exists, Formula, InP, InU, LtZero,
                   Not, Or, Term, Theory, Truth)
from .errors import SqfreeError, TheoryViolation
from .numtheory import is_prime


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def line_col(self, text: str) -> tuple:
        before = text[: self.start]
        line = before.count("\n") + 1
        col = self.start - (before.rfind("\n") + 1) + 1
        return line, col


class ParseError(SqfreeError):
    def __init__(self, message: str, span: SourceSpan, text: str = ""):
        self.span = span
        self.text = text
        self.line, self.column = span.line_col(text)
        super().__init__(f"{message} at line {self.line}, column {self.column}")


class TheoryError(ParseError, TheoryViolation):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<op>!=|<=|>=|[-+*/()\[\],.&|!=<>]))"
)
KEYWORDS = {"exists", "in", "sqf", "true", "false"}


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    span: SourceSpan


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(pos, pos + 1), text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), SourceSpan(start, m.end())))
        pos = m.end()
    tokens.append(Token("end", "", SourceSpan(len(text), len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str, theory: Theory):
        self.text = text
        self.theory = theory
        self.tokens = tokenize(text)
        self.i = 0

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(message, tok.span, self.text)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "name") and t.text == text

    def take(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def take_int(self) -> tuple:
        sign = 1
        start = self.tok
        if self.at("-"):
            self.i += 1
            sign = -1
        elif self.at("+"):
            self.i += 1
        if self.tok.kind != "num":
            raise self.error("expected an integer")
        value = sign * int(self.tok.text)
        self.i += 1
        return value, start

    # -- grammar
    def parse(self) -> Formula:
        if self.at("exists"):
            self.i += 1
            name = self.tok
            if name.kind != "name" or name.text in KEYWORDS:
                raise self.error("expected a variable after 'exists'")
            self.i += 1
            self.take(".")
            body = self.disj()
            f = Exists(name.text, body)
        else:
            f = self.disj()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return f

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.at("|"):
            self.i += 1
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Formula:
        parts = [self.lit()]
        while self.at("&"):
            self.i += 1
            parts.append(self.lit())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def lit(self) -> Formula:
        if self.at("!"):
            self.i += 1
            return Not(self.lit())
        if self.at("("):
            self.i += 1
            if self.at("exists"):
                raise self.error("nested quantifiers are not supported")
            f = self.disj()
            self.take(")")
            return f
        if self.at("exists"):
            raise self.error("nested quantifiers are not supported")
        if self.at("true"):
            self.i += 1
            return TRUE
        if self.at("false"):
            self.i += 1
            return FALSE
        if self.at("sqf"):
            self.i += 1
            self.take("(")
            t = self.term()
            self.take(")")
            return InP(1, t)
        return self.atom()

    def atom(self) -> Formula:
        left = self.term()
        if self.at("in"):
            self.i += 1
            kind = self.tok
            if kind.kind != "name" or kind.text not in ("U", "P"):
                raise self.error("expected U[p,l] or P[m] after 'in'")
            self.i += 1
            self.take("[")
            if kind.text == "U":
                p, ptok = self.take_int()
                if not is_prime(p):
                    raise self.error(f"U index {p} is not prime", ptok)
                self.take(",")
                l, _ = self.take_int()
                self.take("]")
                return InU(p, l, left)
            m, mtok = self.take_int()
            if m < 1:
                raise self.error("P index must be a positive integer", mtok)
            self.take("]")
            return InP(m, left)
        op = self.tok
        if op.kind != "op" or op.text not in ("=", "!=", "<", ">", "<=", ">="):
            raise self.error("expected 'in' or a comparison")
        if op.text in ("<", ">", "<=", ">=") and not self.theory.ordered:
            raise TheoryError(f"order atom not allowed under {self.theory.name}", op.span, self.text)
        self.i += 1
        right = self.term()
        d = left - right
        if op.text == "=":
            return EqZero(d)
        if op.text == "!=":
            return Not(EqZero(d))
        if op.text == "<":
            return LtZero(d)
        if op.text == ">":
            return LtZero(-d)
        if op.text == "<=":
            return Not(LtZero(-d))
        return Not(LtZero(d))

    def term(self) -> Term:
        coeffs: dict = {}
        const = Fraction(0)
        first = True
        while True:
            sign = 1
            if self.at("+") or self.at("-"):
                sign = -1 if self.tok.text == "-" else 1
                self.i += 1
            elif not first:
                break
            first = False
            tok = self.tok
            if tok.kind == "num":
                self.i += 1
                value = Fraction(int(tok.text))
                if self.at("/"):
                    self.i += 1
                    if self.tok.kind != "num":
                        raise self.error("expected a denominator")
                    den = int(self.tok.text)
                    if den == 0:
                        raise self.error("zero denominator")
                    self.i += 1
                    value = value / den
                    if self.theory is Theory.Z1 and value.denominator != 1:
                        raise TheoryError("rational constant under Z1",
                                          SourceSpan(tok.span.start, self.tokens[self.i - 1].span.end),
                                          self.text)
                if self.at("*"):
                    self.i += 1
                    name = self.tok
                    if name.kind != "name" or name.text in KEYWORDS:
                        raise self.error("expected a variable after '*'")
                    if value.denominator != 1:
                        raise self.error("variable coefficients must be integers", tok)
                    self.i += 1
                    coeffs[name.text] = coeffs.get(name.text, 0) + sign * value.numerator
                else:
                    const += sign * value
            elif tok.kind == "name" and tok.text not in KEYWORDS:
                self.i += 1
                coeffs[tok.text] = coeffs.get(tok.text, 0) + sign
            else:
                raise self.error("expected a term")
        return Term.of(coeffs, const)


def parse_formula(text: str, theory: Theory = Theory.Q2) -> Formula:
    return _Parser(text, theory).parse()


def parse_term(text: str, theory: Theory = Theory.Q2) -> Term:
    p = _Parser(text, theory)
    t = p.term()
    if p.tok.kind != "end":
        raise p.error(f"unexpected {p.tok.text!r}")
    return t


# ---------------------------------------------------------------- printing


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def print_term(t: Term) -> str:
    out = []
    for name, c in t.coeffs:
        mag = abs(c)
        body = name if mag == 1 else f"{mag}*{name}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"{'+' if c > 0 else '-'} {body}")
    if not out:
        return _fmt(t.const)
    if t.const:
        out.append(f"{'+' if t.const > 0 else '-'} {_fmt(abs(t.const))}")
    return " ".join(out)


def _print_atom(a) -> str:
    t = print_term(a.term)
    if isinstance(a, InU):
        return f"{t} in U[{a.p},{a.l}]"
    if isinstance(a, InP):
        return f"{t} in P[{a.m}]"
    if isinstance(a, EqZero):
        return f"{t} = 0"
    if isinstance(a, LtZero):
        return f"{t} < 0"
    raise TypeError(a)


def _print_lit(f: Formula) -> str:
    """Print f so that the 'lit' production reads it back unchanged."""
    if isinstance(f, Not):
        return "!" + _print_lit(f.arg)
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    return f"({print_formula(f)})"


def print_formula(f: Formula) -> str:
    if isinstance(f, Exists):
        return f"exists {f.var}. {print_formula(f.body)}"
    if isinstance(f, Or):
        if not f.args:
            return "false"
        return " | ".join(
            f"({print_formula(g)})" if isinstance(g, (Or, Exists)) else _print_conj_item(g)
            for g in f.args
        )
    return _print_conj_item(f)


def _print_conj_item(f: Formula) -> str:
    if isinstance(f, And):
        if not f.args:
            return "true"
        return " & ".join(
            f"({print_formula(g)})" if isinstance(g, (And, Or, Exists)) else _print_simple(g)
            for g in f.args
        )
    return _print_simple(f)


def _print_simple(f: Formula) -> str:
    if isinstance(f, Not):
        return _print_lit(f)
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, (And, Or, Exists)):
        return f"({print_formula(f)})"
    return _print_atom(f)
