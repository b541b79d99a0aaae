"""Recursive-descent parser for polynomial strings.

Grammar: sums of products of factors; a factor is an integer, a variable
name, or a parenthesised expression, optionally raised to a non-negative
integer power with ^ or **.
"""
from __future__ import annotations

import re

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}", 1, pos + 1)
        col = m.start() + (len(m.group(0)) - len(m.group(0).lstrip())) + 1
        if m.group(1):
            out.append(("int", int(m.group(1)), col))
        elif m.group(2):
            out.append(("name", m.group(2), col))
        else:
            out.append(("op", m.group(3), col))
        pos = m.end()
    out.append(("end", None, len(text) + 1))
    return out


def parse_poly(text: str, ring, line: int = 1, col0: int = 0) -> dict:
    from .poly import padd, pmul, psub, pscale

    p = ring.p
    toks = _tokens(text)
    i = 0

    def err(msg, tok):
        raise ParseError(msg, line, col0 + tok[2])

    def peek():
        return toks[i]

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def expr():
        sign = 1
        t = peek()
        if t[0] == "op" and t[1] in "+-":
            take()
            sign = -1 if t[1] == "-" else 1
        acc = pscale(term(), sign, p)
        while peek()[0] == "op" and peek()[1] in ("+", "-"):
            op = take()[1]
            rhs = term()
            acc = padd(acc, rhs, p) if op == "+" else psub(acc, rhs, p)
        return acc

    def term():
        acc = power()
        while True:
            t = peek()
            if t[0] == "op" and t[1] == "*":
                take()
                acc = pmul(acc, power(), p)
            elif t[0] in ("int", "name") or (t[0] == "op" and t[1] == "("):
                acc = pmul(acc, power(), p)  # implicit product, as in 3x
            else:
                return acc

    def power():
        base = atom()
        t = peek()
        if t[0] == "op" and t[1] in ("^", "**"):
            take()
            e = take()
            if e[0] != "int":
                err("exponent must be a non-negative integer", e)
            out = ring.const(1)
            for _ in range(e[1]):
                out = pmul(out, base, p)
            return out
        return base

    def atom():
        t = take()
        if t[0] == "int":
            return ring.const(t[1])
        if t[0] == "name":
            if t[1] not in ring.names:
                err(f"unknown variable {t[1]!r}", t)
            return ring.var(t[1])
        if t[0] == "op" and t[1] == "(":
            v = expr()
            c = take()
            if c[0] != "op" or c[1] != ")":
                err("expected ')'", c)
            return v
        if t[0] == "op" and t[1] == "-":
            return pscale(atom(), -1, p)
        err("unexpected end of input" if t[0] == "end" else f"unexpected token {t[1]!r}", t)

    out = expr()
    if peek()[0] != "end":
        err(f"unexpected token {peek()[1]!r}", peek())
    return out
