"""Expressions in s, x, u, t with exp(), wedges and Bloch symbols.

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | factor
    factor := atom ('^' integer)?
    atom   := rational | 's' | 'x' | 'u' | 't' | name | 'exp' '(' expr ')' | '(' expr ')'
    wedge  := expr ('/\\' expr){1,2}
    b2     := [coef '*'] '[' expr ']' ['(x)' expr]  (('+'|'-') ...)*

Values are truncated series in t whose coefficients lie in a rational function
field of the base variables and one curve variable ('s', or 'u' for cycles).
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from flint import fmpq

from .bloch import B2Elt, B2Tensor
from .errors import ChowDilogError, ParseError
from .fields import QQ, RF, RationalFunctionField, polys_in
from .series import TSeries, series_exp

KEYWORDS = {"exp"}
VARS = {"s", "x", "u", "t"}

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>/\\|\(x\)|[-+*/^()\[\],=]))")


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str):
    out = []
    i = 0
    n = len(text)
    while True:
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            break
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", i, text)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        tok = m.group(kind)
        if tok == "(x)" and not (out and out[-1].text == "]"):
            # an ordinary parenthesised x
            out.append(Tok("op", "(", start))
            out.append(Tok("id", "x", start + 1))
            out.append(Tok("op", ")", start + 2))
        else:
            out.append(Tok(kind, tok, start))
        i = m.end()
    out.append(Tok("end", "", n))
    return out


# ---------------------------------------------------------------- syntax tree

@dataclass(frozen=True)
class Num:
    value: fmpq
    pos: int = 0


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Neg:
    arg: object
    pos: int = 0


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object
    pos: int = 0


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int
    pos: int = 0


@dataclass(frozen=True)
class Exp:
    arg: object
    pos: int = 0


@dataclass(frozen=True)
class Wedge:
    parts: tuple
    pos: int = 0


@dataclass(frozen=True)
class Symbol:
    coeff: fmpq
    x: object
    y: object = None
    pos: int = 0


@dataclass(frozen=True)
class SymbolSum:
    terms: tuple


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(node, parent=0) -> str:
    """Print with the fewest parentheses that reparse to the same tree."""
    if isinstance(node, Num):
        v = node.value
        s = str(v)
        return f"({s})" if parent >= 2 and v.q != 1 else s
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        s = "-" + to_text(node.arg, 3)
        return f"({s})" if parent >= 4 else s
    if isinstance(node, Bin):
        p = _PREC[node.op]
        s = f"{to_text(node.left, p)} {node.op} {to_text(node.right, p + 1)}" if p == 1 \
            else f"{to_text(node.left, p)}{node.op}{to_text(node.right, p + 1)}"
        return f"({s})" if parent > p else s
    if isinstance(node, Pow):
        b = to_text(node.base, 4)
        if isinstance(node.base, Pow):
            b = f"({b})"
        return f"{b}^{node.exp}"
    if isinstance(node, Exp):
        return f"exp({to_text(node.arg)})"
    if isinstance(node, Wedge):
        return " /\\ ".join(to_text(p) for p in node.parts)
    if isinstance(node, Symbol):
        body = f"[{to_text(node.x)}]"
        if node.y is not None:
            body += f"(x){to_text(node.y, 4)}"
        return body if node.coeff == 1 else f"{node.coeff}*{body}"
    if isinstance(node, SymbolSum):
        out = ""
        for t in node.terms:
            s = to_text(t)
            if not out:
                out = s
            elif t.coeff < 0:
                out += " - " + to_text(Symbol(-t.coeff, t.x, t.y))
            else:
                out += " + " + s
        return out
    raise TypeError(node)


def _strip(node):
    """Tree with positions erased (for structural comparison)."""
    if isinstance(node, Num):
        return Num(node.value)
    if isinstance(node, Var):
        return Var(node.name)
    if isinstance(node, Neg):
        return Neg(_strip(node.arg))
    if isinstance(node, Bin):
        return Bin(node.op, _strip(node.left), _strip(node.right))
    if isinstance(node, Pow):
        return Pow(_strip(node.base), node.exp)
    if isinstance(node, Exp):
        return Exp(_strip(node.arg))
    if isinstance(node, Wedge):
        return Wedge(tuple(_strip(p) for p in node.parts))
    if isinstance(node, Symbol):
        return Symbol(node.coeff, _strip(node.x), None if node.y is None else _strip(node.y))
    if isinstance(node, SymbolSum):
        return SymbolSum(tuple(_strip(t) for t in node.terms))
    raise TypeError(node)


def same_tree(a, b) -> bool:
    return _strip(a) == _strip(b)


# ---------------------------------------------------------------- parser

class Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def cur(self) -> Tok:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.cur
        return ParseError(msg, tok.pos, self.text)

    def eat(self, text=None, kind=None) -> Tok:
        t = self.cur
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = text or kind
            got = t.text or "end of input"
            raise self.error(f"expected {want!r}, found {got!r}")
        self.i += 1
        return t

    def at(self, *texts) -> bool:
        return self.cur.text in texts and self.cur.kind != "end"

    def finish(self, node):
        if self.cur.kind != "end":
            raise self.error(f"unexpected {self.cur.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.at("+", "-"):
            op = self.eat()
            node = Bin(op.text, node, self.term(), op.pos)
        return node

    def term(self):
        node = self.unary()
        while self.at("*", "/"):
            op = self.eat()
            node = Bin(op.text, node, self.unary(), op.pos)
        return node

    def factor(self):
        node = self.atom()
        if self.at("^"):
            op = self.eat()
            sign = 1
            if self.at("-"):
                self.eat()
                sign = -1
            k = self.eat(kind="num")
            node = Pow(node, sign * int(k.text), op.pos)
        return node

    def unary(self):
        if self.at("-"):
            op = self.eat()
            return Neg(self.unary(), op.pos)
        return self.factor()

    def atom(self):
        t = self.cur
        if t.kind == "num":
            self.eat()
            return Num(fmpq(int(t.text)), t.pos)
        if t.kind == "id":
            self.eat()
            if t.text == "exp":
                self.eat("(")
                arg = self.expr()
                self.eat(")")
                return Exp(arg, t.pos)
            return Var(t.text, t.pos)
        if t.text == "(":
            self.eat()
            node = self.expr()
            self.eat(")")
            return node
        got = t.text or "end of input"
        raise self.error(f"expected an expression, found {got!r}")

    def wedge(self):
        pos = self.cur.pos
        parts = [self.expr()]
        while self.at("/\\"):
            self.eat()
            parts.append(self.expr())
        if len(parts) == 1:
            return parts[0]
        if len(parts) > 3:
            raise self.error("at most three wedge factors are supported")
        return Wedge(tuple(parts), pos)

    def symbol(self, coeff):
        pos = self.eat("[").pos
        x = self.expr()
        self.eat("]")
        y = None
        if self.at("(x)"):
            self.eat()
            y = self.factor()
        return Symbol(coeff, x, y, pos)

    def symbol_sum(self):
        terms = []
        sign = 1
        if self.at("-"):
            self.eat()
            sign = -1
        while True:
            coeff = fmpq(1)
            if self.cur.kind == "num":
                num = int(self.eat().text)
                den = 1
                if self.at("/"):
                    self.eat()
                    den = int(self.eat(kind="num").text)
                coeff = fmpq(num, den)
                self.eat("*")
            terms.append(self.symbol(sign * coeff))
            if self.at("+", "-"):
                sign = 1 if self.eat().text == "+" else -1
                continue
            break
        tys = {t.y is None for t in terms}
        if len(tys) > 1:
            raise self.error("cannot mix [x] and [x](x)y symbols in one sum")
        return SymbolSum(tuple(terms))


def parse_expression(text: str):
    p = Parser(text)
    return p.finish(p.expr())


def parse_wedge(text: str):
    p = Parser(text)
    return p.finish(p.wedge())


def parse_symbols(text: str):
    p = Parser(text)
    return p.finish(p.symbol_sum())


def parse_any(text: str):
    """Symbol sums, wedges or plain expressions, whichever the text is."""
    stripped = text.lstrip()
    if stripped.startswith("[") or re.match(r"-?\s*\d+(/\d+)?\s*\*\s*\[", stripped):
        return parse_symbols(text)
    return parse_wedge(text)


def normalize(text: str) -> str:
    return to_text(parse_any(text))


# ---------------------------------------------------------------- evaluation

@dataclass
class Context:
    """Evaluation setting: base variables, the curve variable and t-precision."""

    base_vars: tuple = ()
    var: str = "s"
    prec: int = 3
    bindings: dict = None
    text: str = ""

    @property
    def dom(self) -> RationalFunctionField:
        return RationalFunctionField(tuple(self.base_vars) + (self.var,))

    def err(self, msg, node):
        return ParseError(msg, getattr(node, "pos", None), self.text or None)


def evaluate(node, ctx: Context) -> TSeries:
    F = ctx.dom
    N = ctx.prec
    if isinstance(node, Num):
        return TSeries.const(F, node.value, N)
    if isinstance(node, Var):
        name = node.name
        if name == "t":
            return TSeries.monomial(F, 1, 1, N) if N > 1 else TSeries.const(F, 0, N)
        if name in F.vars:
            return TSeries.const(F, F.gen(name), N)
        if ctx.bindings and name in ctx.bindings:
            v = ctx.bindings[name]
            return v.reduce(N) if v.prec >= N else v.pad(N)
        if name in VARS:
            raise ctx.err(f"variable {name!r} is not available here", node)
        raise ctx.err(f"unbound name {name!r}", node)
    if isinstance(node, Neg):
        return -evaluate(node.arg, ctx)
    if isinstance(node, Bin):
        a = evaluate(node.left, ctx)
        b = evaluate(node.right, ctx)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if not b.is_unit():
            raise ctx.err("division by a non-unit (zero constant term)", node.right)
        return a / b
    if isinstance(node, Pow):
        a = evaluate(node.base, ctx)
        if node.exp < 0 and not a.is_unit():
            raise ctx.err("negative power of a non-unit", node)
        return a ** node.exp
    if isinstance(node, Exp):
        a = evaluate(node.arg, ctx)
        if not F.is_zero(a.c[0]):
            raise ctx.err("exp() needs an argument with zero constant term in t", node)
        return series_exp(a)
    raise ctx.err(f"{type(node).__name__} is not a plain expression", node)


def evaluate_unit(node, ctx: Context) -> TSeries:
    v = evaluate(node, ctx)
    if not v.is_unit():
        raise ctx.err("expected a unit (nonzero constant term)", node)
    return v


def evaluate_wedge(node, ctx: Context):
    parts = node.parts if isinstance(node, Wedge) else (node,)
    return tuple(evaluate_unit(p, ctx) for p in parts)


def evaluate_symbols(node: SymbolSum, ctx: Context):
    """B2Elt or B2Tensor; flatness failures are reported at the symbol."""
    tensor = node.terms[0].y is not None
    out = B2Tensor() if tensor else B2Elt()
    for t in node.terms:
        x = evaluate(t.x, ctx)
        try:
            if tensor:
                out = out + B2Tensor.symbol(x, evaluate_unit(t.y, ctx), t.coeff)
            else:
                out = out + B2Elt.symbol(x, t.coeff)
        except ParseError:
            raise
        except ChowDilogError as e:
            raise ctx.err(str(e).split("\n")[0], t) from e
    return out


def collapse(values, ctx: Context):
    """Move series to the base domain when the curve variable does not occur."""
    F = ctx.dom
    sub = None
    out = []
    for f in values:
        cs = []
        for c in f.c:
            ns, ds, sub = polys_in(F, c, ctx.var)
            if len(ns) > 1 or len(ds) > 1:
                return list(values)
            cs.append(ns[0] / ds[0])
        out.append(TSeries(sub, cs, False))
    return out


def evaluate_rational(node, F: RationalFunctionField, text: str = ""):
    """Exact value in F (no truncation); used for cycle coordinates in u and t."""
    def err(msg, n):
        return ParseError(msg, getattr(n, "pos", None), text or None)

    def ev(n):
        if isinstance(n, Num):
            return F(n.value)
        if isinstance(n, Var):
            if n.name in F.vars:
                return F.gen(n.name)
            raise err(f"variable {n.name!r} is not available here", n)
        if isinstance(n, Neg):
            return -ev(n.arg)
        if isinstance(n, Bin):
            a, b = ev(n.left), ev(n.right)
            if n.op == "/":
                if F.is_zero(b):
                    raise err("division by zero", n.right)
                return a / b
            return a + b if n.op == "+" else a - b if n.op == "-" else a * b
        if isinstance(n, Pow):
            a = ev(n.base)
            if n.exp < 0 and F.is_zero(a):
                raise err("negative power of zero", n)
            return a ** n.exp
        raise err(f"{type(n).__name__} is not allowed in a rational function", n)

    return ev(node)


def eval_text(text: str, ctx: Context):
    ctx.text = text
    return evaluate(parse_expression(text), ctx)


def eval_constant(text: str, base_vars=()):
    """A t-free, s-free constant such as '3/2' or 'x+1'."""
    ctx = Context(tuple(base_vars), "s", 1, text=text)
    node = parse_expression(text)
    v = evaluate(node, ctx)
    ns, ds, sub = polys_in(ctx.dom, v.c[0], "s")
    if len(ns) > 1 or len(ds) > 1:
        raise ParseError("expected a constant", 0, text)
    return ns[0] / ds[0]


def eval_polynomial_in_s(text: str, base_vars=()):
    """Ascending coefficient list of a polynomial in s."""
    ctx = Context(tuple(base_vars), "s", 1, text=text)
    v = evaluate(parse_expression(text), ctx).c[0]
    ns, ds, sub = polys_in(ctx.dom, v, "s")
    if len(ds) > 1:
        raise ParseError("expected a polynomial in s", 0, text)
    return [c / ds[0] for c in ns]
