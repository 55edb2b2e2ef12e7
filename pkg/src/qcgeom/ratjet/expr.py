"""Rational-function expressions over chart coordinates.

Grammar (whitespace is insignificant)::

    expr     := term (("+" | "-") term)*
    term     := factor (("*" | "/") factor)*
    factor   := ["-"] base ["^" integer]
    base     := rational | identifier | "(" expr ")"
    rational := integer ["/" positive-integer]

Exponents are non-negative integers.  ``1/2*x`` reads the literal ``1/2``
first; ``1/(2*x)`` is a quotient.
"""
import re
from dataclasses import dataclass

from .jet import Jet, JetDivisionError
from .rational import Q

__all__ = [
    "Expression",
    "Const",
    "Sym",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "ExpressionSyntaxError",
    "UnknownSymbolError",
    "DivisionByZeroAtPoint",
    "parse_expression",
    "evaluate_jet",
    "evaluate_jets",
    "symbols_in",
]


class ExpressionSyntaxError(ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownSymbolError(ValueError):
    def __init__(self, name, offset=None):
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"unknown coordinate symbol {name!r}{where}")
        self.name = name
        self.offset = offset


class DivisionByZeroAtPoint(ZeroDivisionError):
    def __init__(self, subexpr):
        super().__init__(f"denominator ({subexpr}) vanishes at the evaluation point")
        self.subexpr = subexpr


class Expression:
    """Base class of expression nodes; ``str(e)`` prints parseable source."""

    prec = 5

    def __str__(self):
        return _fmt(self, 0)

    # light sugar for building charts programmatically
    def __add__(self, other):
        return Add(self, _wrap(other))

    def __radd__(self, other):
        return Add(_wrap(other), self)

    def __sub__(self, other):
        return Sub(self, _wrap(other))

    def __rsub__(self, other):
        return Sub(_wrap(other), self)

    def __mul__(self, other):
        return Mul(self, _wrap(other))

    def __rmul__(self, other):
        return Mul(_wrap(other), self)

    def __truediv__(self, other):
        return Div(self, _wrap(other))

    def __rtruediv__(self, other):
        return Div(_wrap(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, k):
        return Pow(self, k)


def _wrap(x):
    if isinstance(x, Expression):
        return x
    q = Q(x)
    return Neg(Const(-q)) if q < 0 else Const(q)


@dataclass(frozen=True, eq=True, repr=False)
class Const(Expression):
    value: object
    prec = 5

    def __repr__(self):
        return f"Const({self.value})"


@dataclass(frozen=True, eq=True, repr=False)
class Sym(Expression):
    name: str
    index: int
    prec = 5

    def __repr__(self):
        return f"Sym({self.name})"


@dataclass(frozen=True, eq=True, repr=False)
class Neg(Expression):
    arg: Expression
    prec = 3


@dataclass(frozen=True, eq=True, repr=False)
class Add(Expression):
    left: Expression
    right: Expression
    prec = 1


@dataclass(frozen=True, eq=True, repr=False)
class Sub(Expression):
    left: Expression
    right: Expression
    prec = 1


@dataclass(frozen=True, eq=True, repr=False)
class Mul(Expression):
    left: Expression
    right: Expression
    prec = 2


@dataclass(frozen=True, eq=True, repr=False)
class Div(Expression):
    left: Expression
    right: Expression
    prec = 2


@dataclass(frozen=True, eq=True, repr=False)
class Pow(Expression):
    base: Expression
    exponent: int
    prec = 4


_OPS = {Add: "+", Sub: "-", Mul: "*", Div: "/"}
_BARE_INT_END = re.compile(r"(?<![\w^])\d+$")


def _paren(text, need):
    return f"({text})" if need else text


def _fmt(e, min_prec):
    if isinstance(e, Const):
        q = Q(e.value)
        if q < 0:
            text = f"-{-q.numerator}" if q.denominator == 1 else f"-{-q.numerator}/{q.denominator}"
            return f"({text})"
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Neg):
        text = "-" + _fmt(e.arg, 4)
        return _paren(text, min_prec > 3)
    if isinstance(e, Pow):
        text = f"{_fmt(e.base, 5)}^{e.exponent}"
        return _paren(text, min_prec > 4)
    op = _OPS[type(e)]
    p = e.prec
    left = _fmt(e.left, p)
    right = _fmt(e.right, p + 1)
    if op == "/" and _BARE_INT_END.search(left) and right[:1].isdigit():
        # "2/3^2" would re-read as the literal 2/3
        right = f"({right})"
    sep = " " if p == 1 else ""
    return _paren(f"{left}{sep}{op}{sep}{right}", min_prec > p)


# -- parsing ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(src):
    toks = []
    pos = 0
    n = len(src)
    while pos < n:
        m = _TOKEN.match(src, pos)
        if m is None:
            break
        if m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            toks.append(("id", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExpressionSyntaxError(f"unexpected character {ch!r}", start)
            toks.append((ch, ch, start))
        pos = m.end()
    toks.append(("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src, coordinates):
        self.toks = _tokenize(src)
        self.i = 0
        self.coords = {name: k for k, name in enumerate(coordinates)}

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, what):
        kind, text, off = self.peek()
        found = "end of input" if kind == "end" else repr(text)
        raise ExpressionSyntaxError(f"expected {what}, found {found}", off)

    def parse(self):
        e = self.expr()
        if self.peek()[0] != "end":
            self.fail("operator or end of input")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            r = self.term()
            e = Add(e, r) if op == "+" else Sub(e, r)
        return e

    def term(self):
        e = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            r = self.factor()
            e = Mul(e, r) if op == "*" else Div(e, r)
        return e

    def factor(self):
        neg = False
        if self.peek()[0] == "-":
            self.take()
            neg = True
        e = self.base()
        if self.peek()[0] == "^":
            self.take()
            kind, text, off = self.peek()
            if kind == "-":
                raise ExpressionSyntaxError("negative exponents are not allowed", off)
            if kind != "int":
                self.fail("integer exponent")
            self.take()
            e = Pow(e, int(text))
        return Neg(e) if neg else e

    def base(self):
        kind, text, off = self.peek()
        if kind == "int":
            self.take()
            num = int(text)
            if self.peek()[0] == "/" and self.peek(1)[0] == "int" and int(self.peek(1)[1]) > 0:
                self.take()
                den = int(self.take()[1])
                return Const(Q(num, den))
            return Const(Q(num))
        if kind == "id":
            self.take()
            if text not in self.coords:
                raise UnknownSymbolError(text, off)
            return Sym(text, self.coords[text])
        if kind == "(":
            self.take()
            e = self.expr()
            if self.peek()[0] != ")":
                self.fail("')'")
            self.take()
            return e
        self.fail("number, coordinate or '('")


def parse_expression(source, coordinates):
    """Parse ``source`` against the ordered coordinate list."""
    return _Parser(source, list(coordinates)).parse()


def symbols_in(e):
    out = set()
    stack = [e]
    while stack:
        x = stack.pop()
        if isinstance(x, Sym):
            out.add(x.name)
        elif isinstance(x, Neg):
            stack.append(x.arg)
        elif isinstance(x, Pow):
            stack.append(x.base)
        elif isinstance(x, (Add, Sub, Mul, Div)):
            stack.extend((x.left, x.right))
    return out


# -- evaluation ---------------------------------------------------------

def evaluate_jets(exprs, point, order, convert=Q):
    """Evaluate several expressions at one point, sharing common subtrees.

    ``point`` holds field elements; ``convert`` maps expression constants
    into the same field.
    """
    dim = len(point)
    memo = {}

    def ev(e):
        key = id(e)
        hit = memo.get(key)
        if hit is not None:
            return hit[1]
        if isinstance(e, Const):
            r = Jet.constant(dim, order, convert(e.value))
        elif isinstance(e, Sym):
            if e.index >= dim:
                raise ValueError(f"symbol {e.name} outside a {dim}-dimensional point")
            r = Jet.variable(dim, order, e.index, point[e.index])
        elif isinstance(e, Neg):
            r = -ev(e.arg)
        elif isinstance(e, Add):
            r = ev(e.left) + ev(e.right)
        elif isinstance(e, Sub):
            r = ev(e.left) - ev(e.right)
        elif isinstance(e, Mul):
            r = ev(e.left) * ev(e.right)
        elif isinstance(e, Div):
            den = ev(e.right)
            try:
                r = ev(e.left) / den
            except JetDivisionError:
                raise DivisionByZeroAtPoint(str(e.right)) from None
        elif isinstance(e, Pow):
            r = ev(e.base) ** e.exponent
        else:
            raise TypeError(f"not an expression node: {e!r}")
        memo[key] = (e, r)
        return r

    return [ev(e) for e in exprs]


def evaluate_jet(e, point, order, convert=Q):
    """Truncated Taylor expansion of ``e`` at ``point`` to ``order``."""
    return evaluate_jets([e], point, order, convert)[0]
