"""Truncated multivariate Taylor expansions with exact coefficients.

A :class:`Jet` of order ``r`` in ``dim`` variables stores the Taylor
coefficients ``c_alpha`` (partial derivative divided by ``alpha!``) for
every multi-index with ``|alpha| <= r``.  Storing Taylor coefficients
instead of raw partials keeps multiplication a plain truncated
convolution; :meth:`Jet.derivative` converts back.

Coefficients may be any exact field element (``mpq`` by default, or
:class:`~qcgeom.ratjet.primefield.GF` for the prescreen).
"""
from itertools import combinations_with_replacement
from math import factorial

from .rational import Q

__all__ = [
    "Jet",
    "JetError",
    "JetDivisionError",
    "OrderExhausted",
    "monomials",
    "is_zero",
    "value_of",
]


_ONE = Q(1)


class JetError(ArithmeticError):
    pass


class JetDivisionError(JetError, ZeroDivisionError):
    pass


class OrderExhausted(JetError):
    pass


class _Monomials:
    """Degree-graded monomial table for one dimension.

    Monomials are enumerated degree by degree, so the monomials of degree
    ``<= r`` are always the prefix ``[0, count[r])``; truncating a jet is
    just dropping large indices.
    """

    def __init__(self, dim):
        self.dim = dim
        self.exps = []
        self.index = {}
        self.deg = []
        self.count = []
        self.top = -1
        self._rows = {}
        self._lower = {}

    def grow(self, order):
        if order <= self.top:
            return
        dim = self.dim
        while self.top < order:
            d = self.top + 1
            for combo in combinations_with_replacement(range(dim), d):
                e = [0] * dim
                for v in combo:
                    e[v] += 1
                e = tuple(e)
                self.index[e] = len(self.exps)
                self.exps.append(e)
                self.deg.append(d)
            self.count.append(len(self.exps))
            self.top = d
        self._rows.clear()

    def row(self, i):
        # index of x^i * x^j for every j with deg(i) + deg(j) <= top
        r = self._rows.get(i)
        if r is None:
            ei = self.exps[i]
            index = self.index
            lim = self.count[self.top - self.deg[i]]
            r = [index[tuple(a + b for a, b in zip(ei, self.exps[j]))] for j in range(lim)]
            self._rows[i] = r
        return r

    def lower(self, i, var):
        key = (i, var)
        j = self._lower.get(key)
        if j is None:
            e = list(self.exps[i])
            e[var] -= 1
            j = self.index[tuple(e)]
            self._lower[key] = j
        return j


_TABLES = {}


def monomials(dim, order):
    """Return the shared monomial table for ``dim``, grown to ``order``."""
    t = _TABLES.get(dim)
    if t is None:
        t = _TABLES[dim] = _Monomials(dim)
    t.grow(order)
    return t


def is_zero(x):
    if isinstance(x, Jet):
        return not x.c
    return not x


def value_of(x):
    return x.value if isinstance(x, Jet) else x


class Jet:
    """Truncated Taylor expansion at a point.

    ``c`` maps monomial indices (see :func:`monomials`) to nonzero
    coefficients.  Jets are treated as immutable.
    """

    __slots__ = ("dim", "order", "c")

    def __init__(self, dim, order, c=None):
        if order < 0:
            raise OrderExhausted("jet order must be >= 0")
        self.dim = dim
        self.order = order
        self.c = c if c is not None else {}

    # -- construction -------------------------------------------------
    @classmethod
    def constant(cls, dim, order, value):
        monomials(dim, order)
        return cls(dim, order, {0: value} if value else {})

    @classmethod
    def zero(cls, dim, order):
        return cls(dim, order, {})

    @classmethod
    def variable(cls, dim, order, var, value=0):
        """The coordinate function ``x_var`` expanded at a point where it equals ``value``."""
        t = monomials(dim, order)
        c = {}
        if value:
            c[0] = value
        if order >= 1:
            e = [0] * dim
            e[var] = 1
            c[t.index[tuple(e)]] = 1
        return cls(dim, order, c)

    @classmethod
    def from_terms(cls, dim, order, terms):
        """Build from ``{exponent tuple: coefficient}``; terms above ``order`` are dropped."""
        t = monomials(dim, order)
        c = {}
        for e, v in terms.items():
            if len(e) != dim:
                raise ValueError("multi-index length does not match dimension")
            if sum(e) <= order and v:
                c[t.index[tuple(e)]] = v
        return cls(dim, order, dict(sorted(c.items())))

    # -- inspection ---------------------------------------------------
    @property
    def value(self):
        return self.c.get(0, 0)

    def terms(self):
        t = monomials(self.dim, self.order)
        return {t.exps[i]: v for i, v in sorted(self.c.items())}

    def coefficient(self, exps):
        t = monomials(self.dim, self.order)
        i = t.index.get(tuple(exps))
        if i is None:
            if sum(exps) > self.order:
                raise OrderExhausted(f"multi-index {tuple(exps)} exceeds order {self.order}")
            raise ValueError("bad multi-index")
        return self.c.get(i, 0)

    def derivative(self, exps):
        """The raw partial derivative ``d^alpha f`` at the expansion point."""
        k = 1
        for a in exps:
            k *= factorial(a)
        return self.coefficient(exps) * k

    def is_zero(self):
        return not self.c

    def first_nonzero(self):
        """``(multi-index, coefficient)`` of the lowest nonzero term, or None."""
        if not self.c:
            return None
        i = min(self.c)
        return monomials(self.dim, self.order).exps[i], self.c[i]

    def __repr__(self):
        inner = ", ".join(f"{e}: {v}" for e, v in self.terms().items())
        return f"Jet(dim={self.dim}, order={self.order}, {{{inner}}})"

    # -- truncation / embedding -----------------------------------------
    def truncate(self, order):
        if order >= self.order:
            return self
        if order < 0:
            raise OrderExhausted("cannot truncate below order 0")
        lim = monomials(self.dim, self.order).count[order]
        return Jet(self.dim, order, {i: v for i, v in self.c.items() if i < lim})

    def extend(self, new_dim):
        """Reinterpret as a jet in ``new_dim >= dim`` variables, constant in the new ones."""
        if new_dim == self.dim:
            return self
        src = monomials(self.dim, self.order)
        dst = monomials(new_dim, self.order)
        pad = (0,) * (new_dim - self.dim)
        c = {dst.index[src.exps[i] + pad]: v for i, v in self.c.items()}
        return Jet(new_dim, self.order, dict(sorted(c.items())))

    def restrict(self, new_dim):
        """Drop every term involving variables ``>= new_dim`` (set them to their base value)."""
        if new_dim == self.dim:
            return self
        src = monomials(self.dim, self.order)
        dst = monomials(new_dim, self.order)
        c = {}
        for i, v in self.c.items():
            e = src.exps[i]
            if not any(e[new_dim:]):
                c[dst.index[e[:new_dim]]] = v
        return Jet(new_dim, self.order, dict(sorted(c.items())))

    def map(self, fn):
        c = {}
        for i, v in self.c.items():
            w = fn(v)
            if w:
                c[i] = w
        return Jet(self.dim, self.order, c)

    # -- arithmetic -----------------------------------------------------
    def _check(self, other):
        if other.dim != self.dim:
            raise ValueError(f"jet dimension mismatch: {self.dim} vs {other.dim}")

    def __neg__(self):
        return Jet(self.dim, self.order, {i: -v for i, v in self.c.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            order = min(self.order, other.order)
            a, b = self.truncate(order), other.truncate(order)
            c = dict(a.c)
            for i, v in b.c.items():
                w = c.get(i)
                if w is None:
                    c[i] = v
                else:
                    w = w + v
                    if w:
                        c[i] = w
                    else:
                        del c[i]
            return Jet(self.dim, order, c)
        if not other:
            return self
        c = dict(self.c)
        w = c.get(0, 0) + other
        if w:
            c[0] = w
        else:
            c.pop(0, None)
        return Jet(self.dim, self.order, c)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            if not other:
                return Jet(self.dim, self.order, {})
            return Jet(self.dim, self.order, {i: v * other for i, v in self.c.items()})
        self._check(other)
        order = min(self.order, other.order)
        a, b = self.c, other.c
        if not a or not b:
            return Jet(self.dim, order, {})
        # constants are common (frame vectors, identity entries): scale instead of convolving
        if len(a) == 1 and 0 in a:
            x = a[0]
            return Jet(self.dim, order, {i: x * v for i, v in other.truncate(order).c.items()})
        if len(b) == 1 and 0 in b:
            y = b[0]
            return Jet(self.dim, order, {i: v * y for i, v in self.truncate(order).c.items()})
        if len(a) > len(b):
            a, b = b, a
        t = monomials(self.dim, order)
        count, deg = t.count, t.deg
        bitems = sorted(b.items())
        out = {}
        get = out.get
        for i, x in a.items():
            di = deg[i]
            if di > order:
                continue
            lim = count[order - di]
            row = t.row(i)
            for j, y in bitems:
                if j >= lim:
                    break
                k = row[j]
                w = get(k)
                out[k] = x * y if w is None else w + x * y
        return Jet(self.dim, order, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def reciprocal(self):
        v0 = self.value
        if not v0:
            raise JetDivisionError("jet has zero value part")
        inv0 = _ONE / v0
        if self.order == 0:
            return Jet(self.dim, 0, {0: inv0})
        # 1/(v0 (1 + u)) = inv0 * sum (-u)^m, u without constant term
        u = Jet(self.dim, self.order, {i: -(v * inv0) for i, v in self.c.items() if i != 0})
        result = Jet.constant(self.dim, self.order, 1)
        term = result
        for _ in range(self.order):
            term = term * u
            if term.is_zero():
                break
            result = result + term
        return result * inv0

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        if not other:
            raise JetDivisionError("division by zero scalar")
        return self * (_ONE / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = Jet.constant(self.dim, self.order, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def partial(self, var):
        """Jet of ``d/dx_var``; the order drops by one."""
        if self.order < 1:
            raise OrderExhausted("partial derivative of an order-0 jet")
        if not 0 <= var < self.dim:
            raise IndexError(var)
        t = monomials(self.dim, self.order)
        exps = t.exps
        c = {}
        for i, v in self.c.items():
            e = exps[i][var]
            if e:
                c[t.lower(i, var)] = v * e
        return Jet(self.dim, self.order - 1, dict(sorted(c.items())))

    def __eq__(self, other):
        if isinstance(other, Jet):
            if other.dim != self.dim:
                return False
            return (self - other).is_zero()
        return (self - other).is_zero()

    __hash__ = None
