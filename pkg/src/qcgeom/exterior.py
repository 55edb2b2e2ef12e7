"""Differential forms and vector fields with jet coefficients.

Sign conventions are fixed once here and used everywhere:

* ``(a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X)`` for 1-forms, i.e.
  ``(dx^1 ^ ... ^ dx^k)(d_1, ..., d_k) = 1``;
* ``d(f dx^I) = df ^ dx^I``, equivalently
  ``d theta(X, Y) = X theta(Y) - Y theta(X) - theta([X, Y])``;
* ``(iota_v a)(Y_1, ...) = a(v, Y_1, ...)``.
"""
from itertools import combinations

from .ratjet.jet import Jet, OrderExhausted, is_zero

__all__ = [
    "FormJet",
    "VectorJet",
    "wedge",
    "exterior_derivative",
    "interior_product",
    "lie_derivative",
    "evaluate_form",
    "pullback",
    "bracket",
]


def _acc(d, key, val):
    w = d.get(key)
    d[key] = val if w is None else w + val


def _clean(d):
    return {k: v for k, v in d.items() if not is_zero(v)}


def _merge_sign(I, J):
    """Sign of the shuffle sorting ``I + J`` (both increasing and disjoint)."""
    inv = 0
    for i in I:
        for j in J:
            if j < i:
                inv += 1
    return -1 if inv & 1 else 1


class FormJet:
    """A ``degree``-form on a ``dim``-dimensional space.

    ``comps`` maps strictly increasing index tuples to nonzero coefficients
    (jets, or plain scalars for pulled-back values).  ``order`` is the jet
    order shared by the coefficients; missing components are zero.
    """

    __slots__ = ("dim", "degree", "order", "comps")

    def __init__(self, dim, degree, order, comps=None):
        self.dim = dim
        self.degree = degree
        self.order = order
        self.comps = comps if comps is not None else {}

    @classmethod
    def zero(cls, dim, degree, order):
        return cls(dim, degree, order, {})

    @classmethod
    def from_components(cls, dim, degree, order, comps):
        """Accept arbitrary (possibly unsorted, repeated) index tuples."""
        out = {}
        for idx, v in comps.items():
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have length {degree}")
            if len(set(idx)) < degree or is_zero(v):
                continue
            perm = sorted(range(degree), key=lambda p: idx[p])
            key = tuple(idx[p] for p in perm)
            if any(not 0 <= i < dim for i in key):
                raise IndexError(f"index {idx} outside dimension {dim}")
            _acc(out, key, v if _perm_sign(perm) > 0 else -v)
        return cls(dim, degree, order, _clean(out))

    @classmethod
    def one_form(cls, coeffs):
        """1-form from a list of ``dim`` jet coefficients."""
        order = min(c.order for c in coeffs if isinstance(c, Jet)) if any(isinstance(c, Jet) for c in coeffs) else 0
        return cls(len(coeffs), 1, order, {(mu,): c for mu, c in enumerate(coeffs) if not is_zero(c)})

    def __repr__(self):
        return f"FormJet(dim={self.dim}, degree={self.degree}, order={self.order}, {len(self.comps)} comps)"

    def component(self, idx):
        """Coefficient on ``dx^idx`` for any index tuple (sign-corrected)."""
        if len(set(idx)) < len(idx):
            return 0
        perm = sorted(range(len(idx)), key=lambda p: idx[p])
        key = tuple(idx[p] for p in perm)
        v = self.comps.get(key, 0)
        return v if _perm_sign(perm) > 0 or is_zero(v) else -v

    def is_zero(self):
        return not self.comps

    def first_nonzero(self):
        if not self.comps:
            return None
        key = min(self.comps)
        return key, self.comps[key]

    def _check(self, other):
        if other.dim != self.dim:
            raise ValueError(f"form dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, (int,)) and other == 0:
            return self
        self._check(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        order = min(self.order, other.order)
        a, b = self.truncate(order), other.truncate(order)
        out = dict(a.comps)
        for k, v in b.comps.items():
            _acc(out, k, v)
        return FormJet(self.dim, self.degree, order, _clean(out))

    __radd__ = __add__

    def __neg__(self):
        return FormJet(self.dim, self.degree, self.order, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        """Multiply every coefficient by a scalar or a function jet."""
        order = min(self.order, f.order) if isinstance(f, Jet) else self.order
        return FormJet(self.dim, self.degree, order, _clean({k: v * f for k, v in self.comps.items()}))

    def __mul__(self, f):
        return self.scale(f)

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def truncate(self, order):
        if order >= self.order:
            return self
        return FormJet(self.dim, self.degree, order,
                       _clean({k: v.truncate(order) for k, v in self.comps.items()}))

    def extend(self, new_dim):
        """Same form in ``new_dim`` coordinates (new coordinates appended last)."""
        return FormJet(new_dim, self.degree, self.order,
                       {k: v.extend(new_dim) for k, v in self.comps.items()})

    def map(self, fn):
        return FormJet(self.dim, self.degree, self.order, _clean({k: fn(v) for k, v in self.comps.items()}))

    def __eq__(self, other):
        if not isinstance(other, FormJet):
            return NotImplemented
        return self.dim == other.dim and self.degree == other.degree and (self - other).is_zero()

    __hash__ = None


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class VectorJet:
    """Vector field near a point: one jet per coordinate direction."""

    __slots__ = ("dim", "order", "comps")

    def __init__(self, comps):
        self.comps = list(comps)
        self.dim = len(self.comps)
        jets = [c for c in self.comps if isinstance(c, Jet)]
        self.order = min(c.order for c in jets) if jets else 0

    @classmethod
    def coordinate(cls, dim, order, mu, jet_dim=None):
        jd = dim if jet_dim is None else jet_dim
        return cls([Jet.constant(jd, order, 1 if i == mu else 0) for i in range(dim)])

    def __getitem__(self, mu):
        return self.comps[mu]

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.comps)

    def __repr__(self):
        return f"VectorJet(dim={self.dim}, order={self.order})"

    def __add__(self, other):
        return VectorJet([a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return VectorJet([a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return VectorJet([-a for a in self.comps])

    def scale(self, f):
        return VectorJet([a * f for a in self.comps])

    def __mul__(self, f):
        return self.scale(f)

    __rmul__ = __mul__

    def truncate(self, order):
        return VectorJet([c.truncate(order) for c in self.comps])

    def extend(self, new_dim):
        """Push forward into ``new_dim`` coordinates (zero new components)."""
        comps = [c.extend(new_dim) for c in self.comps]
        zero = Jet.zero(new_dim, self.order)
        return VectorJet(comps + [zero] * (new_dim - self.dim))

    def is_zero(self):
        return all(is_zero(c) for c in self.comps)

    def apply(self, f):
        """Directional derivative ``X(f)`` of a function jet (0 for a plain constant)."""
        if not isinstance(f, Jet):
            return 0
        acc = Jet.zero(f.dim, min(f.order - 1, self.order))
        for mu, x in enumerate(self.comps):
            if not is_zero(x):
                acc = acc + x * f.partial(mu)
        return acc

    def values(self):
        return [c.value if isinstance(c, Jet) else c for c in self.comps]

    def __eq__(self, other):
        if not isinstance(other, VectorJet):
            return NotImplemented
        return self.dim == other.dim and all(is_zero(a - b) for a, b in zip(self.comps, other.comps))

    __hash__ = None


def bracket(X, Y):
    """Lie bracket ``[X, Y]^mu = X(Y^mu) - Y(X^mu)``; order drops by one."""
    if X.order < 1 or Y.order < 1:
        raise OrderExhausted("bracket needs vector jets of order >= 1")
    return VectorJet([X.apply(Y[mu]) - Y.apply(X[mu]) for mu in range(X.dim)])


def wedge(a, b):
    """Exterior product; a result of degree above ``dim`` is the zero form of that degree."""
    a._check(b)
    deg = a.degree + b.degree
    order = min(a.order, b.order)
    out = {}
    if deg <= a.dim:
        bitems = list(b.comps.items())
        for I, f in a.comps.items():
            sI = set(I)
            for J, g in bitems:
                if sI.intersection(J):
                    continue
                key = tuple(sorted(I + J))
                val = f * g
                _acc(out, key, val if _merge_sign(I, J) > 0 else -val)
    return FormJet(a.dim, deg, order, _clean(out))


def exterior_derivative(a):
    """Coordinate exterior derivative ``d(f dx^I) = sum_mu d_mu f dx^mu ^ dx^I``."""
    if a.order < 1:
        raise OrderExhausted("exterior derivative needs coefficient order >= 1")
    out = {}
    for I, f in a.comps.items():
        for mu in range(a.dim):
            if mu in I:
                continue
            df = f.partial(mu)
            if df.is_zero():
                continue
            pos = sum(1 for i in I if i < mu)
            key = I[:pos] + (mu,) + I[pos:]
            _acc(out, key, df if pos % 2 == 0 else -df)
    return FormJet(a.dim, a.degree + 1, a.order - 1, _clean(out))


def interior_product(v, a):
    """Contraction ``iota_v a`` into the first slot."""
    if a.degree < 1:
        raise ValueError("interior product of a 0-form")
    if v.dim != a.dim:
        raise ValueError("vector/form dimension mismatch")
    order = min(a.order, v.order)
    out = {}
    comps = v.comps
    for I, f in a.comps.items():
        for p, i in enumerate(I):
            x = comps[i]
            if is_zero(x):
                continue
            key = I[:p] + I[p + 1:]
            val = x * f
            _acc(out, key, val if p % 2 == 0 else -val)
    return FormJet(a.dim, a.degree - 1, order, _clean(out))


def lie_derivative(v, a):
    """Cartan formula ``L_v a = iota_v da + d(iota_v a)``."""
    if a.order < 1 or v.order < 1:
        raise OrderExhausted("Lie derivative needs order >= 1")
    first = interior_product(v, exterior_derivative(a))
    if a.degree == 0:
        return first
    second = exterior_derivative(interior_product(v, a))
    return first + second


def pullback(a, vectors):
    """Components of ``a`` on every increasing tuple drawn from ``vectors``.

    Returns a form on the ``len(vectors)``-dimensional index space whose
    ``(a_1, ..., a_k)`` component is ``a(v_{a_1}, ..., v_{a_k})``.  Works
    with jet or scalar entries alike.
    """
    m = len(vectors)
    rows = [[vec[mu] for vec in vectors] for mu in range(a.dim)]
    comps = _pullback(list(a.comps.items()), rows, m, a.degree)
    return FormJet(m, a.degree, a.order, _clean(comps))


def _pullback(items, rows, m, k):
    if k == 0:
        out = {}
        for _, f in items:
            _acc(out, (), f)
        return out
    groups = {}
    for I, f in items:
        groups.setdefault(I[0], []).append((I[1:], f))
    out = {}
    for mu, sub in groups.items():
        inner = _pullback(sub, rows, m, k - 1)
        if not inner:
            continue
        theta = rows[mu]
        for aidx in range(m):
            t = theta[aidx]
            if is_zero(t):
                continue
            for B, g in inner.items():
                if aidx in B:
                    continue
                pos = sum(1 for b in B if b < aidx)
                key = B[:pos] + (aidx,) + B[pos:]
                val = t * g
                _acc(out, key, val if pos % 2 == 0 else -val)
    return out


def evaluate_form(a, vectors):
    """``a(v_1, ..., v_k)`` as a jet (or scalar)."""
    if len(vectors) != a.degree:
        raise ValueError(f"a {a.degree}-form needs {a.degree} arguments, got {len(vectors)}")
    if a.degree == 0:
        return a.comps.get((), 0)
    res = pullback(a, vectors)
    return res.comps.get(tuple(range(a.degree)), 0)


def all_tuples(dim, k):
    return combinations(range(dim), k)
