"""Built-in example charts and chart transformations.

* :func:`heisenberg` -- the quaternionic Heisenberg group as an R^3-bundle
  over flat H^n: ``eta_l = dt_l + <L_l x, dx>`` with ``L_l`` left
  multiplication by i, j, k.  The horizontal metric in the lifted
  coordinate frame is the identity.
* :func:`sphere_3sasakian` -- the round 3-Sasakian sphere ``S^{4n+3}`` in
  ``H^{n+1}``, ``eta_l = <L_l P, dP>``, pulled back along inverse
  stereographic projection so every coefficient is a rational function.
* :func:`conformal_deform` -- ``eta -> mu * eta``.
"""
from .errors import ConstructionInvalid
from .qcframe import QcChart
from .ratjet.expr import Const, Div, Expression, Neg, Pow, Sym, parse_expression
from .ratjet.rational import Q
from .ratjet.jet import Jet

__all__ = [
    "EXAMPLES",
    "heisenberg",
    "sphere_3sasakian",
    "conformal_deform",
    "load_chart",
    "emit_chart",
    "example_chart",
    "quaternion_matrices",
]


def quaternion_matrices(blocks):
    """Left multiplication by i, j, k on ``H^blocks`` (real coordinates a + bi + cj + dk)."""
    base = [
        # i q = -b + a i - d j + c k
        {(0, 1): -1, (1, 0): 1, (2, 3): -1, (3, 2): 1},
        # j q = -c + d i + a j - b k
        {(0, 2): -1, (1, 3): 1, (2, 0): 1, (3, 1): -1},
        # k q = -d - c i + b j + a k
        {(0, 3): -1, (1, 2): -1, (2, 1): 1, (3, 0): 1},
    ]
    size = 4 * blocks
    out = []
    for entries in base:
        M = [[0] * size for _ in range(size)]
        for b in range(blocks):
            for (r, c), v in entries.items():
                M[4 * b + r][4 * b + c] = v
        out.append(M)
    return out


# -- tiny polynomial helper: {exponent tuple: Q} ---------------------------

def _padd(p, q, scale=1):
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + scale * c
        if not out[e]:
            del out[e]
    return out


def _pmul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
            if not out[e]:
                del out[e]
    return out


def _pvar(dim, i):
    e = [0] * dim
    e[i] = 1
    return {tuple(e): Q(1)}


def _pconst(dim, c):
    return {(0,) * dim: Q(c)} if c else {}


def _poly_expr(p, syms):
    """Expression for a polynomial, monomials in a fixed (sorted) order."""
    if not p:
        return Const(Q(0))
    expr = None
    for e in sorted(p, key=lambda e: (sum(e), [-x for x in e])):
        c = p[e]
        mono = None
        for i, k in enumerate(e):
            if k:
                f = syms[i] if k == 1 else Pow(syms[i], k)
                mono = f if mono is None else mono * f
        mag = abs(c)
        if mono is None:
            term = Const(mag)
        elif mag == 1:
            term = mono
        else:
            term = Const(mag) * mono
        if expr is None:
            expr = Neg(term) if c < 0 else term
        else:
            expr = expr - term if c < 0 else expr + term
    return expr


# -- examples ---------------------------------------------------------------

def heisenberg(n):
    """Quaternionic Heisenberg group of dimension ``4n + 3``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    size = 4 * n
    coords = [f"x{a + 1}" for a in range(size)] + ["t1", "t2", "t3"]
    syms = [Sym(name, k) for k, name in enumerate(coords)]
    D = size + 3
    L = quaternion_matrices(n)
    eta = []
    for l in range(3):
        row = []
        for b in range(size):
            # coefficient of dx_b is (L_l x)_b
            poly = {}
            for a in range(size):
                if L[l][b][a]:
                    poly = _padd(poly, _pvar(D, a), L[l][b][a])
            row.append(_poly_expr(poly, syms))
        for m in range(3):
            row.append(Const(Q(1 if m == l else 0)))
        eta.append(row)
    return QcChart(n=n, coordinates=coords, eta=eta, label=f"heisenberg(n={n})")


def _sphere_chart(n):
    D = 4 * n + 3
    N = D + 1
    coords = [f"y{a + 1}" for a in range(D)]
    syms = [Sym(name, k) for k, name in enumerate(coords)]
    L = quaternion_matrices(n + 1)
    S = {}
    for a in range(D):
        S = _padd(S, _pmul(_pvar(D, a), _pvar(D, a)))
    # u = (2y, S - 1) is (1 + S) P
    u = [_padd({}, _pvar(D, a), 2) for a in range(D)] + [_padd(S, _pconst(D, 1), -1)]
    Lu = []
    for l in range(3):
        rows = []
        for r in range(N):
            acc = {}
            for c in range(N):
                if L[l][r][c]:
                    acc = _padd(acc, u[c], L[l][r][c])
            rows.append(acc)
        Lu.append(rows)
    denom = Pow(_poly_expr(_padd(_pconst(D, 1), S), syms), 2)
    eta = []
    for l in range(3):
        row = []
        for mu in range(D):
            # <L u, d_mu u> / (1+S)^2 with d_mu u = 2 (e_mu, y_mu)
            num = _padd(Lu[l][mu], _pmul(_pvar(D, mu), Lu[l][D]))
            num = {e: 2 * c for e, c in num.items()}
            row.append(Div(_poly_expr(num, syms), denom) if num else Const(Q(0)))
        eta.append(row)
    return QcChart(n=n, coordinates=coords, eta=eta, label=f"sphere3sasakian(n={n})", epsilon=1)


# fixed validation points for the sphere constructor
_SPHERE_VALIDATION = [
    (0,),
    (1, -1, 2),
    (Q(1, 2), Q(-2, 3), 1, 0, Q(3, 5)),
    (-1, Q(1, 3), 0, 2, -1, Q(1, 2), 1),
    (2, 1, Q(-1, 2), Q(2, 7), -1, 1, 0, Q(1, 4)),
]


def sphere_3sasakian(n, validate=True):
    """Positive 3-Sasakian sphere chart; validated against ``d eta_i = 2 omega_i + 2 eta_j ^ eta_k``."""
    if n not in (1, 2):
        raise ValueError("sphere chart is provided for n in {1, 2}")
    chart = _sphere_chart(n)
    if validate:
        from .cone import sasakian_residuals  # local import: cone builds on qcframe

        D = chart.dim
        for raw in _SPHERE_VALIDATION:
            pt = [Q(c) for c in (list(raw) + [0] * D)[:D]]
            res = sasakian_residuals(chart, pt, epsilon=1, order=1)
            if not all(r.is_zero() for r in res):
                raise ConstructionInvalid(f"sphere chart fails the 3-Sasakian equation at {pt}")
    return chart


EXAMPLES = {
    "heisenberg": heisenberg,
    "sphere3sasakian": sphere_3sasakian,
}


def example_chart(name, n):
    try:
        ctor = EXAMPLES[name]
    except KeyError:
        raise ValueError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}") from None
    return ctor(n)


def conformal_deform(chart, mu):
    """Replace every ``eta_l`` by ``mu * eta_l``.

    ``mu`` is an :class:`Expression` or DSL source text over the chart's
    coordinates.  Points where ``mu`` vanishes are rejected at evaluation
    time (:func:`check_mu_nonzero`).
    """
    if isinstance(mu, str):
        src = mu
        mu = parse_expression(mu, chart.coordinates)
    else:
        src = str(mu)
    if isinstance(mu, Const) and mu.value == 1:
        return chart
    eta = [[_scaled(mu, e) for e in row] for row in chart.eta]
    return QcChart(n=chart.n, coordinates=list(chart.coordinates), eta=eta,
                   label=f"{chart.label} * ({src})", epsilon=None)


def _scaled(mu, e):
    if isinstance(e, Const) and e.value == 0:
        return e
    if isinstance(e, Const) and e.value == 1:
        return mu
    return mu * e


def check_mu_nonzero(mu, chart, point):
    """Raise ``ZeroDivisionError`` when the conformal factor vanishes at ``point``."""
    if isinstance(mu, str):
        mu = parse_expression(mu, chart.coordinates)
    from .ratjet.expr import evaluate_jet

    v = evaluate_jet(mu, [Q(c) for c in point], 0).value
    if not v:
        raise ZeroDivisionError(f"conformal factor {mu} vanishes at the sample point")
    return v


def load_chart(path):
    """Read and validate a chart JSON file."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return QcChart.from_json(text)


def emit_chart(chart, path):
    """Write ``chart`` as JSON (byte-stable for a given chart)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(chart.to_json())


del Expression, Jet
