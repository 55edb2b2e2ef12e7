"""Chart-level qc structures and the per-point frame built from them.

A :class:`QcChart` holds three contact 1-forms as rational expressions in
``4n + 3`` coordinates.  :func:`build_frame` turns it into a
:class:`QcPointFrame` at one sample point: Reeb fields, a horizontal
frame, the horizontal metric and quaternionic triple (as matrices in that
frame), the fundamental 2-forms and the fundamental 4-form.

Horizontal matrices use the column convention: ``I_l X_b = sum_c J_l[c][b] X_c``
and ``G[a][b] = g(X_a, X_b)``.  Traces over an orthonormal basis are
``G^{-1}`` contractions over the (non-orthonormal) frame.
"""
import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import product

from .errors import (
    ChartSchemaError,
    DegenerateStructure,
    InsufficientJetOrder,
    NotQuaternionCompatible,
    NotQuaternionicContact,
    SingularFrame,
)
from .exterior import (
    FormJet,
    VectorJet,
    evaluate_form,
    exterior_derivative,
    interior_product,
    pullback,
    wedge,
)
from .ratjet.expr import ExpressionSyntaxError, UnknownSymbolError, evaluate_jets, parse_expression
from .ratjet.jet import Jet, is_zero
from .ratjet.linalg import (
    InconsistentSystem,
    SingularValuePart,
    identity,
    inverse,
    is_zero_matrix,
    leading_minors,
    mat_add,
    mat_scale,
    mat_sub,
    matmul,
    matvec,
    solve_linear_jets,
    transpose,
)
from .ratjet.primefield import GF
from .ratjet.rational import Q

__all__ = [
    "QcChart",
    "QcPointFrame",
    "CYCLIC",
    "reeb_fields",
    "horizontal_frame",
    "quaternionic_data",
    "fundamental_forms",
    "build_frame",
    "remix_frame",
    "form_matrix",
    "g_trace",
]

# (i, j, k) cyclic permutations of (0, 1, 2)
CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


@dataclass
class QcChart:
    n: int
    coordinates: list
    eta: list  # three lists of D Expressions
    label: str = ""
    epsilon: int = None

    def __post_init__(self):
        if self.n < 1:
            raise ChartSchemaError("n must be >= 1")
        D = 4 * self.n + 3
        if len(self.coordinates) != D:
            raise ChartSchemaError(f"expected {D} coordinates for n = {self.n}, got {len(self.coordinates)}")
        if len(set(self.coordinates)) != D:
            raise ChartSchemaError("coordinate symbols must be distinct")
        if len(self.eta) != 3:
            raise ChartSchemaError(f"eta must have exactly 3 rows, got {len(self.eta)}")
        for row in self.eta:
            if len(row) != D:
                raise ChartSchemaError(f"each eta row needs {D} expressions, got {len(row)}")
        if self.epsilon not in (None, 1, -1):
            raise ChartSchemaError("epsilon must be 1 or -1")

    @property
    def dim(self):
        return 4 * self.n + 3

    def eta_jets(self, point, order, convert=Q):
        """The three contact forms as 1-form jets at ``point``."""
        if len(point) != self.dim:
            raise ValueError(f"point has {len(point)} coordinates, chart has {self.dim}")
        flat = [e for row in self.eta for e in row]
        jets = evaluate_jets(flat, point, order, convert)
        D = self.dim
        return [FormJet.one_form(jets[l * D:(l + 1) * D]) for l in range(3)]

    # -- JSON ----------------------------------------------------------
    def to_dict(self):
        d = {
            "label": self.label,
            "n": self.n,
            "coordinates": list(self.coordinates),
            "eta": [[str(e) for e in row] for row in self.eta],
        }
        if self.epsilon is not None:
            d["epsilon"] = self.epsilon
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ChartSchemaError("chart must be a JSON object")
        for key in ("n", "coordinates", "eta"):
            if key not in d:
                raise ChartSchemaError(f"missing key {key!r}")
        extra = set(d) - {"label", "n", "coordinates", "eta", "epsilon"}
        if extra:
            raise ChartSchemaError(f"unknown keys {sorted(extra)}")
        n = d["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise ChartSchemaError("n must be an integer")
        coords = d["coordinates"]
        if not isinstance(coords, list) or not all(isinstance(c, str) for c in coords):
            raise ChartSchemaError("coordinates must be a list of strings")
        eta = d["eta"]
        if not isinstance(eta, list) or len(eta) != 3:
            raise ChartSchemaError(f"eta must have exactly 3 rows, got {len(eta) if isinstance(eta, list) else type(eta).__name__}")
        rows = []
        for l, row in enumerate(eta):
            if not isinstance(row, list) or not all(isinstance(s, str) for s in row):
                raise ChartSchemaError(f"eta row {l} must be a list of strings")
            parsed = []
            for mu, src in enumerate(row):
                try:
                    parsed.append(parse_expression(src, coords))
                except UnknownSymbolError as exc:
                    raise ChartSchemaError(f"eta[{l}][{mu}]: unknown coordinate symbol {exc.name!r}") from exc
                except ExpressionSyntaxError as exc:
                    raise ChartSchemaError(f"eta[{l}][{mu}]: {exc}") from exc
            rows.append(parsed)
        return cls(n=n, coordinates=list(coords), eta=rows, label=d.get("label", ""), epsilon=d.get("epsilon"))

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ChartSchemaError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(d)


@dataclass
class QcPointFrame:
    chart: QcChart
    point: list
    order: int
    eta: list
    deta: list
    xi: list
    hframe: list
    pivots: tuple
    G: list
    Ginv: list
    J: list
    W: list
    omega: list = field(default_factory=list)
    Omega: FormJet = None
    remix: list = None  # P^-1 when hframe has been re-mixed by P


    @property
    def n(self):
        return self.chart.n

    @property
    def dim(self):
        return self.chart.dim

    @cached_property
    def hframe0(self):
        """Horizontal frame truncated to value order (for value-level contractions)."""
        return [X.truncate(0) for X in self.hframe]

    @cached_property
    def xi0(self):
        return [v.truncate(0) for v in self.xi]

    def horizontal_coordinates(self, v):
        """Coordinates of a horizontal vector in ``hframe``."""
        raw = [v[c] for c in range(self.dim) if c not in self.pivots]
        return raw if self.remix is None else matvec(self.remix, raw)

    def horizontal_part(self, v):
        """``v - sum_m eta_m(v) xi_m``."""
        out = v
        for m in range(3):
            c = evaluate_form(self.eta[m], [v])
            if not is_zero(c):
                out = out - self.xi[m].scale(c)
        return out


def form_matrix(form2, vectors):
    """Matrix ``[form2(v_a, v_b)]`` of a 2-form on a list of vectors."""
    m = len(vectors)
    D = form2.dim
    rows = [dict() for _ in range(D)]
    for (mu, nu), v in form2.comps.items():
        rows[mu][nu] = v
        rows[nu][mu] = -v
    # AV[mu][b] = sum_nu A[mu][nu] v_b[nu]
    AV = [[_sparse_dot(rows[mu], vec) for vec in vectors] for mu in range(D)]
    M = [[0] * m for _ in range(m)]
    for a in range(m):
        va = vectors[a]
        for b in range(a + 1, m):
            acc = 0
            for mu in range(D):
                x, y = va[mu], AV[mu][b]
                if not is_zero(x) and not is_zero(y):
                    acc = acc + x * y
            M[a][b] = acc
            M[b][a] = -acc
    return M


def _sparse_dot(row, vec):
    acc = 0
    for nu, v in row.items():
        x = vec[nu]
        if not is_zero(x):
            acc = acc + v * x
    return acc


def g_trace(Ginv, B):
    """``sum_ab G^{ab} B[a][b]``: orthonormal trace of a bilinear form."""
    acc = 0
    for ra, rb in zip(Ginv, B):
        for x, y in zip(ra, rb):
            if not is_zero(x) and not is_zero(y):
                acc = acc + x * y
    return acc


def horizontal_frame(eta, order):
    """Basis of ``H = ker eta_1 ∩ ker eta_2 ∩ ker eta_3`` by jet row reduction.

    Returns ``(vectors, pivot_columns)``; each row pivots on the last column
    with a nonzero value part (charts list vertical coordinates last, so the
    frame is the horizontal lift of the leading coordinate fields).
    """
    D = eta[0].dim
    rows = [[eta[l].comps.get((mu,), Jet.zero(D, order)) for mu in range(D)] for l in range(3)]
    rows = [[x.truncate(order) if isinstance(x, Jet) else x for x in r] for r in rows]
    pivots = []
    for r in range(3):
        piv = next((c for c in reversed(range(D)) if c not in pivots and rows[r][c].value), None)
        if piv is None:
            raise SingularFrame("contact forms are linearly dependent at the point")
        inv = rows[r][piv].reciprocal()
        rows[r] = [x * inv for x in rows[r]]
        for s in range(3):
            if s != r and not rows[s][piv].is_zero():
                f = rows[s][piv]
                rows[s] = [x - f * y for x, y in zip(rows[s], rows[r])]
        pivots.append(piv)
    free = [c for c in range(D) if c not in pivots]
    vectors = []
    for f in free:
        comps = [Jet.zero(D, order) for _ in range(D)]
        comps[f] = Jet.constant(D, order, 1)
        for r, p in enumerate(pivots):
            comps[p] = -rows[r][f]
        vectors.append(VectorJet(comps))
    for X in vectors:
        for l in range(3):
            if not is_zero(evaluate_form(eta[l], [X])):
                raise SingularFrame("horizontal frame construction failed to annihilate eta")
    return vectors, tuple(pivots)


def reeb_fields(eta, deta, hframe):
    """Reeb fields: ``eta_m(xi_l) = delta_ml`` and ``(xi_l ⌟ d eta_l)|_H = 0``.

    The remaining cross conditions ``(xi_l ⌟ d eta_k)|_H = -(xi_k ⌟ d eta_l)|_H``
    are verified exactly afterwards.
    """
    D = eta[0].dim
    order = min(f.order for f in deta)
    if order < 0:
        raise InsufficientJetOrder("Reeb fields need eta of order >= 1")
    zero = Jet.zero(D, order)
    eta_rows = [[eta[m].comps.get((mu,), zero).truncate(order) for mu in range(D)] for m in range(3)]
    xi = []
    for l in range(3):
        rows = list(eta_rows)
        for X in hframe:
            c = interior_product(X, deta[l])
            # d eta_l(xi, X) = -(X ⌟ d eta_l)(xi)
            rows.append([c.comps.get((mu,), zero) for mu in range(D)])
        rhs = [Jet.constant(D, order, 1 if m == l else 0) for m in range(3)] + [zero] * len(hframe)
        try:
            sol = solve_linear_jets(rows, rhs)
        except SingularValuePart as exc:
            raise SingularFrame(f"Reeb system for xi_{l + 1} is singular: {exc}") from exc
        except InconsistentSystem as exc:
            raise SingularFrame(f"Reeb system for xi_{l + 1} is inconsistent: {exc}") from exc
        xi.append(VectorJet(sol))
    for l in range(3):
        for k in range(3):
            if k == l:
                continue
            for a, X in enumerate(hframe):
                r = evaluate_form(deta[k], [xi[l], X]) + evaluate_form(deta[l], [xi[k], X])
                if not is_zero(r):
                    raise NotQuaternionicContact(
                        f"(xi_{l + 1} ⌟ d eta_{k + 1})|_H != -(xi_{k + 1} ⌟ d eta_{l + 1})|_H on frame vector {a}"
                    )
    return xi


def _positive(x):
    # prime-field values carry no order; only nonvanishing can be checked there
    return bool(x) if isinstance(x, GF) else x > 0


def quaternionic_data(deta, hframe):
    """Horizontal metric ``G``, its inverse and the triple ``J_1, J_2, J_3``.

    ``W_l = [omega_l(X_a, X_b)]`` with ``omega_l = d eta_l / 2`` on H satisfies
    ``W_l = J_l^T G``; products ``W_a^{-1} W_b`` give ``-J_c`` up to sign, and
    the sign triple is fixed by requiring one common symmetric positive
    definite metric and ``J_1 J_2 = J_3``.
    """
    half = Q(1, 2)
    W = [mat_scale(form_matrix(deta[l], hframe), half) for l in range(3)]
    try:
        Winv = [inverse(w) for w in W]
    except SingularValuePart as exc:
        raise DegenerateStructure(f"a horizontal 2-form is degenerate: {exc}") from exc
    cand = [
        mat_scale(matmul(Winv[1], W[2]), -1),  # J_1
        mat_scale(matmul(Winv[2], W[0]), -1),  # J_2
        mat_scale(matmul(Winv[0], W[1]), -1),  # J_3
    ]
    base_G = [mat_scale(matmul(transpose(cand[l]), W[l]), -1) for l in range(3)]
    size = len(hframe)
    for signs in product((1, -1), repeat=3):
        Gs = [base_G[l] if signs[l] > 0 else mat_scale(base_G[l], -1) for l in range(3)]
        if not (is_zero_matrix(mat_sub(Gs[0], Gs[1])) and is_zero_matrix(mat_sub(Gs[0], Gs[2]))):
            continue
        G = Gs[0]
        if not is_zero_matrix(mat_sub(G, transpose(G))):
            continue
        if not all(_positive(m) for m in leading_minors(G)):
            continue
        J = [cand[l] if signs[l] > 0 else mat_scale(cand[l], -1) for l in range(3)]
        if not is_zero_matrix(mat_sub(matmul(J[0], J[1]), J[2])):
            continue
        like = next(x for row in G for x in row if isinstance(x, Jet))
        minus_id = mat_scale(identity(size, like), -1)
        for l in range(3):
            if not is_zero_matrix(mat_sub(matmul(J[l], J[l]), minus_id)):
                raise NotQuaternionCompatible(f"J_{l + 1}^2 != -Id")
        return G, inverse(G), J, W
    raise NotQuaternionCompatible("no sign assignment gives a compatible quaternionic triple")


def fundamental_forms(eta, deta, xi, omega_order=None):
    """The 2-forms ``omega_m`` (horizontal part of ``d eta_m / 2``) and ``Omega``.

    ``2 omega_m = d eta_m - sum_l eta_l ^ (xi_l ⌟ d eta_m)
    + sum_{l<p} d eta_m(xi_l, xi_p) eta_l ^ eta_p``.
    """
    half = Q(1, 2)
    omega = []
    for m in range(3):
        acc = deta[m]
        for l in range(3):
            acc = acc - wedge(eta[l], interior_product(xi[l], deta[m]))
        for l, p in ((0, 1), (0, 2), (1, 2)):
            c = evaluate_form(deta[m], [xi[l], xi[p]])
            if not is_zero(c):
                acc = acc + wedge(eta[l], eta[p]).scale(c)
        omega.append(acc.scale(half))
    src = omega if omega_order is None else [w.truncate(omega_order) for w in omega]
    Omega = wedge(src[0], src[0]) + wedge(src[1], src[1]) + wedge(src[2], src[2])
    return omega, Omega


def build_frame(chart, point, order=3, convert=Q, omega_order=None):
    """Assemble the full :class:`QcPointFrame` at ``point``.

    ``order`` is the jet order of the contact forms; Reeb fields, metric and
    2-forms come out one order lower.  Raises a :class:`~qcgeom.errors.QcError`
    subclass (or a division error from the chart expressions) when the chart
    is degenerate at the point.
    """
    if order < 1:
        raise InsufficientJetOrder("jet order must be >= 1 to build a frame")
    pt = [convert(c) for c in point]
    eta = chart.eta_jets(pt, order, convert)
    deta = [exterior_derivative(e) for e in eta]
    hframe, pivots = horizontal_frame(eta, order)
    xi = reeb_fields(eta, deta, hframe)
    G, Ginv, J, W = quaternionic_data(deta, hframe)
    if omega_order is None:
        omega_order = max(order - 2, 0)
    omega, Omega = fundamental_forms(eta, deta, xi, omega_order)
    return QcPointFrame(
        chart=chart,
        point=pt,
        order=order,
        eta=eta,
        deta=deta,
        xi=xi,
        hframe=hframe,
        pivots=pivots,
        G=G,
        Ginv=Ginv,
        J=J,
        W=W,
        omega=omega,
        Omega=Omega,
    )


def remix_frame(frame, P):
    """The same point with horizontal frame ``X'_b = sum_a P[a][b] X_a``.

    ``P`` is an invertible matrix of rationals; everything that depends on
    the choice of horizontal basis is rebuilt.
    """
    m = len(frame.hframe)
    hframe = []
    for b in range(m):
        acc = None
        for a in range(m):
            if P[a][b]:
                v = frame.hframe[a].scale(P[a][b])
                acc = v if acc is None else acc + v
        if acc is None:
            raise SingularValuePart("re-mixing matrix has a zero column")
        hframe.append(acc)
    Pinv = inverse([[Q(x) for x in row] for row in P])
    if frame.remix is not None:
        Pinv = matmul(Pinv, frame.remix)
    G, Ginv, J, W = quaternionic_data(frame.deta, hframe)
    return replace(frame, hframe=hframe, G=G, Ginv=Ginv, J=J, W=W, remix=Pinv)


def frame_invariant_checks(frame):
    """Exact residuals of the frame invariants, as ``(name, residual)`` pairs."""
    out = []
    for l in range(3):
        for m in range(3):
            r = evaluate_form(frame.eta[l], [frame.xi[m]]) - (1 if l == m else 0)
            out.append((f"frame.eta{l + 1}(xi{m + 1})=delta", r))
    size = len(frame.hframe)
    G, J = frame.G, frame.J
    like = next(x for row in G for x in row if isinstance(x, Jet))
    minus_id = mat_scale(identity(size, like), -1)
    for l in range(3):
        out.append((f"frame.J{l + 1}^2=-Id", mat_sub(matmul(J[l], J[l]), minus_id)))
        out.append((f"frame.G(J{l + 1}.,J{l + 1}.)=G", mat_sub(matmul(matmul(transpose(J[l]), G), J[l]), G)))
    out.append(("frame.J1J2=J3", mat_sub(matmul(J[0], J[1]), J[2])))
    out.append(("frame.J2J1=-J3", mat_add(matmul(J[1], J[0]), J[2])))
    out.append(("frame.G_symmetric", mat_sub(G, transpose(G))))
    for l in range(3):
        for m in range(3):
            out.append((f"frame.xi{m + 1}⌟omega{l + 1}=0", interior_product(frame.xi[m], frame.omega[l])))
        twice = mat_scale(form_matrix(frame.omega[l], frame.hframe), 2)
        out.append((f"frame.2omega{l + 1}|H=deta{l + 1}|H", mat_sub(twice, form_matrix(frame.deta[l], frame.hframe))))
    for m in range(3):
        out.append((f"frame.xi{m + 1}⌟Omega=0", interior_product(frame.xi[m], frame.Omega)))
    return out
