"""sp(1)-connection forms, qc scalar curvature, Ricci forms and torsion.

Everything is computed at one sample point from a :class:`QcPointFrame`.
With contact forms at jet order ``r`` the budget is: Reeb fields and
``beta`` at ``r - 1``, ``s`` at ``r - 2``, ``alpha`` at ``r - 2`` and the
Ricci forms at ``r - 3``.  The torsion tensors only need value parts.

Horizontal bilinear forms are matrices in the horizontal frame,
``B[c][d] = B(X_c, X_d)``; ``J^T B J`` is ``B(I., I.)`` and ``B J`` is
``B(., I.)``.
"""
from dataclasses import dataclass, field
from itertools import permutations

from .checks import INFORMATIVE, MUST_VANISH, Check, CheckReport, error_check, make_check
from .errors import CrossKInconsistency, DimensionSevenUnsupported, InsufficientJetOrder
from .exterior import (
    FormJet,
    VectorJet,
    bracket,
    evaluate_form,
    exterior_derivative,
    interior_product,
    lie_derivative,
    pullback,
    wedge,
)
from .qcframe import CYCLIC, form_matrix, g_trace
from .ratjet.jet import Jet, OrderExhausted, is_zero, value_of
from .ratjet.linalg import is_zero_matrix, mat_add, mat_scale, mat_sub, matmul, transpose
from .ratjet.rational import Q

__all__ = [
    "ConnectionData",
    "TorsionReport",
    "connection_forms",
    "solve_scalar",
    "ricci_forms",
    "torsion_from_four_form",
    "torsion_from_ricci",
    "per_reeb_torsion",
    "four_form_contractions",
    "four_form_ricci_residuals",
    "upsilon",
    "g_norm2",
    "identity_suite",
    "classify",
    "analyze",
    "PointAnalysis",
    "DIM7_CAVEAT",
]

DIM7_CAVEAT = (
    "n = 1: the four-form torsion formulas do not apply in dimension 7 and "
    "whether dOmega = 0 forces zero torsion there is an open question; "
    "flags are reported without asserting their equivalence"
)


@dataclass
class ConnectionData:
    beta: list
    s: Jet = None
    Scal: Jet = None
    alpha: list = None
    rho: list = None
    s_candidates: list = field(default_factory=list)


@dataclass
class TorsionReport:
    T0: list
    U: list
    route: str
    perReeb: list = None
    norms: dict = None


# -- small matrix helpers ---------------------------------------------------

def _values(M):
    return [[value_of(x) for x in row] for row in M]


def upsilon(h, J):
    """``sum_l h(I_l ., I_l .)``."""
    out = None
    for Jl in J:
        t = matmul(matmul(transpose(Jl), h), Jl)
        out = t if out is None else mat_add(out, t)
    return out


def g_norm2(B, Ginv):
    """Squared norm ``tr(G^-1 B G^-1 B^T)`` of a horizontal bilinear form."""
    M = matmul(matmul(Ginv, B), matmul(Ginv, transpose(B)))
    acc = 0
    for i in range(len(M)):
        acc = acc + M[i][i]
    return acc


def _combo(vectors, coeffs):
    """``sum_c coeffs[c] vectors[c]``."""
    out = None
    for c, x in enumerate(coeffs):
        if is_zero(x):
            continue
        v = vectors[c].scale(x)
        out = v if out is None else out + v
    if out is None:
        out = vectors[0].scale(0)
    return out


def _column(M, b):
    return [row[b] for row in M]


# -- connection ---------------------------------------------------------------

def connection_forms(frame):
    """The s-free parts ``beta_l`` of the sp(1)-connection forms as global 1-forms.

    ``alpha_i(X) = d eta_k(xi_j, X)`` on H and
    ``alpha_i(xi_l) = d eta_l(xi_j, xi_k) - delta_il (s/2 + C/2)`` with
    ``C = d eta_1(xi_2, xi_3) + d eta_2(xi_3, xi_1) + d eta_3(xi_1, xi_2)``.
    """
    eta, deta, xi = frame.eta, frame.deta, frame.xi
    if min(x.order for x in xi) < 0:
        raise InsufficientJetOrder("connection forms need Reeb fields")
    vv = [[[evaluate_form(deta[m], [xi[a], xi[b]]) for b in range(3)] for a in range(3)] for m in range(3)]
    C = vv[0][1][2] + vv[1][2][0] + vv[2][0][1]
    half = Q(1, 2)
    beta = [None] * 3
    for i, j, k in CYCLIC:
        form = interior_product(xi[j], deta[k])
        for m in range(3):
            c = vv[k][j][m]
            if not is_zero(c):
                form = form - eta[m].scale(c)
        for l in range(3):
            if l == i:
                c = vv[l][j][k] - C * half
            else:
                c = vv[l][j][k]
            if not is_zero(c):
                form = form + eta[l].scale(c)
        beta[i] = form
    return ConnectionData(beta=beta)


def solve_scalar(frame, conn):
    """Recover ``s`` from ``sum_ab G^ab rho_k(X_a, I_k X_b) = -4n s`` for k = 1, 2, 3.

    On H, ``rho_k = B_k - (s/2) omega_k`` with ``B_k = (d beta_k + beta_i ^ beta_j)/2``,
    and ``omega_k(X, I_k Y) = g(X, Y)``; hence ``s = -trace(B_k I_k) / 2n``.
    """
    n = frame.n
    if min(b.order for b in conn.beta) < 1:
        raise InsufficientJetOrder("solving for s needs beta of order >= 1 (contact forms of order >= 2)")
    half = Q(1, 2)
    cands = []
    for i, j, k in CYCLIC:
        B = (exterior_derivative(conn.beta[k]) + wedge(conn.beta[i], conn.beta[j])).scale(half)
        M = form_matrix(B, frame.hframe)
        P = g_trace(frame.Ginv, matmul(M, frame.J[k]))
        cands.append(P * Q(-1, 2 * n))
    s_order = min(b.order for b in conn.beta) - 1
    cands = [c.truncate(s_order) if isinstance(c, Jet) else Jet.constant(frame.dim, s_order, c) for c in cands]
    conn.s_candidates = cands
    for k in (1, 2):
        if not (cands[0] - cands[k]).is_zero():
            raise CrossKInconsistency(
                f"trace equations for k = 1 and k = {k + 1} give different s (difference {cands[0] - cands[k]!r})"
            )
    s = cands[0]
    for c in cands[1:]:
        if c.order < s.order:
            s = c
    conn.s = s
    conn.Scal = s * (8 * n * (n + 2))
    conn.alpha = [conn.beta[l] - frame.eta[l].scale(s * half) for l in range(3)]
    return s


def ricci_forms(frame, conn):
    """``rho_k = (d alpha_k + alpha_i ^ alpha_j) / 2``."""
    if conn.alpha is None:
        raise ValueError("solve_scalar must run before ricci_forms")
    if min(a.order for a in conn.alpha) < 1:
        raise InsufficientJetOrder("Ricci forms need alpha of order >= 1 (contact forms of order >= 3)")
    half = Q(1, 2)
    rho = [None] * 3
    for i, j, k in CYCLIC:
        rho[k] = (exterior_derivative(conn.alpha[k]) + wedge(conn.alpha[i], conn.alpha[j])).scale(half)
    conn.rho = rho
    return rho


# -- torsion ------------------------------------------------------------------

def _finish(frame, T0, U, route):
    rep = TorsionReport(T0=T0, U=U, route=route)
    rep.perReeb = per_reeb_torsion(rep, frame)
    Ginv = _values(frame.Ginv)
    rep.norms = {"T0": g_norm2(T0, Ginv), "U": g_norm2(U, Ginv)}
    return rep


def torsion_from_ricci(frame, conn):
    """``T0`` and ``U`` from the trace-free horizontal Ricci forms.

    ``rho0_l(X, I_l Y) = rho_l(X, I_l Y) + s g(X, Y)``; ``S = -sum_l rho0_l(., I_l .)``
    equals ``T0 + 6U`` and ``Upsilon`` acts by -1 on ``T0`` and by 3 on ``U``.
    """
    if conn.rho is None:
        raise ValueError("ricci_forms must run before torsion_from_ricci")
    G, J = _values(frame.G), [_values(Jl) for Jl in frame.J]
    s = value_of(conn.s)
    S = None
    for l in range(3):
        R = _values(form_matrix(conn.rho[l], frame.hframe0))
        rho0 = mat_add(matmul(R, J[l]), mat_scale(G, s))
        S = rho0 if S is None else mat_add(S, rho0)
    S = mat_scale(S, -1)
    YS = upsilon(S, J)
    T0 = mat_scale(mat_sub(mat_scale(S, 3), YS), Q(1, 4))
    U = mat_scale(mat_add(S, YS), Q(1, 24))
    return _finish(frame, T0, U, "ricci")


def _dense4(form, m):
    """Dense ``m^4`` array of a 4-form on the index space ``0..m-1``."""
    A = {}
    for idx, v in form.comps.items():
        v = value_of(v)
        for perm in permutations(range(4)):
            key = tuple(idx[p] for p in perm)
            sign = _sign(perm)
            A[key] = v if sign > 0 else -v
    return A


def _sign(perm):
    s = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def four_form_contractions(frame):
    """``A_i[c][d] = sum_a dOmega(xi_i, X_c, I_k X_d, e_a, I_j e_a)`` for i = 1, 2, 3."""
    dOmega = exterior_derivative(frame.Omega)
    m = len(frame.hframe)
    G, Ginv = _values(frame.G), _values(frame.Ginv)
    J = [_values(Jl) for Jl in frame.J]
    out = [None] * 3
    for i, j, k in CYCLIC:
        theta = interior_product(frame.xi[i], dOmega)
        P = _dense4(pullback(theta, frame.hframe0), m)
        N = matmul(Ginv, transpose(J[j]))  # N[a][f] = sum_b G^ab J_j[f][b]
        K = [[0] * m for _ in range(m)]
        for (c, e, a, f), v in P.items():
            w = N[a][f]
            if v and w:
                K[c][e] = K[c][e] + v * w
        out[i] = matmul(K, J[k])
    del G
    return out, dOmega


def torsion_from_four_form(frame, contractions=None):
    """``U`` and ``T0`` from contractions of ``dOmega`` with the Reeb fields (n > 1 only).

    With the wedge and evaluation conventions of :mod:`qcgeom.exterior` the
    contraction ``A_i`` equals twice
    ``4(n-1) rho0_k(X, I_k Y) + 2 rho0_j(X, I_j Y) - 2 rho0_j(I_i X, I_k Y)``
    (see :func:`four_form_ricci_residuals`), so ``A_i / 2`` enters the
    solved formulas
    ``U = -(A + A(I_i., I_i.)) / 16n`` and
    ``T0 = sum_(ijk) (A - A(I_i., I_i.)) / 8(1 - n)``.
    """
    n = frame.n
    if n == 1:
        raise DimensionSevenUnsupported("the four-form torsion formulas are singular for n = 1")
    if contractions is None:
        contractions, _ = four_form_contractions(frame)
    J = [_values(Jl) for Jl in frame.J]
    half = Q(1, 2)
    Us = []
    T0 = None
    for i in range(3):
        A = mat_scale(contractions[i], half)
        twisted = matmul(matmul(transpose(J[i]), A), J[i])
        Us.append(mat_scale(mat_add(A, twisted), Q(-1, 16 * n)))
        d = mat_sub(A, twisted)
        T0 = d if T0 is None else mat_add(T0, d)
    T0 = mat_scale(T0, Q(1, 8 * (1 - n)))
    rep = _finish(frame, T0, Us[0], "four-form")
    rep.U_by_index = Us
    return rep


def four_form_ricci_residuals(frame, conn, contractions):
    """``A_i - 2[4(n-1) rho0_k(X, I_k Y) + 2 rho0_j(X, I_j Y) - 2 rho0_j(I_i X, I_k Y)]`` for each cyclic i."""
    n = frame.n
    G, J = _values(frame.G), [_values(Jl) for Jl in frame.J]
    s = value_of(conn.s)
    # P_l[c][d] = rho0_l(X_c, X_d), the trace-free horizontal Ricci form itself
    P = []
    for l in range(3):
        R = _values(form_matrix(conn.rho[l], frame.hframe0))
        P.append(mat_add(R, mat_scale(matmul(G, J[l]), -s)))
    out = []
    for i, j, k in CYCLIC:
        rhs = mat_add(mat_scale(matmul(P[k], J[k]), 4 * (n - 1)), mat_scale(matmul(P[j], J[j]), 2))
        rhs = mat_sub(rhs, mat_scale(matmul(matmul(transpose(J[i]), P[j]), J[k]), 2))
        out.append(mat_sub(contractions[i], mat_scale(rhs, 2)))
    return out


def per_reeb_torsion(report, frame):
    """``T0_{xi_l}(X, Y)`` from ``4 T0(xi_l, I_l X, Y) = T0(X, Y) - T0(I_l X, I_l Y)``."""
    J = [_values(Jl) for Jl in frame.J]
    T0 = report.T0
    return [mat_scale(mat_add(matmul(transpose(Jl), T0), matmul(T0, Jl)), Q(-1, 4)) for Jl in J]


def torsion_invariant_checks(rep, frame, prefix):
    G, Ginv = _values(frame.G), _values(frame.Ginv)
    J = [_values(Jl) for Jl in frame.J]
    T0, U = rep.T0, rep.U
    out = [
        make_check(f"{prefix}.T0_symmetric", mat_sub(T0, transpose(T0))),
        make_check(f"{prefix}.U_symmetric", mat_sub(U, transpose(U))),
        make_check(f"{prefix}.T0_tracefree", g_trace(Ginv, T0)),
        make_check(f"{prefix}.U_tracefree", g_trace(Ginv, U)),
        make_check(f"{prefix}.T0+sum_l T0(I_l,I_l)=0", mat_add(T0, upsilon(T0, J))),
        make_check(f"{prefix}.3U-sum_l U(I_l,I_l)=0", mat_sub(mat_scale(U, 3), upsilon(U, J))),
    ]
    if frame.n == 1:
        out.append(make_check(f"{prefix}.U=0_in_dim7", U))
    recon = None
    for l, Tl in enumerate(rep.perReeb):
        out.append(make_check(f"{prefix}.T0_xi{l + 1}_symmetric", mat_sub(Tl, transpose(Tl))))
        out.append(make_check(f"{prefix}.T0_xi{l + 1}_tracefree", g_trace(Ginv, Tl)))
        t = matmul(transpose(J[l]), Tl)
        recon = t if recon is None else mat_add(recon, t)
    out.append(make_check(f"{prefix}.sum_l T0_xi_l(I_l.,.)=T0", mat_sub(recon, T0)))
    del G
    return out


# -- suites -------------------------------------------------------------------

@dataclass
class PointAnalysis:
    frame: object
    conn: ConnectionData
    ricci_torsion: TorsionReport
    four_form_torsion: TorsionReport = None
    dOmega: FormJet = None
    report: CheckReport = None
    flags: dict = None
    classification: dict = None


def _truncate0(x):
    return x.truncate(0) if isinstance(x, (Jet, FormJet, VectorJet)) else x


def _vert_torsion(frame, conn, i, j, k, br):
    """``T(xi_i, xi_j)`` from the covariant derivatives of the Reeb fields."""
    xi, al = frame.xi, conn.alpha
    a = lambda p, q: evaluate_form(al[p], [xi[q]])  # alpha_p(xi_q)
    T = xi[i].scale(-a(k, i)) + xi[k].scale(a(i, i) + a(j, j)) - xi[j].scale(a(k, j))
    return T - br


def identity_suite(frame, conn, ricci_torsion, four_form=None, dOmega=None, contractions=None):
    """Every structure-equation and curvature identity at the point, as exact checks.

    Checks that hold only for torsion-free structures are marked informative
    when the computed torsion is nonzero.
    """
    n, eta, xi, omega, Omega = frame.n, frame.eta, frame.xi, frame.omega, frame.Omega
    s, alpha, rho = conn.s, conn.alpha, conn.rho
    half = Q(1, 2)
    G = _values(frame.G)
    J = [_values(Jl) for Jl in frame.J]
    checks = []

    def add(name, thunk, expected=MUST_VANISH):
        try:
            checks.append(make_check(name, thunk(), expected))
        except (InsufficientJetOrder, OrderExhausted) as exc:
            checks.append(error_check(name, exc, expected))

    # frame invariants
    from .qcframe import frame_invariant_checks

    for name, r in frame_invariant_checks(frame):
        checks.append(make_check(name, r))

    # connection and scalar
    for l in range(3):
        add(f"connection.alpha{l + 1}|H=beta{l + 1}|H",
            lambda l=l: [evaluate_form(alpha[l] - conn.beta[l], [X]) for X in frame.hframe])
    for k in (1, 2):
        add(f"scalar.cross_k_1={k + 1}", lambda k=k: conn.s_candidates[0] - conn.s_candidates[k])
    for k in range(3):
        add(f"ricci.trace{k + 1}=-4ns",
            lambda k=k: g_trace(_values(frame.Ginv), matmul(form_matrix(rho[k], frame.hframe0), J[k])) + value_of(s) * (4 * n))
    for i, j, k in CYCLIC:
        add(f"ricci.rho{k + 1}=(dalpha{k + 1}+alpha{i + 1}^alpha{j + 1})/2",
            lambda i=i, j=j, k=k: rho[k] - (exterior_derivative(alpha[k]) + wedge(alpha[i], alpha[j])).scale(half))

    # structure equations
    for i, j, k in CYCLIC:
        add(f"structure.streq{i + 1}",
            lambda i=i, j=j, k=k: omega[i].scale(2) - (
                frame.deta[i] + wedge(eta[j], alpha[k]) - wedge(eta[k], alpha[j]) + wedge(eta[j], eta[k]).scale(s)
            ))
    ds = FormJet.one_form([s.partial(mu) for mu in range(frame.dim)]) if s.order >= 1 else None

    def need_ds():
        if ds is None:
            raise InsufficientJetOrder("ds needs s of order >= 1")
        return ds
    for i, j, k in CYCLIC:
        def str2(i=i, j=j, k=k):
            dsv = need_ds()
            rhs = (
                wedge(omega[j], alpha[k] + eta[k].scale(s))
                - wedge(omega[k], alpha[j] + eta[j].scale(s))
                - wedge(rho[k], eta[j])
                + wedge(rho[j], eta[k])
                + wedge(wedge(dsv, eta[j]), eta[k]).scale(half)
            )
            return exterior_derivative(omega[i]) - rhs
        add(f"structure.str2_{i + 1}", str2)

    if dOmega is None:
        dOmega = exterior_derivative(Omega)

    def strom():
        dsv = need_ds()
        rhs = None
        for i, j, k in CYCLIC:
            term = wedge(eta[i], wedge(rho[k], omega[j]) - wedge(rho[j], omega[k])).scale(2)
            term = term + wedge(wedge(wedge(dsv, omega[i]), eta[j]), eta[k])
            rhs = term if rhs is None else rhs + term
        return dOmega - rhs
    add("structure.strom", strom)

    # torsion-route invariants
    checks.extend(torsion_invariant_checks(ricci_torsion, frame, "torsion.ricci"))
    if four_form is not None:
        checks.extend(torsion_invariant_checks(four_form, frame, "torsion.fourform"))
        for i in (1, 2):
            checks.append(make_check(f"torsion.fourform.U_index1={i + 1}",
                                     mat_sub(four_form.U_by_index[0], four_form.U_by_index[i])))
        checks.append(make_check("torsion.routes_agree.T0", mat_sub(four_form.T0, ricci_torsion.T0)))
        checks.append(make_check("torsion.routes_agree.U", mat_sub(four_form.U, ricci_torsion.U)))
    if contractions is not None:
        for i, r in enumerate(four_form_ricci_residuals(frame, conn, contractions)):
            checks.append(make_check(f"torsion.dOmega_contraction{i + 1}=ricci", r))

    # horizontal Ricci forms against the torsion (first curvature identity)
    sv = value_of(s)
    T0, U = ricci_torsion.T0, ricci_torsion.U
    for l in range(3):
        def rho_h(l=l):
            R = _values(form_matrix(rho[l], frame.hframe0))
            lhs = matmul(R, J[l])
            rhs = mat_sub(mat_scale(mat_add(T0, matmul(matmul(transpose(J[l]), T0), J[l])), -half), mat_scale(U, 2))
            return mat_sub(lhs, mat_sub(rhs, mat_scale(G, sv)))
        add(f"theorem.rho{l + 1}(X,I{l + 1}Y)", rho_h)

    # vertical torsion and the mixed Ricci identities
    brackets = {}
    for i, j, k in CYCLIC:
        try:
            brackets[(i, j)] = bracket(xi[i], xi[j])
        except OrderExhausted:
            pass

    def hpart(v):
        return frame.horizontal_part(v)

    for i, j, k in CYCLIC:
        def vt(i=i, j=j, k=k):
            if (i, j) not in brackets:
                raise InsufficientJetOrder("brackets of Reeb fields need order >= 1")
            br = brackets[(i, j)]
            T = _vert_torsion(frame, conn, i, j, k, br)
            return T + xi[k].scale(s) + hpart(br)
        add(f"theorem.T(xi{i + 1},xi{j + 1})=-s xi{k + 1}-[xi{i + 1},xi{j + 1}]_H", vt)

    def scal_vt():
        br = brackets[(0, 1)]
        T = _vert_torsion(frame, conn, 0, 1, 2, br)
        return s + evaluate_form(eta[2], [T])
    add("theorem.Scal=-8n(n+2)g(T(xi1,xi2),xi3)", scal_vt)

    hf0, xi0 = frame.hframe0, frame.xi0
    Ivecs = [[_combo(hf0, _column(J[l], b)) for b in range(len(hf0))] for l in range(3)]

    def Ivec(l, b):
        return Ivecs[l][b]

    for i, j, k in CYCLIC:
        def mixed3(i=i, j=j, k=k):
            br = brackets[(i, j)]
            T = _vert_torsion(frame, conn, i, j, k, br)
            h = [_truncate0(x) for x in frame.horizontal_coordinates(hpart(T))]
            res = []
            for b in range(len(frame.hframe)):
                gTX = 0
                for a, ha in enumerate(h):
                    if not is_zero(ha):
                        gTX = gTX + ha * G[a][b]
                r1 = gTX + evaluate_form(rho[k], [Ivec(i, b), xi0[i]])
                r2 = gTX + evaluate_form(rho[k], [Ivec(j, b), xi0[j]])
                res.extend([r1, r2])
            return res
        add(f"theorem.T(xi{i + 1},xi{j + 1},X)=-rho{k + 1}(I{i + 1}X,xi{i + 1})=-rho{k + 1}(I{j + 1}X,xi{j + 1})", mixed3)

    for i, j, k in CYCLIC:
        # identity is stated with (i, j, k) a cyclic triple and j the free slot
        add(f"theorem.rho{i + 1}(xi{i + 1},xi{j + 1})+rho{k + 1}(xi{k + 1},xi{j + 1})=xi{j + 1}(s)/2",
            lambda i=i, j=j, k=k: evaluate_form(rho[i], [xi0[i], xi0[j]]) + evaluate_form(rho[k], [xi0[k], xi0[j]])
            - xi0[j].apply(s) * half)

    quarter = Q(1, 4)
    for i, j, k in CYCLIC:
        def mixed5(i=i, j=j, k=k):
            res = []
            for b, X in enumerate(hf0):
                lhs = evaluate_form(rho[i], [X, xi0[i]])
                rhs = (
                    -X.apply(s) * quarter
                    + (
                        -evaluate_form(rho[i], [xi0[j], Ivec(k, b)])
                        + evaluate_form(rho[j], [xi0[k], Ivec(i, b)])
                        + evaluate_form(rho[k], [xi0[i], Ivec(j, b)])
                    ) * half
                )
                res.append(lhs - rhs)
            return res
        add(f"theorem.rho{i + 1}(X,xi{i + 1})", mixed5)

    # Lie derivative shortcut for the horizontal four-form
    for l in range(3):
        add(f"cartan.L_xi{l + 1}Omega=xi{l + 1}⌟dOmega",
            lambda l=l: lie_derivative(xi[l], Omega) - interior_product(xi[l], dOmega))

    # torsion-dependent statements
    torsion_zero = is_zero_matrix(T0) and is_zero_matrix(U)
    cond = MUST_VANISH if torsion_zero else INFORMATIVE
    add("flag.dOmega=0", lambda: dOmega, cond)
    for l in range(3):
        add(f"flag.xi{l + 1}⌟dOmega=0", lambda l=l: interior_product(xi[l], dOmega), cond)
    add("flag.T0=0", lambda: T0, cond)
    add("flag.U=0", lambda: U, cond)
    add("torsionfree.ds=0", need_ds, cond)
    for i, j, k in CYCLIC:
        add(f"torsionfree.[xi{i + 1},xi{j + 1}]_H=0",
            lambda i=i, j=j: hpart(brackets[(i, j)]), cond)
    for l in range(3):
        add(f"torsionfree.rho{l + 1}|H=-s omega{l + 1}|H",
            lambda l=l: mat_add(_values(form_matrix(rho[l], hf0)),
                                mat_scale(_values(frame.W[l]), sv)), cond)
        add(f"torsionfree.rho{l + 1}(xi,X)=0",
            lambda l=l: [evaluate_form(rho[l], [xi0[m], X]) for m in range(3) for X in hf0], cond)
    for i, j, k in CYCLIC:
        add(f"torsionfree.rho{i + 1}(xi{i + 1},xi{j + 1})+rho{k + 1}(xi{k + 1},xi{j + 1})=0",
            lambda i=i, j=j, k=k: evaluate_form(rho[i], [xi0[i], xi0[j]]) + evaluate_form(rho[k], [xi0[k], xi0[j]]),
            cond)

    scalars = {"s": value_of(s), "Scal": value_of(conn.Scal)}
    return CheckReport(label=frame.chart.label, point=list(frame.point), checks=checks, scalars=scalars)


def classify(frame, conn, ricci_torsion, dOmega, four_form=None):
    """Flags of the closed-four-form / zero-torsion / Reeb-invariance equivalence and a verdict."""
    n = frame.n
    flags = {
        "dOmega_zero": dOmega.is_zero(),
        "torsion_zero": is_zero_matrix(ricci_torsion.T0) and is_zero_matrix(ricci_torsion.U),
        "reeb_invariant": all(interior_product(x, dOmega).is_zero() for x in frame.xi),
    }
    some_invariant = any(interior_product(x, dOmega).is_zero() for x in frame.xi)
    s = value_of(conn.s)
    if flags["dOmega_zero"] and flags["torsion_zero"] and flags["reeb_invariant"]:
        verdict = "3-Sasakian-homothetic candidate" if s else "torsion-free, Scal = 0"
    else:
        verdict = "generic (torsion ≠ 0)"
    rec = dict(flags)
    rec["s"] = s
    rec["verdict"] = verdict
    rec["flags_agree"] = len(set(flags.values())) == 1
    if n > 1:
        # a single Reeb-invariant direction already forces U = 0
        rec["corollary_U_zero"] = (not some_invariant) or is_zero_matrix(ricci_torsion.U)
    else:
        rec["caveat"] = DIM7_CAVEAT
    return rec


def analyze(frame):
    """Run every stage at one point; returns a :class:`PointAnalysis`."""
    conn = connection_forms(frame)
    solve_scalar(frame, conn)
    ricci_forms(frame, conn)
    rt = torsion_from_ricci(frame, conn)
    dOmega = exterior_derivative(frame.Omega)
    ff = A = None
    if frame.n > 1:
        A, _ = four_form_contractions(frame)
        ff = torsion_from_four_form(frame, A)
    report = identity_suite(frame, conn, rt, ff, dOmega, A)
    cls = classify(frame, conn, rt, dOmega, ff)
    if frame.n > 1:
        report.checks.append(Check("theorem.flags_agree", "zero" if cls["flags_agree"] else "nonzero",
                                   MUST_VANISH, None if cls["flags_agree"] else repr(
                                       {k: cls[k] for k in ("dOmega_zero", "torsion_zero", "reeb_invariant")})))
        report.checks.append(Check("corollary.reeb_invariant=>U=0", "zero" if cls["corollary_U_zero"] else "nonzero",
                                   MUST_VANISH, None if cls["corollary_U_zero"] else "U nonzero"))
    return PointAnalysis(frame=frame, conn=conn, ricci_torsion=rt, four_form_torsion=ff,
                         dOmega=dOmega, report=report, flags={k: cls[k] for k in
                                                              ("dOmega_zero", "torsion_zero", "reeb_invariant")},
                         classification=cls)
