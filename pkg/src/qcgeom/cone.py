"""The metric cone ``M x R+`` over a qc chart and its hyperkaehler criteria.

The cone coordinate ``t`` is appended as the last jet variable, so ``dt``
takes part in exterior derivatives like any other coordinate.

``G_N = t^2 g + eps t^2 (eta_1^2 + eta_2^2 + eta_3^2) + eps dt^2`` and
``F_i = t^2 omega_i + eps t^2 eta_j ^ eta_k - t eta_i ^ dt``.
"""
from dataclasses import dataclass

from .checks import INFORMATIVE, MUST_VANISH, Check, CheckReport, make_check
from .errors import InsufficientJetOrder
from .exterior import FormJet, exterior_derivative, wedge
from .qcframe import CYCLIC, build_frame
from .ratjet.jet import Jet, is_zero, value_of
from .ratjet.linalg import leading_minors, mat_sub, matmul, transpose
from .ratjet.rational import Q

__all__ = [
    "ConeData",
    "cone_structures",
    "sasakian_residuals",
    "sasakian_check",
    "hyperkahler_check",
    "slice_form",
]


@dataclass
class ConeData:
    epsilon: int
    tvalue: object
    GN: list
    Fi: list
    F: FormJet
    frame: object = None
    basis_gram: list = None  # G_N on the frame (X_a, xi_l, d/dt)


def _positive(x):
    from .ratjet.primefield import GF

    return bool(x) if isinstance(x, GF) else x > 0


def cone_structures(chart, point, tvalue=1, epsilon=None, order=3, frame=None, convert=Q):
    """Assemble ``G_N``, ``F_i`` and ``F`` at ``(point, t = tvalue)``."""
    if epsilon is None:
        epsilon = chart.epsilon if chart.epsilon is not None else 1
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be 1 or -1")
    tvalue = convert(tvalue)
    if convert is Q and not tvalue > 0:
        raise ValueError("the cone coordinate must be positive")
    if frame is None:
        frame = build_frame(chart, point, order, convert)
    # one derivative is all dF needs; omega carries one order less than eta
    work = min(frame.order - 1, 1)
    if work < 1:
        raise InsufficientJetOrder("the cone needs contact forms of order >= 2")
    D = frame.dim
    N = D + 1
    eta = [e.truncate(work).extend(N) for e in frame.eta]
    omega = [w.truncate(work).extend(N) for w in frame.omega]
    t = Jet.variable(N, work, D, tvalue)
    t2 = t * t
    dt = FormJet.one_form([Jet.zero(N, work)] * D + [Jet.constant(N, work, 1)])
    Fi = [None] * 3
    for i, j, k in CYCLIC:
        Fi[i] = (omega[i] + wedge(eta[j], eta[k]).scale(epsilon)).scale(t2) - wedge(eta[i], dt).scale(t)
    F = wedge(Fi[0], Fi[0]) + wedge(Fi[1], Fi[1]) + wedge(Fi[2], Fi[2])
    GN, gram = _cone_metric(frame, tvalue, epsilon)
    return ConeData(epsilon=epsilon, tvalue=tvalue, GN=GN, Fi=Fi, F=F, frame=frame, basis_gram=gram)


def _cone_metric(frame, tvalue, epsilon):
    """Value-level cone metric in coordinates, plus its Gram matrix on ``(X_a, xi_l, d/dt)``."""
    D = frame.dim
    m = len(frame.hframe)
    G = [[value_of(x) for x in row] for row in frame.G]
    xi = [v.values() for v in frame.xi]
    eta = [[value_of(e.comps.get((mu,), 0)) for mu in range(D)] for e in frame.eta]
    t2 = tvalue * tvalue
    # horizontal coordinates of h(d_mu) = d_mu - sum_m eta_m(d_mu) xi_m
    h = []
    for mu in range(D):
        lifted = [(1 if c == mu else 0) - sum((eta[l][mu] * xi[l][c] for l in range(3)), 0) for c in range(D)]
        h.append([value_of(x) for x in frame.horizontal_coordinates(lifted)])
    GN = [[0] * (D + 1) for _ in range(D + 1)]
    for mu in range(D):
        for nu in range(D):
            acc = 0
            for a in range(m):
                if h[mu][a]:
                    for b in range(m):
                        if h[nu][b]:
                            acc = acc + h[mu][a] * G[a][b] * h[nu][b]
            acc = acc * t2
            vert = sum((eta[l][mu] * eta[l][nu] for l in range(3)), 0)
            GN[mu][nu] = acc + vert * t2 * epsilon
    GN[D][D] = epsilon
    basis = [[value_of(x) for x in X.comps] + [0] for X in frame.hframe]
    basis += [list(v) + [0] for v in xi]
    basis.append([0] * D + [1])
    B = transpose(basis)  # columns are the basis vectors
    gram = matmul(matmul(transpose(B), GN), B)
    return GN, gram


def slice_form(form, tvalue=None):
    """Components of a cone form without a ``dt`` leg, as a form on M (value parts)."""
    N = form.dim
    D = N - 1
    comps = {}
    for idx, v in form.comps.items():
        if D in idx:
            continue
        comps[idx] = value_of(v)
    return FormJet(D, form.degree, 0, {k: v for k, v in comps.items() if not is_zero(v)})


def sasakian_residuals(chart, point, epsilon, order=1, frame=None, convert=Q):
    """``d eta_i - 2 omega_i - 2 eps eta_j ^ eta_k`` for i = 1, 2, 3."""
    if frame is None:
        frame = build_frame(chart, point, order, convert, omega_order=order - 1)
    out = [None] * 3
    for i, j, k in CYCLIC:
        out[i] = frame.deta[i] - frame.omega[i].scale(2) - wedge(frame.eta[j], frame.eta[k]).scale(2 * epsilon)
    return out


def sasakian_check(chart, point, order=1, frame=None, convert=Q):
    """Which sign (if any) makes the 3-Sasakian equations hold exactly at ``point``.

    Returns ``(detected, {eps: [residual checks]})`` with ``detected`` in
    ``{1, -1, None}``.
    """
    if frame is None:
        frame = build_frame(chart, point, order, convert, omega_order=order - 1)
    results = {}
    detected = None
    for eps in (1, -1):
        res = sasakian_residuals(chart, point, eps, frame=frame)
        checks = [make_check(f"cone.sasakian_eps{eps:+d}.eq{i + 1}", r, INFORMATIVE) for i, r in enumerate(res)]
        results[eps] = checks
        if all(c.status == "zero" for c in checks) and detected is None:
            detected = eps
    return detected, results


_UNCHECKED = object()


def hyperkahler_check(cone, sasakian_eps=_UNCHECKED, dF_forced=False):
    """Closedness of ``F_i`` and ``F`` plus the exact metric-signature test.

    When ``sasakian_eps`` (the sign detected by :func:`sasakian_check`,
    ``None`` if neither sign holds) is given, closedness of the ``F_i`` is expected exactly when it equals the
    cone's sign, and the equivalence itself becomes a must-vanish check.
    ``dF_forced`` marks points where ``dOmega = 0`` and ``s = 2 eps`` is
    locally constant, which forces ``dF = 0`` on its own.
    """
    eps = cone.epsilon
    frame = cone.frame
    m = len(frame.hframe)
    checks = []
    dFi = [exterior_derivative(f) for f in cone.Fi]
    dF = exterior_derivative(cone.F)
    closed_expected = MUST_VANISH if sasakian_eps == eps else INFORMATIVE
    for i in range(3):
        checks.append(make_check(f"cone.dF{i + 1}=0", dFi[i], closed_expected))
    checks.append(make_check("cone.dF=0", dF, MUST_VANISH if dF_forced else closed_expected))
    twice = None
    for i in range(3):
        term = wedge(dFi[i], cone.Fi[i].truncate(0))
        twice = term if twice is None else twice + term
    checks.append(make_check("cone.dF=2sum dF_i^F_i", dF - twice.scale(2)))
    if sasakian_eps is not _UNCHECKED:
        closed = all(d.is_zero() for d in dFi)
        agree = closed == (sasakian_eps == eps)
        checks.append(Check("cone.closed_iff_sasakian", "zero" if agree else "nonzero", MUST_VANISH,
                            None if agree else f"dF_i closed: {closed}, 3-Sasakian with eps {eps}: {sasakian_eps == eps}"))
    # metric
    GN, gram = cone.GN, cone.basis_gram
    checks.append(make_check("cone.GN_symmetric", mat_sub(GN, transpose(GN))))
    t2 = cone.tvalue * cone.tvalue
    G = [[value_of(x) for x in row] for row in frame.G]
    target = [[0] * (m + 4) for _ in range(m + 4)]
    for a in range(m):
        for b in range(m):
            target[a][b] = G[a][b] * t2
    for l in range(3):
        target[m + l][m + l] = t2 * eps
    target[m + 3][m + 3] = eps
    checks.append(make_check("cone.GN_block_diagonal", mat_sub(gram, target)))
    hor = [_positive(x) for x in leading_minors([row[:m] for row in gram[:m]])]
    vert = [gram[m + l][m + l] for l in range(4)]
    if eps == 1:
        ok = all(_positive(x) for x in leading_minors(GN))
        checks.append(Check("cone.GN_positive_definite", "zero" if ok else "nonzero", MUST_VANISH,
                            None if ok else "a leading principal minor is not positive"))
    else:
        ok = all(hor) and all(_positive(-x) for x in vert)
        checks.append(Check("cone.GN_signature_(4n,4)", "zero" if ok else "nonzero", MUST_VANISH,
                            None if ok else "block minors do not give signature (4n, 4)"))
    return CheckReport(label=frame.chart.label, point=list(frame.point), checks=checks,
                       scalars={"t": cone.tvalue, "epsilon": eps})
