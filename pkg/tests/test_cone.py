import pytest

from qcgeom.atlas import heisenberg
from qcgeom.cone import cone_structures, hyperkahler_check, sasakian_check, sasakian_residuals, slice_form
from qcgeom.errors import InsufficientJetOrder
from qcgeom.exterior import exterior_derivative, wedge
from qcgeom.qcframe import CYCLIC, build_frame
from qcgeom.ratjet.jet import is_zero, value_of
from qcgeom.ratjet.linalg import leading_minors
from qcgeom.ratjet.rational import Q
from support import chart, rng_point


def vals(form):
    out = {}
    for idx, v in form.comps.items():
        v = value_of(v)
        if not is_zero(v):
            out[idx] = v
    return out


def statuses(report):
    return {c.name: c.status for c in report.checks}


def cone_at(key, seed, t=1, eps=None, order=2):
    c = chart(key)
    return cone_structures(c, rng_point(seed, c.dim, 3), tvalue=t, epsilon=eps, order=order)


# -- the forms themselves ------------------------------------------------------

@pytest.mark.parametrize("key,eps", [("h1", 1), ("s1", 1), ("d1", -1)])
def test_unit_slice_is_omega_plus_vertical_term(key, eps):
    cone = cone_at(key, 3, eps=eps)
    f = cone.frame
    for i, j, k in CYCLIC:
        want = f.omega[i].truncate(0) + wedge(f.eta[j], f.eta[k]).truncate(0).scale(eps)
        assert vals(slice_form(cone.Fi[i])) == vals(want)
    total = None
    for i, j, k in CYCLIC:
        w = f.omega[i].truncate(0) + wedge(f.eta[j], f.eta[k]).truncate(0).scale(eps)
        sq = wedge(w, w)
        total = sq if total is None else total + sq
    assert vals(slice_form(cone.F)) == vals(total)


@pytest.mark.parametrize("lam", [Q(2), Q(1, 3), Q(5, 2)])
def test_radial_scaling(lam):
    # legs without dt scale by t^2 and legs with dt by t
    one = cone_at("d1", 5)
    big = cone_at("d1", 5, t=lam)
    D = one.frame.dim
    for a, b in zip(one.Fi, big.Fi):
        va, vb = vals(a), vals(b)
        assert set(va) == set(vb)
        for idx, v in va.items():
            assert vb[idx] == v * (lam if D in idx else lam * lam)


def test_heisenberg_metric_at_origin():
    h = heisenberg(1)
    cone = cone_structures(h, [Q(0)] * 7, tvalue=1, order=2)
    assert all(m > 0 for m in leading_minors(cone.GN))
    st = statuses(hyperkahler_check(cone))
    assert st["cone.GN_positive_definite"] == "zero"
    assert st["cone.GN_block_diagonal"] == "zero"


def test_cone_needs_second_order():
    c = chart("s1")
    with pytest.raises(InsufficientJetOrder):
        cone_structures(c, rng_point(0, 7), order=1)
    with pytest.raises(ValueError):
        cone_structures(c, rng_point(0, 7), tvalue=0, order=2)


# -- closedness and the 3-Sasakian detector -----------------------------------------

@pytest.mark.parametrize("seed", range(4))
def test_sphere_cone_is_closed(seed):
    c = chart("s1")
    pt = rng_point(seed, c.dim, 3)
    detected, _ = sasakian_check(c, pt)
    assert detected == 1
    cone = cone_structures(c, pt, tvalue=Q(3, 2), order=2)
    rep = hyperkahler_check(cone, sasakian_eps=detected)
    assert all(x.status == "zero" for x in rep.checks), [x.name for x in rep.checks if x.status != "zero"]


def test_sphere_residuals_vanish_only_for_positive_sign():
    c = chart("s2")
    pt = rng_point(1, c.dim, 2)
    assert all(r.is_zero() for r in sasakian_residuals(c, pt, 1))
    assert not all(r.is_zero() for r in sasakian_residuals(c, pt, -1))


@pytest.mark.parametrize("key", ["h1", "h2"])
def test_heisenberg_cone_is_not_closed_though_omega_is(key):
    c = chart(key)
    pt = rng_point(2, c.dim, 3)
    f = build_frame(c, pt, 3)
    assert exterior_derivative(f.Omega).is_zero()
    detected, res = sasakian_check(c, pt)
    assert detected is None
    assert all(x.witness for x in res[1])
    rep = hyperkahler_check(cone_structures(c, pt, frame=f), sasakian_eps=detected)
    by = {x.name: x for x in rep.checks}
    for i in range(3):
        assert by[f"cone.dF{i + 1}=0"].status == "nonzero"
        assert by[f"cone.dF{i + 1}=0"].witness
    assert by["cone.closed_iff_sasakian"].status == "zero"
    assert not [x.name for x in rep.checks if x.failed]


def test_deformed_cone_four_form_not_closed():
    c = chart("d1")
    pt = rng_point(4, c.dim, 3)
    detected, _ = sasakian_check(c, pt)
    rep = hyperkahler_check(cone_structures(c, pt, order=2), sasakian_eps=detected)
    st = statuses(rep)
    assert st["cone.dF=0"] == "nonzero"
    assert st["cone.closed_iff_sasakian"] == "zero"
    assert st["cone.dF=2sum dF_i^F_i"] == "zero"


def test_negative_sign_path():
    # the sphere is positive; its negative cone is a valid pseudo-metric that is not closed
    c = chart("s1")
    pt = rng_point(6, c.dim, 3)
    detected, _ = sasakian_check(c, pt)
    cone = cone_structures(c, pt, tvalue=Q(2), epsilon=-1, order=2)
    rep = hyperkahler_check(cone, sasakian_eps=detected)
    st = statuses(rep)
    assert st["cone.GN_signature_(4n,4)"] == "zero"
    assert st["cone.GN_block_diagonal"] == "zero"
    assert st["cone.dF1=0"] == "nonzero"
    assert st["cone.closed_iff_sasakian"] == "zero"
    assert not [x.name for x in rep.checks if x.failed]
    assert all(value_of(cone.GN[-1][-1]) == -1 for _ in [0])
