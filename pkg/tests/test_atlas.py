import pytest

import qcgeom.cone
from qcgeom.atlas import (
    EXAMPLES,
    check_mu_nonzero,
    conformal_deform,
    emit_chart,
    example_chart,
    heisenberg,
    load_chart,
    quaternion_matrices,
    sphere_3sasakian,
)
from qcgeom.errors import ChartSchemaError, ConstructionInvalid
from qcgeom.exterior import exterior_derivative
from qcgeom.ratjet.linalg import matmul, transpose
from qcgeom.ratjet.rational import Q
from support import rng_point


def ident(m, c=1):
    return [[c if i == j else 0 for j in range(m)] for i in range(m)]


@pytest.mark.parametrize("blocks", [1, 2, 3])
def test_quaternion_matrices_relations(blocks):
    L = quaternion_matrices(blocks)
    m = 4 * blocks
    for A in L:
        assert matmul(A, A) == ident(m, -1)
        assert transpose(A) == [[-x for x in row] for row in A]
    assert matmul(L[0], L[1]) == L[2]


@pytest.mark.parametrize("name,n", [("heisenberg", 1), ("heisenberg", 2), ("sphere3sasakian", 1)])
def test_emit_load_round_trip(tmp_path, name, n):
    c = example_chart(name, n)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    emit_chart(c, p1)
    again = load_chart(p1)
    emit_chart(again, p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert again.n == n and again.epsilon == c.epsilon


def test_load_rejects_malformed(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 1, "coordinates": ["x1"], "eta": []}')
    with pytest.raises(ChartSchemaError):
        load_chart(p)


def test_examples_registry():
    assert set(EXAMPLES) == {"heisenberg", "sphere3sasakian"}
    with pytest.raises(ValueError):
        example_chart("torus", 1)
    with pytest.raises(ValueError):
        heisenberg(0)


def test_sphere_validates_and_is_limited_to_small_n():
    assert sphere_3sasakian(2).epsilon == 1
    with pytest.raises(ValueError):
        sphere_3sasakian(3)


def test_sphere_construction_failure_is_reported(monkeypatch):
    def broken(chart, point, epsilon, order=1, **kw):
        return [exterior_derivative(chart.eta_jets(point, 1)[0])]

    monkeypatch.setattr(qcgeom.cone, "sasakian_residuals", broken)
    with pytest.raises(ConstructionInvalid):
        sphere_3sasakian(1)


def test_heisenberg_differentials_are_constant():
    h = heisenberg(2)
    for seed in range(3):
        pt = rng_point(seed, h.dim)
        for e in h.eta_jets(pt, 2):
            d = exterior_derivative(e)
            for v in d.comps.values():
                assert all(d2 == 0 for exps, d2 in _higher(v))


def _higher(j):
    out = []
    from qcgeom.ratjet.jet import monomials

    table = monomials(j.dim, j.order)
    for k in range(len(table.exps)):
        exps = table.exps[k]
        if 0 < sum(exps) <= j.order:
            out.append((exps, j.coefficient(exps)))
    return out


def test_unit_factor_is_identity():
    h = heisenberg(1)
    assert conformal_deform(h, "1") is h
    d = conformal_deform(h, "1 + x1^2")
    assert d.epsilon is None and "1 + x1^2" in d.label


def test_vanishing_factor_is_rejected():
    h = heisenberg(1)
    with pytest.raises(ZeroDivisionError):
        check_mu_nonzero("x1 - x2", h, [Q(1), Q(1)] + [Q(0)] * 5)
    assert check_mu_nonzero("2 + x1", h, [Q(1)] + [Q(0)] * 6) == 3
