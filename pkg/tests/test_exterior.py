from itertools import combinations, permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcgeom.exterior import (
    FormJet,
    VectorJet,
    bracket,
    evaluate_form,
    exterior_derivative,
    interior_product,
    lie_derivative,
    wedge,
)
from qcgeom.ratjet.jet import Jet, OrderExhausted, is_zero
from qcgeom.ratjet.rational import Q
from support import jets

DIM = 4


@st.composite
def forms(draw, degree, order, dim=DIM, max_terms=3):
    idx = list(combinations(range(dim), degree))
    chosen = draw(st.lists(st.sampled_from(idx), max_size=max_terms, unique=True)) if idx else []
    comps = {}
    for I in chosen:
        j = draw(jets(dim, order, density=0.4))
        if not j.is_zero():
            comps[I] = j
    return FormJet(dim, degree, order, comps)


@st.composite
def vectors(draw, order, dim=DIM):
    return VectorJet([draw(jets(dim, order, density=0.3)) for _ in range(dim)])


def dx(dim, order, *idx):
    one = Jet.constant(dim, order, 1)
    return FormJet.from_components(dim, len(idx), order, {tuple(idx): one})


def coord(dim, order, mu):
    return VectorJet.coordinate(dim, order, mu)


# -- examples ----------------------------------------------------------------

def test_wedge_examples():
    a, b = dx(3, 1, 0), dx(3, 1, 1)
    assert wedge(a, b) == -wedge(b, a)
    assert wedge(a, a).is_zero()


def test_wedge_degree_overflow_is_zero_form():
    a = dx(7, 0, 0, 1, 2)
    b = dx(7, 0, 3, 4, 5, 6, 0)
    w = wedge(a, b)
    assert w.degree == 8 and w.is_zero()


def test_d_of_x1_dx2():
    x1 = Jet.variable(2, 1, 0, Q(5))
    a = FormJet.one_form([Jet.zero(2, 1), x1])
    assert exterior_derivative(a) == dx(2, 0, 0, 1)


def test_d_of_constant_form_and_order_exhaustion():
    a = dx(3, 2, 0, 2).scale(Q(7, 3))
    assert exterior_derivative(a).is_zero()
    with pytest.raises(OrderExhausted):
        exterior_derivative(dx(3, 0, 1))


def test_interior_product_examples():
    e = dx(2, 0, 0, 1)
    assert interior_product(coord(2, 0, 0), e) == dx(2, 0, 1)
    with pytest.raises(ValueError):
        interior_product(coord(2, 0, 0), FormJet(2, 0, 0, {(): Jet.constant(2, 0, 1)}))


def test_lie_derivative_coordinate_example():
    x1 = Jet.variable(2, 2, 0, Q(0))
    a = FormJet.one_form([Jet.zero(2, 2), x1])
    assert lie_derivative(coord(2, 2, 0), a) == dx(2, 1, 1)


def test_evaluate_form_examples():
    e = dx(2, 0, 0, 1)
    d0, d1 = coord(2, 0, 0), coord(2, 0, 1)
    assert evaluate_form(e, [d0, d1]) == 1
    assert evaluate_form(e, [d1, d0]) == -1
    assert evaluate_form(e, [d0, d0]) == 0
    with pytest.raises(ValueError):
        evaluate_form(e, [d0])


# -- properties ----------------------------------------------------------------

@given(forms(1, 3), forms(2, 3))
def test_d_squared_is_zero(a, b):
    assert exterior_derivative(exterior_derivative(a)).is_zero()
    assert exterior_derivative(exterior_derivative(b)).is_zero()


@given(st.integers(0, 2), st.integers(0, 2), st.data())
def test_graded_commutativity(p, q, data):
    a = data.draw(forms(p, 2))
    b = data.draw(forms(q, 2))
    sign = -1 if (p * q) % 2 else 1
    assert wedge(a, b) == wedge(b, a).scale(sign)


@given(forms(1, 2), forms(1, 2), forms(2, 2))
def test_wedge_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(st.integers(1, 2), st.integers(0, 2), st.data())
def test_leibniz(p, q, data):
    a = data.draw(forms(p, 2))
    b = data.draw(forms(q, 2))
    lhs = exterior_derivative(wedge(a, b))
    rhs = wedge(exterior_derivative(a), b) + wedge(a, exterior_derivative(b)).scale(-1 if p % 2 else 1)
    assert lhs == rhs


@given(vectors(2), forms(2, 2))
def test_interior_twice_vanishes(v, a):
    assert interior_product(v, interior_product(v, a)).is_zero()


@given(vectors(3), forms(1, 3), forms(1, 3))
def test_cartan_and_lie_leibniz(v, a, b):
    L = lie_derivative(v, a)
    assert L == interior_product(v, exterior_derivative(a)) + exterior_derivative(interior_product(v, a))
    lhs = lie_derivative(v, wedge(a, b))
    rhs = wedge(lie_derivative(v, a), b) + wedge(a, lie_derivative(v, b))
    assert lhs == rhs


@given(vectors(2), vectors(2), forms(1, 2))
def test_d_of_one_form_invariant_formula(X, Y, a):
    # d a(X, Y) = X a(Y) - Y a(X) - a([X, Y])
    lhs = evaluate_form(exterior_derivative(a), [X, Y])
    rhs = (X.apply(evaluate_form(a, [Y])) - Y.apply(evaluate_form(a, [X]))
           - evaluate_form(a.truncate(1), [bracket(X, Y)]))
    assert is_zero(lhs - rhs)


def _shuffle(a, b, vecs):
    """Wedge evaluated by the (p, q)-shuffle sum."""
    p, q = a.degree, b.degree
    total = 0
    for perm in permutations(range(p + q)):
        if list(perm[:p]) != sorted(perm[:p]) or list(perm[p:]) != sorted(perm[p:]):
            continue
        inv = sum(1 for i in range(p + q) for j in range(i + 1, p + q) if perm[i] > perm[j])
        term = evaluate_form(a, [vecs[i] for i in perm[:p]]) * evaluate_form(b, [vecs[i] for i in perm[p:]])
        total = total + (term if inv % 2 == 0 else -term)
    return total


@given(st.sampled_from([(1, 1), (1, 2)]), st.data())
def test_wedge_matches_shuffle_formula(degrees, data):
    p, q = degrees
    a = data.draw(forms(p, 1))
    b = data.draw(forms(q, 1))
    vecs = [data.draw(vectors(1)) for _ in range(p + q)]
    got = evaluate_form(wedge(a, b), vecs)
    want = _shuffle(a, b, vecs)
    assert is_zero(got - want)


@given(forms(3, 1), vectors(1), vectors(1), vectors(1))
def test_evaluation_alternates(a, u, v, w):
    assert is_zero(evaluate_form(a, [u, v, w]) + evaluate_form(a, [v, u, w]))
    assert is_zero(evaluate_form(a, [u, u, w]))


def test_shortcut_for_horizontal_form():
    # a vertical field contracted into a form that does not see it: L_v a = v ⌟ da
    x0 = Jet.variable(3, 2, 0, Q(1, 2))
    x1 = Jet.variable(3, 2, 1, Q(-1))
    a = dx(3, 2, 0, 1).scale(x0 * x1 + x1)
    v = coord(3, 2, 2).scale(x0)
    assert interior_product(v, a).is_zero()
    assert lie_derivative(v, a) == interior_product(v, exterior_derivative(a))
