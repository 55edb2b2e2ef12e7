"""Shared strategies and cached pipeline runs for the test modules."""
import functools
import random
from math import comb

from hypothesis import strategies as st

from qcgeom.atlas import conformal_deform, heisenberg, sphere_3sasakian
from qcgeom.ratjet.jet import Jet, monomials
from qcgeom.ratjet.rational import Q
from qcgeom.runner import SUITES, RunConfig, run

# -- strategies ---------------------------------------------------------------

small_q = st.builds(lambda p, q: Q(p, q), st.integers(-6, 6), st.integers(1, 5))
nonzero_q = small_q.filter(bool)


@st.composite
def jets(draw, dim, order, density=0.6):
    # the monomial table is shared and degree-graded: the first C(dim+order, dim) entries are in range
    monomials(dim, order)
    c = {}
    for i in range(comb(dim + order, dim)):
        if draw(st.floats(0, 1)) < density:
            v = draw(small_q)
            if v:
                c[i] = v
    return Jet(dim, order, c)


@st.composite
def unit_jets(draw, dim, order):
    """Jets with nonzero value part."""
    j = draw(jets(dim, order))
    v = draw(nonzero_q)
    return j - Jet.constant(dim, order, j.value) + Jet.constant(dim, order, v)


# -- cached pipeline runs -------------------------------------------------------

# key -> (example, n, deformation)
CHARTS = {
    "h1": ("heisenberg", 1, None),
    "h2": ("heisenberg", 2, None),
    "s1": ("sphere3sasakian", 1, None),
    "s2": ("sphere3sasakian", 2, None),
    "d1": ("heisenberg", 1, "1+x1^2"),
    "d2": ("heisenberg", 2, "1+x1^2"),
}

ACCEPTANCE_SEED = 20240611


@functools.lru_cache(maxsize=None)
def chart(key):
    name, n, mu = CHARTS[key]
    c = sphere_3sasakian(n) if name == "sphere3sasakian" else heisenberg(n)
    return conformal_deform(c, mu) if mu else c


def config(key, points=5, seed=ACCEPTANCE_SEED, suites=SUITES, **kw):
    name, n, mu = CHARTS[key]
    return RunConfig(example=name, n=n, deform=mu, points=points, seed=seed, suites=tuple(suites), **kw)


@functools.lru_cache(maxsize=None)
def suite_run(key, points=5, seed=ACCEPTANCE_SEED):
    """All suites at ``points`` seeded points; cached for the whole session."""
    return run(config(key, points, seed), chart(key))


def rng_point(seed, dim, bound=5):
    r = random.Random(seed)
    return [Q(r.randint(-bound, bound), r.randint(1, bound)) for _ in range(dim)]


# criterion number -> printed PASS/FAIL line, echoed in the terminal summary
ACCEPTANCE_LINES = {}
