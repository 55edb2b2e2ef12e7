"""Scaling the sphere's contact forms by a constant c divides s by c.

The zero-torsion flags survive the scaling; the 3-Sasakian equation with the
original normalisation does not, so the cone test only fires at c = 1.

    python3 demos/homothety.py
"""
from qcgeom.atlas import conformal_deform, sphere_3sasakian
from qcgeom.biquard import analyze
from qcgeom.cone import sasakian_check
from qcgeom.qcframe import build_frame
from qcgeom.ratjet.jet import value_of
from qcgeom.ratjet.rational import Q, format_rational

base = sphere_3sasakian(1)
point = [Q(1, 3), Q(0), Q(-1, 2), Q(1), Q(2, 5), Q(0), Q(-1)]

for c in ("1", "2", "1/3", "7/5"):
    chart = conformal_deform(base, c)
    a = analyze(build_frame(chart, point, 3))
    sign, _ = sasakian_check(chart, point)
    print(f"c = {c:>4}: s = {format_rational(value_of(a.conn.s)):>5}, "
          f"torsion-free = {a.flags['torsion_zero']}, 3-Sasakian sign = {sign}")
