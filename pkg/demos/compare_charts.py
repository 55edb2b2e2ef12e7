"""Compare the flat, spherical and conformally deformed charts at one point.

    python3 demos/compare_charts.py
"""
from qcgeom.atlas import conformal_deform, heisenberg, sphere_3sasakian
from qcgeom.biquard import analyze
from qcgeom.cone import cone_structures, hyperkahler_check, sasakian_check
from qcgeom.qcframe import build_frame
from qcgeom.ratjet.jet import value_of
from qcgeom.ratjet.rational import Q, format_rational

CHARTS = {
    "heisenberg n=1": heisenberg(1),
    "sphere n=1": sphere_3sasakian(1),
    "heisenberg n=1, mu = 1 + x1^2": conformal_deform(heisenberg(1), "1 + x1^2"),
}

point = [Q(1, 2), Q(-1, 3), Q(2), Q(0), Q(1, 5), Q(-3, 4), Q(1)]

for label, chart in CHARTS.items():
    frame = build_frame(chart, point, 3)
    a = analyze(frame)
    s = value_of(a.conn.s)
    sign, _ = sasakian_check(chart, point, frame=frame)
    cone = hyperkahler_check(cone_structures(chart, point, tvalue=Q(3, 2), frame=frame), sign)
    closed = all(c.status == "zero" for c in cone.checks if c.name.startswith("cone.dF") and "sum" not in c.name)
    print(f"{label}")
    print(f"  s = {format_rational(s)}, Scal = {format_rational(value_of(a.conn.Scal))}")
    print(f"  dOmega = 0: {a.flags['dOmega_zero']}, torsion = 0: {a.flags['torsion_zero']}, "
          f"Reeb invariant: {a.flags['reeb_invariant']}")
    print(f"  3-Sasakian sign: {sign}, cone forms closed: {closed}")
    print(f"  verdict: {a.classification['verdict']}")
    failed = [c.name for c in a.report.checks + cone.checks if c.failed]
    print(f"  must-vanish failures: {failed or 'none'}\n")
