"""Seeded multi-point suite runs.

A run samples rational points, builds the frame at each, runs every stage
and keeps the checks belonging to the requested suites.  Degenerate points
(singular frames, vanishing conformal factor, poles of the chart) are
replaced by fresh samples from the same generator; every replacement is
logged with its reason.
"""
import random
from dataclasses import dataclass, field

from .atlas import check_mu_nonzero, conformal_deform, example_chart, load_chart
from .biquard import analyze
from .checks import MUST_VANISH, Check, error_check
from .cone import cone_structures, hyperkahler_check, sasakian_check
from .errors import InsufficientJetOrder, QcError
from .qcframe import build_frame
from .ratjet.expr import DivisionByZeroAtPoint
from .ratjet.jet import JetError, value_of
from .ratjet.linalg import InconsistentSystem, SingularValuePart
from .ratjet.primefield import GF
from .ratjet.rational import Q

__all__ = ["SUITES", "RunConfig", "PointResult", "RunResult", "sample_point", "suite_of", "run", "resolve_chart"]

SUITES = ("structure", "torsion", "theorem", "cone")

_PREFIX_SUITE = {
    "frame": "structure",
    "connection": "structure",
    "scalar": "structure",
    "ricci": "structure",
    "structure": "structure",
    "torsion": "torsion",
    "flag": "torsion",
    "corollary": "torsion",
    "theorem": "theorem",
    "torsionfree": "theorem",
    "cartan": "theorem",
    "cone": "cone",
    "prescreen": "prescreen",
}

# a bad sample point, as opposed to a bad chart or a bad config
_DEGENERATE = (QcError, ZeroDivisionError, DivisionByZeroAtPoint, SingularValuePart, InconsistentSystem, JetError)


def suite_of(check_name):
    return _PREFIX_SUITE.get(check_name.split(".", 1)[0], "structure")


@dataclass
class RunConfig:
    example: str = None
    chart_path: str = None
    n: int = 1
    deform: str = None
    points: int = 5
    seed: int = 0
    jet_order: int = 3
    coeff_bound: int = 7
    suites: tuple = ("structure", "torsion", "theorem")
    prescreen: bool = False
    retries: int = 5

    def validate(self):
        """Raise ``ValueError`` for an unusable configuration."""
        if (self.example is None) == (self.chart_path is None):
            raise ValueError("exactly one of --example and --chart is required")
        if self.points < 1:
            raise ValueError("--points must be >= 1")
        if self.n < 1:
            raise ValueError("--n must be >= 1")
        if self.coeff_bound < 1:
            raise ValueError("--coeff-bound must be >= 1")
        if self.retries < 0:
            raise ValueError("retry count must be >= 0")
        bad = [s for s in self.suites if s not in SUITES]
        if bad or not self.suites:
            raise ValueError(f"unknown suite(s) {bad}; choose from {list(SUITES)}")
        if self.jet_order < 2:
            raise ValueError("--jet-order must be >= 2")
        if self.jet_order < 3 and {"structure", "theorem"} & set(self.suites):
            raise ValueError("the structure and theorem suites need --jet-order >= 3 (they differentiate s)")


@dataclass
class PointResult:
    index: int
    coords: list
    checks: list
    scalars: dict = None
    classification: dict = None
    retries: list = field(default_factory=list)
    cone: dict = None
    analysis: object = None


@dataclass
class RunResult:
    config: RunConfig
    label: str
    n: int
    points: list
    cone_epsilon: int = None
    cone_t: object = None

    def checks(self):
        return [c for p in self.points for c in p.checks] + [
            c for p in self.points if p.cone for c in p.cone["checks"]
        ]

    def failed(self):
        return any(c.failed for c in self.checks())

    def verdicts(self):
        return [p.classification["verdict"] for p in self.points if p.classification]


def sample_point(rng, dim, bound):
    """``dim`` rationals p/q with |p| <= bound and 1 <= q <= bound."""
    return [Q(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(dim)]


def resolve_chart(config):
    if config.chart_path is not None:
        chart = load_chart(config.chart_path)
    else:
        chart = example_chart(config.example, config.n)
    if config.deform:
        chart = conformal_deform(chart, config.deform)
    return chart


def _statuses(checks):
    return {c.name: c.status for c in checks}


def _evaluate(chart, pt, config, convert, cone_t, cone_eps):
    """Every requested stage at one point; raises on a degenerate point."""
    if config.deform:
        check_mu_nonzero(config.deform, chart, pt)
    frame = build_frame(chart, pt, config.jet_order, convert)
    wanted = set(config.suites)
    checks, analysis, cls, scalars = [], None, None, None
    if wanted & {"structure", "torsion", "theorem"}:
        try:
            analysis = analyze(frame)
        except InsufficientJetOrder as exc:
            checks.append(error_check("torsion.pipeline", exc))
        else:
            checks = [c for c in analysis.report.checks if suite_of(c.name) in wanted]
            cls = analysis.classification
            scalars = {"s": value_of(analysis.conn.s), "Scal": value_of(analysis.conn.Scal)}
    cone = None
    if "cone" in wanted:
        try:
            detected, per_eps = sasakian_check(chart, pt, frame=frame)
            data = cone_structures(chart, pt, cone_t, cone_eps, frame=frame, convert=convert)
            forced = bool(analysis and cls["dOmega_zero"] and scalars["s"] == 2 * cone_eps
                          and analysis.report.by_name("torsionfree.ds=0").status == "zero")
            rep = hyperkahler_check(data, detected, dF_forced=forced)
            cone_checks = [c for eps in (1, -1) for c in per_eps[eps]] + rep.checks
        except InsufficientJetOrder as exc:
            detected, cone_checks = None, [error_check("cone.pipeline", exc)]
        cone = {"sasakian_epsilon": detected, "checks": cone_checks}
    return checks, analysis, cls, scalars, cone


def _compare(rational, modular):
    """Checks recording every disagreement between the prime-field and the rational pass."""
    r_checks, _, r_cls, _, r_cone = rational
    m_checks, _, m_cls, _, m_cone = modular
    diffs = []
    rs, ms = _statuses(r_checks), _statuses(m_checks)
    if r_cone:
        rs.update(_statuses(r_cone["checks"]))
        ms.update(_statuses(m_cone["checks"]))
    for name in rs:
        if ms.get(name) != rs[name]:
            diffs.append(f"{name}: rational {rs[name]}, mod p {ms.get(name)}")
    if r_cls and m_cls and r_cls["verdict"] != m_cls["verdict"]:
        diffs.append(f"verdict: rational {r_cls['verdict']!r}, mod p {m_cls['verdict']!r}")
    if r_cone and r_cone["sasakian_epsilon"] != m_cone["sasakian_epsilon"]:
        diffs.append("sasakian epsilon differs")
    if diffs:
        return Check("prescreen.agreement", "nonzero", MUST_VANISH, "; ".join(diffs[:5]))
    return Check("prescreen.agreement", "zero", MUST_VANISH)


def run(config, chart=None):
    """Run the configured suites; deterministic for a given config."""
    config.validate()
    if chart is None:
        chart = resolve_chart(config)
    rng = random.Random(config.seed)
    cone_eps = chart.epsilon if chart.epsilon is not None else 1
    # the cone coordinate is drawn first so it does not depend on retries
    cone_t = Q(rng.randint(1, config.coeff_bound), rng.randint(1, config.coeff_bound))
    points = []
    for index in range(config.points):
        retries = []
        for _attempt in range(config.retries + 1):
            pt = sample_point(rng, chart.dim, config.coeff_bound)
            try:
                modular = _evaluate(chart, pt, config, GF, cone_t, cone_eps) if config.prescreen else None
                rational = _evaluate(chart, pt, config, Q, cone_t, cone_eps)
            except _DEGENERATE as exc:
                retries.append({"coords": pt, "reason": f"{type(exc).__name__}: {exc}"})
                continue
            checks, analysis, cls, scalars, cone = rational
            if modular is not None:
                checks = checks + [_compare(rational, modular)]
            points.append(PointResult(index, pt, checks, scalars, cls, retries, cone, analysis))
            break
        else:
            last = retries[-1]["reason"] if retries else "no attempt"
            points.append(PointResult(index, retries[-1]["coords"] if retries else [],
                                      [Check("point.construction", "error", MUST_VANISH,
                                             f"no usable sample point after {len(retries)} attempts; last: {last}")],
                                      retries=retries))
    return RunResult(config=config, label=chart.label, n=chart.n, points=points,
                     cone_epsilon=cone_eps if "cone" in config.suites else None,
                     cone_t=cone_t if "cone" in config.suites else None)
