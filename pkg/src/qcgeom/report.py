"""JSON serialization of a :class:`~qcgeom.runner.RunResult`.

Rationals are written as ``"p/q"`` strings (integers too, as ``"p/1"``).  Output is
a pure function of the run result, so equal configs give equal bytes.
"""
import json

from .ratjet.rational import format_rational

__all__ = ["report_dict", "report_json", "write_report"]


def _rat(x):
    return format_rational(x)


def _classification(result):
    per_point = []
    for p in result.points:
        if p.classification is None:
            per_point.append(None)
            continue
        rec = {}
        for key, val in p.classification.items():
            rec[key] = _rat(val) if key == "s" else val
        per_point.append(rec)
    verdicts = {rec["verdict"] for rec in per_point if rec}
    overall = verdicts.pop() if len(verdicts) == 1 else ("mixed" if verdicts else None)
    out = {"verdict": overall, "points": per_point}
    flags = [rec for rec in per_point if rec]
    if flags and result.n > 1:
        out["flags_agree_everywhere"] = all(rec["flags_agree"] for rec in flags)
    return out


def report_dict(result):
    cfg = result.config
    points = []
    for p in result.points:
        entry = {"coords": [_rat(c) for c in p.coords]}
        if p.scalars is not None:
            entry["scalars"] = {k: _rat(v) for k, v in p.scalars.items()}
        entry["checks"] = [c.to_dict() for c in p.checks]
        if p.retries:
            entry["retries"] = [{"coords": [_rat(c) for c in r["coords"]], "reason": r["reason"]} for r in p.retries]
        points.append(entry)
    out = {
        "chart": result.label,
        "n": result.n,
        "points": points,
        "classification": _classification(result),
        "seed": cfg.seed,
        "jet_order": cfg.jet_order,
        "coeff_bound": cfg.coeff_bound,
        "suites": list(cfg.suites),
        "prescreen": cfg.prescreen,
    }
    if result.cone_epsilon is not None:
        out["cone"] = {
            "epsilon": result.cone_epsilon,
            "t": _rat(result.cone_t),
            "points": [
                {
                    "coords": [_rat(c) for c in p.coords],
                    "sasakian_epsilon": p.cone["sasakian_epsilon"],
                    "checks": [c.to_dict() for c in p.cone["checks"]],
                }
                for p in result.points
                if p.cone is not None
            ],
        }
    out["status"] = "fail" if result.failed() else "pass"
    return out


def report_json(result):
    return json.dumps(report_dict(result), indent=2, ensure_ascii=False) + "\n"


def write_report(result, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report_json(result))
