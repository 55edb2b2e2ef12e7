"""Exact check records shared by the suites.

A check is a named residual.  Its status is ``zero`` when every component
of the residual vanishes exactly, ``nonzero`` otherwise (with the first
nonzero component as witness), or ``error`` when the residual could not be
computed.  ``expected`` says whether the residual must vanish (``zero``) or
is reported for information only (``informative``).
"""
from dataclasses import dataclass

from .exterior import FormJet, VectorJet
from .ratjet.jet import Jet, is_zero
from .ratjet.rational import format_rational

__all__ = ["Check", "CheckReport", "residual_witness", "make_check", "error_check"]

ZERO, NONZERO, ERROR = "zero", "nonzero", "error"
MUST_VANISH, INFORMATIVE = "zero", "informative"


def _scalar_text(x):
    try:
        return format_rational(x)
    except (TypeError, ValueError):
        return str(x)


def _jet_witness(j):
    exps, v = j.first_nonzero()
    if not any(exps):
        return _scalar_text(v)
    return f"{_scalar_text(v)} at Taylor index {list(exps)}"


def residual_witness(r):
    """Text naming the first nonzero component of ``r``, or ``None`` if ``r`` vanishes."""
    if r is None:
        return None
    if isinstance(r, Jet):
        return None if r.is_zero() else _jet_witness(r)
    if isinstance(r, FormJet):
        if r.is_zero():
            return None
        idx = min(r.comps)
        inner = residual_witness(r.comps[idx])
        return f"component {list(idx)}: {inner}"
    if isinstance(r, VectorJet):
        for mu, c in enumerate(r.comps):
            w = residual_witness(c)
            if w is not None:
                return f"component [{mu}]: {w}"
        return None
    if isinstance(r, (list, tuple)):
        for a, row in enumerate(r):
            if isinstance(row, (list, tuple)):
                for b, x in enumerate(row):
                    w = residual_witness(x)
                    if w is not None:
                        return f"entry [{a}][{b}]: {w}"
            else:
                w = residual_witness(row)
                if w is not None:
                    return f"entry [{a}]: {w}"
        return None
    if isinstance(r, bool):
        return None if not r else "condition violated"
    return None if is_zero(r) else _scalar_text(r)


@dataclass
class Check:
    name: str
    status: str
    expected: str = MUST_VANISH
    witness: str = None

    @property
    def failed(self):
        """True when a must-vanish residual is nonzero or could not be computed."""
        return self.expected == MUST_VANISH and self.status != ZERO

    def to_dict(self):
        d = {"name": self.name, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        d["expected"] = self.expected
        return d


def make_check(name, residual, expected=MUST_VANISH):
    w = residual_witness(residual)
    return Check(name, ZERO if w is None else NONZERO, expected, w)


def error_check(name, exc, expected=MUST_VANISH):
    return Check(name, ERROR, expected, f"{type(exc).__name__}: {exc}")


@dataclass
class CheckReport:
    label: str
    point: list
    checks: list
    scalars: dict = None
    seed: int = None

    def by_name(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self):
        return [c for c in self.checks if c.failed]

    def all_zero(self, prefix=""):
        return all(c.status == ZERO for c in self.checks if c.name.startswith(prefix))
