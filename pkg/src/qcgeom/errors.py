"""Exception hierarchy shared by the geometry modules."""


class QcError(Exception):
    """Base class for structural failures of a chart at a point."""


class SingularFrame(QcError):
    """The three contact forms are linearly dependent at the point."""


class NotQuaternionicContact(QcError):
    """The Reeb cross conditions fail (in dimension 7: no Reeb fields of the required kind)."""


class DegenerateStructure(QcError):
    """Some horizontal 2-form is degenerate at the point."""


class NotQuaternionCompatible(QcError):
    """No sign choice makes the three 2-forms a compatible quaternionic triple."""


class InsufficientJetOrder(QcError):
    """A derivative was requested from a jet with no order left."""


class DimensionSevenUnsupported(QcError):
    """The four-form torsion formulas are singular for n = 1."""


class CrossKInconsistency(QcError):
    """The three trace equations for the scalar curvature disagree."""


class ConstructionInvalid(QcError):
    """A built-in chart failed its own validation (an implementation fault)."""


class ChartSchemaError(ValueError):
    """A chart file does not match the chart JSON schema."""
