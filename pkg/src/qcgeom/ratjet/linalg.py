"""Exact linear algebra over the jet ring.

Matrices are lists of rows.  Entries may be :class:`Jet` objects or plain
field scalars; pivots are chosen on value parts (a jet is a unit exactly
when its value part is nonzero), scanning rows top to bottom.
"""
from .jet import Jet, is_zero, value_of
from .rational import Q

__all__ = [
    "SingularValuePart",
    "InconsistentSystem",
    "solve_linear_jets",
    "solve_many",
    "inverse",
    "matmul",
    "matvec",
    "transpose",
    "identity",
    "determinant",
    "leading_minors",
    "mat_sub",
    "mat_add",
    "mat_scale",
    "is_zero_matrix",
]


class SingularValuePart(ArithmeticError):
    """No pivot with nonzero value part is available."""


class InconsistentSystem(ArithmeticError):
    def __init__(self, row, residual):
        super().__init__(f"equation {row} left with nonzero residual {residual!r}")
        self.row = row
        self.residual = residual


def _sub_mul(a, f, b):
    # a - f*b without building an intermediate zero
    if is_zero(f) or is_zero(b):
        return a
    return a - f * b


def solve_linear_jets(A, b):
    """Solve ``A x = b`` exactly.

    ``A`` may have more rows than columns; the extra equations must then be
    consequences of a square subsystem.  After elimination each extra row
    has been reduced to ``0 = residual`` and a nonzero residual raises
    :class:`InconsistentSystem`.
    """
    if len(A) == 0:
        return []
    return _solve_many(A, [b])[0]


def solve_many(A, columns):
    """Solve ``A x = c`` for several right-hand sides with one elimination."""
    if len(A) == 0:
        return [[] for _ in columns]
    return _solve_many(A, columns)


def _solve_many(A, columns):
    m = len(A)
    ncol = len(A[0])
    if m < ncol:
        raise ValueError("underdetermined system")
    for c in columns:
        if len(c) != m:
            raise ValueError("right-hand side length mismatch")
    nrhs = len(columns)
    rows = [list(A[r]) + [c[r] for c in columns] for r in range(m)]
    order = list(range(m))
    for col in range(ncol):
        piv = None
        for r in range(col, m):
            if value_of(rows[r][col]):
                piv = r
                break
        if piv is None:
            raise SingularValuePart(f"no pivot with nonzero value part in column {col}")
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            order[col], order[piv] = order[piv], order[col]
        prow = rows[col]
        inv = 1 / prow[col] if isinstance(prow[col], Jet) else _inv(prow[col])
        prow = [x * inv if not is_zero(x) else x for x in prow]
        rows[col] = prow
        for r in range(m):
            if r == col:
                continue
            f = rows[r][col]
            if is_zero(f):
                continue
            rows[r] = [_sub_mul(x, f, p) for x, p in zip(rows[r], prow)]
    for r in range(ncol, m):
        for res in rows[r][ncol:]:
            if not is_zero(res):
                raise InconsistentSystem(order[r], res)
    return [[rows[c][ncol + h] for c in range(ncol)] for h in range(nrhs)]


def _inv(x):
    return Q(1) / x


def transpose(A):
    return [list(col) for col in zip(*A)]


def identity(size, like=None):
    """Identity matrix; jet entries when ``like`` is a Jet."""
    if isinstance(like, Jet):
        one = Jet.constant(like.dim, like.order, 1)
        zero = Jet.zero(like.dim, like.order)
    else:
        one, zero = 1, 0
    return [[one if i == j else zero for j in range(size)] for i in range(size)]


def _dot(u, v):
    acc = None
    for a, b in zip(u, v):
        if is_zero(a) or is_zero(b):
            continue
        acc = a * b if acc is None else acc + a * b
    return 0 if acc is None else acc


def matmul(A, B):
    Bt = transpose(B)
    return [[_dot(row, col) for col in Bt] for row in A]


def matvec(A, v):
    return [_dot(row, v) for row in A]


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[a * c for a in row] for row in A]


def is_zero_matrix(A):
    return all(is_zero(x) for row in A for x in row)


def inverse(A):
    """Jet-matrix inverse by elimination against the identity."""
    size = len(A)
    like = next((x for row in A for x in row if isinstance(x, Jet)), None)
    eye = identity(size, like)
    cols = _solve_many(A, [[eye[r][c] for r in range(size)] for c in range(size)])
    return transpose(cols)


def determinant(A):
    """Exact determinant by elimination on value pivots."""
    size = len(A)
    rows = [list(r) for r in A]
    det = 1
    for col in range(size):
        piv = None
        for r in range(col, size):
            if value_of(rows[r][col]):
                piv = r
                break
        if piv is None:
            if any(isinstance(x, Jet) for row in rows for x in row):
                # value part singular: the jet determinant is not a unit
                return _det_cofactor(A)
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        p = rows[col][col]
        det = det * p
        inv = 1 / p if isinstance(p, Jet) else _inv(p)
        for r in range(col + 1, size):
            f = rows[r][col]
            if is_zero(f):
                continue
            f = f * inv
            rows[r] = [_sub_mul(x, f, y) for x, y in zip(rows[r], rows[col])]
    return det


def _det_cofactor(A):
    size = len(A)
    if size == 1:
        return A[0][0]
    total = 0
    for j in range(size):
        a = A[0][j]
        if is_zero(a):
            continue
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        term = a * _det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def leading_minors(A):
    """Values of the leading principal minors (for definiteness tests)."""
    vals = [[value_of(x) for x in row] for row in A]
    return [determinant([r[:k] for r in vals[:k]]) for k in range(1, len(A) + 1)]
