"""Exact linear algebra over Q(i).

Rank computations clear denominators row by row and run fraction-free
(Bareiss) elimination over the Gaussian integers Z[i], with Gaussian
integers stored as ``(re, im)`` pairs of Python ints.  Every division in
that elimination is exact; a nonzero remainder means a bug and raises
:class:`InvariantError`.

Small dense helpers (products, inverses, kernels) use plain Gauss-Jordan
elimination on :class:`GaussRational` entries; the matrices involved are
at most ``n x n`` for tiny ``n``.
"""

from __future__ import annotations

from math import lcm

from .errors import InvariantError, PreconditionError
from .scalar import ONE, ZERO, gauss

__all__ = [
    "rank",
    "bareiss_rank",
    "rref",
    "kernel",
    "inverse",
    "solve",
    "mat_mul",
    "mat_vec",
    "transpose",
    "identity",
    "SpanBasis",
]

_GZERO = (0, 0)


def _gmul(x, y):
    a, b = x
    c, d = y
    return (a * c - b * d, a * d + b * c)


def _gexdiv(x, y):
    """Exact quotient ``x / y`` in Z[i]."""
    a, b = x
    c, d = y
    if d == 0:
        if c == 1:
            return x
        q0, r0 = divmod(a, c)
        q1, r1 = divmod(b, c)
    else:
        norm = c * c + d * d
        q0, r0 = divmod(a * c + b * d, norm)
        q1, r1 = divmod(b * c - a * d, norm)
    if r0 or r1:
        raise InvariantError("inexact division in fraction-free elimination")
    return (q0, q1)


def _integer_row(row):
    """Scale a row of GaussRationals to Gaussian integers (rank preserving)."""
    den = 1
    for x in row:
        den = lcm(den, x.re.denominator, x.im.denominator)
    out = []
    for x in row:
        out.append((x.re.numerator * (den // x.re.denominator),
                    x.im.numerator * (den // x.im.denominator)))
    return out


def bareiss_rank(rows, ncols=None) -> int:
    """Rank of a matrix of Gaussian integers given as ``(re, im)`` pairs.

    ``rows`` is consumed (mutated).  Pivots are the first nonzero entry
    found scanning columns left to right, rows top to bottom.
    """
    m = len(rows)
    if m == 0:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    r = 0
    prev = (1, 0)
    for c in range(ncols):
        p = r
        while p < m and rows[p][c] == _GZERO:
            p += 1
        if p == m:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        piv = prow[c]
        for i in range(r + 1, m):
            row = rows[i]
            f = row[c]
            for j in range(c + 1, ncols):
                if f == _GZERO:
                    val = _gmul(piv, row[j])
                else:
                    a = _gmul(piv, row[j])
                    b = _gmul(f, prow[j])
                    val = (a[0] - b[0], a[1] - b[1])
                row[j] = _gexdiv(val, prev)
            row[c] = _GZERO
        prev = piv
        r += 1
        if r == m:
            break
    return r


def rank(matrix) -> int:
    """Exact rank of a matrix (sequence of rows) with entries in Q(i)."""
    rows = [_integer_row([gauss(x) for x in row]) for row in matrix]
    if not rows:
        return 0
    return bareiss_rank(rows, len(rows[0]))


# dense helpers -----------------------------------------------------------

def identity(n: int):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_mul(a, b):
    bt = list(zip(*b))
    out = []
    for row in a:
        out.append([_dot(row, col) for col in bt])
    return out


def mat_vec(a, v):
    return [_dot(row, v) for row in a]


def _dot(u, v):
    s = ZERO
    for x, y in zip(u, v):
        if x and y:
            s = s + x * y
    return s


def rref(matrix):
    """Reduced row echelon form and pivot columns (Gauss-Jordan)."""
    a = [[gauss(x) for x in row] for row in matrix]
    m = len(a)
    ncols = len(a[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, pivots


def kernel(matrix, ncols=None):
    """Basis of the right null space, one vector per free column."""
    if not matrix:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    a, pivots = rref(matrix)
    ncols = len(a[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(a, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def inverse(matrix):
    n = len(matrix)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)]
           for i, row in enumerate(matrix)]
    a, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise PreconditionError("matrix is singular")
    return [row[n:] for row in a]


def solve(matrix, rhs):
    """One solution ``x`` of ``matrix @ x = rhs``, or None if inconsistent."""
    aug = [list(row) + [gauss(b)] for row, b in zip(matrix, rhs)]
    a, pivots = rref(aug)
    ncols = len(aug[0]) - 1
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for row, p in zip(a, pivots):
        x[p] = row[ncols]
    return x


class SpanBasis:
    """Incrementally maintained echelon basis of sparse vectors.

    Vectors are dicts from sortable keys to nonzero GaussRationals.  Each
    stored row has its smallest key as pivot, normalized to one.
    """

    def __init__(self):
        self._rows = {}
        self.vectors = []

    def __len__(self):
        return len(self._rows)

    def reduce(self, vec) -> dict:
        v = {key: gauss(val) for key, val in vec.items() if val}
        rows = self._rows
        while v:
            key = min(v)
            row = rows.get(key)
            if row is None:
                break
            f = v[key]
            for k2, x in row.items():
                y = v.get(k2, ZERO) - f * x
                if y:
                    v[k2] = y
                else:
                    v.pop(k2, None)
        return v

    def add(self, vec) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        key = min(v)
        inv = 1 / v[key]
        self._rows[key] = {k2: x * inv for k2, x in v.items()}
        self.vectors.append(dict(vec))
        return True

    def contains(self, vec) -> bool:
        return not self.reduce(vec)
