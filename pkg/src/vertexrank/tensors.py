"""Sparse tensors in the k-th tensor power of V = Q(i)^n.

A :class:`Tensor` maps color tuples ``phi = (phi_1, ..., phi_k)`` to
coefficients of the basis tensor ``e_phi``.  Colors are 0-based
internally (``0`` is ``e_1``); the text dump is 1-based.  Slot labels
for :func:`contract` are 1-based, matching fragment labels.

The bilinear form is the symmetric one induced by the standard form on
V.  There is no complex conjugation anywhere: isotropic vectors such as
``e_1 + i e_2`` pair to zero with themselves.
"""

from __future__ import annotations

from types import MappingProxyType

from .errors import ParseError, PreconditionError
from .linalg import bareiss_rank, _integer_row
from .scalar import ONE, ZERO, GaussRational, format_scalar, gauss, parse_scalar

__all__ = [
    "Tensor",
    "OrthogonalMap",
    "contract",
    "bilinear_form",
    "tensor_product",
    "apply_orthogonal",
    "permute_slots",
    "span_rank",
    "gram_matrix",
    "gram_rank",
    "delta_tensor",
    "format_tensor",
    "parse_tensor",
]


class Tensor:
    """Immutable sparse tensor of order ``k`` over ``V`` with ``dim V = n``."""

    __slots__ = ("n", "k", "_entries", "_hash")

    def __init__(self, n: int, k: int, entries=None):
        self.n = n
        self.k = k
        clean = {}
        if entries:
            for key, val in entries.items():
                key = tuple(key)
                if len(key) != k or any(not 0 <= c < n for c in key):
                    raise PreconditionError(f"bad index {key} for n={n}, k={k}")
                val = gauss(val)
                if val:
                    clean[key] = val
        self._entries = clean
        self._hash = None

    @classmethod
    def _wrap(cls, n, k, entries):
        t = object.__new__(cls)
        t.n, t.k, t._entries, t._hash = n, k, entries, None
        return t

    @classmethod
    def basis(cls, n: int, phi) -> Tensor:
        phi = tuple(phi)
        return cls(n, len(phi), {phi: ONE})

    @classmethod
    def scalar(cls, n: int, value) -> Tensor:
        return cls(n, 0, {(): value})

    @classmethod
    def vector(cls, coords) -> Tensor:
        coords = [gauss(c) for c in coords]
        return cls(len(coords), 1, {(c,): x for c, x in enumerate(coords)})

    @property
    def entries(self):
        return MappingProxyType(self._entries)

    def __getitem__(self, key) -> GaussRational:
        return self._entries.get(tuple(key), ZERO)

    def __len__(self):
        return len(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def value(self) -> GaussRational:
        """The scalar held by an order-0 tensor."""
        if self.k != 0:
            raise PreconditionError("only order-0 tensors are scalars")
        return self._entries.get((), ZERO)

    def _check(self, other):
        if not isinstance(other, Tensor):
            raise TypeError("expected a Tensor")
        if (self.n, self.k) != (other.n, other.k):
            raise PreconditionError(
                f"shape mismatch: (n={self.n}, k={self.k}) vs (n={other.n}, k={other.k})")

    def __add__(self, other):
        self._check(other)
        out = dict(self._entries)
        for key, val in other._entries.items():
            s = out.get(key, ZERO) + val
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Tensor._wrap(self.n, self.k, out)

    def __neg__(self):
        return Tensor._wrap(self.n, self.k, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = gauss(c)
        if not c:
            return Tensor._wrap(self.n, self.k, {})
        return Tensor._wrap(self.n, self.k, {k: v * c for k, v in self._entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.n, self.k) == (other.n, other.k) and self._entries == other._entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.k, frozenset(self._entries.items())))
        return self._hash

    def __repr__(self):
        return f"Tensor(n={self.n}, k={self.k}, nnz={len(self._entries)})"


def delta_tensor(n: int) -> Tensor:
    """``sum_c e_c (x) e_c``, the image of the open-ended edge."""
    return Tensor._wrap(n, 2, {(c, c): ONE for c in range(n)})


def contract(t: Tensor, i: int, j: int) -> Tensor:
    """Pair slots ``i < j`` (1-based) through the bilinear form."""
    if not 1 <= i < j <= t.k:
        raise PreconditionError(f"contraction slots must satisfy 1 <= i < j <= {t.k}, got ({i}, {j})")
    a, b = i - 1, j - 1
    out = {}
    for key, val in t._entries.items():
        if key[a] != key[b]:
            continue
        nk = key[:a] + key[a + 1:b] + key[b + 1:]
        s = out.get(nk, ZERO) + val
        if s:
            out[nk] = s
        else:
            out.pop(nk, None)
    return Tensor._wrap(t.n, t.k - 2, out)


def bilinear_form(t1: Tensor, t2: Tensor) -> GaussRational:
    t1._check(t2)
    a, b = t1._entries, t2._entries
    if len(b) < len(a):
        a, b = b, a
    s = ZERO
    for key, val in a.items():
        other = b.get(key)
        if other is not None:
            s = s + val * other
    return s


def tensor_product(t1: Tensor, t2: Tensor) -> Tensor:
    if t1.n != t2.n:
        raise PreconditionError("tensor product needs a common n")
    out = {}
    for k1, v1 in t1._entries.items():
        for k2, v2 in t2._entries.items():
            out[k1 + k2] = v1 * v2
    return Tensor._wrap(t1.n, t1.k + t2.k, out)


def permute_slots(t: Tensor, order) -> Tensor:
    """Tensor whose slot ``order[s]`` holds what slot ``s`` of ``t`` held (0-based)."""
    order = tuple(order)
    if sorted(order) != list(range(t.k)):
        raise PreconditionError("order must be a permutation of the slots")
    out = {}
    for key, val in t._entries.items():
        nk = [0] * t.k
        for s, c in enumerate(key):
            nk[order[s]] = c
        out[tuple(nk)] = val
    return Tensor._wrap(t.n, t.k, out)


class OrthogonalMap:
    """An element of O_n given by its matrix in the orthonormal basis e_1..e_n."""

    __slots__ = ("n", "matrix", "_hash")

    def __init__(self, matrix, check: bool = True):
        rows = tuple(tuple(gauss(x) for x in row) for row in matrix)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise PreconditionError("orthogonal map needs a square matrix")
        self.n = n
        self.matrix = rows
        self._hash = None
        if check and not self.is_orthogonal():
            raise PreconditionError("matrix is not orthogonal: g^T g != I")

    @classmethod
    def identity(cls, n: int) -> OrthogonalMap:
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], check=False)

    @classmethod
    def signed_permutation(cls, perm, signs=None) -> OrthogonalMap:
        """The map ``e_j -> signs[j] * e_{perm[j]}`` (0-based)."""
        n = len(perm)
        signs = signs or [1] * n
        m = [[ZERO] * n for _ in range(n)]
        for j, (p, s) in enumerate(zip(perm, signs)):
            m[p][j] = gauss(s)
        return cls(m)

    def is_orthogonal(self) -> bool:
        n, g = self.n, self.matrix
        for a in range(n):
            for b in range(a, n):
                s = ZERO
                for r in range(n):
                    s = s + g[r][a] * g[r][b]
                if s != (ONE if a == b else ZERO):
                    return False
        return True

    def trace(self) -> GaussRational:
        s = ZERO
        for c in range(self.n):
            s = s + self.matrix[c][c]
        return s

    def __matmul__(self, other):
        if not isinstance(other, OrthogonalMap):
            return NotImplemented
        n = self.n
        a, b = self.matrix, other.matrix
        m = [[sum((a[r][s] * b[s][c] for s in range(n)), ZERO) for c in range(n)]
             for r in range(n)]
        return OrthogonalMap(m, check=False)

    def inverse(self) -> OrthogonalMap:
        return OrthogonalMap([list(col) for col in zip(*self.matrix)], check=False)

    def apply_vector(self, v):
        v = [gauss(x) for x in v]
        return tuple(sum((row[j] * v[j] for j in range(self.n)), ZERO) for row in self.matrix)

    def __eq__(self, other):
        if not isinstance(other, OrthogonalMap):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.matrix)
        return self._hash

    def __repr__(self):
        rows = "; ".join(" ".join(format_scalar(x) for x in r) for r in self.matrix)
        return f"OrthogonalMap([{rows}])"


def apply_orthogonal(g: OrthogonalMap, t: Tensor) -> Tensor:
    """Apply ``g (x) ... (x) g`` to ``t``, one slot at a time."""
    if g.n != t.n:
        raise PreconditionError("dimension mismatch between map and tensor")
    cols = [[(r, g.matrix[r][c]) for r in range(g.n) if g.matrix[r][c]] for c in range(g.n)]
    entries = t._entries
    for s in range(t.k):
        out = {}
        for key, val in entries.items():
            head, tail = key[:s], key[s + 1:]
            for r, x in cols[key[s]]:
                nk = head + (r,) + tail
                y = out.get(nk, ZERO) + x * val
                if y:
                    out[nk] = y
                else:
                    out.pop(nk, None)
        entries = out
    return Tensor._wrap(t.n, t.k, dict(entries))


def _uniform(ts):
    ts = list(ts)
    if ts:
        n, k = ts[0].n, ts[0].k
        for t in ts:
            if (t.n, t.k) != (n, k):
                raise PreconditionError("tensors must share n and k")
    return ts


def span_rank(ts) -> int:
    """Dimension of the linear span, by fraction-free elimination."""
    ts = _uniform(ts)
    keys = sorted({key for t in ts for key in t._entries})
    if not keys:
        return 0
    rows = [_integer_row([t._entries.get(key, ZERO) for key in keys]) for t in ts]
    return bareiss_rank(rows, len(keys))


def gram_matrix(ts):
    ts = _uniform(ts)
    m = len(ts)
    g = [[ZERO] * m for _ in range(m)]
    for a in range(m):
        for b in range(a, m):
            g[a][b] = g[b][a] = bilinear_form(ts[a], ts[b])
    return g


def gram_rank(ts) -> int:
    """Rank of the Gram matrix ``<t_a, t_b>``; may be below the span rank."""
    g = gram_matrix(ts)
    if not g:
        return 0
    return bareiss_rank([_integer_row(row) for row in g], len(g))


# text dump ---------------------------------------------------------------

def format_tensor(t: Tensor) -> str:
    """One line ``c1 ... ck : scalar`` per nonzero entry, 1-based, sorted."""
    header = f"tensor n={t.n} k={t.k}"
    lines = [header]
    for key in sorted(t._entries):
        idx = " ".join(str(c + 1) for c in key)
        lines.append(f"{idx} : {format_scalar(t._entries[key])}".lstrip())
    return "\n".join(lines) + "\n"


def parse_tensor(text: str) -> Tensor:
    n = k = None
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            parts = line.split()
            if parts[0] != "tensor":
                raise ParseError("expected 'tensor n=<n> k=<k>' header", lineno)
            opts = _options(parts[1:], lineno)
            try:
                n, k = int(opts["n"]), int(opts["k"])
            except (KeyError, ValueError):
                raise ParseError("header needs integer n= and k=", lineno) from None
            continue
        if ":" not in line:
            raise ParseError("expected 'c1 ... ck : scalar'", lineno)
        idx, val = line.split(":", 1)
        try:
            key = tuple(int(c) - 1 for c in idx.split())
        except ValueError:
            raise ParseError(f"bad index {idx.strip()!r}", lineno) from None
        if len(key) != k or any(not 0 <= c < n for c in key):
            raise ParseError(f"index {idx.strip()!r} out of range", lineno)
        if key in entries:
            raise ParseError(f"duplicate index {idx.strip()!r}", lineno)
        entries[key] = parse_scalar(val, lineno)
    if n is None:
        raise ParseError("empty tensor file")
    return Tensor(n, k, entries)


def _options(tokens, lineno):
    opts = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", lineno)
        key, val = tok.split("=", 1)
        opts[key] = val
    return opts
