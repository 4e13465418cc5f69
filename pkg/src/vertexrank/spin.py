"""Orbit closedness for spin models and one-parameter subgroup limits.

A one-parameter subgroup of O_n is described by a canonical basis
``v_1..v_n`` (Gram matrix = ones on the anti-diagonal) and integer
weights ``d_1 >= ... >= d_n`` with ``d_i = -d_{n+1-i}``; it acts as
``v_j -> t**d_j v_j``.  In the dual coordinates ``y`` of that basis the
coefficient of ``y^alpha`` in a functional scales by ``t**(alpha . d)``,
so a limit at ``t -> 0`` exists iff every coefficient of negative weight
vanishes, and the limit keeps exactly the weight-zero part.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantError, NotASquareError, ParseError, PreconditionError
from .linalg import inverse, kernel, mat_mul, rank, transpose
from .model import VertexModel
from .polynomials import LinearSubstitution, monomials
from .scalar import I, ONE, ZERO, format_scalar, gauss, gauss_sqrt, parse_scalar

__all__ = [
    "OneParamSubgroup",
    "NO_LIMIT",
    "orbit_closed",
    "one_param_problems",
    "verify_one_param",
    "apply_limit",
    "limit_points",
    "degenerate_witness",
    "canonical_basis",
    "normalize_spin",
    "normalize_spin_points",
    "parse_oneparam",
    "format_oneparam",
]


def _dot(u, v):
    s = ZERO
    for x, y in zip(u, v):
        if x and y:
            s = s + x * y
    return s


class _NoLimit:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NO_LIMIT"

    __str__ = __repr__

    def __bool__(self):
        return False


NO_LIMIT = _NoLimit()


@dataclass(frozen=True)
class OneParamSubgroup:
    """``lambda(t) = B diag(t**d) B^-1`` with the columns of ``B`` canonical."""

    vectors: tuple
    weights: tuple

    def __post_init__(self):
        vecs = tuple(tuple(gauss(x) for x in v) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "weights", tuple(int(d) for d in self.weights))

    @property
    def n(self) -> int:
        return len(self.vectors)

    def basis_matrix(self):
        """``B`` with the vectors ``v_j`` as columns."""
        return transpose([list(v) for v in self.vectors])

    def matrix_at(self, t):
        t = gauss(t)
        b = self.basis_matrix()
        scaled = [[b[r][c] * t ** self.weights[c] for c in range(self.n)] for r in range(self.n)]
        return mat_mul(scaled, inverse(b))

    @classmethod
    def trivial(cls, vectors) -> OneParamSubgroup:
        return cls(vectors, (0,) * len(vectors))


# closedness ----------------------------------------------------------------

def orbit_closed(points, weights=None) -> bool:
    """Whether the form restricted to the span of the points is nondegenerate."""
    pts = [tuple(gauss(x) for x in p) for p in points]
    if not pts:
        return True
    if len(pts) == 1 and not any(pts[0]):
        return True
    gram = [[_dot(p, q) for q in pts] for p in pts]
    return rank(gram) == rank(pts)


# verification --------------------------------------------------------------

def one_param_problems(lam: OneParamSubgroup, sample_points=None):
    """Reasons ``lam`` is not a one-parameter subgroup of O_n (empty if it is).

    After the structural checks the identity ``lambda(t)^T lambda(t) = I``
    is tested at distinct nonzero rational points.  Its entries are
    Laurent polynomials with exponents in ``[-2D, 2D]`` (``D`` the largest
    absolute weight), so agreement at ``4D + 1`` points proves it.
    """
    problems = []
    n = lam.n
    if n == 0:
        return ["empty basis"]
    if any(len(v) != n for v in lam.vectors):
        return [f"basis must consist of {n} vectors of length {n}"]
    if len(lam.weights) != n:
        return [f"need {n} weights, got {len(lam.weights)}"]
    for i in range(n):
        for j in range(n):
            want = ONE if i + j == n - 1 else ZERO
            got = _dot(lam.vectors[i], lam.vectors[j])
            if got != want:
                problems.append(f"<v_{i + 1}, v_{j + 1}> = {got}, expected {want} (not canonical)")
    d = lam.weights
    if any(d[i] < d[i + 1] for i in range(n - 1)):
        problems.append(f"weights {list(d)} are not nonincreasing")
    for i in range(n):
        if d[i] != -d[n - 1 - i]:
            problems.append(f"d_{i + 1} = {d[i]} but d_{n - i} = {d[n - 1 - i]}; need d_i = -d_(n+1-i)")
            break
    if problems:
        return problems
    if rank([list(v) for v in lam.vectors]) < n:
        return ["basis vectors are linearly dependent"]
    top = max(abs(x) for x in d)
    needed = 4 * top + 1
    if sample_points is None:
        sample_points = range(1, needed + 1)
    pts = [gauss(t) for t in sample_points]
    if len(set(pts)) != len(pts) or any(not t for t in pts):
        return ["sample points must be distinct and nonzero"]
    if len(pts) < needed:
        return [f"need at least {needed} sample points, got {len(pts)}"]
    for t in pts:
        m = lam.matrix_at(t)
        mtm = mat_mul(transpose(m), m)
        for i in range(n):
            for j in range(n):
                if mtm[i][j] != (ONE if i == j else ZERO):
                    return [f"lambda({t}) is not orthogonal"]
    return []


def verify_one_param(lam: OneParamSubgroup, sample_points=None) -> bool:
    return not one_param_problems(lam, sample_points)


# limits --------------------------------------------------------------------

def apply_limit(lam: OneParamSubgroup, h: VertexModel, e=None):
    """``lim_{t->0} lambda(t) h_e`` as a truncated model, or NO_LIMIT."""
    e = h.degree_bound if e is None else e
    if e is None:
        raise PreconditionError("a degree bound is needed to take limits")
    n = h.n
    if lam.n != n:
        raise PreconditionError("subgroup and model dimensions differ")
    b = lam.basis_matrix()
    to_dual = LinearSubstitution(inverse(b))   # y_j in terms of x
    to_std = LinearSubstitution(b)             # x_c in terms of y
    kept = {}
    for alpha in monomials(n, e):
        coef = ZERO
        for beta, c in to_dual.expand(alpha).items():
            coef = coef + c * h.eval(beta)
        if not coef:
            continue
        w = sum(a * d for a, d in zip(alpha, lam.weights))
        if w < 0:
            return NO_LIMIT
        if w == 0:
            kept[alpha] = coef
    out = {}
    for beta in monomials(n, e):
        s = ZERO
        for alpha, c in to_std.expand(beta).items():
            v = kept.get(alpha)
            if v is not None:
                s = s + c * v
        if s:
            out[beta] = s
    return VertexModel(n, out, e)


def limit_points(lam: OneParamSubgroup, points):
    """``lim lambda(t) u`` for each point, or NO_LIMIT if one diverges."""
    b = lam.basis_matrix()
    binv = inverse(b)
    out = []
    for u in points:
        y = [_dot(row, u) for row in binv]
        if any(y[j] and lam.weights[j] < 0 for j in range(lam.n)):
            return NO_LIMIT
        y = [y[j] if lam.weights[j] == 0 else ZERO for j in range(lam.n)]
        out.append(tuple(_dot(row, y) for row in b))
    return out


# witness construction ------------------------------------------------------

def _independent(vectors):
    chosen = []
    for v in vectors:
        if rank(chosen + [list(v)]) > len(chosen):
            chosen.append(list(v))
    return chosen


def _orthogonal_basis(vectors):
    """Pairwise orthogonal non-isotropic basis of a nondegenerate span."""
    rem = _independent(vectors)
    out = []
    while rem:
        pick = next((v for v in rem if _dot(v, v)), None)
        if pick is None:
            pair = next(((a, b) for i, a in enumerate(rem) for b in rem[i + 1:] if _dot(a, b)), None)
            if pair is None:
                raise InvariantError("subspace is degenerate; cannot build a canonical basis")
            pick = [x + y for x, y in zip(*pair)]
        q = _dot(pick, pick)
        out.append(pick)
        projected = []
        for v in rem:
            f = _dot(v, pick) / q
            projected.append([x - f * y for x, y in zip(v, pick)])
        rem = _independent([v for v in projected if any(v)])
    return out


def canonical_basis(vectors):
    """Canonical basis (anti-diagonal Gram) of the nondegenerate span of ``vectors``.

    Orthogonal vectors ``z_a, z_b`` with norms ``q_a, q_b`` become the
    isotropic pair ``z_a +- s z_b`` where ``s**2 = -q_a / q_b``; an odd one
    out is divided by ``sqrt(q)``.  All pairings are tried before giving
    up, and the failure names a value with no square root in Q(i).
    """
    zs = _orthogonal_basis(vectors)
    m = len(zs)
    qs = [_dot(z, z) for z in zs]
    failure = []

    def attempt(idx_left, odd_allowed):
        if not idx_left:
            return [], None
        if len(idx_left) == 1:
            z, q = zs[idx_left[0]], qs[idx_left[0]]
            try:
                r = gauss_sqrt(q)
            except NotASquareError as exc:
                failure.append(exc.value)
                return None
            return [], [x / r for x in z]
        first = idx_left[0]
        candidates = idx_left[1:]
        for other in candidates:
            try:
                s = gauss_sqrt(-qs[first] / qs[other])
            except NotASquareError as exc:
                failure.append(exc.value)
                continue
            rest = [i for i in idx_left if i not in (first, other)]
            sub = attempt(rest, odd_allowed)
            if sub is None:
                continue
            za, zb = zs[first], zs[other]
            p = [x + s * y for x, y in zip(za, zb)]
            pp = [(x - s * y) / (2 * qs[first]) for x, y in zip(za, zb)]
            pairs, middle = sub
            return [(p, pp)] + pairs, middle
        if odd_allowed and len(idx_left) % 2 == 1:
            # let ``first`` be the middle vector instead
            try:
                r = gauss_sqrt(qs[first])
            except NotASquareError as exc:
                failure.append(exc.value)
                return None
            sub = attempt(idx_left[1:], False)
            if sub is None:
                return None
            pairs, middle = sub
            if middle is not None:
                return None
            return pairs, [x / r for x in zs[first]]
        return None

    result = attempt(list(range(m)), m % 2 == 1)
    if result is None:
        raise NotASquareError(failure[0] if failure else qs[0])
    pairs, middle = result
    left = [p for p, _ in pairs]
    right = [pp for _, pp in reversed(pairs)]
    return left + ([middle] if middle is not None else []) + right


def _reflect(w, x):
    f = 2 * _dot(x, w) / _dot(w, w)
    return [xi - f * wi for xi, wi in zip(x, w)]


def _reflections_between(x, y, fixed=()):
    """Reflection vectors whose product sends ``x`` to ``y`` (equal nonzero norms).

    All vectors used are orthogonal to ``fixed`` whenever ``x`` and ``y`` are.
    """
    d = [a - b for a, b in zip(x, y)]
    if not any(d):
        return []
    if _dot(d, d):
        return [d]
    # <x-y, x-y> = 0 forces <x+y, x+y> = 4<x, x> != 0; reflect to -y, then flip
    return [[a + b for a, b in zip(x, y)], list(y)]


def _standard_middle(n):
    """Canonical basis of span(e_3..e_n) as left, middle and right parts."""
    idx = list(range(2, n))
    left, right = [], []
    for a, b in zip(idx[0::2], idx[1::2]):
        f1 = [ZERO] * n
        f1[a] = ONE
        f2 = [ZERO] * n
        f2[b] = ONE
        left.append([x + I * y for x, y in zip(f1, f2)])
        right.append([(x - I * y) / 2 for x, y in zip(f1, f2)])
    middle = []
    if len(idx) % 2:
        e = [ZERO] * n
        e[idx[-1]] = ONE
        middle.append(e)
    return left + middle + list(reversed(right))


def degenerate_witness(points, weights=None) -> OneParamSubgroup:
    """A one-parameter subgroup whose limit shrinks the span of the points.

    ``v_1`` is a radical vector ``r`` of the form on the span ``U`` of
    the points and ``v_n`` an isotropic partner ``s`` with
    ``<r, s> = 1``, so ``U`` lies in ``span(v_1..v_{n-1})``.  Weights are
    ``(1, 0, ..., 0, -1)``.

    The middle vectors are the image of a standard canonical basis of
    ``span(e_3..e_n)`` under an orthogonal map (a product of at most
    four reflections) taking ``e_1 + i e_2, (e_1 - i e_2)/2`` to
    ``r, s``.  No square roots are needed.
    """
    pts = [tuple(gauss(x) for x in p) for p in points]
    if orbit_closed(pts):
        raise PreconditionError("the form on the span of the points is nondegenerate")
    n = len(pts[0])
    base = _independent(pts)
    gram = [[_dot(a, b) for b in base] for a in base]
    coeffs = kernel(gram, len(base))[0]
    r = [sum((c * v[i] for c, v in zip(coeffs, base)), ZERO) for i in range(n)]
    pivot = next(i for i, x in enumerate(r) if x)
    x = [ZERO] * n
    x[pivot] = 1 / r[pivot]
    half = _dot(x, x) / 2
    s = [xi - half * ri for xi, ri in zip(x, r)]

    r0 = [ONE, I] + [ZERO] * (n - 2)
    s0 = [ONE / 2, -I / 2] + [ZERO] * (n - 2)
    # anisotropic bases a = r + s, b = r - s of the two hyperbolic planes
    a0 = [p + q for p, q in zip(r0, s0)]
    b0 = [p - q for p, q in zip(r0, s0)]
    a = [p + q for p, q in zip(r, s)]
    b = [p - q for p, q in zip(r, s)]
    mirrors = _reflections_between(a0, a)
    moved_b0 = b0
    for w in mirrors:
        moved_b0 = _reflect(w, moved_b0)
    mirrors += _reflections_between(moved_b0, b)

    def g(v):
        for w in mirrors:
            v = _reflect(w, v)
        return v

    middle = [g(v) for v in _standard_middle(n)]
    lam = OneParamSubgroup([r] + middle + [s], (1,) + (0,) * (n - 2) + (-1,))
    problems = one_param_problems(lam)
    if problems:
        raise InvariantError("witness construction failed: " + "; ".join(problems))
    return lam


# normalization -------------------------------------------------------------

def _merge(points, weights):
    acc = {}
    order = []
    for p, a in zip(points, weights):
        if p not in acc:
            acc[p] = ZERO
            order.append(p)
        acc[p] = acc[p] + a
    pts = [p for p in order if acc[p]]
    return pts, [acc[p] for p in pts]


def normalize_spin_points(points, weights, e=None):
    """Apply witness limits until the point configuration is closed.

    Returns ``(points, weights, steps)`` where ``steps`` lists the
    one-parameter subgroups used.  Each step is checked against
    :func:`apply_limit` on the truncated functional.
    """
    pts = [tuple(gauss(x) for x in p) for p in points]
    ws = [gauss(a) for a in weights]
    m = len(pts)
    e = max(3 * m, e or 0)
    steps = []
    while not orbit_closed(pts):
        n = len(pts[0])
        lam = degenerate_witness(pts)
        before = VertexModel.from_spin(pts, ws).truncate(e)
        after = apply_limit(lam, before, e)
        moved = limit_points(lam, pts)
        if after is NO_LIMIT or moved is NO_LIMIT:
            raise InvariantError("witness subgroup has no limit")
        pts, ws = _merge(moved, ws)
        check = (VertexModel.from_spin(pts, ws).truncate(e) if pts
                 else VertexModel(n, {}, e))
        if check != after:
            raise InvariantError("point limit and functional limit disagree")
        steps.append(lam)
    return pts, ws, steps


def normalize_spin(points, weights, e=None, n=None) -> VertexModel:
    """A closed-orbit model with the same partition function, truncated at degree e."""
    if not points:
        if n is None:
            raise PreconditionError("n is required for an empty point list")
        return VertexModel(n, {}, max(e or 0, 0))
    n = len(points[0])
    bound = max(3 * len(points), e or 0)
    pts, ws, _ = normalize_spin_points(points, weights, e)
    if not pts:
        return VertexModel(n, {}, bound)
    return VertexModel.from_spin(pts, ws).truncate(bound)


# text format ---------------------------------------------------------------

def format_oneparam(lam: OneParamSubgroup) -> str:
    lines = [f"oneparam n={lam.n}"]
    for v in lam.vectors:
        lines.append(" ".join(format_scalar(x) for x in v))
    lines.append("weights " + " ".join(str(d) for d in lam.weights))
    return "\n".join(lines) + "\n"


def parse_oneparam(text: str) -> OneParamSubgroup:
    n = None
    vectors = []
    weights = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "oneparam" or len(parts) != 2 or not parts[1].startswith("n="):
                raise ParseError("expected 'oneparam n=<n>' header", lineno)
            try:
                n = int(parts[1][2:])
            except ValueError:
                raise ParseError("n must be an integer", lineno) from None
            continue
        if parts[0] == "weights":
            if weights is not None:
                raise ParseError("weights given twice", lineno)
            try:
                weights = tuple(int(x) for x in parts[1:])
            except ValueError:
                raise ParseError("weights must be integers", lineno) from None
            if len(weights) != n:
                raise ParseError(f"need {n} weights", lineno)
            continue
        if weights is not None:
            raise ParseError("basis vectors must precede the weights line", lineno)
        if len(parts) != n:
            raise ParseError(f"basis vector needs {n} coordinates", lineno)
        vectors.append(tuple(parse_scalar(x, lineno) for x in parts))
    if n is None:
        raise ParseError("empty oneparam file")
    if len(vectors) != n:
        raise ParseError(f"need {n} basis vectors, got {len(vectors)}")
    if weights is None:
        raise ParseError("missing weights line")
    return OneParamSubgroup(tuple(vectors), weights)
