"""Vertex models, partition functions and the fragment-to-tensor map.

A :class:`VertexModel` is a linear functional on the polynomial ring
``Q(i)[x_1..x_n]``, stored by its values on monomials ``x^alpha``.
Monomials missing from the support evaluate to zero.  A model may
instead be given in spin form ``p -> sum_i a_i p(u_i)``; it is then
evaluated exactly from its points and weights at any degree.

Colors are 0-based (color ``c`` is ``x_{c+1}`` / ``e_{c+1}``).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .errors import ParseError, PreconditionError
from .fragments import Fragment
from .polynomials import LinearSubstitution, monomials
from .scalar import ONE, ZERO, GaussRational, format_scalar, gauss, parse_scalar
from .tensors import OrthogonalMap, Tensor, permute_slots, tensor_product

__all__ = [
    "SpinForm",
    "VertexModel",
    "eval_h",
    "partition_function",
    "h_phi",
    "p_h",
    "PartitionPolynomial",
    "partition_polynomial",
    "parse_model",
    "format_model",
]


@dataclass(frozen=True)
class SpinForm:
    points: tuple
    weights: tuple

    def __post_init__(self):
        pts = tuple(tuple(gauss(x) for x in p) for p in self.points)
        ws = tuple(gauss(a) for a in self.weights)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", ws)
        if len(pts) != len(ws):
            raise PreconditionError("spin form needs one weight per point")
        if len(set(pts)) != len(pts):
            raise PreconditionError("spin points must be pairwise distinct")
        if any(not a for a in ws):
            raise PreconditionError("spin weights must be nonzero")
        if pts and len({len(p) for p in pts}) != 1:
            raise PreconditionError("spin points must share a dimension")


class VertexModel:
    """A finitely supported functional, or one in spin form.

    ``degree_bound`` is the largest monomial degree the model claims to
    describe.  For support models it defaults to the top degree present;
    for spin models it is ``None`` unless declared.
    """

    def __init__(self, n: int, support=None, degree_bound=None, spin=None):
        if n < 1:
            raise PreconditionError("a model needs at least one color")
        self.n = n
        self.spin = spin
        self._support = {}
        self._cache = {}
        self._piece_cache = {}
        if spin is not None:
            if support:
                raise PreconditionError("give either a support or a spin form, not both")
            if spin.points and len(spin.points[0]) != n:
                raise PreconditionError(f"spin points must have {n} coordinates")
        for alpha, val in (support or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n or any(a < 0 for a in alpha):
                raise PreconditionError(f"bad exponent vector {alpha} for n={n}")
            val = gauss(val)
            if val:
                self._support[alpha] = val
        top = max((sum(a) for a in self._support), default=0)
        if degree_bound is None and spin is None:
            degree_bound = top
        if degree_bound is not None and degree_bound < top:
            raise PreconditionError(
                f"declared degree bound {degree_bound} is below support degree {top}")
        self.degree_bound = degree_bound

    @classmethod
    def from_spin(cls, points, weights, degree_bound=None) -> VertexModel:
        form = SpinForm(points, weights)
        n = len(form.points[0]) if form.points else None
        if n is None:
            raise PreconditionError("use from_spin_n for an empty spin model")
        return cls(n, spin=form, degree_bound=degree_bound)

    @classmethod
    def empty_spin(cls, n: int, degree_bound=None) -> VertexModel:
        return cls(n, spin=SpinForm((), ()), degree_bound=degree_bound)

    @classmethod
    def zero(cls, n: int, degree_bound: int = 0) -> VertexModel:
        return cls(n, {}, degree_bound)

    # evaluation ------------------------------------------------------

    def eval(self, alpha) -> GaussRational:
        if self.spin is None:
            return self._support.get(alpha, ZERO)
        hit = self._cache.get(alpha)
        if hit is None:
            hit = ZERO
            for u, a in zip(self.spin.points, self.spin.weights):
                term = a
                for x, e in zip(u, alpha):
                    if e:
                        term = term * x ** e
                        if not term:
                            break
                hit = hit + term
            self._cache[alpha] = hit
        return hit

    @property
    def support(self):
        """Nonzero values on monomials of degree at most ``degree_bound``."""
        if self.spin is None:
            return dict(self._support)
        if self.degree_bound is None:
            raise PreconditionError("a spin model needs a degree bound to list its support")
        out = {}
        for alpha in monomials(self.n, self.degree_bound):
            v = self.eval(alpha)
            if v:
                out[alpha] = v
        return out

    def truncate(self, e: int) -> VertexModel:
        """The restriction to monomials of degree at most ``e`` as a support model."""
        if self.spin is None:
            return VertexModel(self.n, {a: v for a, v in self._support.items() if sum(a) <= e}, e)
        return VertexModel(self.n, {a: self.eval(a) for a in monomials(self.n, e)}, e)

    def act(self, g, e=None) -> VertexModel:
        """The transformed model ``g h``, where ``(g h)(p) = h(p o g)``.

        Spin models map their points exactly.  Support models are
        transformed on all monomials up to degree ``e`` (default: the
        degree bound), which is exact since substitution keeps degree.
        """
        matrix = g.matrix if isinstance(g, OrthogonalMap) else [list(r) for r in g]
        if self.spin is not None:
            pts = [tuple(sum((row[j] * u[j] for j in range(self.n)), ZERO) for row in matrix)
                   for u in self.spin.points]
            return VertexModel(self.n, spin=SpinForm(pts, self.spin.weights),
                               degree_bound=self.degree_bound)
        e = self.degree_bound if e is None else e
        sub = LinearSubstitution(matrix)
        out = {}
        for alpha in monomials(self.n, e):
            s = ZERO
            for beta, coef in sub.expand(alpha).items():
                v = self._support.get(beta)
                if v is not None:
                    s = s + coef * v
            if s:
                out[alpha] = s
        return VertexModel(self.n, out, e)

    def __eq__(self, other):
        if not isinstance(other, VertexModel):
            return NotImplemented
        if (self.n, self.degree_bound, self.spin) != (other.n, other.degree_bound, other.spin):
            return False
        if self.spin is not None:
            return True
        return self._support == other._support

    def __hash__(self):
        return hash((self.n, self.degree_bound, self.spin,
                     frozenset(self._support.items()) if self.spin is None else None))

    def __repr__(self):
        if self.spin is not None:
            return f"VertexModel(n={self.n}, spin m={len(self.spin.points)}, degree_bound={self.degree_bound})"
        return f"VertexModel(n={self.n}, terms={len(self._support)}, degree_bound={self.degree_bound})"


def eval_h(h: VertexModel, alpha) -> GaussRational:
    return h.eval(tuple(alpha))


# coloring sums -------------------------------------------------------------

def _edge_order(n_vertices, edges):
    """Open pairs first, then edges grouped by their first unfinished vertex."""
    order = [i for i, (a, b) in enumerate(edges) if b < 0]
    placed = set(order)
    incident = [[] for _ in range(n_vertices)]
    for i, (a, b) in enumerate(edges):
        for end in {a, b}:
            if end >= 0:
                incident[end].append(i)
    for v in range(n_vertices):
        for i in incident[v]:
            if i not in placed:
                placed.add(i)
                order.append(i)
    return order


def _coloring_sums(h, n_vertices, edges, key_edges=(), fixed=None):
    """Sum of vertex-weight products over edge colorings.

    Results are bucketed by the colors on ``key_edges`` (a list of edge
    indices).  ``fixed`` maps edge indices to forced colors.  Colorings
    are visited in lexicographic order of the processing order; branches
    die as soon as a finished vertex contributes a zero factor.
    """
    n = h.n
    order = _edge_order(n_vertices, edges)
    pos = {idx: p for p, idx in enumerate(order)}
    m = len(order)
    ends = [[e for e in edges[idx] if e >= 0] for idx in order]
    last = [-1] * n_vertices
    for p, es in enumerate(ends):
        for v in es:
            last[v] = p
    finishing = [[] for _ in range(m)]
    weight = ONE
    isolated = 0
    for v in range(n_vertices):
        if last[v] < 0:
            isolated += 1
        else:
            finishing[last[v]].append(v)
    if isolated:
        weight = h.eval((0,) * n) ** isolated
    out = {}
    if not weight:
        return out
    fixed = fixed or {}
    choices = [(fixed[idx],) if idx in fixed else tuple(range(n)) for idx in order]
    key_pos = [pos[idx] for idx in key_edges]
    counts = [[0] * n for _ in range(n_vertices)]
    colors = [0] * m
    heval = h.eval

    def rec(p, w):
        if p == m:
            key = tuple(colors[q] for q in key_pos)
            s = out.get(key)
            out[key] = w if s is None else s + w
            return
        es = ends[p]
        done = finishing[p]
        for c in choices[p]:
            colors[p] = c
            for v in es:
                counts[v][c] += 1
            w2 = w
            for v in done:
                w2 = w2 * heval(tuple(counts[v]))
                if not w2:
                    break
            if w2:
                rec(p + 1, w2)
            for v in es:
                counts[v][c] -= 1

    rec(0, weight)
    return {key: val for key, val in out.items() if val}


def _label_edges(f: Fragment):
    """Edge index carrying each label 1..k."""
    where = {}
    for idx, (a, b) in enumerate(f.edges):
        for end in (a, b):
            if end < 0:
                where[-end] = idx
    return [where[l] for l in range(1, f.k + 1)]


def _circle_factor(h, circles):
    return GaussRational(h.n ** circles)


def partition_function(h: VertexModel, g: Fragment) -> GaussRational:
    """``n^circles * sum over edge colorings of prod_v h(x^{colors at v})``."""
    if g.k != 0:
        raise PreconditionError("partition functions are defined on graphs (k = 0)")
    result = _circle_factor(h, g.circles)
    for piece, _ in g.components():
        if piece.circles:
            continue
        val = _coloring_sums(h, piece.n_vertices, piece.edges).get((), ZERO)
        if not val:
            return ZERO
        result = result * val
    return result


def h_phi(h: VertexModel, f: Fragment, phi) -> GaussRational:
    """Weighted count of colorings extending ``phi`` (0-based) on the half edges."""
    phi = tuple(phi)
    if len(phi) != f.k:
        raise PreconditionError(f"phi must assign a color to each of the {f.k} labels")
    fixed = {}
    for label, idx in enumerate(_label_edges(f), 1):
        c = phi[label - 1]
        if fixed.get(idx, c) != c:
            return ZERO
        fixed[idx] = c
    val = _coloring_sums(h, f.n_vertices, f.edges, fixed=fixed).get((), ZERO)
    return val * _circle_factor(h, f.circles)


def _piece_tensor(h, piece):
    hit = h._piece_cache.get(piece)
    if hit is None:
        sums = _coloring_sums(h, piece.n_vertices, piece.edges, key_edges=_label_edges(piece))
        hit = Tensor._wrap(h.n, piece.k, sums)
        h._piece_cache[piece] = hit
    return hit


def p_h(h: VertexModel, f: Fragment) -> Tensor:
    """``sum_phi h_phi(F) e_phi``; an order-0 tensor holding f_h(F) when k = 0."""
    result = Tensor._wrap(h.n, 0, {(): _circle_factor(h, f.circles)})
    slots = []
    for piece, labels in f.components():
        if piece.circles:
            continue
        t = _piece_tensor(h, piece)
        if t.is_zero():
            return Tensor._wrap(h.n, f.k, {})
        result = tensor_product(result, t)
        slots.extend(labels)
    if slots != sorted(slots):
        result = permute_slots(result, [l - 1 for l in slots])
    return result


# partition polynomial ------------------------------------------------------

class PartitionPolynomial:
    """Integer polynomial in variables ``y[alpha]``.

    ``terms`` maps a monomial, a tuple of ``(alpha, exponent)`` pairs
    sorted by descending ``alpha``, to its integer coefficient.
    """

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    def evaluate(self, h) -> GaussRational:
        """Substitute ``y[alpha] = h(x^alpha)``."""
        total = ZERO
        for mono, coef in self.terms.items():
            val = GaussRational(coef)
            for alpha, e in mono:
                val = val * h.eval(alpha) ** e
                if not val:
                    break
            total = total + val
        return total

    def variables(self):
        return sorted({alpha for mono in self.terms for alpha, _ in mono}, reverse=True)

    def __eq__(self, other):
        if not isinstance(other, PartitionPolynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __str__(self):
        return format_polynomial(self)


def partition_polynomial(g: Fragment, n: int) -> PartitionPolynomial:
    """Sum over edge colorings of the product of ``y[alpha_v]`` over vertices."""
    if g.k != 0:
        raise PreconditionError("the partition polynomial is defined on graphs")
    edges = g.edges
    terms = {}
    for colors in itertools.product(range(n), repeat=len(edges)):
        counts = [[0] * n for _ in range(g.n_vertices)]
        for (a, b), c in zip(edges, colors):
            counts[a][c] += 1
            counts[b][c] += 1
        mono = {}
        for cnt in counts:
            alpha = tuple(cnt)
            mono[alpha] = mono.get(alpha, 0) + 1
        key = tuple(sorted(mono.items(), reverse=True))
        terms[key] = terms.get(key, 0) + 1
    scale = n ** g.circles
    return PartitionPolynomial(n, {m: c * scale for m, c in terms.items()})


def format_polynomial(p: PartitionPolynomial) -> str:
    if not p.terms:
        return "0"
    parts = []
    for mono in sorted(p.terms, reverse=True):
        factors = [str(p.terms[mono])]
        for alpha, e in mono:
            var = "y[" + ",".join(str(a) for a in alpha) + "]"
            factors.append(var if e == 1 else f"{var}^{e}")
        parts.append("*".join(factors))
    return " + ".join(parts)


_VAR_RE = re.compile(r"^y\[(\d+(?:,\d+)*)\](?:\^(\d+))?$")


def parse_polynomial(text: str, n: int) -> PartitionPolynomial:
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    if not body:
        raise ParseError("empty polynomial")
    if body == "0":
        return PartitionPolynomial(n)
    terms = {}
    for chunk in body.split("+"):
        factors = [f.strip() for f in chunk.split("*")]
        try:
            coef = int(factors[0])
        except ValueError:
            raise ParseError(f"term {chunk.strip()!r} must start with an integer coefficient") from None
        mono = {}
        for f in factors[1:]:
            m = _VAR_RE.match(f)
            if not m:
                raise ParseError(f"bad factor {f!r}")
            alpha = tuple(int(x) for x in m.group(1).split(","))
            if len(alpha) != n:
                raise ParseError(f"variable {f!r} does not have {n} exponents")
            mono[alpha] = mono.get(alpha, 0) + int(m.group(2) or 1)
        key = tuple(sorted(mono.items(), reverse=True))
        terms[key] = terms.get(key, 0) + coef
    return PartitionPolynomial(n, terms)


# model files ---------------------------------------------------------------

def _header(parts, lineno):
    opts = {}
    for tok in parts:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", lineno)
        key, val = tok.split("=", 1)
        try:
            opts[key] = int(val)
        except ValueError:
            raise ParseError(f"{key} must be an integer", lineno) from None
    if "n" not in opts:
        raise ParseError("header needs n=<colors>", lineno)
    unknown = set(opts) - {"n", "degree"}
    if unknown:
        raise ParseError(f"unknown header keys {sorted(unknown)}", lineno)
    return opts["n"], opts.get("degree")


def parse_model(text: str) -> VertexModel:
    """Parse a ``model`` (term list) or ``spin`` (weighted points) file."""
    kind = None
    n = degree = None
    terms = {}
    points, weights = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if kind is None:
            if parts[0] not in ("model", "spin"):
                raise ParseError("expected 'model n=<n>' or 'spin n=<n>' header", lineno)
            kind = parts[0]
            n, degree = _header(parts[1:], lineno)
            if n < 1:
                raise ParseError("n must be positive", lineno)
            continue
        if ":" not in line:
            raise ParseError("expected a ':' separator", lineno)
        left, right = line.split(":", 1)
        lparts = left.split()
        if kind == "model":
            if not lparts or lparts[0] != "term":
                raise ParseError("expected 'term a1 ... an : value'", lineno)
            try:
                alpha = tuple(int(x) for x in lparts[1:])
            except ValueError:
                raise ParseError("exponents must be integers", lineno) from None
            if len(alpha) != n or any(a < 0 for a in alpha):
                raise ParseError(f"need {n} nonnegative exponents", lineno)
            if alpha in terms:
                raise ParseError(f"duplicate term {alpha}", lineno)
            terms[alpha] = parse_scalar(right, lineno)
        else:
            if len(lparts) != 2 or lparts[0] != "point":
                raise ParseError("expected 'point a : u1 ... un'", lineno)
            coords = right.split()
            if len(coords) != n:
                raise ParseError(f"need {n} coordinates", lineno)
            weights.append(parse_scalar(lparts[1], lineno))
            points.append(tuple(parse_scalar(c, lineno) for c in coords))
    if kind is None:
        raise ParseError("empty model file")
    try:
        if kind == "model":
            return VertexModel(n, terms, degree)
        return VertexModel(n, spin=SpinForm(points, weights), degree_bound=degree)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


def format_model(h: VertexModel) -> str:
    deg = "" if h.degree_bound is None else f" degree={h.degree_bound}"
    if h.spin is not None:
        lines = [f"spin n={h.n}{deg}"]
        for u, a in zip(h.spin.points, h.spin.weights):
            lines.append(f"point {format_scalar(a)} : " + " ".join(format_scalar(x) for x in u))
    else:
        lines = [f"model n={h.n}{deg}"]
        for alpha in sorted(h._support, key=lambda a: (sum(a), tuple(-x for x in a))):
            lines.append("term " + " ".join(map(str, alpha)) + f" : {format_scalar(h._support[alpha])}")
    return "\n".join(lines) + "\n"
