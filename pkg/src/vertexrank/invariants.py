"""Dimensions of invariant tensor spaces.

Finite subgroups of O_n are handled by character averaging,
``dim (V^k)^H = |H|^-1 sum_g trace(g)^k``, with the averaging projector
as an explicit cross-check.  The full orthogonal group is handled
through Brauer diagrams: the tensors of the perfect matchings of ``[k]``
span the O_n-invariants, so their Gram rank is the dimension.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import InvariantError, ParseError, PreconditionError
from .linalg import SpanBasis, inverse, rank
from .scalar import ONE, ZERO, GaussRational, format_scalar, gauss, parse_scalar
from .tensors import OrthogonalMap, Tensor, apply_orthogonal

__all__ = [
    "FiniteOrthogonalGroup",
    "invariant_dim_finite",
    "fixed_subspace",
    "perfect_matchings",
    "matching_tensor",
    "cycle_count",
    "brauer_gram",
    "brauer_invariant_dim",
    "spin_stabilizer",
    "parse_group",
    "format_group",
]


class FiniteOrthogonalGroup:
    """A finite subgroup of O_n, given by all of its elements.

    Construction checks that every element is orthogonal and that the
    set contains the identity and is closed under products and inverses.
    """

    def __init__(self, elements, check: bool = True):
        elems = []
        seen = set()
        for g in elements:
            g = g if isinstance(g, OrthogonalMap) else OrthogonalMap(g, check=check)
            if g not in seen:
                seen.add(g)
                elems.append(g)
        if not elems:
            raise PreconditionError("a group needs at least the identity")
        self.n = elems[0].n
        if any(g.n != self.n for g in elems):
            raise PreconditionError("group elements must share a dimension")
        self.elements = tuple(elems)
        if check:
            self._verify(seen)

    def _verify(self, members):
        if OrthogonalMap.identity(self.n) not in members:
            raise PreconditionError("group does not contain the identity")
        for g in self.elements:
            if g.inverse() not in members:
                raise PreconditionError(f"group is not closed under inverses: {g!r}")
            for h in self.elements:
                if g @ h not in members:
                    raise PreconditionError(f"group is not closed under products: {g!r} @ {h!r}")

    @classmethod
    def generated_by(cls, generators, limit: int = 10000) -> FiniteOrthogonalGroup:
        gens = [g if isinstance(g, OrthogonalMap) else OrthogonalMap(g) for g in generators]
        if not gens:
            raise PreconditionError("need at least one generator")
        ident = OrthogonalMap.identity(gens[0].n)
        found = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for g in frontier:
                for s in gens:
                    p = g @ s
                    if p not in found:
                        found.add(p)
                        nxt.append(p)
                        if len(found) > limit:
                            raise PreconditionError("generated group exceeds the size limit")
            frontier = nxt
        return cls(sorted(found, key=_element_key), check=False)

    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in set(self.elements)


def _element_key(g):
    return tuple((x.re, x.im) for row in g.matrix for x in row)


def invariant_dim_finite(group: FiniteOrthogonalGroup, k: int) -> int:
    """``|H|^-1 sum_g trace(g)^k``; must come out a nonnegative integer."""
    total = ZERO
    for g in group.elements:
        total = total + g.trace() ** k
    avg = total / len(group.elements)
    if avg.im or avg.re.denominator != 1 or avg.re < 0:
        raise InvariantError(f"character average {avg} is not a dimension; input is not a group")
    return int(avg.re)


def fixed_subspace(group: FiniteOrthogonalGroup, k: int):
    """A basis of the image of the averaging projector on ``V^k``."""
    n = group.n
    basis = SpanBasis()
    out = []
    for phi in itertools.product(range(n), repeat=k):
        e = Tensor.basis(n, phi)
        acc = {}
        for g in group.elements:
            for key, val in apply_orthogonal(g, e).entries.items():
                s = acc.get(key, ZERO) + val
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        if acc and basis.add(acc):
            scale = Fraction(1, len(group.elements))
            out.append(Tensor(n, k, {key: v * scale for key, v in acc.items()}))
    return out


# Brauer diagrams -----------------------------------------------------------

def perfect_matchings(k: int):
    """All perfect matchings of ``1..k`` as tuples of pairs, in a fixed order."""
    def rec(rest):
        if not rest:
            yield ()
            return
        a = rest[0]
        for idx in range(1, len(rest)):
            b = rest[idx]
            remaining = rest[1:idx] + rest[idx + 1:]
            for tail in rec(remaining):
                yield ((a, b),) + tail
    if k % 2:
        return []
    return list(rec(tuple(range(1, k + 1))))


def matching_tensor(n: int, matching) -> Tensor:
    """``sum over phi`` with ``phi(a) = phi(b)`` for every pair, of ``e_phi``."""
    pairs = list(matching)
    k = 2 * len(pairs)
    entries = {}
    for colors in itertools.product(range(n), repeat=len(pairs)):
        key = [0] * k
        for (a, b), c in zip(pairs, colors):
            key[a - 1] = key[b - 1] = c
        entries[tuple(key)] = ONE
    return Tensor(n, k, entries)


def cycle_count(m1, m2) -> int:
    """Number of components of the union of two perfect matchings."""
    adj = {}
    for a, b in list(m1) + list(m2):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = set()
    cycles = 0
    for start in adj:
        if start in seen:
            continue
        cycles += 1
        stack = [start]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(adj[x])
    return cycles


def brauer_gram(n: int, k: int):
    """Gram matrix of matching tensors via ``n ** cycles``."""
    ms = perfect_matchings(k)
    return [[GaussRational(n ** cycle_count(a, b)) for b in ms] for a in ms]


def brauer_invariant_dim(n: int, k: int) -> int:
    """``dim (V^k)^{O_n}`` as the rank of the Brauer Gram matrix."""
    if k % 2:
        return 0
    if k == 0:
        return 1
    return rank(brauer_gram(n, k))


# spin stabilizers ----------------------------------------------------------

def _dot(u, v):
    s = ZERO
    for x, y in zip(u, v):
        s = s + x * y
    return s


def spin_stabilizer(points, weights) -> FiniteOrthogonalGroup:
    """All orthogonal maps permuting the points and preserving weights.

    The points must span V.  Candidate permutations are searched with
    pruning on weights and inner products; each surviving permutation
    defines at most one linear map, which is then checked for
    consistency on every point and for orthogonality.
    """
    pts = [tuple(gauss(x) for x in p) for p in points]
    ws = [gauss(a) for a in weights]
    if len(pts) != len(ws):
        raise PreconditionError("one weight per point")
    if not pts:
        raise PreconditionError("no points: they cannot span V")
    n = len(pts[0])
    r = rank(pts)
    if r < n:
        raise PreconditionError(f"points span a {r}-dimensional subspace, need {n}")
    m = len(pts)
    gram = [[_dot(pts[i], pts[j]) for j in range(m)] for i in range(m)]
    # pick n independent points; their images determine the map
    chosen = []
    for i in range(m):
        if rank([pts[j] for j in chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
        if len(chosen) == n:
            break
    base = [[pts[j][c] for j in chosen] for c in range(n)]
    base_inv = inverse(base)

    found = []
    sigma = [None] * m
    used = [False] * m

    def rec(i):
        if i == m:
            g = _map_from(sigma, chosen, pts, base_inv, n)
            if g is not None:
                found.append(g)
            return
        for j in range(m):
            if used[j] or ws[j] != ws[i]:
                continue
            if any(gram[sigma[p]][j] != gram[p][i] for p in range(i)) or gram[j][j] != gram[i][i]:
                continue
            sigma[i] = j
            used[j] = True
            rec(i + 1)
            used[j] = False
        sigma[i] = None

    rec(0)
    for g in found:
        if not g.is_orthogonal():
            raise InvariantError("stabilizer element failed the orthogonality check")
    return FiniteOrthogonalGroup(found, check=True)


def _map_from(sigma, chosen, pts, base_inv, n):
    image = [[pts[sigma[j]][c] for j in chosen] for c in range(n)]
    g = [[sum((image[r][t] * base_inv[t][c] for t in range(n)), ZERO) for c in range(n)]
         for r in range(n)]
    for i, p in enumerate(pts):
        gp = [sum((g[r][c] * p[c] for c in range(n)), ZERO) for r in range(n)]
        if tuple(gp) != pts[sigma[i]]:
            return None
    return OrthogonalMap(g, check=False)


# group files ---------------------------------------------------------------

def parse_group(text: str) -> FiniteOrthogonalGroup:
    """Parse ``group n=<n>`` followed by ``matrix`` blocks of ``n`` rows."""
    n = None
    mats = []
    current = None
    start_line = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "group" or len(parts) != 2 or not parts[1].startswith("n="):
                raise ParseError("expected 'group n=<n>' header", lineno)
            try:
                n = int(parts[1][2:])
            except ValueError:
                raise ParseError("n must be an integer", lineno) from None
            continue
        if parts == ["matrix"]:
            if current is not None and len(current) != n:
                raise ParseError(f"matrix started on line {start_line} has {len(current)} rows", lineno)
            current = []
            start_line = lineno
            mats.append(current)
            continue
        if current is None:
            raise ParseError("row outside a 'matrix' block", lineno)
        if len(parts) != n:
            raise ParseError(f"row needs {n} entries", lineno)
        if len(current) == n:
            raise ParseError("too many rows in matrix", lineno)
        current.append([parse_scalar(x, lineno) for x in parts])
    if n is None:
        raise ParseError("empty group file")
    if current is not None and len(current) != n:
        raise ParseError(f"matrix started on line {start_line} is incomplete")
    try:
        return FiniteOrthogonalGroup(mats)
    except PreconditionError as exc:
        raise PreconditionError(f"group file rejected: {exc}") from None


def format_group(group: FiniteOrthogonalGroup) -> str:
    lines = [f"group n={group.n}"]
    for g in group.elements:
        lines.append("matrix")
        for row in g.matrix:
            lines.append(" ".join(format_scalar(x) for x in row))
    return "\n".join(lines) + "\n"
