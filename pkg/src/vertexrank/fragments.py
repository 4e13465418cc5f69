"""Multigraphs, k-fragments, gluing, products and fragment contraction.

A :class:`Fragment` has ``n_vertices`` ordinary vertices ``0..V-1``,
``k`` open ends labeled ``1..k``, a number of circles, and a multiset of
edges.  Edge endpoints are ints: a vertex is ``v >= 0`` and the open end
labeled ``l`` is ``-l``.  Keeping open ends out of the vertex range makes
"vertices, not including open ends" a structural fact.  An edge
``(-l, v)`` is the half edge at label ``l``; an edge ``(-j, -i)`` joins
two open ends directly.

Edges are stored canonically (each pair sorted, the list sorted), so
two fragments compare equal iff they have the same labeled structure.
No isomorphism testing is attempted.

A :class:`Graph` is simply a fragment with ``k = 0``.
"""

from __future__ import annotations

import itertools
from collections import Counter

from .errors import ParseError, PreconditionError

__all__ = [
    "Fragment",
    "Graph",
    "glue",
    "product",
    "contract_fragment",
    "enumerate_fragments",
    "iter_fragments",
    "random_fragment",
    "basic_fragment",
    "open_edge",
    "circle",
    "complete_graph",
    "parse_fragment",
    "format_fragment",
]


def _canon_edges(edges):
    out = []
    for a, b in edges:
        out.append((a, b) if a <= b else (b, a))
    out.sort()
    return tuple(out)


class Fragment:
    """A k-fragment.  Immutable; compares and hashes structurally."""

    __slots__ = ("k", "n_vertices", "edges", "circles", "_hash")

    def __init__(self, k: int = 0, n_vertices: int = 0, edges=(), circles: int = 0):
        if k < 0 or n_vertices < 0 or circles < 0:
            raise PreconditionError("k, n_vertices and circles must be nonnegative")
        edges = _canon_edges(edges)
        seen = Counter()
        for a, b in edges:
            for end in (a, b):
                if end >= 0:
                    if end >= n_vertices:
                        raise PreconditionError(f"edge endpoint {end} is not a vertex")
                else:
                    seen[-end] += 1
            if a == b and a < 0:
                raise PreconditionError("an open end cannot carry a loop")
        if set(seen) != set(range(1, k + 1)) or any(c != 1 for c in seen.values()):
            raise PreconditionError(
                f"open ends must be labeled exactly 1..{k}, each of degree one")
        self.k = k
        self.n_vertices = n_vertices
        self.edges = edges
        self.circles = circles
        self._hash = None

    @classmethod
    def _trusted(cls, k, n_vertices, edges, circles):
        f = object.__new__(cls)
        f.k, f.n_vertices, f.edges, f.circles, f._hash = (
            k, n_vertices, _canon_edges(edges), circles, None)
        return f

    # structure -------------------------------------------------------

    @property
    def vertices(self):
        return range(self.n_vertices)

    @property
    def core(self) -> Graph:
        """The part of the fragment without open ends and their edges."""
        return Graph(self.n_vertices, [e for e in self.edges if e[0] >= 0], self.circles)

    @property
    def half_edges(self):
        """``{label: vertex}`` for half edges ending in a vertex."""
        return {-a: b for a, b in self.edges if a < 0 <= b}

    @property
    def open_pairs(self):
        """Label pairs ``(i, j)``, ``i < j``, joined by a single edge."""
        return sorted((-b, -a) for a, b in self.edges if b < 0)

    def degree(self, v: int) -> int:
        d = 0
        for a, b in self.edges:
            d += (a == v) + (b == v)
        return d

    def degrees(self):
        deg = [0] * self.n_vertices
        for a, b in self.edges:
            if a >= 0:
                deg[a] += 1
            if b >= 0:
                deg[b] += 1
        return deg

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def with_circles(self, extra: int) -> Fragment:
        return type(self)._trusted(self.k, self.n_vertices, self.edges, self.circles + extra)

    def as_graph(self) -> Graph:
        if self.k != 0:
            raise PreconditionError("only 0-fragments are graphs")
        return Graph(self.n_vertices, self.edges, self.circles)

    def components(self):
        """Connected pieces as ``(fragment, original_labels)`` pairs.

        Each piece is relabeled ``1..k_c`` in increasing order of its
        original labels; circles are reported as separate one-circle
        graphs.  Isolated vertices are their own pieces.
        """
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        nodes = list(range(self.n_vertices)) + [-l for l in range(1, self.k + 1)]
        for x in nodes:
            parent[x] = x
        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        groups = {}
        for x in nodes:
            groups.setdefault(find(x), []).append(x)
        edge_groups = {}
        for e in self.edges:
            edge_groups.setdefault(find(e[0]), []).append(e)
        pieces = []
        for root, members in groups.items():
            verts = sorted(x for x in members if x >= 0)
            labels = sorted(-x for x in members if x < 0)
            vmap = {v: i for i, v in enumerate(verts)}
            for new, old in enumerate(labels, 1):
                vmap[-old] = -new
            es = [(vmap[a], vmap[b]) for a, b in edge_groups.get(root, ())]
            pieces.append((Fragment._trusted(len(labels), len(verts), es, 0), labels))
        pieces.sort(key=lambda p: (p[1], p[0]._key()))
        for _ in range(self.circles):
            pieces.append((Fragment._trusted(0, 0, (), 1), []))
        return pieces

    # identity --------------------------------------------------------

    def _key(self):
        return (self.k, self.n_vertices, self.edges, self.circles)

    def sort_key(self):
        """Deterministic enumeration order: vertices, edges, encoding."""
        return (self.n_vertices, len(self.edges), self.edges, self.circles)

    def __eq__(self, other):
        if not isinstance(other, Fragment):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        name = "Graph" if self.k == 0 else f"Fragment(k={self.k})"
        return f"<{name} V={self.n_vertices} E={list(self.edges)} circles={self.circles}>"


class Graph(Fragment):
    """A multigraph with loops and circles: a fragment without open ends."""

    __slots__ = ()

    def __init__(self, n_vertices: int = 0, edges=(), circles: int = 0):
        super().__init__(0, n_vertices, edges, circles)


# named fragments -----------------------------------------------------------

def basic_fragment(k: int) -> Fragment:
    """One vertex with ``k`` half edges labeled 1..k."""
    return Fragment(k, 1, [(-l, 0) for l in range(1, k + 1)])


def open_edge() -> Fragment:
    """The 2-fragment consisting of one edge between open ends 1 and 2."""
    return Fragment(2, 0, [(-2, -1)])


def circle(count: int = 1) -> Graph:
    return Graph(0, (), count)


def complete_graph(m: int) -> Graph:
    return Graph(m, list(itertools.combinations(range(m), 2)))


# operations ----------------------------------------------------------------

def _fuse(edges, i, j):
    """Join the half edges at open ends ``i`` and ``j``.

    Returns the new edge list and the number of circles created (0 or 1).
    """
    ei = ej = None
    for idx, (a, b) in enumerate(edges):
        if a == -i or b == -i:
            ei = idx
        if a == -j or b == -j:
            ej = idx
    if ei == ej:
        return [e for idx, e in enumerate(edges) if idx != ei], 1
    a, b = edges[ei]
    x = b if a == -i else a
    a, b = edges[ej]
    y = b if a == -j else a
    rest = [e for idx, e in enumerate(edges) if idx not in (ei, ej)]
    rest.append((x, y))
    return rest, 0


def product(f: Fragment, h: Fragment) -> Fragment:
    """Disjoint union; the labels of ``h`` are shifted up by ``f.k``."""
    shift_v, shift_l = f.n_vertices, f.k
    es = list(f.edges)
    for a, b in h.edges:
        es.append((a + shift_v if a >= 0 else a - shift_l,
                   b + shift_v if b >= 0 else b - shift_l))
    return Fragment._trusted(f.k + h.k, f.n_vertices + h.n_vertices, es, f.circles + h.circles)


def glue(f: Fragment, h: Fragment) -> Graph:
    """Fuse equally labeled half edges of two k-fragments into edges."""
    if f.k != h.k:
        raise PreconditionError(f"cannot glue a {f.k}-fragment to a {h.k}-fragment")
    joined = product(f, h)
    edges = list(joined.edges)
    circles = joined.circles
    for label in range(1, f.k + 1):
        edges, c = _fuse(edges, label, f.k + label)
        circles += c
    return Graph(joined.n_vertices, edges, circles)


def contract_fragment(f: Fragment, i: int, j: int) -> Fragment:
    """Join the half edges at open ends ``i < j`` and relabel the rest in order."""
    if not 1 <= i < j <= f.k:
        raise PreconditionError(f"need 1 <= i < j <= {f.k}, got ({i}, {j})")
    edges, c = _fuse(list(f.edges), i, j)
    remap = {}
    new = 1
    for label in range(1, f.k + 1):
        if label not in (i, j):
            remap[-label] = -new
            new += 1
    edges = [(remap.get(a, a), remap.get(b, b)) for a, b in edges]
    return Fragment._trusted(f.k - 2, f.n_vertices, edges, f.circles + c)


# enumeration ---------------------------------------------------------------

def _label_attachments(k, n_vertices, budget):
    """Yield edge lists attaching every open end, plus the leftover budget."""
    edges = []

    def rec(label, used):
        if label > k:
            yield list(edges), list(budget)
            return
        if label in used:
            yield from rec(label + 1, used)
            return
        for v in range(n_vertices):
            if budget[v] >= 1:
                budget[v] -= 1
                edges.append((-label, v))
                yield from rec(label + 1, used)
                edges.pop()
                budget[v] += 1
        for other in range(label + 1, k + 1):
            if other not in used:
                used.add(other)
                edges.append((-other, -label))
                yield from rec(label + 1, used)
                edges.pop()
                used.discard(other)

    yield from rec(1, set())


def _core_multisets(n_vertices, budget, max_edges):
    """Yield multisets of vertex-vertex edges (loops allowed) within budget."""
    pairs = [(a, b) for a in range(n_vertices) for b in range(a, n_vertices)]
    chosen = []

    def rec(idx, remaining):
        if idx == len(pairs):
            yield list(chosen)
            return
        a, b = pairs[idx]
        limit = budget[a] // 2 if a == b else min(budget[a], budget[b])
        if remaining is not None:
            limit = min(limit, remaining)
        for mult in range(limit + 1):
            budget[a] -= mult
            budget[b] -= mult
            chosen.extend([(a, b)] * mult)
            yield from rec(idx + 1, None if remaining is None else remaining - mult)
            if mult:
                del chosen[-mult:]
            budget[a] += mult
            budget[b] += mult

    yield from rec(0, max_edges)


def iter_fragments(k: int, n_vertices: int, max_degree: int, max_edges=None):
    """All circle-free k-fragments with exactly ``n_vertices`` vertices.

    Every vertex has degree at most ``max_degree``; open ends may be
    joined to each other.  Output is sorted by (edge count, encoding).
    Isomorphic duplicates are included.
    """
    out = []
    for attach, left in _label_attachments(k, n_vertices, [max_degree] * n_vertices):
        core_cap = None if max_edges is None else max_edges - len(attach)
        if core_cap is not None and core_cap < 0:
            continue
        for core in _core_multisets(n_vertices, left, core_cap):
            out.append(Fragment._trusted(k, n_vertices, attach + core, 0))
    out.sort(key=Fragment.sort_key)
    return out


def enumerate_fragments(k: int, max_vertices: int, max_degree: int, max_edges=None):
    """All fragments with at most ``max_vertices`` vertices, in enumeration order."""
    out = []
    for v in range(max_vertices + 1):
        out.extend(iter_fragments(k, v, max_degree, max_edges))
    return out


def random_fragment(rng, k: int, max_vertices: int, max_degree: int,
                    extra_edges: int = 3) -> Fragment:
    """A random circle-free fragment within the given bounds.

    ``rng`` is a :class:`random.Random`.  Open ends attach to random
    vertices with spare degree or pair up with each other; then up to
    ``extra_edges`` random core edges are added where degree allows.
    """
    if max_degree < 1:
        raise PreconditionError("random fragments need max_degree >= 1")
    n_vertices = rng.randint(0, max_vertices)
    budget = [max_degree] * n_vertices
    labels = list(range(1, k + 1))
    rng.shuffle(labels)
    edges = []
    pending = []
    for label in labels:
        free = [v for v in range(n_vertices) if budget[v] >= 1]
        if free and rng.random() < 0.75:
            v = rng.choice(free)
            budget[v] -= 1
            edges.append((-label, v))
        else:
            pending.append(label)
    while len(pending) >= 2:
        a, b = pending.pop(), pending.pop()
        edges.append((-a, -b))
    if pending:
        label = pending.pop()
        free = [v for v in range(n_vertices) if budget[v] >= 1]
        if free:
            v = rng.choice(free)
            budget[v] -= 1
            edges.append((-label, v))
        else:
            # no room anywhere: give the lonely open end a fresh vertex
            edges.append((-label, n_vertices))
            budget.append(max_degree - 1)
            n_vertices += 1
    for _ in range(rng.randint(0, extra_edges)):
        if not n_vertices:
            break
        a, b = rng.randrange(n_vertices), rng.randrange(n_vertices)
        need = 2 if a == b else 1
        if budget[a] >= need and budget[b] >= (need if a == b else 1):
            edges.append((a, b))
            if a == b:
                budget[a] -= 2
            else:
                budget[a] -= 1
                budget[b] -= 1
    return Fragment(k, n_vertices, edges)


# text format ---------------------------------------------------------------

def format_fragment(f: Fragment) -> str:
    lines = ["graph" if f.k == 0 else f"fragment k={f.k}"]
    for v in range(f.n_vertices):
        lines.append(f"vertex v{v}")
    for a, b in f.edges:
        if a >= 0:
            lines.append(f"loop v{a}" if a == b else f"edge v{a} v{b}")
    lines.extend("circle" for _ in range(f.circles))
    for a, b in f.edges:
        if a < 0 <= b:
            lines.append(f"open {-a} v{b}")
        elif b < 0:
            lines.append(f"openpair {-b} {-a}")
    return "\n".join(lines) + "\n"


def parse_fragment(text: str) -> Fragment:
    """Parse the line-oriented fragment/graph format.

    Vertex names are mapped to indices in order of declaration.
    """
    k = None
    names = {}
    edges = []
    circles = 0
    labels_seen = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        word = parts[0]
        if k is None:
            if word == "graph" and len(parts) == 1:
                k = 0
            elif word == "fragment" and len(parts) == 2 and parts[1].startswith("k="):
                try:
                    k = int(parts[1][2:])
                except ValueError:
                    raise ParseError(f"bad label count {parts[1]!r}", lineno) from None
                if k < 0:
                    raise ParseError("k must be nonnegative", lineno)
            else:
                raise ParseError("expected 'graph' or 'fragment k=<k>' header", lineno)
            continue

        def vertex(name):
            if name not in names:
                raise ParseError(f"undeclared vertex {name!r}", lineno)
            return names[name]

        def label(tok):
            try:
                lab = int(tok)
            except ValueError:
                raise ParseError(f"bad open-end label {tok!r}", lineno) from None
            if not 1 <= lab <= k:
                raise ParseError(f"label {lab} outside 1..{k}", lineno)
            if lab in labels_seen:
                raise ParseError(
                    f"label {lab} already used on line {labels_seen[lab]}", lineno)
            labels_seen[lab] = lineno
            return lab

        if word == "vertex" and len(parts) == 2:
            if parts[1] in names:
                raise ParseError(f"vertex {parts[1]!r} declared twice", lineno)
            names[parts[1]] = len(names)
        elif word == "edge" and len(parts) == 3:
            edges.append((vertex(parts[1]), vertex(parts[2])))
        elif word == "loop" and len(parts) == 2:
            v = vertex(parts[1])
            edges.append((v, v))
        elif word == "circle" and len(parts) == 1:
            circles += 1
        elif word == "open" and len(parts) == 3:
            edges.append((-label(parts[1]), vertex(parts[2])))
        elif word == "openpair" and len(parts) == 3:
            a, b = label(parts[1]), label(parts[2])
            edges.append((-a, -b))
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)
    if k is None:
        raise ParseError("empty fragment file")
    missing = sorted(set(range(1, k + 1)) - set(labels_seen))
    if missing:
        raise ParseError(f"open-end labels never attached: {missing}")
    frag = Fragment(k, len(names), edges, circles)
    return frag.as_graph() if k == 0 else frag
