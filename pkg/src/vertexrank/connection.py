"""Edge connection matrices and their exact ranks.

The rank of ``M(F, H) = f_h(F * H)`` is computed two ways: directly by
elimination on the matrix, and as the Gram rank of the tensors
``p_h(F)``.  The two must agree because ``f_h(F * H)`` is the bilinear
form of ``p_h(F)`` and ``p_h(H)``.

:func:`saturating_rank` grows the fragment list by vertex count and
reports a lower bound on the rank of the infinite matrix.  The bound is
certified exact only when it meets an independently known upper bound.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import InvariantError, PreconditionError
from .fragments import glue, iter_fragments
from .linalg import SpanBasis, rank
from .model import VertexModel, p_h, partition_function
from .scalar import format_scalar
from .tensors import Tensor, gram_rank

__all__ = [
    "ConnectionMatrix",
    "RankReport",
    "build_matrix",
    "rank_direct",
    "rank_via_gram",
    "saturating_rank",
    "format_matrix",
]

log = logging.getLogger(__name__)

CERTIFICATES = ("hit_ambient_bound", "hit_invariant_dim", "none")


@dataclass(frozen=True)
class ConnectionMatrix:
    fragments: tuple
    entries: tuple

    def __len__(self):
        return len(self.fragments)

    def is_symmetric(self) -> bool:
        m = self.entries
        return all(m[a][b] == m[b][a] for a in range(len(m)) for b in range(a))


@dataclass
class RankReport:
    k: int
    rank: int
    certified: bool
    fragments_used: int
    certificate: str = "none"
    distinct_images: int = 0
    max_degree: int | None = None
    classes: list = field(default_factory=list)

    def __post_init__(self):
        if self.certificate not in CERTIFICATES:
            raise ValueError(f"unknown certificate {self.certificate!r}")
        if self.certified and self.certificate == "none":
            raise InvariantError("a certified report needs a certificate")

    def line(self) -> str:
        return (f"rank={self.rank} certified={str(self.certified).lower()} "
                f"certificate={self.certificate} fragments={self.fragments_used}")


def _uniform_k(fs):
    fs = list(fs)
    if fs and len({f.k for f in fs}) != 1:
        raise PreconditionError("all fragments must have the same number of open ends")
    return fs


def build_matrix(h: VertexModel, fs) -> ConnectionMatrix:
    """Entry ``(a, b)`` is the partition function of ``fs[a] * fs[b]``."""
    fs = _uniform_k(fs)
    m = len(fs)
    rows = [[None] * m for _ in range(m)]
    for a in range(m):
        for b in range(a, m):
            rows[a][b] = rows[b][a] = partition_function(h, glue(fs[a], fs[b]))
    return ConnectionMatrix(tuple(fs), tuple(tuple(r) for r in rows))


def rank_direct(m) -> int:
    entries = m.entries if isinstance(m, ConnectionMatrix) else m
    return rank(entries)


def rank_via_gram(h: VertexModel, fs) -> int:
    fs = _uniform_k(fs)
    return gram_rank([p_h(h, f) for f in fs])


def saturating_rank(h: VertexModel, k: int, vertex_budget: int, target=None,
                    max_degree=None, patience=2) -> RankReport:
    """Lower bound on the connection-matrix rank from growing fragment lists.

    Size classes are fragments with exactly 0, 1, ..., ``vertex_budget``
    vertices (degrees at most ``max_degree``, defaulting to the model's
    degree bound).  After each class the Gram rank of all distinct
    images so far is updated.  The search stops when the rank reaches
    ``target`` or ``n**k`` (certified), after ``patience`` consecutive
    classes without growth, or when the budget runs out.

    A rank above ``target`` contradicts the claimed upper bound and
    raises :class:`InvariantError`.
    """
    if max_degree is None:
        max_degree = h.degree_bound
    if max_degree is None:
        raise PreconditionError("no degree bound: pass max_degree for spin models")
    if h.spin is None and max_degree > h.degree_bound:
        raise PreconditionError(
            f"max_degree {max_degree} exceeds the model's degree bound {h.degree_bound}")
    ambient = h.n ** k
    basis = SpanBasis()
    seen = set()
    used = 0
    current = 0
    stale = 0
    classes = []

    def report(certificate):
        return RankReport(k, current, certificate != "none", used, certificate,
                          len(seen), max_degree, classes)

    def verdict():
        if target is not None and current > target:
            raise InvariantError(
                f"rank lower bound {current} exceeds the claimed upper bound {target}")
        if target is not None and current == target:
            return "hit_invariant_dim"
        if current == ambient:
            return "hit_ambient_bound"
        return None

    for v in range(vertex_budget + 1):
        batch = iter_fragments(k, v, max_degree)
        grew_span = False
        for f in batch:
            used += 1
            t = p_h(h, f)
            if t.is_zero() or t in seen:
                continue
            seen.add(t)
            if basis.add(t.entries):
                grew_span = True
        if grew_span:
            tensors = [Tensor(h.n, k, vec) for vec in basis.vectors]
            new_rank = gram_rank(tensors)
        else:
            new_rank = current
        classes.append((v, len(batch), new_rank))
        log.debug("k=%d vertices=%d fragments=%d rank=%d", k, v, len(batch), new_rank)
        stale = 0 if new_rank > current else stale + 1
        current = new_rank
        cert = verdict()
        if cert:
            return report(cert)
        if patience is not None and stale >= patience and v >= 1:
            break
    cert = verdict()
    return report(cert or "none")


def format_matrix(m: ConnectionMatrix) -> str:
    return "".join("\t".join(format_scalar(x) for x in row) + "\n" for row in m.entries)
