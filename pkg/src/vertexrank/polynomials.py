"""Sparse polynomials in n variables, keyed by exponent tuples.

Only what the model transformations need: listing monomials up to a
degree and expanding a monomial under a linear change of variables.
"""

from __future__ import annotations

from .scalar import ONE, ZERO, gauss


def compositions(n: int, d: int):
    """Exponent vectors of length ``n`` and total degree ``d``, lex-descending."""
    if n == 0:
        if d == 0:
            yield ()
        return
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in compositions(n - 1, d - first):
            yield (first,) + rest


def monomials(n: int, max_degree: int):
    """All exponent vectors with total degree at most ``max_degree``."""
    out = []
    for d in range(max_degree + 1):
        out.extend(compositions(n, d))
    return out


def poly_mul(p, q):
    out = {}
    for a, x in p.items():
        for b, y in q.items():
            key = tuple(i + j for i, j in zip(a, b))
            s = out.get(key, ZERO) + x * y
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


class LinearSubstitution:
    """Expand ``prod_c (sum_j A[c][j] z_j) ** alpha_c`` for a fixed matrix ``A``.

    Powers of each linear form are cached, so expanding every monomial up
    to some degree costs one product per monomial.
    """

    def __init__(self, matrix):
        self.matrix = [[gauss(x) for x in row] for row in matrix]
        self.n = len(self.matrix)
        self._powers = [[{(0,) * self.n: ONE}] for _ in range(self.n)]
        self._cache = {}

    def _power(self, c, e):
        pw = self._powers[c]
        if len(pw) == 1:
            form = {}
            for j, x in enumerate(self.matrix[c]):
                if x:
                    form[tuple(1 if i == j else 0 for i in range(self.n))] = x
            pw.append(form)
        while len(pw) <= e:
            pw.append(poly_mul(pw[-1], pw[1]))
        return pw[e]

    def expand(self, alpha):
        alpha = tuple(alpha)
        hit = self._cache.get(alpha)
        if hit is not None:
            return hit
        result = {(0,) * self.n: ONE}
        for c, e in enumerate(alpha):
            if e:
                result = poly_mul(result, self._power(c, e))
        self._cache[alpha] = result
        return result
