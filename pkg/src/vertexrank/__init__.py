"""Exact partition functions of vertex models and edge-connection ranks.

Scalars live in Q(i) and every computation is exact.
"""

from .errors import InvariantError, NotASquareError, ParseError, PreconditionError, VertexRankError
from .scalar import GaussRational, Rational, gauss
from .fragments import Fragment, Graph, contract_fragment, enumerate_fragments, glue
from .tensors import OrthogonalMap, Tensor, bilinear_form, contract
from .model import VertexModel, p_h, partition_function, partition_polynomial
from .connection import rank_direct, rank_via_gram, saturating_rank
from .invariants import brauer_invariant_dim, invariant_dim_finite, spin_stabilizer
from .spin import (NO_LIMIT, OneParamSubgroup, apply_limit, degenerate_witness,
                   normalize_spin, orbit_closed, verify_one_param)

__version__ = "0.1.0"

__all__ = [
    "VertexRankError", "ParseError", "PreconditionError", "InvariantError", "NotASquareError",
    "GaussRational", "Rational", "gauss",
    "Fragment", "Graph", "glue", "contract_fragment", "enumerate_fragments",
    "Tensor", "OrthogonalMap", "bilinear_form", "contract",
    "VertexModel", "p_h", "partition_function", "partition_polynomial",
    "rank_direct", "rank_via_gram", "saturating_rank",
    "brauer_invariant_dim", "invariant_dim_finite", "spin_stabilizer",
    "OneParamSubgroup", "NO_LIMIT", "apply_limit", "degenerate_witness",
    "normalize_spin", "orbit_closed", "verify_one_param",
]
