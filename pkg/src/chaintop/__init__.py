"""Exact chain-level algebra for simplicial and cubical sets.

Core layers: coefficient rings and sparse free modules, chain complexes
with Smith-form homology, simplicial and cubical chain coalgebras with
join products, a graph calculus for bialgebra operations, chain-level
Steenrod machinery, cobar constructions with their cubical models, and
loop space comparisons.
"""

from .rings import GF, QQ, ZZ, Ring, parse_ring
from .freemod import FreeElement, koszul_sign, tensor_elements
from .complexes import ChainComplex, GradedLinearMap, InsufficientTruncationError, tensor_complex
from .smith import HomologySummary, smith_homology, smith_normal_form
from .simplicial import SimplicialSet, normalized_chains, simplicial_model
from .cubical import CubicalSet, cubical_chains
from .cobar import cobar, extended_cobar, h0_group_ring
from .loopspace import (
    cartan_serre,
    cubical_cobar,
    extended_cubical_cobar,
    kan_loop_group,
    phi_certificate,
    zigzag_report,
)

__version__ = "0.1.0"

__all__ = [
    "GF",
    "QQ",
    "ZZ",
    "Ring",
    "parse_ring",
    "FreeElement",
    "koszul_sign",
    "tensor_elements",
    "ChainComplex",
    "GradedLinearMap",
    "InsufficientTruncationError",
    "tensor_complex",
    "HomologySummary",
    "smith_homology",
    "smith_normal_form",
    "SimplicialSet",
    "normalized_chains",
    "simplicial_model",
    "CubicalSet",
    "cubical_chains",
    "cobar",
    "extended_cobar",
    "h0_group_ring",
    "cartan_serre",
    "cubical_cobar",
    "extended_cubical_cobar",
    "kan_loop_group",
    "phi_certificate",
    "zigzag_report",
]
