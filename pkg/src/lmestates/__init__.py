"""Existence, dimension, construction and verification of locally maximally
entangled (LME) multipartite pure states."""
from .classify import ClassifyResult, classify, d_star, dim_by_trichotomy
from .dimvec import DimVec, capital_r, count_rationals, expected_dim, g_max, parse_dims
from .errors import DomainError, ResourceError
from .tensor import (
    DensityMatrix,
    StateTensor,
    is_lme,
    is_m_uniform,
    moment_map_square,
    read_state,
    reduced_density,
    tensor_product,
    write_state,
)

__version__ = "0.1.0"

__all__ = [
    "ClassifyResult",
    "DensityMatrix",
    "DimVec",
    "DomainError",
    "ResourceError",
    "StateTensor",
    "capital_r",
    "classify",
    "count_rationals",
    "d_star",
    "dim_by_trichotomy",
    "expected_dim",
    "g_max",
    "is_lme",
    "is_m_uniform",
    "moment_map_square",
    "parse_dims",
    "read_state",
    "reduced_density",
    "tensor_product",
    "write_state",
]
