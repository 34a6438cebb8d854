"""Exact computation of the det^S2 multilinear map and its applications."""
from .core import EdgeTensor, build_Ed, column_index, edge_at, edges
from .field import FieldSpec, Q, Scalar
from .geometry import PointConfig, assert_vanishing, geometric_witness, points_to_differences
from .linalg import det_exact, det_s2, det_s2_invariance_check, kernel_basis, multilinearity_check
from .partitions import (
    Partition,
    is_cycle_free,
    is_homogeneous,
    partition_to_tensor,
    tensor_to_partition,
    triple_flip,
)
from .system import build_A, build_At, build_Mk

__version__ = "0.1.0"
