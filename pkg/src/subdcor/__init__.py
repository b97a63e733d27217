"""Causal direction inference for discrete and categorical variable pairs.

The main entry point is :func:`infer_direction`, which compares how
dependent the subsampled cause and mechanism estimates look in each
direction.  :func:`dc_infer` is the one-sample-per-category baseline.
"""

__version__ = "0.1.0"

from .dc_baseline import dc_infer, dc_score, support_bias_curve
from .dcor import DCorResult, distance_correlation, distance_covariance, double_center, pairwise_distances
from .decision import Decision, relative_gap
from .empirical import Direction, DiscreteDataset, JointTable, encode, encode_columns, joint_counts
from .subsampling import DirectionReport, SubsampleConfig, direction_score, infer_direction, select_p

__all__ = [
    "DCorResult",
    "Decision",
    "Direction",
    "DirectionReport",
    "DiscreteDataset",
    "JointTable",
    "SubsampleConfig",
    "dc_infer",
    "dc_score",
    "direction_score",
    "distance_correlation",
    "distance_covariance",
    "double_center",
    "encode",
    "encode_columns",
    "infer_direction",
    "joint_counts",
    "pairwise_distances",
    "relative_gap",
    "select_p",
    "support_bias_curve",
]
