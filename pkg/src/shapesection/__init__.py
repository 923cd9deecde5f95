"""Canonical parameterizations of closed plane curves and section-based shape distances."""

from .geometry import (
    EllipseFrame,
    area_centroid,
    as_contour,
    best_fit_ellipse,
    contour_centroid,
    discrete_curvature,
    is_simple,
    length,
    signed_area,
    winding_number,
)
from .learn import (
    GridResult,
    GridSpec,
    SplitSpec,
    accuracy,
    grid_search,
    knn_classify,
    logistic_train,
    split_dataset,
)
from .metric import LabeledDataset, class_centroid, distance_matrix, dunn_index, l2_distance
from .normalize import NormalizationPlan, SELECTED_PLAN, apply_plan
from .reparam import (
    ParamFamily,
    angle_function,
    arclength_resample,
    clock_keypoints,
    clock_resample,
    cumulative_weight,
    curvature_clock_resample,
    curvature_weighted_resample,
    reference_point,
)

__version__ = "0.1.0"
