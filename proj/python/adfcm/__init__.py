"""Fuzzy C-Means clustering with certainty-based ambiguity detection."""

from ._adfcm import (
    AdfcmError,
    center_error,
    certainty_factors,
    classify,
    fcm,
    load_csv,
    make_blobs,
    p_matrix,
    privacy_experiment,
    select_features,
    sweep,
)

__all__ = [
    "AdfcmError",
    "center_error",
    "certainty_factors",
    "classify",
    "fcm",
    "load_csv",
    "make_blobs",
    "p_matrix",
    "privacy_experiment",
    "select_features",
    "sweep",
]

__version__ = "0.1.0"
