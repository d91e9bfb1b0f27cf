"""Skin detection and shape descriptors for image classification."""

from ._skinshape import (
    FEATURE_DIMENSION,
    DegenerateBoundary,
    DegenerateContour,
    DegenerateLabels,
    DimensionMismatch,
    Error,
    FusionParams,
    ImageError,
    Model,
    dilate,
    disk_radius,
    erode,
    evaluate,
    feature_names,
    fourier_descriptors,
    fuse,
    grid_search_mu,
    morph_close,
    morph_open,
    normalize_descriptors,
    reconstruct_boundary,
    write_synthetic_corpus,
)

__all__ = [name for name in dir() if not name.startswith("_")]
