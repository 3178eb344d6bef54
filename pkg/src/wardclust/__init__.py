"""Ward1 (``ward.D``) and Ward2 (``ward.D2``) hierarchical clustering.

Both variants run through one Lance-Williams engine. ``ward.D`` expects
squared Euclidean input and reports squared-scale heights; ``ward.D2``
takes plain distances and reports distance-scale heights. Square-rooting
the ``ward.D`` heights gives the ``ward.D2`` dendrogram.
"""
from .core import (DataMatrix, Dendrogram, DissimilarityMatrix, HeightScale, LinkageMethod, MergeStep,
                   Partition, Scale, ScaleError, ValidationError, condensed_index, validate)
from .engine import agglomerate, agglomerate_naive, agglomerate_nnchain, detect_inversions, transform_heights
from .kernels import DEFAULT_BACKEND as BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "DataMatrix", "Dendrogram", "DissimilarityMatrix", "HeightScale", "LinkageMethod",
    "MergeStep", "Partition", "Scale", "ScaleError", "ValidationError", "agglomerate",
    "agglomerate_naive", "agglomerate_nnchain", "condensed_index", "detect_inversions",
    "transform_heights", "validate",
]
