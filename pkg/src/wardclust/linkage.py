"""Lance-Williams coefficients and dissimilarity updates."""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .core import DissimilarityMatrix, LinkageMethod, Scale

ROOT_CLAMP = 1e-12


class LWCoefficients(NamedTuple):
    a_i: float
    a_j: float
    b: float
    c: float


def lw_coefficients(method, w_i: float, w_j: float, w_k: float) -> LWCoefficients:
    method = LinkageMethod.parse(method)
    if not (w_i > 0 and w_j > 0 and w_k > 0):
        raise ValueError(f"masses must be positive, got ({w_i}, {w_j}, {w_k})")
    if method.is_ward:
        s = w_i + w_j + w_k
        return LWCoefficients((w_i + w_k) / s, (w_j + w_k) / s, -w_k / s, 0.0)
    if method is LinkageMethod.SINGLE:
        return LWCoefficients(0.5, 0.5, 0.0, -0.5)
    if method is LinkageMethod.COMPLETE:
        return LWCoefficients(0.5, 0.5, 0.0, 0.5)
    if method is LinkageMethod.AVERAGE:
        s = w_i + w_j
        return LWCoefficients(w_i / s, w_j / s, 0.0, 0.0)
    if method is LinkageMethod.CENTROID:
        s = w_i + w_j
        return LWCoefficients(w_i / s, w_j / s, -w_i * w_j / (s * s), 0.0)
    return LWCoefficients(0.5, 0.5, -0.25, 0.0)


def lw_update(d_ik: float, d_jk: float, d_ij: float, coeffs: LWCoefficients) -> float:
    a_i, a_j, b, c = coeffs
    return a_i * d_ik + a_j * d_jk + b * d_ij + c * abs(d_ik - d_jk)


def ward_d_update(d_ik, d_jk, d_ij, w_i, w_j, w_k) -> float:
    """Ward1 update on the squared-distance scale."""
    return ((w_i + w_k) * d_ik + (w_j + w_k) * d_jk - w_k * d_ij) / (w_i + w_j + w_k)


def clamp_root(value: float, scale: float) -> float:
    """Square root with a small-negative clamp.

    Values in ``(-ROOT_CLAMP * scale, 0)`` are rounding noise and map to 0;
    anything below that means the input was not Euclidean.
    """
    if value < 0.0:
        if value < -ROOT_CLAMP * max(scale, 1.0):
            raise ValueError(f"negative value {value!r} under the ward.D2 root: input is not Euclidean")
        return 0.0
    return math.sqrt(value)


def ward_d2_update(d_ik, d_jk, d_ij, w_i, w_j, w_k) -> float:
    """Ward2 update: square, combine with Ward weights, take the root."""
    sq = ward_d_update(d_ik * d_ik, d_jk * d_jk, d_ij * d_ij, w_i, w_j, w_k)
    return clamp_root(sq, max(d_ik, d_jk, d_ij) ** 2)


def update(method, d_ik, d_jk, d_ij, w_i, w_j, w_k) -> float:
    """Dissimilarity from the merged cluster ``i+j`` to ``k``."""
    method = LinkageMethod.parse(method)
    if method is LinkageMethod.WARD_D:
        return ward_d_update(d_ik, d_jk, d_ij, w_i, w_j, w_k)
    if method is LinkageMethod.WARD_D2:
        return ward_d2_update(d_ik, d_jk, d_ij, w_i, w_j, w_k)
    return lw_update(d_ik, d_jk, d_ij, lw_coefficients(method, w_i, w_j, w_k))


def ward_weighted_input(dissim_sq, masses):
    """Scale squared distances so weighted Ward starts from the right singleton costs.

    The recurrence applies masses only when updating; the starting value for
    two weighted points must already be ``2*w_i*w_j/(w_i+w_j) * d2(i, j)``.
    With unit masses this is the identity.
    """
    if dissim_sq.scale is not Scale.SQUARED:
        raise ValueError("expected squared dissimilarities")
    w = np.asarray(masses, dtype=float)
    iu, ju = np.triu_indices(dissim_sq.n, k=1)
    factor = 2.0 * w[iu] * w[ju] / (w[iu] + w[ju])
    return DissimilarityMatrix(dissim_sq.n, dissim_sq.entries * factor, Scale.SQUARED, dissim_sq.labels)
