"""Small numerical helpers shared by the geometry modules."""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import IndeterminateSignatureError, RankDecisionError

# absolute tolerance for algebraic identities on unit-scale inputs
ATOL = 1e-9
# eigenvalues with |lambda| <= SIGNATURE_BAND * ||S|| are undecidable
SIGNATURE_BAND = 1e-7
# relative singular-value threshold and the gap demanded around it
RANK_RTOL = 1e-8
RANK_GAP = 1e3


def max_abs(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def scale_of(*mats) -> float:
    """Entry scale used to turn absolute tolerances into relative ones."""
    return max([1.0] + [max_abs(m) for m in mats])


def expm(a):
    """Matrix exponential (Pade scaling and squaring)."""
    return scipy.linalg.expm(np.asarray(a))


def sample_rng(seed: int, index: int | None = None) -> np.random.Generator:
    """Generator for sample ``index`` of a seeded sweep.

    Each sample draws from its own stream, so a sweep gives the same values
    whatever order (or thread) evaluates the samples in.
    """
    if index is None:
        return np.random.default_rng(seed)
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def signature(sym, band: float = SIGNATURE_BAND) -> tuple[int, int]:
    """(positive, negative) eigenvalue counts of a symmetric/Hermitian matrix."""
    sym = np.asarray(sym)
    ev = np.linalg.eigvalsh(sym)
    norm = max(float(np.max(np.abs(ev))), np.finfo(float).tiny)
    if np.any(np.abs(ev) <= band * norm):
        raise IndeterminateSignatureError(
            f"eigenvalue within {band:g}*||S|| of zero: {ev}", eigenvalues=ev
        )
    return int(np.sum(ev > 0)), int(np.sum(ev < 0))


def numerical_rank(sv, rtol: float = RANK_RTOL, gap: float = RANK_GAP, ref: float = 0.0) -> int:
    """Rank from a descending list of singular values.

    Values above ``rtol * max(sv[0], ref)`` count. The smallest retained value must
    exceed the largest discarded one by ``gap``; otherwise the decision is
    ambiguous and RankDecisionError carries the spectrum.
    """
    sv = np.asarray(sv, dtype=float)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    keep = sv > rtol * max(sv[0], ref)
    rank = int(np.sum(keep))
    if 0 < rank < sv.size:
        lo = sv[rank - 1]
        hi = sv[rank]
        if hi > 0 and lo / hi < gap:
            raise RankDecisionError(
                f"no spectral gap at rank {rank}: {lo:.3e} vs {hi:.3e}",
                singular_values=sv,
            )
    return rank


def matrix_rank(a, rtol: float = RANK_RTOL, gap: float = RANK_GAP) -> int:
    return numerical_rank(np.linalg.svd(np.asarray(a), compute_uv=False), rtol, gap)
