"""Pointwise integrability residuals of the Penrose-type twistor structure.

For a torsion tensor T and curvature tensor R at a point, and a complex
structure J on the tangent space,

* torsion:      J+ T(J- X, J- Y)
* curvature:    J- R(J+ X, J+ Y) J+
* curvature02:  R(J- X, J- Y)

must vanish for every J in a component of the symplectic twistor fibre.
``kernel_analysis`` computes the joint kernel of these linear conditions over
a seeded sample of J in the index-l component, to compare the components.

Storage: ``t[k, i, j] = T^k_{ij}`` and ``r[i, j] = R(e_i, e_j)`` (a matrix).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.linalg

from .errors import CompatibilityError, DimensionMismatchError, InvalidIndexError
from .linalg import ATOL, RANK_GAP, RANK_RTOL, max_abs, numerical_rank, sample_rng, scale_of
from .symplectic import as_matrix, canonical_structure, j0, projectors, random_sp, sp_inverse

KINDS = ("torsion", "curvature", "curvature02")


@dataclass(frozen=True, eq=False)
class TorsionTensor:
    t: np.ndarray

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        if t.ndim != 3 or len(set(t.shape)) != 1 or t.shape[0] % 2:
            raise DimensionMismatchError(f"torsion must be (2n, 2n, 2n), got {t.shape}")
        if max_abs(t + t.transpose(0, 2, 1)) > ATOL * scale_of(t):
            raise CompatibilityError("torsion is not antisymmetric in its lower indices")
        t.setflags(write=False)
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        return self.t.shape[0] // 2


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    r: np.ndarray

    def __post_init__(self):
        r = np.array(self.r, dtype=float)
        if r.ndim != 4 or len(set(r.shape)) != 1 or r.shape[0] % 2:
            raise DimensionMismatchError(f"curvature must be (2n,)*4, got {r.shape}")
        s = scale_of(r)
        if max_abs(r + r.transpose(1, 0, 2, 3)) > ATOL * s:
            raise CompatibilityError("curvature is not antisymmetric in its form indices")
        w = j0(r.shape[0] // 2)
        wr = np.einsum("pq,ijqs->ijps", w, r)
        if max_abs(wr - wr.transpose(0, 1, 3, 2)) > ATOL * s:
            raise CompatibilityError("curvature values are not in sp(2n, R)")
        r.setflags(write=False)
        object.__setattr__(self, "r", r)

    @property
    def n(self) -> int:
        return self.r.shape[0] // 2


def _t(obj):
    return obj.t if isinstance(obj, TorsionTensor) else np.asarray(obj)


def _r(obj):
    return obj.r if isinstance(obj, CurvatureTensor) else np.asarray(obj)


def _match(tensor, j):
    dim = tensor.shape[-1]
    if j.shape != (dim, dim):
        raise DimensionMismatchError(f"tensor dimension {dim} vs J of shape {j.shape}")


# --- residual tensors (linear in T or R) ------------------------------------

def torsion_residual_tensor(T, J):
    """res[:, a, b] = J+ T(J- e_a, J- e_b)."""
    t, j = _t(T), as_matrix(J)
    _match(t, j)
    plus, minus = projectors(j)
    return np.einsum("pk,...kij,ia,jb->...pab", plus, t, minus, minus, optimize=True)


def curvature_residual_tensor(R, J):
    """res[a, b] = J- R(J+ e_a, J+ e_b) J+."""
    r, j = _r(R), as_matrix(J)
    _match(r, j)
    plus, minus = projectors(j)
    return np.einsum("ia,jb,...ijpq,xp,qy->...abxy", plus, plus, r, minus, plus, optimize=True)


def curvature02_residual_tensor(R, J):
    """res[a, b] = R(J- e_a, J- e_b)."""
    r, j = _r(R), as_matrix(J)
    _match(r, j)
    _, minus = projectors(j)
    return np.einsum("ia,jb,...ijpq->...abpq", minus, minus, r, optimize=True)


def torsion_residual(T, J) -> float:
    """max over basis pairs of the Euclidean norm of J+ T(J- X, J- Y)."""
    res = torsion_residual_tensor(T, J)
    return float(np.max(np.linalg.norm(res, axis=0)))


def curvature_residual(R, J) -> float:
    """max over basis pairs of the Frobenius norm of J- R(J+ X, J+ Y) J+."""
    res = curvature_residual_tensor(R, J)
    return float(np.max(np.linalg.norm(res, axis=(2, 3))))


def curvature_02_residual(R, J) -> float:
    """max over basis pairs of the Frobenius norm of R(J- X, J- Y)."""
    res = curvature02_residual_tensor(R, J)
    return float(np.max(np.linalg.norm(res, axis=(2, 3))))


# --- tensor spaces and group action -----------------------------------------

def sp_algebra_basis(n: int) -> np.ndarray:
    """Basis J0^{-1} Sym of sp(2n, R), shape (n(2n+1), 2n, 2n)."""
    dim = 2 * n
    w_inv = -j0(n)
    out = []
    for p in range(dim):
        for q in range(p, dim):
            s = np.zeros((dim, dim))
            s[p, q] = s[q, p] = 1.0
            out.append(w_inv @ s)
    return np.array(out)


def torsion_basis(n: int) -> np.ndarray:
    dim = 2 * n
    out = []
    for k in range(dim):
        for i, j in combinations(range(dim), 2):
            t = np.zeros((dim, dim, dim))
            t[k, i, j], t[k, j, i] = 1.0, -1.0
            out.append(t)
    return np.array(out)


def curvature_basis(n: int) -> np.ndarray:
    dim = 2 * n
    alg = sp_algebra_basis(n)
    out = []
    for i, j in combinations(range(dim), 2):
        for e in alg:
            r = np.zeros((dim, dim, dim, dim))
            r[i, j], r[j, i] = e, -e
            out.append(r)
    return np.array(out)


def random_torsion(n: int, rng: np.random.Generator) -> TorsionTensor:
    c = rng.uniform(-1, 1, size=len(torsion_basis(n)))
    return TorsionTensor(np.tensordot(c, torsion_basis(n), axes=1))


def random_curvature(n: int, rng: np.random.Generator) -> CurvatureTensor:
    basis = curvature_basis(n)
    c = rng.uniform(-1, 1, size=len(basis))
    return CurvatureTensor(np.tensordot(c, basis, axes=1))


def act_torsion(g, T) -> np.ndarray:
    """(g.T)(X, Y) = g T(g^-1 X, g^-1 Y)."""
    g = np.asarray(g)
    gi = np.linalg.inv(g)
    return np.einsum("pk,kij,ia,jb->pab", g, _t(T), gi, gi)


def act_curvature(g, R) -> np.ndarray:
    """(g.R)(X, Y) = g R(g^-1 X, g^-1 Y) g^-1."""
    g = np.asarray(g)
    gi = np.linalg.inv(g)
    return np.einsum("ia,jb,xp,ijpq,qy->abxy", gi, gi, g, _r(R), gi)


# --- kernel dimension over a component --------------------------------------

_BASES = {"torsion": torsion_basis, "curvature": curvature_basis, "curvature02": curvature_basis}
_RESIDUALS = {
    "torsion": torsion_residual_tensor,
    "curvature": curvature_residual_tensor,
    "curvature02": curvature02_residual_tensor,
}


def derived_seed(seed: int, index: int) -> int:
    return int(sample_rng(seed, index).integers(0, 2**31 - 1))


def sample_structure(n: int, l: int, seed: int, index: int) -> np.ndarray:
    """Sample ``index`` of the index-l component; sample 0 is J0 Q_l itself."""
    base = canonical_structure(n, l)
    if index == 0:
        return base
    g = random_sp(n, derived_seed(seed, index))
    return g @ base @ sp_inverse(g)


@dataclass
class KernelReport:
    kind: str
    n: int
    l: int
    samples: int
    seed: int
    components: int
    rank: int
    singular_values: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.components - self.rank

    def tail(self, k: int = 4) -> list[float]:
        """Singular values around the rank cut (k on each side)."""
        sv = self.singular_values
        lo = max(self.rank - k, 0)
        return [float(v) for v in sv[lo : self.rank + k]]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "l": self.l,
            "samples": self.samples,
            "seed": self.seed,
            "components": self.components,
            "rank": self.rank,
            "kernel_dim": self.dim,
            "singular_value_tail": self.tail(),
        }


def kernel_analysis(kind, n, l, samples, seed, workers: int = 1) -> KernelReport:
    """Joint kernel of a residual operator over ``samples`` structures of index l."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if not 0 <= l <= n:
        raise InvalidIndexError(f"index l={l} outside [0, {n}]")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    basis = _BASES[kind](n)
    resid = _RESIDUALS[kind]
    d = len(basis)

    def block(idx):
        j = sample_structure(n, l, seed, idx)
        m = resid(basis, j).reshape(d, -1).T
        return np.vstack([m.real, m.imag])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(block, range(samples)))
    else:
        blocks = [block(i) for i in range(samples)]

    r = np.zeros((0, d))
    for b in blocks:
        r = scipy.linalg.qr(np.vstack([r, b]), mode="r")[0][: min(d, r.shape[0] + b.shape[0])]
    sv = np.zeros(d)
    got = np.linalg.svd(r, compute_uv=False)
    sv[: got.size] = got
    # unit-scale basis and projectors: an all-roundoff operator has rank 0
    rank = numerical_rank(sv, RANK_RTOL, RANK_GAP, ref=1.0)
    return KernelReport(kind, n, l, samples, seed, d, rank, sv)


def invariant_kernel_dim(kind, n, l, samples, seed, workers: int = 1) -> int:
    return kernel_analysis(kind, n, l, samples, seed, workers).dim
