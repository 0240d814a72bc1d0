"""Complex n-planes in C^{2n}, real-Lagrangians and the parabolic subgroup.

A compatible J corresponds to its -i eigenspace V'' (an omega-isotropic
n-plane W with W and its conjugate transverse), and back.

Hermitian form calibration
--------------------------
On W we use h(w1, w2) = i omega(w1, conj(w2)) literally. For w in V'' write
w = X + iJX (the -i eigenvectors of a real J). Expanding, with
J^T omega = -omega J and omega(JX, JX) = omega(X, X) = 0:

    h(w, w) = i * (-2i) * X^T omega J X = 2 X^T omega J X = -2 S(X, X)

where S = -omega J is the Gram matrix of ``symplectic``. So h = -2 S on
V'', and the index l (half the negative directions of S on R^{2n}, i.e. the
negative directions of S on a maximal J-complex subspace) equals the number
of *positive* eigenvalues of h.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    NotRealLagrangianError,
    NotSymplecticError,
    RealityError,
    SymTwistorError,
)
from .linalg import ATOL, SIGNATURE_BAND, matrix_rank, max_abs, scale_of, signature
from .symplectic import (
    CompatibleStructure,
    SymplecticForm,
    as_matrix,
    compatible,
    j0,
    projectors,
    q_matrix,
    standard_form,
)

# l counts positive eigenvalues of h on V'' (see module docstring)
INDEX_COUNTS_POSITIVE = True
PLANE_RTOL = 1e-8
REALITY_TOL = 1e-8
TRUNCATE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ComplexPlane:
    """Column space of a full-rank complex 2n x n basis matrix."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=complex, ndmin=2)
        if b.ndim != 2 or b.shape[0] != 2 * b.shape[1]:
            raise DimensionMismatchError(f"basis must be 2n x n, got {b.shape}")
        if matrix_rank(b, PLANE_RTOL) != b.shape[1]:
            raise SymTwistorError("basis is rank deficient")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    def conj(self) -> "ComplexPlane":
        return ComplexPlane(self.basis.conj())

    def __eq__(self, other):
        if not isinstance(other, ComplexPlane):
            return NotImplemented
        return same_plane(self, other)

    __hash__ = None

    def to_json(self):
        return [[[float(v.real), float(v.imag)] for v in row] for row in self.basis]

    @classmethod
    def from_json(cls, data):
        arr = np.asarray(data, dtype=float)
        return cls(arr[..., 0] + 1j * arr[..., 1])


def _as_plane(w) -> ComplexPlane:
    return w if isinstance(w, ComplexPlane) else ComplexPlane(w)


def _form_for(form, n) -> SymplecticForm:
    if form is None:
        return standard_form(n)
    form = form if isinstance(form, SymplecticForm) else SymplecticForm(form)
    if form.n != n:
        raise DimensionMismatchError(f"form has n={form.n}, plane has n={n}")
    return form


def same_plane(w1, w2, rtol: float = PLANE_RTOL) -> bool:
    """Equal column spaces, tested by rank([W1 | W2]) == n."""
    a, b = _as_plane(w1).basis, _as_plane(w2).basis
    if a.shape != b.shape:
        return False
    a = a / np.linalg.norm(a, axis=0)
    b = b / np.linalg.norm(b, axis=0)
    sv = np.linalg.svd(np.hstack([a, b]), compute_uv=False)
    return bool(sv[a.shape[1]] <= rtol * sv[0])


def j_to_plane(J) -> ComplexPlane:
    """n columns of (1/2)(I + iJ) spanning the -i eigenspace V''.

    Columns are picked by QR with column pivoting.
    """
    j = as_matrix(J)
    n = j.shape[0] // 2
    _, minus = projectors(j)
    _, r, piv = scipy.linalg.qr(minus, pivoting=True)
    d = np.abs(np.diag(r))
    if d[n - 1] <= PLANE_RTOL * d[0] or d[n] > 1e-3 * d[n - 1]:
        raise SymTwistorError(f"projector rank is not n={n}: |diag R| = {d}")
    return ComplexPlane(minus[:, np.sort(piv[:n])])


def is_real_lagrangian(W, form=None) -> bool:
    """W is omega-isotropic and W + conj(W) = C^{2n}."""
    w = _as_plane(W)
    form = _form_for(form, w.n)
    b = w.basis / np.linalg.norm(w.basis, axis=0)
    if max_abs(b.T @ form.omega @ b) > ATOL * scale_of(form.omega):
        return False
    sv = np.linalg.svd(np.hstack([b, b.conj()]), compute_uv=False)
    return bool(sv[-1] > PLANE_RTOL * sv[0])


def reconstruct(W, form=None) -> np.ndarray:
    """Complex matrix [W | conj W] diag(-i, +i) [W | conj W]^{-1}, before truncation."""
    w = _as_plane(W)
    form = _form_for(form, w.n)
    if not is_real_lagrangian(w, form):
        raise NotRealLagrangianError("plane is not real-Lagrangian")
    n = w.n
    m = np.hstack([w.basis, w.basis.conj()])
    d = np.concatenate([-1j * np.ones(n), 1j * np.ones(n)])
    return np.linalg.solve(m.T, (m * d).T).T


def plane_to_j(W, form=None) -> CompatibleStructure:
    """The real J with J w = -i w on W and J conj(w) = i conj(w)."""
    w = _as_plane(W)
    form = _form_for(form, w.n)
    jc = reconstruct(w, form)
    if max_abs(jc.imag) > REALITY_TOL * scale_of(jc.real):
        raise RealityError(f"reconstructed J has imaginary part {max_abs(jc.imag):.3e}")
    return compatible(jc.real, form)


def hermitian_matrix(W, form=None) -> np.ndarray:
    """H_ab = i omega(w_a, conj(w_b))."""
    w = _as_plane(W)
    form = _form_for(form, w.n)
    h = 1j * (w.basis.T @ form.omega @ w.basis.conj())
    return (h + h.conj().T) / 2


def hermitian_signature(W, form=None) -> tuple[int, int]:
    """(p, q) signature of h on W."""
    w = _as_plane(W)
    form = _form_for(form, w.n)
    if not is_real_lagrangian(w, form):
        raise NotRealLagrangianError("plane is not real-Lagrangian")
    return signature(hermitian_matrix(w, form), SIGNATURE_BAND)


def index_from_signature(sig: tuple[int, int]) -> int:
    return sig[0] if INDEX_COUNTS_POSITIVE else sig[1]


def canonical_plane(n: int, l: int) -> ComplexPlane:
    """span{e_j + i f_j (j <= n - l), e_j - i f_j (j > n - l)}, f_j = e_{n+j}."""
    eta = np.diag(q_matrix(n, l))[:n]
    basis = np.vstack([np.eye(n), 1j * np.diag(eta)])
    return ComplexPlane(basis)


# --- parabolic subgroup stabilising {(x, 0)} --------------------------------

def is_complex_symplectic(g, tol: float = ATOL) -> bool:
    g = np.asarray(g, dtype=complex)
    w = j0(g.shape[0] // 2)
    return max_abs(g.T @ w @ g - w) <= tol * scale_of(g) ** 2


def assemble_parabolic(a, e) -> np.ndarray:
    """[[a, a e], [0, a^{-T}]]."""
    a = np.asarray(a, dtype=complex)
    e = np.asarray(e, dtype=complex)
    n = a.shape[0]
    return np.block([[a, a @ e], [np.zeros((n, n)), np.linalg.inv(a).T]])


def parabolic_decompose(g, tol: float = ATOL):
    """Split g = [[a, a e], [0, a^{-T}]] or return None when c != 0.

    Raises NotSymplecticError for g outside Sp(2n, C); rejection (None) is
    reserved for symplectic g that do not stabilise {(x, 0)}.
    """
    g = np.asarray(g, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2:
        raise DimensionMismatchError(f"g must be 2n x 2n, got {g.shape}")
    if not is_complex_symplectic(g, tol):
        raise NotSymplecticError("g is not complex symplectic")
    n = g.shape[0] // 2
    a, b, c = g[:n, :n], g[:n, n:], g[n:, :n]
    s = scale_of(g)
    if max_abs(c) > tol * s:
        return None
    e = np.linalg.solve(a, b)
    if max_abs(e - e.T) > tol * s ** 3:
        raise NotSymplecticError("e is not symmetric")
    return a, (e + e.T) / 2


def preserves_pseudo_metric(g, l: int, tol: float = ATOL) -> bool:
    """g^T Q_l conj(g) == Q_l."""
    g = np.asarray(g, dtype=complex)
    q = q_matrix(g.shape[0] // 2, l)
    return max_abs(g.T @ q @ g.conj() - q) <= tol * scale_of(g) ** 2


def is_pseudo_unitary(a, l: int, tol: float = ATOL) -> bool:
    """a^T 1_{n-l,l} conj(a) == 1_{n-l,l}."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    eta = np.diag(q_matrix(n, l)[:n, :n])
    return max_abs(a.T @ np.diag(eta) @ a.conj() - np.diag(eta)) <= tol * scale_of(a) ** 2
