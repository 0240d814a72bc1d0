"""Real symplectic linear algebra.

Conventions
-----------
A symplectic form is stored as its Gram matrix ``omega`` with
``omega(X, Y) = X.T @ omega @ Y``. The standard form is
``J0 = [[0, -I], [I, 0]]``, so a basis is symplectic when the Gram matrix of
omega in it equals J0.

For a compatible complex structure ``J`` the symmetric form used to read off
the index is ``S = -omega @ J``. With this sign ``(J0, J0)`` gives ``S = I``,
positive definite, index 0. The index ``l`` counts half the negative
eigenvalues of ``S``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CompatibilityError,
    DegeneracyError,
    DimensionMismatchError,
    InvalidDimensionError,
    InvalidIndexError,
)
from .linalg import ATOL, SIGNATURE_BAND, expm, max_abs, sample_rng, scale_of, signature

# smallest singular value of omega relative to the largest
DEGENERACY_RTOL = 1e-10


def _check_n(n) -> int:
    if int(n) != n or n < 1:
        raise InvalidDimensionError(f"half-dimension must be a positive integer, got {n!r}")
    return int(n)


def _half_dim(a) -> int:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
        raise InvalidDimensionError(f"expected an even square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise InvalidDimensionError("empty matrix")
    return a.shape[0] // 2


@dataclass(frozen=True, eq=False)
class SymplecticForm:
    """Nondegenerate antisymmetric Gram matrix on R^{2n}."""

    omega: np.ndarray

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float)
        _half_dim(omega)
        if max_abs(omega + omega.T) > ATOL * scale_of(omega):
            raise CompatibilityError("omega is not antisymmetric")
        sv = np.linalg.svd(omega, compute_uv=False)
        if sv[-1] <= DEGENERACY_RTOL * sv[0]:
            raise DegeneracyError(f"omega is degenerate (singular values {sv})")
        omega.setflags(write=False)
        object.__setattr__(self, "omega", omega)

    @property
    def n(self) -> int:
        return self.omega.shape[0] // 2

    @classmethod
    def standard(cls, n: int) -> "SymplecticForm":
        return standard_form(n)

    def __call__(self, x, y):
        return np.asarray(x).T @ self.omega @ np.asarray(y)


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    """Real matrix with j @ j = -I."""

    j: np.ndarray

    def __post_init__(self):
        j = np.array(self.j, dtype=float)
        n = _half_dim(j)
        if max_abs(j @ j + np.eye(2 * n)) > ATOL * scale_of(j) ** 2:
            raise CompatibilityError("j @ j != -I")
        j.setflags(write=False)
        object.__setattr__(self, "j", j)

    @property
    def n(self) -> int:
        return self.j.shape[0] // 2


@dataclass(frozen=True, eq=False)
class CompatibleStructure:
    """A complex structure compatible with ``form``, with its taming index."""

    j: np.ndarray
    form: SymplecticForm
    index: int

    def __post_init__(self):
        j = np.array(self.j, dtype=float)
        if not is_compatible(j, self.form):
            raise CompatibilityError("j is not compatible with the symplectic form")
        if not 0 <= self.index <= self.form.n:
            raise InvalidIndexError(f"index {self.index} outside [0, {self.form.n}]")
        j.setflags(write=False)
        object.__setattr__(self, "j", j)

    @property
    def n(self) -> int:
        return self.form.n

    @property
    def base(self) -> ComplexStructure:
        return ComplexStructure(self.j)

    @property
    def gram(self) -> np.ndarray:
        return -self.form.omega @ self.j


def as_matrix(obj) -> np.ndarray:
    """Unwrap a structure or form into its matrix."""
    if isinstance(obj, (ComplexStructure, CompatibleStructure)):
        return obj.j
    if isinstance(obj, SymplecticForm):
        return obj.omega
    return np.asarray(obj)


def _as_form(form, n: int) -> SymplecticForm:
    if form is None:
        return standard_form(n)
    if not isinstance(form, SymplecticForm):
        form = SymplecticForm(form)
    if form.n != n:
        raise DimensionMismatchError(f"form has n={form.n}, matrix has n={n}")
    return form


def standard_form(n: int) -> SymplecticForm:
    """J0 = [[0, -I], [I, 0]] as a symplectic form on R^{2n}."""
    n = _check_n(n)
    return SymplecticForm(j0(n))


def j0(n: int) -> np.ndarray:
    n = _check_n(n)
    z, i = np.zeros((n, n)), np.eye(n)
    return np.block([[z, -i], [i, z]])


def q_matrix(n: int, l: int) -> np.ndarray:
    """diag(1_{n-l,l}, 1_{n-l,l}), the signature matrix of index l."""
    n = _check_n(n)
    if int(l) != l or not 0 <= l <= n:
        raise InvalidIndexError(f"index l={l!r} outside [0, {n}]")
    eta = np.concatenate([np.ones(n - l), -np.ones(l)])
    return np.diag(np.concatenate([eta, eta]))


def canonical_structure(n: int, l: int) -> np.ndarray:
    """J0 @ Q_l, the canonical compatible structure of index l."""
    return j0(n) @ q_matrix(n, l)


def build_symplectic_basis(form) -> np.ndarray:
    """Columns of the returned B form a symplectic basis: B.T @ omega @ B = J0.

    Inductive reduction: pick X, Y with omega(X, Y) = 1 (largest available
    pivot), then restrict to the omega-annihilator of {X, Y} and repeat.
    Y lands in slot m and X in slot m + n, since J0[m, m + n] = -1.
    """
    if not isinstance(form, SymplecticForm):
        form = SymplecticForm(form)
    n = form.n
    omega = form.omega
    basis = np.zeros((2 * n, 2 * n))
    current = np.eye(2 * n)
    ref = np.max(np.abs(omega))
    for step in range(n):
        red = current.T @ omega @ current
        i, j = np.unravel_index(np.argmax(np.abs(red)), red.shape)
        pivot = red[i, j]
        if abs(pivot) <= DEGENERACY_RTOL * ref:
            raise DegeneracyError(
                f"pivot {pivot:.3e} vanishes at induction step {step}", step=step
            )
        x = current[:, i]
        y = current[:, j] / pivot
        basis[:, step] = y
        basis[:, step + n] = x
        rest = [k for k in range(current.shape[1]) if k not in (i, j)]
        if not rest:
            break
        u = current[:, rest]
        # u' = u + omega(Y, u) X - omega(X, u) Y kills omega(X, .) and omega(Y, .)
        wx = x @ omega @ u
        wy = y @ omega @ u
        current = u + np.outer(x, wy) - np.outer(y, wx)
    return basis


def is_compatible(J, form=None, tol: float = ATOL) -> bool:
    """True iff J @ J = -I and J.T @ omega @ J = omega within tolerance."""
    j = as_matrix(J)
    n = _half_dim(j)
    form = _as_form(form, n)
    s = scale_of(j) ** 2
    if max_abs(j @ j + np.eye(2 * n)) > tol * s:
        return False
    return max_abs(j.T @ form.omega @ j - form.omega) <= tol * s * scale_of(form.omega)


def gram_matrix(J, form=None) -> np.ndarray:
    """S = -omega @ J, symmetric for compatible J."""
    j = as_matrix(J)
    form = _as_form(form, _half_dim(j))
    return -form.omega @ j


def taming_index(J, form=None) -> int:
    """Half the number of negative eigenvalues of S = -omega @ J."""
    j = as_matrix(J)
    form = _as_form(form, _half_dim(j))
    s = gram_matrix(j, form)
    if max_abs(s - s.T) > ATOL * scale_of(s):
        raise CompatibilityError("S = -omega J is not symmetric; J is not compatible")
    _, neg = signature((s + s.T) / 2, SIGNATURE_BAND)
    if neg % 2:
        raise CompatibilityError(f"odd negative count {neg}; J is not compatible")
    return neg // 2


def compatible(J, form=None) -> CompatibleStructure:
    """Wrap J as a CompatibleStructure, computing its index."""
    j = as_matrix(J)
    form = _as_form(form, _half_dim(j))
    return CompatibleStructure(j, form, taming_index(j, form))


def sp_membership(g, form=None, tol: float = ATOL) -> bool:
    """True iff g.T @ omega @ g = omega (tolerance scaled by ||g||^2)."""
    g = np.asarray(g)
    n = _half_dim(g)
    form = _as_form(form, n)
    resid = g.T @ form.omega @ g - form.omega
    return max_abs(resid) <= tol * scale_of(g) ** 2 * scale_of(form.omega)


def sp_inverse(g) -> np.ndarray:
    """Inverse of g in Sp(2n, R) for the standard form: -J0 g^T J0."""
    g = np.asarray(g)
    w = j0(_half_dim(g))
    return -w @ g.T @ w


def canonical_conjugator(J, form=None) -> tuple[np.ndarray, int]:
    """Return (g, l) with g symplectic and g^{-1} J g = J0 Q_l.

    Builds a basis that is symplectic and S-orthogonal: X with |S(X, X)| = 1
    and sign eps, partnered with eps * J X. Positive pairs fill the first
    n - l slots, negative pairs the rest.
    """
    j = as_matrix(J)
    n = _half_dim(j)
    form = _as_form(form, n)
    if not np.allclose(form.omega, j0(n), atol=ATOL, rtol=0):
        raise CompatibilityError(
            "canonical_conjugator needs the standard form; reduce with build_symplectic_basis"
        )
    if not is_compatible(j, form):
        raise CompatibilityError("J is not compatible with the standard form")
    s = gram_matrix(j, form)
    s = (s + s.T) / 2
    ref = np.max(np.abs(np.linalg.eigvalsh(s)))

    pos, neg = [], []
    current = np.eye(2 * n)
    for step in range(n):
        red = current.T @ s @ current
        ev, vec = np.linalg.eigh((red + red.T) / 2)
        k = int(np.argmax(np.abs(ev)))
        x = current @ vec[:, k]
        sxx = x @ s @ x
        if abs(sxx) <= SIGNATURE_BAND * ref * (x @ x):
            raise DegeneracyError(f"S-norm pivot {sxx:.3e} vanishes at step {step}", step=step)
        eps = 1.0 if sxx > 0 else -1.0
        x = x / np.sqrt(abs(sxx))
        y = eps * (j @ x)
        (pos if eps > 0 else neg).append((x, y))
        if step == n - 1:
            break
        # S-orthogonal projection onto the complement of span{x, Jx}
        jx = j @ x
        u = current - np.outer(x, eps * (x @ s @ current)) - np.outer(jx, eps * (jx @ s @ current))
        left, sv, _ = np.linalg.svd(u, full_matrices=False)
        m = 2 * (n - step - 1)
        if sv[m - 1] <= 1e-10 * sv[0]:
            raise DegeneracyError(f"complement collapsed at step {step}", step=step)
        current = left[:, :m]

    l = len(neg)
    g = np.zeros((2 * n, 2 * n))
    for m, (x, y) in enumerate(pos + neg):
        g[:, m] = x
        g[:, m + n] = y
    return g, l


def random_sp(n: int, seed: int, scale: float = 1.0) -> np.ndarray:
    """Seeded element exp(A) of Sp(2n, R), A = J0^{-1} Sym.

    Sym is symmetric with entries uniform in [-1, 1] (times ``scale``; the
    test hook ``scale=0`` yields the identity).
    """
    n = _check_n(n)
    rng = sample_rng(seed)
    m = rng.uniform(-1.0, 1.0, size=(2 * n, 2 * n))
    sym = np.triu(m) + np.triu(m, 1).T
    a = -j0(n) @ (scale * sym)
    return expm(a)


def random_compatible(n: int, l: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """(g J0 Q_l g^{-1}, g) for g = random_sp(n, seed)."""
    g = random_sp(n, seed)
    return g @ canonical_structure(n, l) @ sp_inverse(g), g


def projectors(J) -> tuple[np.ndarray, np.ndarray]:
    """(J+, J-) = (1/2)(I - iJ), (1/2)(I + iJ): projections on the +i and -i eigenspaces."""
    j = as_matrix(J)
    eye = np.eye(j.shape[0])
    return 0.5 * (eye - 1j * j), 0.5 * (eye + 1j * j)
