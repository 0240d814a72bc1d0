"""Siegel upper half space, the Sp(2n, R) Moebius action and the map phi.

``phi`` sends z = x + iy to the compatible structure

    [[x y^-1,  -x y^-1 x - y],
     [  y^-1,        -y^-1 x]]

of index 0. It intertwines the Moebius action with conjugation and is
anti-holomorphic when the target carries the complex structure "left
multiplication by J" on its tangent spaces.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CompatibilityError,
    DegeneracyError,
    DomainError,
    NonUnitaryError,
    NotSymplecticError,
    SingularDenominatorError,
)
from .linalg import ATOL, max_abs, scale_of
from .symplectic import CompatibleStructure, as_matrix, sp_membership, standard_form, taming_index

SYMMETRY_ATOL = 1e-9
POSDEF_RTOL = 1e-10
# cz + d (and y in phi) count as singular beyond this condition number
COND_LIMIT = 1e12
DEFAULT_STEP = 1e-5


def _sym(a):
    return (a + a.T) / 2


@dataclass(frozen=True, eq=False)
class SiegelPoint:
    """z = x + iy with x, y real symmetric and y positive definite."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float, ndmin=2)
        y = np.array(self.y, dtype=float, ndmin=2)
        if x.shape != y.shape or x.shape[0] != x.shape[1]:
            raise DomainError(f"x, y must be square of equal shape, got {x.shape}, {y.shape}")
        if not is_in_domain(x + 1j * y):
            raise DomainError("point is not in the Siegel upper half space")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def z(self) -> np.ndarray:
        return self.x + 1j * self.y

    @classmethod
    def from_complex(cls, z) -> "SiegelPoint":
        z = np.array(z, dtype=complex, ndmin=2)
        return cls(z.real, z.imag)

    @classmethod
    def base_point(cls, n: int) -> "SiegelPoint":
        return cls(np.zeros((n, n)), np.eye(n))

    def to_json(self) -> dict:
        return {"x": self.x.tolist(), "y": self.y.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "SiegelPoint":
        return cls(np.array(data["x"], dtype=float), np.array(data["y"], dtype=float))


def _as_point(z) -> SiegelPoint:
    return z if isinstance(z, SiegelPoint) else SiegelPoint.from_complex(z)


def is_in_domain(z) -> bool:
    """Symmetric within 1e-9 and Im z positive definite."""
    z = np.array(z, dtype=complex, ndmin=2)
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        return False
    if max_abs(z - z.T) > SYMMETRY_ATOL:
        return False
    y = _sym(z.imag)
    ev = np.linalg.eigvalsh(y)
    return bool(ev[0] > POSDEF_RTOL * max(np.max(np.abs(ev)), 1.0))


def random_point(n: int, rng: np.random.Generator) -> SiegelPoint:
    """A well-conditioned random domain point (eigenvalues of y in [0.5, ~n+1])."""
    a = rng.uniform(-1.0, 1.0, size=(n, n))
    b = rng.uniform(-1.0, 1.0, size=(n, n))
    return SiegelPoint(_sym(a), b @ b.T / n + 0.5 * np.eye(n))


def blocks(g):
    g = np.asarray(g)
    n = g.shape[0] // 2
    return g[:n, :n], g[:n, n:], g[n:, :n], g[n:, n:]


def mobius(g, z, check: bool = True) -> SiegelPoint:
    """(a z + b)(c z + d)^{-1}."""
    g = np.asarray(g, dtype=float)
    z = _as_point(z)
    if g.shape != (2 * z.n, 2 * z.n):
        raise NotSymplecticError(f"g has shape {g.shape}, expected {(2 * z.n,) * 2}")
    if check and not sp_membership(g, standard_form(z.n)):
        raise NotSymplecticError("g is not in Sp(2n, R)")
    a, b, c, d = blocks(g)
    num = a @ z.z + b
    den = c @ z.z + d
    if np.linalg.cond(den) > COND_LIMIT:
        raise SingularDenominatorError("c z + d is numerically singular")
    w = np.linalg.solve(den.T, num.T).T
    return SiegelPoint.from_complex(_sym(w))


def phi(z) -> CompatibleStructure:
    """The index-0 compatible structure attached to z = x + iy."""
    z = _as_point(z)
    x, y = z.x, z.y
    if np.linalg.cond(y) > COND_LIMIT:
        raise DegeneracyError("Im z is numerically singular")
    yi = np.linalg.inv(y)
    j = np.block([[x @ yi, -x @ yi @ x - y], [yi, -yi @ x]])
    return CompatibleStructure(j, standard_form(z.n), 0)


def phi_inverse(J) -> SiegelPoint:
    """Block solve y = J21^{-1}, x = J11 y."""
    j = as_matrix(J)
    n = j.shape[0] // 2
    if not isinstance(J, CompatibleStructure):
        if taming_index(j, standard_form(n)) != 0:
            raise CompatibilityError("phi_inverse needs an index-0 structure")
    elif J.index != 0:
        raise CompatibilityError("phi_inverse needs an index-0 structure")
    j11, _, j21, _ = blocks(j)
    if np.linalg.cond(j21) > COND_LIMIT:
        raise DegeneracyError("lower-left block of J is numerically singular")
    y = _sym(np.linalg.inv(j21))
    x = _sym(j11 @ y)
    return SiegelPoint(x, y)


def _phi_matrix(z):
    return phi(SiegelPoint.from_complex(z)).j


def directional_derivatives(z, h, step: float = DEFAULT_STEP):
    """Central differences of phi along H and iH at z."""
    z = _as_point(z)
    h = np.array(h, dtype=complex, ndmin=2)
    if max_abs(h - h.T) > SYMMETRY_ATOL:
        raise DomainError("direction H must be symmetric")
    if not 0 < step <= 1e-3:
        raise DomainError(f"step {step} outside (0, 1e-3]")
    zz = z.z
    pts = [zz + step * h, zz - step * h, zz + 1j * step * h, zz - 1j * step * h]
    if not all(is_in_domain(p) for p in pts):
        raise DomainError("step too large: z +- step*H leaves the domain")
    f = [_phi_matrix(p) for p in pts]
    return (f[0] - f[1]) / (2 * step), (f[2] - f[3]) / (2 * step)


def antiholomorphy_residual(z, h, step: float = DEFAULT_STEP) -> float:
    """max |D_{iH} phi + phi(z) D_H phi|."""
    d_h, d_ih = directional_derivatives(z, h, step)
    return max_abs(d_ih + phi(z).j @ d_h)


def tangency_residual(z, h, step: float = DEFAULT_STEP) -> float:
    """max |D_H phi phi(z) + phi(z) D_H phi|; zero for tangent vectors to J(V)."""
    d_h, _ = directional_derivatives(z, h, step)
    p = phi(z).j
    return max_abs(d_h @ p + p @ d_h)


def embed_unitary(a, check: bool = True) -> np.ndarray:
    """a = p + iq in U(n) as [[p, q], [-q, p]] in Sp(2n, R)."""
    a = np.array(a, dtype=complex, ndmin=2)
    n = a.shape[0]
    if check and max_abs(a.conj().T @ a - np.eye(n)) > ATOL * scale_of(a) ** 2:
        raise NonUnitaryError("a is not unitary")
    p, q = a.real, a.imag
    return np.block([[p, q], [-q, p]])


def unitary_part(g, tol: float = ATOL):
    """Return a = p + iq if g has the block shape [[p, q], [-q, p]], else None."""
    a, b, c, d = blocks(g)
    s = scale_of(g)
    if max_abs(d - a) > tol * s or max_abs(c + b) > tol * s:
        return None
    return a + 1j * b


def fixes_base_point(g, tol: float = ATOL) -> bool:
    n = np.asarray(g).shape[0] // 2
    w = mobius(g, SiegelPoint.base_point(n))
    return max_abs(w.z - 1j * np.eye(n)) <= tol * scale_of(g) ** 2
