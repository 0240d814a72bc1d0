"""Twistor space of a Riemann surface in the chart (z, w).

The metric is g0 = h dz dzbar in a conformal coordinate z, and a point of the
symplectic twistor space over z is the (1,0)-line spanned by
v = d_z + conj(w) d_zbar with |w| < 1. Derivatives are Wirtinger:
d_z = (d_x - i d_y)/2, d_zbar = (d_x + i d_y)/2.

Fields carry analytic derivative closures when known and otherwise fall
back to central finite differences (optionally Richardson-refined).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import DomainError, SymTwistorError

DEFAULT_STEP = 1e-5
# |w| must stay below 1 - DISK_MARGIN
DISK_MARGIN = 1e-12


def _wirtinger(f: Callable, z, step: float, richardson: bool):
    """(d_z f, d_zbar f) by central differences in x and y."""

    def once(t):
        fx = (f(z + t) - f(z - t)) / (2 * t)
        fy = (f(z + 1j * t) - f(z - 1j * t)) / (2 * t)
        return 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)

    dz, dzb = once(step)
    if richardson:
        dz2, dzb2 = once(step / 2)
        dz, dzb = (4 * dz2 - dz) / 3, (4 * dzb2 - dzb) / 3
    return dz, dzb


class ScalarField:
    """Complex function of the chart coordinate z with Wirtinger derivatives."""

    def __init__(self, func, d_z=None, d_zbar=None, *, step=DEFAULT_STEP,
                 richardson=False, name=None, lower_accuracy=False):
        self.func = func
        self._d_z = d_z
        self._d_zbar = d_zbar
        self.step = step
        self.richardson = richardson
        self.name = name or getattr(func, "__name__", "field")
        self.lower_accuracy = lower_accuracy

    @property
    def analytic(self) -> bool:
        return self._d_z is not None and self._d_zbar is not None

    @property
    def derivative_mode(self) -> str:
        if self.analytic:
            return "analytic"
        return "finite-difference+richardson" if self.richardson else "finite-difference"

    def __call__(self, z):
        return self.func(z)

    evaluate = __call__

    def d_z(self, z):
        if self._d_z is not None:
            return self._d_z(z)
        return _wirtinger(self.func, z, self.step, self.richardson)[0]

    def d_zbar(self, z):
        if self._d_zbar is not None:
            return self._d_zbar(z)
        return _wirtinger(self.func, z, self.step, self.richardson)[1]

    def finite_difference(self, step=None, richardson=None) -> "ScalarField":
        """Same values with the analytic derivatives dropped."""
        return type(self)._rebuild(
            self, self.func, None, None,
            step=self.step if step is None else step,
            richardson=self.richardson if richardson is None else richardson,
        )

    def times(self, other: "ScalarField") -> "ScalarField":
        """Pointwise product; analytic only if both factors are."""
        func = lambda z: self(z) * other(z)
        if self.analytic and other.analytic:
            return ScalarField(
                func,
                lambda z: self.d_z(z) * other(z) + self(z) * other.d_z(z),
                lambda z: self.d_zbar(z) * other(z) + self(z) * other.d_zbar(z),
                name=f"{self.name}*{other.name}",
            )
        return ScalarField(func, step=min(self.step, other.step), name=f"{self.name}*{other.name}")

    @classmethod
    def _rebuild(cls, old, func, d_z, d_zbar, **kw):
        return ScalarField(func, d_z, d_zbar, name=old.name, lower_accuracy=old.lower_accuracy, **kw)


class MetricDensity(ScalarField):
    """Conformal factor h of g0 = h dz dzbar; positive wherever evaluated."""

    def __call__(self, z):
        v = self.func(z)
        if np.any(np.real(v) <= 0):
            raise DomainError(f"metric density {self.name} is not positive at {z}")
        return np.real(v)

    evaluate = __call__

    def scaled(self, c: float) -> "MetricDensity":
        if c <= 0:
            raise DomainError("scale must be positive")
        return MetricDensity(
            lambda z: c * self.func(z),
            None if self._d_z is None else (lambda z: c * self._d_z(z)),
            None if self._d_zbar is None else (lambda z: c * self._d_zbar(z)),
            step=self.step, richardson=self.richardson, name=f"{c:g}*{self.name}",
        )

    @classmethod
    def _rebuild(cls, old, func, d_z, d_zbar, **kw):
        return MetricDensity(func, d_z, d_zbar, name=old.name, lower_accuracy=old.lower_accuracy, **kw)


class SectionField(ScalarField):
    """w(z) of a section j(z) = (z, w(z)); |w| < 1 wherever evaluated."""

    def __call__(self, z):
        v = self.func(z)
        if np.any(np.abs(v) >= 1 - DISK_MARGIN):
            raise DomainError(f"section {self.name} leaves the unit disk at {z}")
        return v

    evaluate = __call__

    @classmethod
    def _rebuild(cls, old, func, d_z, d_zbar, **kw):
        return SectionField(func, d_z, d_zbar, name=old.name, lower_accuracy=old.lower_accuracy, **kw)


@dataclass(frozen=True)
class TwistorChartPoint:
    z: complex
    w: complex

    def __post_init__(self):
        if abs(self.w) >= 1 - DISK_MARGIN:
            raise DomainError(f"|w| = {abs(self.w)} is not < 1")
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "w", complex(self.w))


def _pt(pt) -> TwistorChartPoint:
    return pt if isinstance(pt, TwistorChartPoint) else TwistorChartPoint(*pt)


class TwistorFunction:
    """Complex function f(z, w) on the chart, with partials in z, zbar, w, wbar."""

    def __init__(self, func, d_z=None, d_zbar=None, d_w=None, d_wbar=None, *, step=DEFAULT_STEP):
        self.func = func
        self.partials = {"z": d_z, "zbar": d_zbar, "w": d_w, "wbar": d_wbar}
        self.step = step

    def __call__(self, z, w):
        return self.func(z, w)

    @property
    def analytic(self) -> bool:
        return all(v is not None for v in self.partials.values())

    def finite_difference(self, step=None) -> "TwistorFunction":
        return TwistorFunction(self.func, step=self.step if step is None else step)

    def partial(self, var: str, z, w):
        closure = self.partials[var]
        if closure is not None:
            return closure(z, w)
        t = self.step
        if var in ("z", "zbar"):
            d = _wirtinger(lambda s: self.func(s, w), z, t, False)
        else:
            d = _wirtinger(lambda s: self.func(z, s), w, t, False)
        return d[0] if var in ("z", "w") else d[1]


# --- catalog ----------------------------------------------------------------

def flat() -> MetricDensity:
    one = lambda z: 1.0 + 0.0 * np.real(z)
    zero = lambda z: np.zeros_like(np.asarray(z), dtype=complex)
    return MetricDensity(one, zero, zero, name="flat")


def fubini_study() -> MetricDensity:
    """h = 1/(1 + |z|^2) in the affine chart of the sphere."""
    def h(z):
        return 1.0 / (1.0 + np.abs(z) ** 2)

    def h_z(z):
        return -np.conj(z) / (1.0 + np.abs(z) ** 2) ** 2

    def h_zbar(z):
        return -np.asarray(z) / (1.0 + np.abs(z) ** 2) ** 2

    return MetricDensity(h, h_z, h_zbar, name="fubini-study")


CATALOG: dict[str, Callable[[], MetricDensity]] = {
    "flat": flat,
    "fubini-study": fubini_study,
}


def get_metric(name: str) -> MetricDensity:
    try:
        return CATALOG[name]()
    except KeyError:
        raise SymTwistorError(f"unknown metric {name!r}; known: {sorted(CATALOG)}") from None


def _complex_values(values):
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 3 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    return arr.astype(complex)


def tabulated(data: dict, kind=ScalarField, name="tabulated", step=1e-4):
    """Bilinear interpolant of {"grid": {"x": [...], "y": [...]}, "values": [[...]]}.

    values[i][j] is the value at x[i] + i*y[j]; complex values may be given
    as [re, im] pairs. Derivatives are finite differences of a piecewise
    linear surface, so the field is flagged ``lower_accuracy``.
    """
    grid = data["grid"]
    x = np.asarray(grid["x"], dtype=float)
    y = np.asarray(grid["y"], dtype=float)
    vals = _complex_values(data["values"])
    if vals.shape != (x.size, y.size):
        raise SymTwistorError(f"values shape {vals.shape} does not match grid {(x.size, y.size)}")
    re = RegularGridInterpolator((x, y), vals.real, method="linear")
    im = RegularGridInterpolator((x, y), vals.imag, method="linear")

    def func(z):
        z = np.asarray(z, dtype=complex)
        pts = np.stack([z.real.ravel(), z.imag.ravel()], axis=-1)
        out = re(pts) + 1j * im(pts)
        out = out.reshape(z.shape)
        return out if out.ndim else complex(out)

    if kind is MetricDensity:
        inner = func
        func = lambda z: np.real(inner(z))
    return kind(func, step=step, name=name, lower_accuracy=True)


def load_tabulated(path, kind=ScalarField):
    path = Path(path)
    return tabulated(json.loads(path.read_text()), kind=kind, name=path.stem)


# --- operations -------------------------------------------------------------

def lift_coeffs(h: MetricDensity, pt) -> tuple[complex, complex]:
    """(p, q) making u = d_z + conj(w) d_zbar + p d_w + q d_wbar horizontal."""
    pt = _pt(pt)
    z, w = pt.z, pt.w
    hv = h(z)
    hz, hzb = h.d_z(z), h.d_zbar(z)
    wb = np.conj(w)
    p = w * (wb * hzb - hz) / hv
    q = wb * (hz - wb * hzb) / hv
    return complex(p), complex(q)


def holo_residual(f: TwistorFunction, h: MetricDensity, pt) -> tuple[complex, complex]:
    """(df/dwbar, h f_zbar + h w f_z + w (h_zbar - w h_z) f_w)."""
    pt = _pt(pt)
    z, w = pt.z, pt.w
    hv, hz, hzb = h(z), h.d_z(z), h.d_zbar(z)
    r1 = f.partial("wbar", z, w)
    r2 = (hv * f.partial("zbar", z, w) + hv * w * f.partial("z", z, w)
          + w * (hzb - w * hz) * f.partial("w", z, w))
    return complex(r1), complex(r2)


def selfholo_residual(section: SectionField, h: MetricDensity, z) -> complex:
    """w (w h_z - h_zbar) + h w_zbar + h w w_z at z."""
    w = section(z)
    hv, hz, hzb = h(z), h.d_z(z), h.d_zbar(z)
    return complex(w * (w * hz - hzb) + hv * section.d_zbar(z) + hv * w * section.d_z(z))


def beltrami_variant_residual(F: ScalarField, section: SectionField, z) -> complex:
    """dF/dzbar + d(F w)/dz at z."""
    section(z)
    return complex(F.d_zbar(z) + F.times(section).d_z(z))


class SectionMetric(NamedTuple):
    g11bar: complex
    g11: complex
    l: complex
    m: complex


def section_metric(h: MetricDensity, pt) -> SectionMetric:
    """g_j(d_z, d_zbar) = h l and g_j(d_z, d_z) = h m; l + w m = 1."""
    pt = _pt(pt)
    w = pt.w
    a = abs(w) ** 2
    l = (1 + a) / (1 - a)
    m = -2 * np.conj(w) / (1 - a)
    hv = h(pt.z)
    return SectionMetric(complex(hv * l), complex(hv * m), complex(l), complex(m))


def j_matrix(w) -> np.ndarray:
    """Matrix of j on the frame (d_z, d_zbar); columns are j(d_z), j(d_zbar)."""
    w = complex(w)
    a = abs(w) ** 2
    if a >= (1 - DISK_MARGIN) ** 2:
        raise DomainError(f"|w| = {abs(w)} is not < 1")
    d = 1 - a
    return np.array([
        [1j * (1 + a) / d, -2j * w / d],
        [2j * np.conj(w) / d, -1j * (1 + a) / d],
    ])


def taming_form(h: MetricDensity, pt) -> float:
    """h dz^dzbar(v, conj v) for v = d_z + conj(w) d_zbar; equals h (1 - |w|^2)."""
    pt = _pt(pt)
    v = np.array([1.0, np.conj(pt.w)])
    vb = v.conj()[::-1]  # conj(v) = w d_z + d_zbar
    wedge = v[0] * vb[1] - v[1] * vb[0]
    return float(np.real(h(pt.z) * wedge))


def chart_change_section(w, dz_dz1) -> complex:
    """Fibre coordinate in a new chart z1, given dz/dz1 at the point.

    v1 = d_z1 + conj(w1) d_zbar1 = (dz/dz1) (d_z + conj(w1) conj(d)/d d_zbar),
    hence w1 = w * conj(d) / d with d = dz/dz1.
    """
    d = complex(dz_dz1)
    if d == 0:
        raise DomainError("chart change with vanishing derivative")
    return complex(w) * np.conj(d) / d


def fubini_study_section(k: float, z):
    """|z|^k / (1 + |z|^{2k}); real, with values in [0, 1/2]."""
    if k <= 0:
        raise DomainError("k must be positive")
    r = np.abs(z) ** k
    return r / (1 + r * r)


def fubini_study_section_field(k: float, step=DEFAULT_STEP) -> SectionField:
    return SectionField(lambda z: fubini_study_section(k, z), step=step, name=f"sphere-section(k={k:g})")


def constant_section(c) -> SectionField:
    zero = lambda z: 0j * np.asarray(z)
    return SectionField(lambda z: c + 0j * np.asarray(z), zero, zero, name=f"const({c})")


def bracket_check(h: MetricDensity, pt, step: float = DEFAULT_STEP) -> float:
    """Deviation of [u, d_w] from its predicted (1,0) value, plus |dq/dw|.

    The bracket is evaluated by differencing the coefficient functions of u
    in the fibre variable: [u, d_w] = -d_w(u^a) d_a. The prediction is
    -(dp/dw) d_w with dp/dw = (conj(w) h_zbar - h_z)/h, since p is w times
    a function of (z, conj w).
    """
    pt = _pt(pt)
    z, w = pt.z, pt.w
    if abs(w) + step >= 1 - DISK_MARGIN:
        raise DomainError("step pushes w outside the unit disk")

    def coeffs(wv):
        p, q = lift_coeffs(h, TwistorChartPoint(z, wv))
        return np.array([1.0, np.conj(wv), p, q])

    d_w, _ = _wirtinger(coeffs, w, step, False)
    bracket = -d_w
    hv, hz, hzb = h(z), h.d_z(z), h.d_zbar(z)
    dp_dw = (np.conj(w) * hzb - hz) / hv
    predicted = np.array([0.0, 0.0, -dp_dw, 0.0])
    return float(max(abs(d_w[3]), np.max(np.abs(bracket - predicted))))
