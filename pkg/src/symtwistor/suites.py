"""Seeded verification suites run by the CLI.

Each suite returns a list of CheckRecord. A check compares one measured
residual (or a mismatch count) against a tolerance; numerical indeterminacy
is recorded as its own status and fails the suite.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import __version__
from . import integrability as integ
from . import lagrangian as lag
from . import riemann as rt
from . import siegel as sg
from . import symplectic as sp
from .errors import (
    DegeneracyError,
    IndeterminateSignatureError,
    RankDecisionError,
    SingularDenominatorError,
    UnknownSuiteError,
)
from .linalg import expm, max_abs, sample_rng

SCHEMA = 1
FD_TOL = 1e-6
INDETERMINATE = (IndeterminateSignatureError, RankDecisionError, DegeneracyError, SingularDenominatorError)


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    n: int = 2
    samples: int = 50
    seed: int = 42
    tol: float = 1e-8
    format: str = "text"

    def __post_init__(self):
        if self.suite not in SUITES:
            raise UnknownSuiteError(f"unknown suite {self.suite!r}; known: {sorted(SUITES)}")
        if self.n < 1 or self.samples < 1 or self.tol <= 0:
            raise ValueError("n and samples must be >= 1 and tol > 0")
        if self.format not in ("json", "text"):
            raise ValueError(f"format must be json or text, got {self.format!r}")


@dataclass
class CheckRecord:
    name: str
    status: str
    residual: float | None
    tolerance: float
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    config: dict
    checks: list[CheckRecord]
    wall_time: float
    version: str = __version__
    schema: int = SCHEMA

    @property
    def status(self) -> str:
        return "pass" if all(c.status == "pass" for c in self.checks) else "fail"

    def to_json(self) -> dict:
        return {
            "schema": self.schema,
            "suite": self.suite,
            "config": self.config,
            "status": self.status,
            "checks": [asdict(c) for c in self.checks],
            "version": self.version,
            "wall_time": self.wall_time,
        }

    def to_text(self) -> str:
        lines = [f"suite {self.suite}  {self.config}"]
        for c in self.checks:
            res = "-" if c.residual is None else f"{c.residual:.3e}"
            tail = f"  ({c.detail})" if c.detail else ""
            lines.append(f"  [{c.status.upper():>13}] {c.name}: {res} <= {c.tolerance:.1e}{tail}")
        lines.append(f"{self.status.upper()}  ({len(self.checks)} checks, {self.wall_time:.2f}s)")
        return "\n".join(lines)


class _Checks:
    def __init__(self, prefix: str):
        self.prefix = prefix
        self.records: list[CheckRecord] = []

    def run(self, name: str, tol: float, fn: Callable[[], float | tuple[float, str]]):
        full = f"{self.prefix}.{name}"
        try:
            out = fn()
        except INDETERMINATE as exc:
            self.records.append(CheckRecord(full, "indeterminate", None, tol, str(exc)))
            return
        detail = ""
        if isinstance(out, tuple):
            out, detail = out
        value = float(out)
        status = "pass" if value <= tol else "fail"
        self.records.append(CheckRecord(full, status, value, tol, detail))


# --- suites -----------------------------------------------------------------

def _symplectic_core(cfg: SuiteConfig) -> list[CheckRecord]:
    n, tol = cfg.n, cfg.tol
    ck = _Checks("symplectic-core")
    w = sp.j0(n)

    ck.run("standard-form-antisymmetry", 0.0, lambda: max_abs(w + w.T))
    ck.run("q-commutes-with-j0", tol,
           lambda: max(max_abs(w @ sp.q_matrix(n, l) - sp.q_matrix(n, l) @ w) for l in range(n + 1)))

    def basis():
        worst = 0.0
        for s in range(cfg.samples):
            rng = sample_rng(cfg.seed, s)
            a = rng.uniform(-1, 1, size=(2 * n, 2 * n))
            # keep Omega well conditioned: perturb the standard form
            omega = w + 0.3 * (a - a.T)
            if np.linalg.cond(omega) > 1e3:
                continue
            b = sp.build_symplectic_basis(omega)
            worst = max(worst, max_abs(b.T @ omega @ b - w))
        return worst

    ck.run("symplectic-basis", 1e-9, basis)

    def random_sp_membership():
        return max(max_abs(g.T @ w @ g - w) / max_abs(g) ** 2
                   for g in (sp.random_sp(n, integ.derived_seed(cfg.seed, s)) for s in range(cfg.samples)))

    ck.run("random-sp-membership", tol, random_sp_membership)

    def canonical():
        worst, bad = 0.0, 0
        for s in range(cfg.samples):
            l = s % (n + 1)
            j, _ = sp.random_compatible(n, l, integ.derived_seed(cfg.seed, s))
            g, got = sp.canonical_conjugator(j)
            bad += (got != l) + (sp.taming_index(j) != l) + (not sp.sp_membership(g))
            worst = max(worst, max_abs(np.linalg.solve(g, j @ g) - sp.canonical_structure(n, l)))
        return (worst if bad == 0 else float("inf")), f"{bad} index/membership mismatches"

    ck.run("canonical-conjugator", tol, canonical)

    def invariance():
        bad = 0
        for s in range(cfg.samples):
            l = s % (n + 1)
            j, _ = sp.random_compatible(n, l, integ.derived_seed(cfg.seed, s))
            g = sp.random_sp(n, integ.derived_seed(cfg.seed + 1, s))
            bad += sp.taming_index(g @ j @ sp.sp_inverse(g)) != l
        return bad

    ck.run("taming-index-invariance", 0.0, invariance)

    def proj():
        worst = 0.0
        for s in range(cfg.samples):
            j, _ = sp.random_compatible(n, s % (n + 1), integ.derived_seed(cfg.seed, s))
            p, m = sp.projectors(j)
            worst = max(worst, max_abs(p @ p - p) / max_abs(p) ** 2, max_abs(p @ m) / max_abs(p) ** 2,
                        abs(np.linalg.matrix_rank(p, tol=1e-8 * np.linalg.norm(p, 2)) - n))
        return worst

    ck.run("projectors", tol, proj)
    return ck.records


def _siegel(cfg: SuiteConfig) -> list[CheckRecord]:
    n, tol = cfg.n, cfg.tol
    ck = _Checks("siegel")
    base = sg.SiegelPoint.base_point(n)

    ck.run("phi-base-point", 1e-12, lambda: max_abs(sg.phi(base).j - sp.j0(n)))

    def equivariance():
        worst = 0.0
        for s in range(cfg.samples):
            rng = sample_rng(cfg.seed, s)
            g = sp.random_sp(n, integ.derived_seed(cfg.seed, s))
            for z in (base, sg.random_point(n, rng)):
                lhs = sg.phi(sg.mobius(g, z)).j
                rhs = g @ sg.phi(z).j @ sp.sp_inverse(g)
                worst = max(worst, max_abs(lhs - rhs))
        return worst

    ck.run("phi-equivariance", tol, equivariance)

    def round_trips():
        worst = 0.0
        for s in range(cfg.samples):
            z = sg.random_point(n, sample_rng(cfg.seed, s))
            j = sg.phi(z)
            worst = max(worst, max_abs(sg.phi_inverse(j).z - z.z), max_abs(sg.phi(sg.phi_inverse(j)).j - j.j))
        return worst

    ck.run("phi-round-trip", tol, round_trips)

    def transitivity():
        worst = 0.0
        for s in range(cfg.samples):
            g = sp.random_sp(n, integ.derived_seed(cfg.seed, s))
            z = sg.mobius(g, base)
            worst = max(worst, max_abs(sg.phi_inverse(g @ sp.j0(n) @ sp.sp_inverse(g)).z - z.z))
        return worst

    ck.run("transitivity-witness", tol, transitivity)

    def group_law():
        worst = 0.0
        for s in range(cfg.samples):
            g1 = sp.random_sp(n, integ.derived_seed(cfg.seed, s))
            g2 = sp.random_sp(n, integ.derived_seed(cfg.seed + 1, s))
            z = sg.random_point(n, sample_rng(cfg.seed, s))
            worst = max(worst, max_abs(sg.mobius(g1 @ g2, z).z - sg.mobius(g1, sg.mobius(g2, z)).z))
        return worst

    ck.run("mobius-group-law", tol, group_law)

    def _pairs():
        for s in range(min(cfg.samples, 20)):
            rng = sample_rng(cfg.seed + 7, s)
            z = sg.random_point(n, rng)
            h = rng.uniform(-1, 1, size=(n, n))
            yield z, (h + h.T) / 2

    ck.run("anti-holomorphy", FD_TOL, lambda: max(sg.antiholomorphy_residual(z, h, 1e-5) for z, h in _pairs()))
    ck.run("tangency", FD_TOL, lambda: max(sg.tangency_residual(z, h, 1e-5) for z, h in _pairs()))

    def convergence():
        # truncation regime: at 1e-5 roundoff already dominates
        worst = 0.0
        for z, h in _pairs():
            r1 = sg.antiholomorphy_residual(z, h, 1e-3)
            r2 = sg.antiholomorphy_residual(z, h, 5e-4)
            worst = max(worst, r2 / r1)
        return worst

    ck.run("anti-holomorphy-order(ratio)", 1 / 3, convergence)

    def stabilizer():
        bad = 0
        for s in range(cfg.samples):
            rng = sample_rng(cfg.seed + 3, s)
            q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
            gu = sg.embed_unitary(q)
            bad += (not sp.sp_membership(gu)) + (not sg.fixes_base_point(gu)) + (sg.unitary_part(gu) is None)
            g = sp.random_sp(n, integ.derived_seed(cfg.seed, s))
            bad += (sg.unitary_part(g) is not None) != sg.fixes_base_point(g)
        return bad

    ck.run("stabilizer-u(n)", 0.0, stabilizer)
    return ck.records


def _lagrangian(cfg: SuiteConfig) -> list[CheckRecord]:
    n, tol = cfg.n, cfg.tol
    ck = _Checks("lagrangian")

    def structures():
        for s in range(cfg.samples):
            l = s % (n + 1)
            j, _ = sp.random_compatible(n, l, integ.derived_seed(cfg.seed, s))
            yield j, l

    def bijection():
        worst, bad = 0.0, 0
        for j, _ in structures():
            w = lag.j_to_plane(j)
            jr = lag.plane_to_j(w)
            worst = max(worst, max_abs(jr.j - j))
            bad += not lag.same_plane(lag.j_to_plane(jr), w)
        return (worst if bad == 0 else float("inf")), f"{bad} plane mismatches"

    ck.run("bijection", tol, bijection)
    ck.run("reality", 1e-10, lambda: max(max_abs(lag.reconstruct(lag.j_to_plane(j)).imag) for j, _ in structures()))
    ck.run("isotropy", tol, lambda: max(
        max_abs(lag.j_to_plane(j).basis.T @ sp.j0(n) @ lag.j_to_plane(j).basis) for j, _ in structures()))
    ck.run("signature-calibration", 0.0, lambda: sum(
        lag.index_from_signature(lag.hermitian_signature(lag.j_to_plane(j))) != l for j, l in structures()))
    ck.run("canonical-planes", 0.0, lambda: sum(
        lag.plane_to_j(lag.canonical_plane(n, l)).index != l for l in range(n + 1)))

    def parabolic():
        bad, worst = 0, 0.0
        for s in range(cfg.samples):
            rng = sample_rng(cfg.seed, s)
            a, e = _random_parabolic_data(n, rng)
            g = lag.assemble_parabolic(a, e)
            out = lag.parabolic_decompose(g)
            if out is None:
                bad += 1
            else:
                worst = max(worst, max_abs(lag.assemble_parabolic(*out) - g))
            f = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            lower = np.block([[np.eye(n), np.zeros((n, n))], [f + f.T, np.eye(n)]])
            bad += lag.parabolic_decompose(g @ lower) is not None
        return (worst if bad == 0 else float("inf")), f"{bad} accept/reject errors"

    ck.run("parabolic-decomposition", 1e-10, parabolic)

    def pseudo_unitary():
        bad = 0
        for l in range(n + 1):
            for s in range(cfg.samples):
                rng = sample_rng(cfg.seed + 11 * (l + 1), s)
                a = _random_pseudo_unitary(n, l, rng)
                bad += not lag.preserves_pseudo_metric(lag.assemble_parabolic(a, np.zeros((n, n))), l)
                e = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
                bad += lag.preserves_pseudo_metric(lag.assemble_parabolic(a, e + e.T), l)
                b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) + 2 * np.eye(n)
                bad += lag.preserves_pseudo_metric(lag.assemble_parabolic(b, np.zeros((n, n))), l) != \
                    lag.is_pseudo_unitary(b, l)
        return bad

    ck.run("pseudo-unitary-intersection", 0.0, pseudo_unitary)
    return ck.records


def _random_parabolic_data(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) + 2 * np.eye(n)
    e = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a, (e + e.T) / 2


def _random_pseudo_unitary(n, l, rng):
    """exp(eta K), K anti-Hermitian: a^H eta a = eta (equivalently a^T eta conj(a) = eta)."""
    eta = np.diag(sp.q_matrix(n, l)[:n, :n])
    k = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    k = 0.5 * (k - k.conj().T)
    return expm(np.diag(eta) @ k)


def _integrability(cfg: SuiteConfig) -> list[CheckRecord]:
    # kernel systems grow like n^8; n <= 2 keeps the suite within seconds
    n = min(cfg.n, 2)
    ck = _Checks("integrability")
    samples = cfg.samples

    for kind in integ.KINDS:
        def component_independence(kind=kind):
            dims = [integ.invariant_kernel_dim(kind, n, l, samples, cfg.seed) for l in range(n + 1)]
            doubled = [integ.invariant_kernel_dim(kind, n, l, 2 * samples, cfg.seed) for l in range(n + 1)]
            spread = max(dims) - min(dims) + sum(abs(a - b) for a, b in zip(dims, doubled))
            return spread, f"n={n}: kernel dims {dims}, doubled {doubled}"

        ck.run(f"{kind}-component-independence", 0.0, component_independence)

    if n == 1:
        ck.run("torsion-n1-full-kernel", 0.0,
               lambda: 2 - integ.invariant_kernel_dim("torsion", 1, 0, samples, cfg.seed))

    def equivariance():
        worst = 0.0
        for s in range(min(samples, 20)):
            rng = sample_rng(cfg.seed, s)
            t = integ.random_torsion(n, rng)
            r = integ.random_curvature(n, rng)
            j = integ.sample_structure(n, s % (n + 1), cfg.seed, s + 1)
            g = sp.random_sp(n, integ.derived_seed(cfg.seed + 5, s))
            jg = g @ j @ sp.sp_inverse(g)
            lhs = integ.torsion_residual_tensor(integ.act_torsion(g, t), jg)
            rhs = np.einsum("pk,kab,ax,by->pxy", g, integ.torsion_residual_tensor(t, j),
                            np.linalg.inv(g), np.linalg.inv(g))
            worst = max(worst, max_abs(lhs - rhs) / max(1.0, max_abs(rhs)))
            for fn in (integ.curvature_residual_tensor, integ.curvature02_residual_tensor):
                lhs = fn(integ.act_curvature(g, r), jg)
                rhs = integ.act_curvature(g, fn(r, j))
                worst = max(worst, max_abs(lhs - rhs) / max(1.0, max_abs(rhs)))
        return worst

    ck.run("conjugation-equivariance", 1e-9, equivariance)
    return ck.records


def _riemann_twistor(cfg: SuiteConfig) -> list[CheckRecord]:
    ck = _Checks("riemann-twistor")
    fs, fl = rt.fubini_study(), rt.flat()
    zs = np.linspace(-2, 2, 20)
    ws = np.linspace(-0.9, 0.9, 20)
    grid = [(complex(x, 0.5 * x + 0.3), complex(u, 0.3 * u) / 1.1) for x in zs for u in ws]

    def lift():
        worst = 0.0
        for z, w in grid:
            p, _ = rt.lift_coeffs(fs, (z, w))
            worst = max(worst, abs(p - fs(z) * w * (np.conj(z) - np.conj(w) * z)))
        return worst

    ck.run("lift-fubini-study", 1e-9, lift)
    ck.run("kahler-section-selfholo", 1e-14, lambda: max(
        abs(rt.selfholo_residual(rt.constant_section(0.0), h, z)) for h in (fs, fl) for z, _ in grid))
    ck.run("l-plus-wm", 1e-12, lambda: max(
        abs(m.l + w * m.m - 1) for z, w in grid for m in [rt.section_metric(fs, (z, w))]))

    def bracket():
        rng = sample_rng(cfg.seed, 0)
        worst = 0.0
        for _ in range(20):
            z = complex(*rng.uniform(-2, 2, 2))
            w = 0.8 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            worst = max(worst, rt.bracket_check(fs, (z, w), 1e-5))
        return worst

    ck.run("bracket", FD_TOL, bracket)

    def sphere_section():
        t = np.concatenate([np.linspace(0, 100, 2001), np.logspace(-3, 2, 200)])
        zz = t[:, None] * np.exp(1j * np.linspace(0, 2 * np.pi, 7))[None, :]
        worst = 0.0
        for k in (0.5, 1.0, 3.0):
            worst = max(worst, float(np.max(rt.fubini_study_section(k, zz))) - 0.5,
                        abs(rt.fubini_study_section(k, np.exp(0.7j)) - 0.5))
        return max(worst, 0.0)

    ck.run("sphere-section-bound", 1e-15, sphere_section)

    def chart_covariance():
        worst = 0.0
        for z1 in [complex(a, b) for a in np.linspace(-3, 3, 7) for b in np.linspace(-2, 2, 5)
                   if abs(complex(a, b)) > 1e-3]:
            for k in (0.5, 1.0, 3.0):
                w1 = rt.chart_change_section(rt.fubini_study_section(k, 1 / z1), -1 / z1 ** 2)
                worst = max(worst, abs(np.conj(z1) ** 2 / z1 ** 2 * w1 - rt.fubini_study_section(k, z1)))
        return worst

    ck.run("chart-covariance", 1e-10, chart_covariance)

    def jmat():
        worst = 0.0
        for _, w in grid:
            m = rt.j_matrix(w)
            worst = max(worst, max_abs(m @ m + np.eye(2)),
                        max_abs(m @ np.array([1, np.conj(w)]) - 1j * np.array([1, np.conj(w)])))
        return worst

    ck.run("j-matrix", 1e-12, jmat)
    return ck.records


SUITES: dict[str, tuple[Callable[[SuiteConfig], list[CheckRecord]] | None, str]] = {
    "all": (None, "every suite below, in order"),
    "integrability": (_integrability, "torsion/curvature residuals and kernel dimension per component"),
    "lagrangian": (_lagrangian, "J <-> real-Lagrangian plane, Hermitian signature, parabolic subgroup"),
    "riemann-twistor": (_riemann_twistor, "lift coefficients, self-holomorphy, section metric, charts"),
    "siegel": (_siegel, "Moebius action, phi equivariance, round trips, anti-holomorphy"),
    "symplectic-core": (_symplectic_core, "symplectic bases, taming index, canonical form, Sp sampling"),
}
ORDER = ["symplectic-core", "siegel", "lagrangian", "integrability", "riemann-twistor"]


def list_suites() -> list[tuple[str, str]]:
    return sorted((name, desc) for name, (_, desc) in SUITES.items())


def run_suite(config: SuiteConfig) -> SuiteReport:
    if config.suite not in SUITES:
        raise UnknownSuiteError(f"unknown suite {config.suite!r}")
    start = time.perf_counter()
    names = ORDER if config.suite == "all" else [config.suite]
    checks: list[CheckRecord] = []
    for name in names:
        checks.extend(SUITES[name][0](config))
    cfg = {k: v for k, v in asdict(config).items() if k != "format"}
    return SuiteReport(config.suite, cfg, checks, round(time.perf_counter() - start, 6))
