"""Acceptance criteria 1-9, each reported on its own PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also printed when output is captured.
"""
import json
import subprocess
import sys

import numpy as np
import pytest

from symtwistor import integrability as it
from symtwistor import lagrangian as lg
from symtwistor import riemann as rm
from symtwistor import siegel as sg
from symtwistor import symplectic as sp
from symtwistor.linalg import expm, sample_rng

pytestmark = pytest.mark.acceptance


@pytest.fixture
def report(capsys):
    def emit(number, ok, summary):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number}: {'PASS' if ok else 'FAIL'}  {summary}")
        assert ok, summary
    return emit


def test_criterion_1_phi_base_point(report):
    worst = max(np.max(np.abs(sg.phi(sg.SiegelPoint.base_point(n)).j - sp.j0(n))) for n in (1, 2, 3, 4))
    report(1, worst <= 1e-12, f"max |phi(iI) - J0| over n=1..4 = {worst:.2e} (tol 1e-12)")


def test_criterion_2_phi_equivariance(report):
    worst = 0.0
    for n in (1, 2, 3):
        points = [sg.SiegelPoint.base_point(n)] + [sg.random_point(n, sample_rng(2, 1000 * n + k)) for k in range(10)]
        for s in range(100):
            g = sp.random_sp(n, 10_000 * n + s)
            gi = sp.sp_inverse(g)
            for z in points:
                lhs = sg.phi(sg.mobius(g, z)).j
                worst = max(worst, np.max(np.abs(lhs - g @ sg.phi(z).j @ gi)))
    report(2, worst <= 1e-8, f"max equivariance defect, 100 g x 11 points x n=1..3 = {worst:.2e} (tol 1e-8)")


def test_criterion_3_antiholomorphy(report):
    worst, worst_ratio = 0.0, 0.0
    for k in range(20):
        n = 1 + k % 2
        rng = sample_rng(3, k)
        z = sg.random_point(n, rng)
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = (a + a.T) / 4
        worst = max(worst, sg.antiholomorphy_residual(z, h, 1e-5))
        # second order shows where truncation dominates roundoff
        r1 = sg.antiholomorphy_residual(z, h, 1e-3)
        r2 = sg.antiholomorphy_residual(z, h, 5e-4)
        worst_ratio = max(worst_ratio, r2 / r1)
    ok = worst <= 1e-6 and worst_ratio <= 1 / 3
    report(3, ok, f"max residual at step 1e-5 = {worst:.2e} (tol 1e-6); "
                  f"worst halving ratio 1e-3 -> 5e-4 = {worst_ratio:.3f} (need <= 1/3)")


def test_criterion_4_canonical_form(report):
    worst, bad = 0.0, 0
    for s in range(100):
        n = 1 + s % 3
        l = s % (n + 1)
        g = sp.random_sp(n, 40_000 + s)
        target = sp.canonical_structure(n, l)
        j = g @ target @ sp.sp_inverse(g)
        g2, got = sp.canonical_conjugator(j)
        if got != l or sp.taming_index(j) != l or not sp.sp_membership(g2):
            bad += 1
        worst = max(worst, np.max(np.abs(np.linalg.solve(g2, j @ g2) - target)))
    report(4, bad == 0 and worst <= 1e-8, f"100 samples: {bad} index/membership failures, "
                                          f"max |g'^-1 J g' - J0 Q_l| = {worst:.2e} (tol 1e-8)")


def test_criterion_5_lagrangian_bijection(report):
    worst, worst_imag, bad_sig, bad_plane = 0.0, 0.0, 0, 0
    for s in range(200):
        n = 1 + s % 3
        l = (s // 3) % (n + 1)
        j, _ = sp.random_compatible(n, l, 50_000 + s)
        w = lg.j_to_plane(j)
        worst_imag = max(worst_imag, np.max(np.abs(lg.reconstruct(w).imag)))
        back = lg.plane_to_j(w).j
        worst = max(worst, np.max(np.abs(back - j)))
        bad_plane += not (lg.j_to_plane(back) == w)
        bad_sig += lg.index_from_signature(lg.hermitian_signature(w)) != sp.taming_index(j)
    ok = worst <= 1e-8 and worst_imag <= 1e-10 and bad_sig == 0 and bad_plane == 0
    report(5, ok, f"200 samples: round trip {worst:.2e} (tol 1e-8), imaginary residue {worst_imag:.2e} "
                  f"(tol 1e-10), signature mismatches {bad_sig}, plane mismatches {bad_plane}")


def _complex_symplectic(n, rng):
    s = rng.normal(size=(2 * n, 2 * n)) + 1j * rng.normal(size=(2 * n, 2 * n))
    return expm(-sp.j0(n) @ (0.3 * (s + s.T)))


def test_criterion_6_parabolic(report):
    wrong_accept, wrong_reject, worst, iff_fail = 0, 0, 0.0, 0
    for n in (1, 2, 3):
        for l in range(n + 1):
            eta = np.diag(sp.q_matrix(n, l))[:n]
            for s in range(50):
                rng = sample_rng(6, 10_000 * n + 100 * l + s)
                a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) + 2 * np.eye(n)
                e = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
                g = lg.assemble_parabolic(a, (e + e.T) / 2)
                out = lg.parabolic_decompose(g)
                if out is None:
                    wrong_reject += 1
                else:
                    worst = max(worst, np.max(np.abs(lg.assemble_parabolic(*out) - g)))
                if lg.parabolic_decompose(_complex_symplectic(n, rng)) is not None:
                    wrong_accept += 1
                # pseudo-unitary a, e = 0 preserves Q_l; breaking either condition does not
                k = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
                u = expm(np.diag(eta) @ (k - k.conj().T) / 2)
                sym = rng.normal(size=(n, n))
                cases = [
                    (u, np.zeros((n, n)), True),
                    (u, sym + sym.T, False),
                    (a, np.zeros((n, n)), lg.is_pseudo_unitary(a, l)),
                ]
                for aa, ee, expected in cases:
                    got = lg.preserves_pseudo_metric(lg.assemble_parabolic(aa, ee), l)
                    iff_fail += got != expected or (expected and not lg.is_pseudo_unitary(aa, l))
    ok = wrong_accept == 0 and wrong_reject == 0 and worst <= 1e-10 and iff_fail == 0
    report(6, ok, f"wrong accepts {wrong_accept}, wrong rejects {wrong_reject}, reassembly {worst:.2e} "
                  f"(tol 1e-10), pseudo-unitary iff failures {iff_fail}")


def test_criterion_7_component_independence(report):
    lines, ok = [], True
    for kind in it.KINDS:
        dims = [it.invariant_kernel_dim(kind, 2, l, 50, 7) for l in range(3)]
        doubled = [it.invariant_kernel_dim(kind, 2, l, 100, 7) for l in range(3)]
        ok &= len(set(dims)) == 1 and dims == doubled
        lines.append(f"{kind} {dims}/{doubled}")
    n1 = it.invariant_kernel_dim("torsion", 1, 0, 50, 7), it.invariant_kernel_dim("torsion", 1, 1, 50, 7)
    ok &= n1 == (2, 2)
    report(7, ok, "n=2 kernel dims l=0,1,2 at 50/100 samples: " + "; ".join(lines) + f"; n=1 torsion {list(n1)}")


def test_criterion_8_riemann_twistor(report):
    fs, flat = rm.fubini_study(), rm.flat()
    res = {}
    # (a) printed p on a 20 x 20 grid
    zs = np.linspace(-2, 2, 20)
    ws = 0.9 * np.linspace(0, 1, 20)
    a = 0.0
    for x in zs:
        for i, r in enumerate(ws):
            z, w = x + 1j * zs[i], r * np.exp(1j * x)
            p, _ = rm.lift_coeffs(fs, (z, w))
            a = max(a, abs(p - fs(z) * w * (np.conj(z) - np.conj(w) * z)))
    res["a"] = (a, a <= 1e-9)
    # (b) the zero section
    zero = rm.constant_section(0.0)
    b = max(abs(rm.selfholo_residual(zero, h, z)) for h in (flat, fs) for z in zs + 0.5j)
    res["b"] = (b, b <= 1e-15)
    # (c) l + w m = 1
    c = 0.0
    for x in zs:
        for r in ws:
            w = r * np.exp(2j * x)
            g = rm.section_metric(fs, (x, w))
            c = max(c, abs(g.l + w * g.m - 1))
    res["c"] = (c, c <= 1e-12)
    # (d) bracket at 20 random points
    d = 0.0
    for k in range(20):
        rng = sample_rng(8, k)
        z = complex(*rng.uniform(-2, 2, 2))
        w = 0.9 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        d = max(d, rm.bracket_check(fs, (z, w), 1e-5))
    res["d"] = (d, d <= 1e-6)
    # (e) sphere section bounded by 1/2, attained on |z| = 1
    grid = (np.linspace(-100, 100, 401)[:, None] + 1j * np.linspace(-100, 100, 401)[None, :]).ravel()
    grid = grid[np.abs(grid) <= 100]
    sup = max(np.max(rm.fubini_study_section(k, grid)) for k in (0.5, 1, 3))
    on_circle = max(abs(rm.fubini_study_section(k, np.exp(1j * t)) - 0.5) for k in (0.5, 1, 3) for t in zs)
    res["e"] = (on_circle, sup <= 0.5 and on_circle <= 1e-15)
    # (f) inversion chart z1 = 1/z
    f = 0.0
    for k in (0.5, 1, 3):
        for z1 in zs[zs != 0] * np.exp(0.7j):
            w = rm.fubini_study_section(k, 1 / z1)
            w1 = rm.chart_change_section(w, -1 / z1 ** 2)
            f = max(f, abs(w - (np.conj(z1) ** 2 / z1 ** 2) * w1))
    res["f"] = (f, f <= 1e-10)
    ok = all(v[1] for v in res.values())
    report(8, ok, ", ".join(f"({k}) {v[0]:.1e} {'ok' if v[1] else 'FAIL'}" for k, v in res.items()))


def _cli_json(tmp_path, name):
    out = tmp_path / name
    cmd = [sys.executable, "-m", "symtwistor", "--suite", "all", "--dim", "1", "--samples", "10",
           "--seed", "0", "--format", "json", "--out", str(out)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    return proc.returncode, out.read_text() if out.exists() else ""


def test_criterion_9_cli(report, tmp_path):
    code1, text1 = _cli_json(tmp_path, "a.json")
    code2, text2 = _cli_json(tmp_path, "b.json")

    def without_time(text):
        return [line for line in text.splitlines() if '"wall_time"' not in line]

    same = bool(text1) and without_time(text1) == without_time(text2)
    status = json.loads(text1)["status"] if text1 else "missing"
    report(9, code1 == 0 and code2 == 0 and same,
           f"exit codes {code1}/{code2}, status {status}, reports identical apart from wall_time: {same}")
