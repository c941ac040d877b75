"""Acceptance suite.  Each test prints one PASS/FAIL line; run with ``-s`` to see them inline."""

import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np

from bergszego.cli import main
from bergszego.core import PolyObservable, eval_poly, monomials
from bergszego.grammar import parse_poly
from bergszego.kernels import (
    KernelId,
    kernel_diag_ratio,
    kernel_eval,
    kernel_spec,
    neumann_partial_sum,
    neumann_tail_bound,
)
from bergszego.projections import bergman_apply, bergman_oracle, szego_apply, szego_oracle
from bergszego.quadrature import MEASURE, Resolution, exact_moment, integrate, make_rule
from bergszego.stokes import ball_terms, disc_terms, disc_terms_exact, residual_table
from conftest import ACCEPTANCE_LINES, random_ball_points, random_disc_points

SEED = 20240611


def report(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def rng():
    return np.random.default_rng(SEED)


def test_01_disc_reproducing():
    pts = random_disc_points(rng(), 20, 0.7)
    r = Resolution(512, 128)
    worst = 0.0
    start = time.perf_counter()
    for k in range(11):
        f = PolyObservable.monomial((k,))
        for z in pts:
            for apply in (szego_apply, bergman_apply):
                worst = max(worst, abs(apply("disc", f, z, r).value - z**k))
    elapsed = time.perf_counter() - start
    report(1, worst <= 1e-10 and elapsed < 10, f"disc reproducing max error {worst:.2e} (tol 1e-10), {elapsed:.2f} s (limit 10 s)")


def test_02_disc_stokes_identity():
    pts = random_disc_points(rng(), 10, 0.7)
    worst = 0.0
    for k in range(5):
        for m in range(5):
            f = PolyObservable.monomial((k,), (m,))
            for z in pts:
                worst = max(worst, disc_terms(f, z).stokes_defect)
    report(2, worst <= 1e-8, f"disc |szegoSide - (A - B + C + D)| max {worst:.2e} over 250 cases (tol 1e-8)")


def test_03_exact_holomorphic_cancellation():
    bad = []
    for k in range(11):
        rep = disc_terms_exact(PolyObservable.monomial((k,)))
        if not (rep.residual.is_zero() and rep.terms["B"] == rep.terms["C"] and rep.terms["D"].is_zero()):
            bad.append(k)
    report(3, not bad, f"exact residual 0, B = C, D = 0 for z^k, k <= 10 (failures: {bad or 'none'})")


def _oracle_gap(domain, pts, r=None):
    worst = 0.0
    n = 1 if domain == "disc" else 2
    for a in monomials(n, 3):
        for b in monomials(n, 3):
            f = PolyObservable.monomial(a.degrees, b.degrees)
            for apply, oracle in ((szego_apply, szego_oracle), (bergman_apply, bergman_oracle)):
                exact = oracle(domain, f)
                for z in pts:
                    worst = max(worst, abs(apply(domain, f, z, r).value - exact.at(z)))
    return worst


def test_04_oracle_equivalence():
    disc = _oracle_gap("disc", random_disc_points(rng(), 5, 0.7))
    ball = _oracle_gap("ball2", random_ball_points(rng(), 2, 0.7))
    report(
        4,
        disc <= 1e-8 and ball <= 1e-6,
        f"numeric vs oracle, |alpha|,|beta| <= 3: disc {disc:.2e} (tol 1e-8), ball2 {ball:.2e} (tol 1e-6)",
    )


def test_05_residual_audit(capsys):
    rows = {(r.holo.degrees[0], r.anti.degrees[0]): r for r in residual_table("disc", 8, 8)}
    ok = rows[1, 1].residual == PolyObservable.constant(1, Fraction(1, 2))
    ok &= rows[2, 1].residual == PolyObservable.monomial((1,), coeff=Fraction(1, 3))
    zeros = [(k, m) for (k, m), r in rows.items() if (m == 0 or k < m)]
    ok &= all(rows[key].residual.is_zero() and not rows[key].deviates for key in zeros)
    ok &= rows[1, 1].deviates
    flagged = sum(r.deviates for r in rows.values())

    assert main(["residual-table", "--domain", "disc", "--kmax", "2", "--mmax", "2"]) == 0
    out = capsys.readouterr().out.splitlines()
    ok &= out[0] == "k,m,residual,deviation" and "1,1,1/2,1" in out and "2,1,1/3 * z^1,1" in out
    with capsys.disabled():
        report(
            5,
            ok,
            f"(1,1) -> 1/2, (2,1) -> z/3, {len(zeros)} rows with m = 0 or k < m are 0; "
            f"{flagged} nonzero rows flagged as measured deviations",
        )


def test_06_quadrature_moments():
    worst = {}
    for domain in ("circle", "disc", "sphere3", "ball4"):
        rule = make_rule(domain)
        n = rule.dim
        idx = list(monomials(n, 4))
        err = 0.0
        for a in idx:
            for b in idx:
                if n == 1:
                    g = lambda z, a=a.degrees[0], b=b.degrees[0]: z**a * np.conj(z) ** b
                else:
                    g = lambda z1, z2, a=a.degrees, b=b.degrees: (
                        z1 ** a[0] * z2 ** a[1] * np.conj(z1) ** b[0] * np.conj(z2) ** b[1]
                    )
                err = max(err, abs(integrate(rule, g) - complex(exact_moment(domain, a, b))))
        mass = abs(rule.mass() - MEASURE[domain]) / MEASURE[domain]
        worst[domain] = (err, mass)
    ok = all(e <= 1e-10 and m <= 1e-12 for e, m in worst.values())
    detail = ", ".join(f"{d} {e:.1e}/{m:.1e}" for d, (e, m) in worst.items())
    report(6, ok, f"moment error / relative mass error: {detail} (tol 1e-10 / 1e-12)")


def test_07_ball_reproducing():
    pts = random_ball_points(rng(), 3, 0.7)
    repro = agree = 0.0
    for a in monomials(2, 3):
        f = PolyObservable.monomial(a.degrees)
        for z in pts:
            target = eval_poly(f, z)
            s = szego_apply("ball2", f, z).value
            b = bergman_apply("ball2", f, z).value
            repro = max(repro, abs(s - target), abs(b - target))
            agree = max(agree, abs(s - b))
    report(7, repro <= 1e-6 and agree <= 2e-6, f"ball2 reproducing error {repro:.2e} (tol 1e-6), szego-bergman gap {agree:.2e} (tol 2e-6)")


def test_08_kernel_ratio():
    gen = rng()
    worst_formula = 0.0
    worst_scaled = 0.0
    for domain, denom, pts in (
        ("disc", 2, random_disc_points(gen, 50, 0.999)),
        ("ball2", 4, random_ball_points(gen, 50, 0.999)),
    ):
        s_id, k_id = (KernelId.SzegoDisc, KernelId.BergmanDisc) if domain == "disc" else (KernelId.SzegoBall2, KernelId.BergmanBall2)
        pts = list(pts) + ([0j, 0.5, 0.9j] if domain == "disc" else [(0j, 0j), (0.5, 0j), (0.3, 0.8j)])
        for z in pts:
            coords = (z,) if domain == "disc" else z
            norm2 = sum(abs(c) ** 2 for c in coords)
            ratio = kernel_diag_ratio(domain, z)
            direct = (kernel_eval(s_id, z, z) / kernel_eval(k_id, z, z)).real
            worst_formula = max(worst_formula, abs(ratio - (1 - norm2) / denom), abs(ratio - direct))
            worst_scaled = max(worst_scaled, ratio / (1 - math.sqrt(norm2)))
    report(8, worst_formula <= 1e-14 and worst_scaled <= 1, f"ratio formula error {worst_formula:.1e} (tol 1e-14), max ratio/delta {worst_scaled:.4f} (limit 1)")


def test_09_neumann_convergence():
    cases = []
    for kid in KernelId:
        n = kernel_spec(kid).dimension
        for z, zeta in (
            ((0.8,), (1.0,)),
            ((0.5 + 0.2j,), (0.6 - 0.1j,)),
            ((-0.3j,), (0.9 + 0.1j,)),
        ):
            if n == 2:
                z, zeta = (z[0], 0.3 * z[0]), (zeta[0] * 0.9, 0.2)
            cases.append((kid, z, zeta))
    worst_ratio = 0.0
    bound_ok = True
    for kid, z, zeta in cases:
        p = kernel_spec(kid).exponent
        w = abs(sum(a * b.conjugate() for a, b in zip(z, zeta)))
        exact = kernel_eval(kid, z, zeta)
        err = {}
        for order in range(5, 21):
            e = abs(exact - neumann_partial_sum(kid, z, zeta, order))
            err[order] = e
            bound_ok &= e <= neumann_tail_bound(kid, w, order) * (1 + 1e-8) + 1e-15
        # divide out the polynomial growth of the leading tail coefficient
        norm = lambda k: err[k] / math.comb(k + p, p - 1)
        observed = (norm(20) / norm(5)) ** (1 / 15)
        worst_ratio = max(worst_ratio, abs(observed / w - 1))
    report(
        9,
        bound_ok and worst_ratio <= 0.05,
        f"error <= tail bound for orders 5..20: {bound_ok}; observed ratio within {100 * worst_ratio:.1f}% of |<z,zeta>| (limit 5%)",
    )


def test_10_cli_determinism():
    runs = [
        ["verify", "--domain", "ball2", "--f", "z1^2 zb2 + 1/3i z2", "--z", "(0.2,0.1i)", "--z", "(-0.3+0.1i,0.4)"],
        ["verify", "--domain", "disc", "--n-radial", "256", "--f", "z^3 zb^2", "--z", "0.3-0.4i"],
    ]
    same = True
    for argv in runs:
        outs = [
            subprocess.run([sys.executable, "-m", "bergszego", *argv, "--workers", w], capture_output=True).stdout
            for w in ("1", "4")
        ]
        same &= bool(outs[0]) and outs[0] == outs[1]
    report(10, same, "verify CSV byte-identical for --workers 1 and --workers 4")


def test_11_ball_six_term_report():
    z = (0.2, 0.1j)
    parts = []
    ok = True
    for spec in ("1", "z1", "z1 zb1"):
        rep = ball_terms(parse_poly(spec, 2), z)
        ok &= set(rep.terms) == set("ABCDEF") and math.isfinite(rep.stokes_defect)
        parts.append(f"{spec}: {rep.stokes_defect:.4g}")
    report(11, ok, "six grouped ball integrals computed; defect vs szegoSide " + ", ".join(parts))
