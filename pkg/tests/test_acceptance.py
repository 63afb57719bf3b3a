"""One test per acceptance criterion; each records a PASS/FAIL line.

Criterion 11 is split by constant family and 13 by identity so that each
line names what it measures.
"""
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE
from strichartz import conditions as cond
from strichartz import paley as pal
from strichartz import rearrange as rea
from strichartz import sublaplacian as sub
from strichartz import transform as tr
from strichartz.functions import BumpIndicator, Gaussian
from strichartz.geometry import HPoint
from strichartz.specfn import bessel_zero, laguerre_first_zero, laguerre_scaled

S_VALUES = (0.01, 0.1, 0.4, 0.7, 0.9)


def record(label, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def family2():
    fam = cond.gaussian_family(2)
    return [(f, tr.SpectralTable.build(f)) for f in fam]


def test_01_plancherel():
    worst = 0.0
    for n in (1, 2):
        for f in cond.gaussian_family(n):
            worst = max(worst, tr.plancherel_check(f).rel_err)
    record("1 plancherel", worst <= 1e-6, f"max rel err {worst:.2e} over 18 Gaussians (n=1,2)")


def test_02_inversion():
    rng = np.random.default_rng(0)
    pts = [HPoint((complex(*rng.normal(size=2)) * 0.6,), float(rng.normal())) for _ in range(20)]
    err = tr.inversion_check(Gaussian(1, 1, 1), pts)
    record("2 inversion", err <= 1e-4, f"max pointwise error {err:.2e} at 20 points")


def test_03_sup_bound():
    fs = [Gaussian(1, 1, 1), Gaussian(0.5, 2, 1), Gaussian(1, 1, 2), BumpIndicator(1, 1, 1), BumpIndicator(0.5, 2, 2)]
    spreads, ok = [], True
    for f in fs:
        a, b = tr.sup_bound_check(f, 1), tr.sup_bound_check(f, 2)
        ok &= math.isfinite(a) and math.isfinite(b) and b <= 1 + 1e-9
        spreads.append(abs(b - a) / b)
    ok &= max(spreads) <= 0.05
    record("3 sup |f~|/||f||_1", ok, f"finite, max change under doubling {max(spreads):.2e}")


def test_04_laguerre_zero_bound():
    fails = 0
    for n in range(1, 6):
        j = bessel_zero(n - 1, 1).value
        for k in range(1, 51):
            fails += not laguerre_first_zero(k, n) > j * j / (4 * (k + n / 2))
    inter = 0
    for nu in range(0, 11):
        inter += not bessel_zero(nu, 1).value < bessel_zero(nu + 1, 1).value < bessel_zero(nu, 2).value
    record("4 laguerre zero bound", fails == 0 and inter == 0,
           f"{fails} of 250 bound failures, {inter} of 11 interlacing failures")


def test_05_B_k_lower_bound():
    rng = np.random.default_rng(5)
    fails = total = 0
    for n in range(1, 5):
        for k in range(1, 11):
            b, B = cond.beta_k(k, n), cond.B_k(k, n)
            x = rng.uniform(0, b, 10000)
            vals = laguerre_scaled(k, n - 1, x)
            fails += int(np.sum(~(vals > B)))
            total += x.size
    record("5 B_k lower bound", fails == 0, f"{fails} failures in {total} points")


def test_06_rearrangement_exponents():
    n, alpha, rho, sigma = 1, 1.0, 1.25, 3.0
    sv, _ = rea.decreasing_rearrangement(rea.Valpha(alpha, n).reciprocal()).fit(1e-1, 1e1)
    su, _ = rea.decreasing_rearrangement(rea.Urho(rho, n)).fit(1e-1, 1e1)
    ss, _ = rea.decreasing_rearrangement(rea.UsigmaRho(sigma, rho, n)).fit(1e-1, 1e1)
    ok = abs(sv + alpha / (2 * (n + 1))) <= 0.01
    ok &= su >= -rho / (4 * n + 1) - 0.01
    ok &= abs(ss + rho / (2 * n)) <= 0.01
    edge = rho * (2 * n + 1) / (2 * n)
    flags = [not rea.UsigmaRho(edge, rho, n).integrable, not rea.UsigmaRho(0.9 * edge, rho, n).integrable,
             rea.UsigmaRho(1.01 * edge, rho, n).integrable]
    ok &= all(flags)
    record("6 rearrangement slopes", ok,
           f"1/v: {sv:.4f} (want {-alpha / 4:.4f}), u_rho: {su:.4f} (>= {-rho / 5:.4f}), "
           f"u_sigma_rho: {ss:.4f} (want {-rho / 2:.4f}), divergence flags {flags}")


def test_07_pitt_sufficient():
    V = rea.decreasing_rearrangement(rea.Valpha(1.0, 1).reciprocal())
    fin = cond.pitt_sufficient_sup(rea.decreasing_rearrangement(rea.Urho(1.25, 1)), V, (2, 2), v_reciprocal=True)
    inf = cond.pitt_sufficient_sup(rea.decreasing_rearrangement(rea.Urho(2.0, 1)), V, (2, 2), v_reciprocal=True)
    fam = cond.gaussian_family(1)
    u, v = rea.Urho(1.25, 1), rea.Valpha(1.0, 1)
    c1 = cond.pitt_empirical(fam, u, v, (2, 2), refine=1)["constant"]
    c2 = cond.pitt_empirical(fam, u, v, (2, 2), refine=2)["constant"]
    spread = abs(c2 - c1) / c2
    ok = fin.verdict and not inf.verdict and spread <= 1e-3
    record("7 pitt sufficient", ok, f"rho=5/4 sup {fin.supremum:.4f}, rho=2 {inf.reason}; "
           f"empirical constant {c1:.7f} vs {c2:.7f}")


def test_08_power_weight_golden():
    rows = json.loads((Path(__file__).parent / "golden" / "power_weight_golden.json").read_text())
    f = lambda x: None if x is None else float(Fraction(x))
    bad = 0
    for r in rows:
        args = (r["n"], (f(r["p"]), f(r["q"])), f(r["alpha"]), f(r["rho"]), f(r["sigma"]))
        nec = cond.power_weight_necessary(*args)
        bad += cond.power_weight_sufficient(*args)["verdict"] != r["sufficient"]
        bad += (nec["verdict"], nec["case"]) != (r["necessary"], r["case"])
    record("8 power-weight theorems", bad == 0 and len(rows) == 50, f"{bad} mismatches on {len(rows)} points")


def test_09_gamma_identities():
    worst = 0.0
    for n in range(2, 7):
        for s in np.arange(0.05, 0.951, 0.05):
            if n - 1 - s > 0:
                b = sub.constants(n, float(s))
                worst = max(worst, abs(b.bc_product - b.bc_expected) / b.bc_expected)
    dup = max(abs(sub.duplication_residual(z)) for z in np.linspace(0.05, 20, 400))
    beta = max(sub.beta_integral_check(a, b)["rel_err"] for a, b in [(1, 3), (0.5, 2), (0.5, 4), (0.3, 1.2), (2.5, 6)])
    ok = worst <= 1e-10 and dup < 1e-12 and beta < 1e-8
    record("9 gamma identities", ok, f"b*c rel err {worst:.1e}, duplication {dup:.1e}, beta {beta:.1e}")


def test_10_sharp_bounds():
    order = all(sub.sharp_bounds(n, float(s))[0] < sub.sharp_bounds(n, float(s))[1]
                for n in (2, 3, 4, 5, 6) for s in np.arange(0.1, 0.91, 0.1))
    errs, drift = [], []
    for n, s in [(2, 0.3), (3, 0.5), (4, 0.8), (1, 0.5)]:
        a = sub.rayleigh_upper_bound_check(n, s, 1.0)
        b = sub.rayleigh_upper_bound_check(n, s, 2.0)
        errs.append(a["rel_err"])
        drift.append(abs(a["quotient"] - b["quotient"]) / a["quotient"])
    ok = order and max(errs) <= 1e-4 and max(drift) <= 1e-6
    record("10 sharp-constant bounds", ok,
           f"bounds ordered: {order}, rayleigh rel err {max(errs):.1e}, rho drift {max(drift):.1e}")


def _margins(family, kind, variant, s_values, **kw):
    fn = sub.verify_hardy if kind == "hardy" else sub.verify_pitt_dual
    out = []
    for s in s_values:
        for f, t in family:
            rep = fn(f, s, variant, table=t, **kw)
            scale = max(abs(rep.lhs), abs(rep.rhs)) if math.isfinite(rep.rhs) else abs(rep.lhs)
            out.append((s, rep.margin / scale))
    return out


def _margin_criterion(label, family, pairs):
    rows = []
    for kind, variant in pairs:
        for s, m in _margins(family, kind, variant, S_VALUES):
            rows.append((f"{kind}:{variant}", s, m))
    bad = [r for r in rows if not (r[2] >= -1e-6)]
    worst = min(rows, key=lambda r: (not math.isnan(r[2]), r[2]))
    record(label, not bad, f"{len(bad)} of {len(rows)} below -1e-6; worst {worst[0]} at s={worst[1]}: {worst[2]:.3g}")


def test_11a_margins_consistent_constants(family2):
    pairs = [("hardy", "trace"), ("hardy", "zt"), ("hardy", "nonhom"), ("hardy", "nonhom_L"),
             ("pitt", "zt"), ("pitt", "trace"), ("pitt", "nonhom_a"), ("pitt", "nonhom_b")]
    f, t = family2[4]
    small = [sub.verify_hardy(f, s, "trace", table=t).margin / f.l2_norm_sq() for s in (1e-2, 1e-3, 1e-4)]
    assert small[0] > small[1] > small[2] >= 0 and small[2] < 1e-3
    _margin_criterion("11a hardy/pitt margins (trace, zt, nonhomogeneous)", family2, pairs)


def test_11b_margins_z_power_constants(family2):
    _margin_criterion("11b hardy/pitt margins (|z| powers with d_ns)", family2, [("hardy", "z_dual"), ("pitt", "z")])


def test_11c_margins_trace_with_2pi(family2):
    _margin_criterion("11c pitt margin (trace, extra 1/(2 pi))", family2, [("pitt", "trace_2pi")])


def test_11d_margins_nonhom_inverse_weight(family2):
    _margin_criterion("11d pitt margin (non-homogeneous, weight v^-2)", family2, [("pitt", "nonhom_a_inv")])


def test_11e_margins_homogeneous(family2):
    _margin_criterion("11e hardy/pitt margins (homogeneous, ||V_s|| not given)", family2,
                      [("hardy", "hom"), ("pitt", "hom"), ("pitt", "hom_2pi")])


def test_12_paley():
    phi = pal.PowerDecay(5, 1)
    lc = pal.layer_cake_bound_check(phi)
    f = Gaussian(1, 1, 1)
    reps = {p: pal.paley_check(f, phi, p) for p in (1.1, 1.25, 1.5, 1.75, 2.0)}
    p2 = abs(reps[2.0].lhs - 1.0)
    ok = lc.verdict and all(r.verdict for r in reps.values()) and p2 <= 1e-6
    spreads = ", ".join(f"p={p}: {r.lhs:.4g} ({r.meta['spread']:.1e})" for p, r in reps.items())
    record("12 paley", ok, f"layer-cake max {lc.lhs:.4e} vs 2C {lc.rhs:.4e}; ratios {spreads}; p=2 vs 1: {p2:.1e}")


def test_13a_derivative_multiplier():
    errs = [tr.derivative_multiplier_check(f) for f in (Gaussian(1, 2, 1), Gaussian(0.5, 1, 2))]
    worst = max(e["rel_err_minus_i_lambda"] for e in errs)
    plus = max(e["rel_err_plus_i_lambda"] for e in errs)
    record("13a derivative multiplier (-i lambda)", worst <= 1e-5,
           f"rel err {worst:.3g} against -i lambda ({plus:.1e} against +i lambda)")


def test_13b_dilation_covariance():
    fs = (Gaussian(1, 1, 1), Gaussian(0.5, 2, 2), BumpIndicator(1, 1, 1))
    worst = max(tr.dilation_covariance_check(f, r) for f in fs for r in (0.5, 2.0))
    record("13b dilation covariance", worst <= 1e-5, f"max rel err {worst:.1e}")


def test_13c_homogeneity():
    cases = [(0, 0, (2, 2), 1, True), (1, 1, (2, 2), 1, False), (Fraction(1, 2), Fraction(1, 2), (2, 4), 1, True),
             (1, 2, (4, 4), 2, True), (Fraction(3, 2), 0, (2, 2), 3, False), (2, Fraction(2, 3), (3, 3), 3, True)]
    bad = [c for c in cases if cond.homogeneity_necessary(*c[:4])["verdict"] != c[4]]
    record("13c homogeneity condition", not bad, f"{len(bad)} of {len(cases)} exact cases wrong")
