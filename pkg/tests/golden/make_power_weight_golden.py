"""Writes power_weight_golden.json: verdicts of the power-weight inequalities
evaluated in exact rational arithmetic, without importing the package.

    python3 tests/golden/make_power_weight_golden.py
"""
import itertools
import json
from fractions import Fraction as F
from pathlib import Path

OUT = Path(__file__).with_name("power_weight_golden.json")


def conj(p):
    return p / (p - 1)


def sufficient(n, p, q, a, r, s):
    pc = conj(p)
    ok = 1 < p <= q and a > 0 and r > 0 and a * pc < 2 * (n + 1)
    if s is None:
        ok = ok and q * r < 4 * n + 1
        return ok and -a / (2 * (n + 1)) + 1 / pc + r / (4 * n + 1) - 1 / q == 0
    ok = ok and s > 0 and r * (2 * n + 1) < 2 * n * s and q * r < 2 * n
    return ok and -a / (2 * (n + 1)) + 1 / pc + r / (2 * n) - 1 / q == 0


def necessary(n, p, q, a, r, s):
    pc = conj(p)
    ok = p > 1 and q > 1 and a > 0 and r > 0 and a * pc < 2 * (n + 1)
    if s is None:
        x = -F(n + 1) / q - a / 2 + (n + 1) / pc
        return ok and -r < x < r / 2, None
    ok = ok and s > 0 and q * r < 2 * n
    y = -a / 2 + (n + 1) / pc + (2 * n - q * r) / (2 * q)
    if q * s < 2 * n + 1:
        return ok and y + (-2 * n + q * s - 1) / q >= 0, "q*sigma<2n+1"
    if q * s == 2 * n + 1:
        return ok and y > 0, "q*sigma=2n+1"
    return ok and y >= 0, "q*sigma>2n+1"


def balanced_rho(n, p, q, a, s):
    # solves the balance equation for rho
    pc = conj(p)
    d = 4 * n + 1 if s is None else 2 * n
    return d * (a / (2 * (n + 1)) - 1 / pc + 1 / q)


def lattice():
    pqs = [(F(2), F(2)), (F(3, 2), F(2)), (F(2), F(4)), (F(4, 3), F(4)), (F(3), F(2))]
    alphas = [F(1, 2), F(1), F(2)]
    pts = []
    for n, (p, q), a in itertools.product((1, 2), pqs, alphas):
        rb = balanced_rho(n, p, q, a, None)
        for r in (rb, F(5, 4)):
            pts.append((n, p, q, a, r, None))
    for n, (p, q), a in itertools.product((1, 2), pqs[:3], alphas[:2]):
        for s in ((2 * n + 1) / q, F(3), (2 * n + 1) / (2 * q)):
            rb = balanced_rho(n, p, q, a, s)
            pts.append((n, p, q, a, rb, s))
    pts.append((1, F(2), F(2), F(0), F(0), None))
    # keep 50, spread over the whole list
    step = len(pts) / 50
    return [pts[int(i * step)] for i in range(50)]


def main():
    rows = []
    for n, p, q, a, r, s in lattice():
        nec, case = necessary(n, p, q, a, r, s)
        rows.append(dict(n=n, p=str(p), q=str(q), alpha=str(a), rho=str(r),
                         sigma=None if s is None else str(s),
                         sufficient=bool(sufficient(n, p, q, a, r, s)), necessary=bool(nec), case=case))
    OUT.write_text(json.dumps(rows, indent=1) + "\n")
    print(f"{len(rows)} points, {sum(x['sufficient'] for x in rows)} sufficient, "
          f"{sum(x['necessary'] for x in rows)} necessary")


if __name__ == "__main__":
    main()
