#!/usr/bin/env python3
"""Freeze high-precision reference values for the bound formulas.

Writes tests/data/bound_oracle.json with 50-digit mpmath evaluations of the
confidence term, the selector complexity count, and the full bound, rounded
to 12 significant digits. Run from the repository root; the output is
committed so the C++ tests never depend on Python at build time.
"""

import json
import math
import pathlib

import mpmath as mp

mp.mp.dps = 50


def c_term(n, q, delta, rho):
    n = mp.mpf(n)
    delta = mp.mpf(delta)
    rho = mp.mpf(rho)
    tail = mp.sqrt(mp.log(4 / delta) / n)
    if q == 1:
        return tail
    lq = mp.log(q)
    arg = rho * rho * n / lq
    if arg <= 1:
        raise ValueError("log argument out of domain")
    return (1 / delta) * mp.sqrt(lq / n) * (2 + mp.sqrt(mp.log(arg))) + tail


def selector_rademacher(n, q):
    n = mp.mpf(n)
    return q * (1 + mp.log(n)) / mp.sqrt(n)


def count_hypotheses(n, q):
    return n * math.comb(n - 1, q - 1)


def bound_rhs(n, q, delta, rho, kappa, rademacher_h, empirical_risk):
    n_f = mp.mpf(n)
    term = (q * (1 + mp.log(n_f)) + mp.mpf(kappa)) / mp.sqrt(n_f)
    rhs = (
        mp.mpf(empirical_risk)
        + 4 * q * (term + max(mp.mpf(r) for r in rademacher_h))
        + c_term(n, q, delta, rho)
    )
    return rhs


def intermediate_rhs(n, q, delta, rho, kappa, rademacher_h, empirical_risk, n_k_plus):
    n_f = mp.mpf(n)
    term = (q * (1 + mp.log(n_f)) + mp.mpf(kappa)) / mp.sqrt(n_f)
    total = mp.mpf(empirical_risk)
    for k in range(q):
        total += min(mp.mpf(n_k_plus[k]) / n_f, 4 * (mp.mpf(rademacher_h[k]) + term))
    return total + c_term(n, q + 1, delta, rho)


def fmt(x):
    return mp.nstr(mp.mpf(x), 12, strip_zeros=False)


def main():
    grid = []
    # c_term over a spread of (n, q, delta, rho)
    for n in (100, 1000, 10**4, 10**5, 10**6):
        for q in (1, 2, 5, 20):
            for delta in (0.05, 0.25):
                if delta > 1.0 / q:
                    continue
                for rho in (1.0, 2.0):
                    try:
                        v = c_term(n, q, delta, rho)
                    except ValueError:
                        continue
                    grid.append(
                        {
                            "kind": "c_term",
                            "n": n,
                            "q": q,
                            "delta": delta,
                            "rho": rho,
                            "value": fmt(v),
                        }
                    )

    # full bound with synthetic per-cluster Rademacher numbers
    for n, q, delta, risks, kappa, risk_hat in [
        (10**4, 2, 0.25, [0.01, 0.02], 1.0, 0.05),
        (10**5, 3, 0.1, [0.005, 0.004, 0.006], 1.0, 0.0),
        (10**6, 5, 0.05, [0.001] * 5, 2.0, 0.12),
        (10**7, 2, 0.25, [0.0002, 0.0001], 1.0, 0.02),
    ]:
        v = bound_rhs(n, q, delta, 1.0, kappa, risks, risk_hat)
        grid.append(
            {
                "kind": "bound_rhs",
                "n": n,
                "q": q,
                "delta": delta,
                "rho": 1.0,
                "kappa": kappa,
                "rademacher_h": risks,
                "empirical_risk": risk_hat,
                "value": fmt(v),
            }
        )

    # intermediate (per-cluster) form with both min branches active
    for n, q, delta, risks, kappa, risk_hat, counts in [
        (10**4, 2, 0.25, [0.01, 0.02], 1.0, 0.05, [120, 9000]),
        (10**5, 3, 0.1, [0.005, 0.004, 0.006], 1.0, 0.0, [40, 50000, 3000]),
        (10**6, 5, 0.05, [0.001] * 5, 2.0, 0.12, [10, 20, 300000, 400, 500000]),
        (10**7, 2, 0.25, [0.0002, 0.0001], 1.0, 0.02, [5000000, 123]),
    ]:
        v = intermediate_rhs(n, q, delta, 1.0, kappa, risks, risk_hat, counts)
        grid.append(
            {
                "kind": "intermediate_rhs",
                "n": n,
                "q": q,
                "delta": delta,
                "rho": 1.0,
                "kappa": kappa,
                "rademacher_h": risks,
                "empirical_risk": risk_hat,
                "n_k_plus": counts,
                "value": fmt(v),
            }
        )

    # selector Rademacher bound values
    for n in (100, 10**4, 10**6):
        for q in (1, 3, 10):
            grid.append(
                {
                    "kind": "selector_rademacher",
                    "n": n,
                    "q": q,
                    "value": fmt(selector_rademacher(n, q)),
                }
            )

    # exact hypothesis counts (stringified, some exceed 2^64)
    for n, q in [(5, 3), (10, 1), (10, 10), (50, 7), (200, 10), (3000, 3), (10**4, 5)]:
        grid.append(
            {
                "kind": "count",
                "n": n,
                "q": q,
                "value": str(count_hypotheses(n, q)),
            }
        )

    out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "bound_oracle.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps({"cases": grid}, indent=1) + "\n")
    print(f"wrote {out} ({len(grid)} cases)")


if __name__ == "__main__":
    main()
