#!/usr/bin/env python3
"""Generate reference values for the effective coupling formulas.

Evaluates the printed closed forms symbolically (sympy rationals, rounded to
double at the end) on deterministic pseudo-random parameter sets, so the C++
evaluators can be checked against an independent route at 1e-12 relative
error. Output: coupling_fixtures.json next to this script.
"""

import json
import random
from fractions import Fraction

import sympy as sp


def cyc(j):
    return j % 3


def bosonic(ju, jd, uu, dd, ud):
    pu = ju[0] * ju[1] * ju[2]
    pd = jd[0] * jd[1] * jd[2]
    out = {}
    for j in range(3):
        a_up = -pu * (sp.Rational(9, 2) / uu**2 + sp.Rational(3, 2) / ud**2 + 3 / (ud * uu)) \
               - ju[j]**2 * (1 / uu + 1 / (2 * ud))
        a_dn = -pd * (sp.Rational(9, 2) / dd**2 + sp.Rational(3, 2) / ud**2 + 3 / (ud * dd)) \
               - jd[j]**2 * (1 / dd + 1 / (2 * ud))
        out[f"A_{j+1}"] = a_up + a_dn

        b_up = -(ju[j]**2 + ju[cyc(j + 2)]**2) / uu - (pu / uu) * (1 / ud + sp.Rational(9, 2) / uu)
        b_dn = -(jd[j]**2 + jd[cyc(j + 2)]**2) / dd - (pd / dd) * (1 / ud + sp.Rational(9, 2) / dd)
        out[f"B_{j+1}"] = b_up - b_dn

        l1_up = -pu * (sp.Rational(9, 2) / uu**2 - sp.Rational(1, 2) / ud**2 - 1 / (ud * uu)) \
                - ju[j]**2 * (1 / uu - 1 / (2 * ud))
        l1_dn = -pd * (sp.Rational(9, 2) / dd**2 - sp.Rational(1, 2) / ud**2 - 1 / (ud * dd)) \
                - jd[j]**2 * (1 / dd - 1 / (2 * ud))
        out[f"lam1_{j+1}"] = l1_up + l1_dn

        l2_up = -jd[j] * ju[cyc(j + 1)] * ju[cyc(j + 2)] * \
                (sp.Rational(3, 2) / ud**2 + sp.Rational(1, 2) / uu**2 + 1 / (ud * uu)) \
                - ju[j] * jd[j] / (2 * ud)
        l2_dn = -ju[j] * jd[cyc(j + 1)] * jd[cyc(j + 2)] * \
                (sp.Rational(3, 2) / ud**2 + sp.Rational(1, 2) / dd**2 + 1 / (ud * dd)) \
                - jd[j] * ju[j] / (2 * ud)
        out[f"lam2_{j+1}"] = l2_up + l2_dn

        l4_up = -(ju[j] * ju[cyc(j + 1)] * jd[cyc(j + 2)] / uu) * (1 / (2 * uu) + 1 / ud)
        l4_dn = -(jd[j] * jd[cyc(j + 1)] * ju[cyc(j + 2)] / dd) * (1 / (2 * dd) + 1 / ud)
        out[f"lam4_{j+1}"] = l4_up - l4_dn

    l3_up = -(pu / uu) * (sp.Rational(3, 2) / uu - 1 / ud)
    l3_dn = -(pd / dd) * (sp.Rational(3, 2) / dd - 1 / ud)
    out["lam3"] = l3_up - l3_dn
    return out


def fermionic(ju, jd, u):
    pu = ju[0] * ju[1] * ju[2]
    pd = jd[0] * jd[1] * jd[2]
    out = {}
    for j in range(3):
        out[f"mu1_{j+1}"] = -(ju[j]**2 + jd[j]**2) / (2 * u)
        out[f"mu2_{j+1}"] = ju[j] * jd[j] / u
        out[f"mu4_{j+1}"] = sp.Rational(3, 2) / u**2 * \
            (ju[j] * ju[cyc(j + 1)] * jd[cyc(j + 2)] - jd[j] * jd[cyc(j + 1)] * ju[cyc(j + 2)])
    out["mu3"] = -(pu - pd) / (2 * u**2)
    return out


def rnd_rational(rng, lo, hi, denom=10000):
    return sp.Rational(Fraction(rng.randint(int(lo * denom), int(hi * denom)), denom))


def main():
    rng = random.Random(20240817)
    cases = []

    # pinned case: J_up = 0.1 U, J_down = 0.05 U, all collisions equal
    ju = [sp.Rational(1, 10)] * 3
    jd = [sp.Rational(1, 20)] * 3
    cases.append({
        "kind": "bosonic",
        "j_up": [float(v) for v in ju],
        "j_down": [float(v) for v in jd],
        "u_upup": 1.0, "u_downdown": 1.0, "u_updown": 1.0,
        "couplings": {k: float(sp.nsimplify(v)) for k, v in
                      bosonic(ju, jd, sp.Integer(1), sp.Integer(1), sp.Integer(1)).items()},
    })

    # pinned case: single-species fermionic tunneling
    ju = [sp.Rational(3, 25)] * 3
    jd = [sp.Integer(0)] * 3
    cases.append({
        "kind": "fermionic",
        "j_up": [float(v) for v in ju],
        "j_down": [float(v) for v in jd],
        "u_updown": 1.0,
        "couplings": {k: float(v) for k, v in fermionic(ju, jd, sp.Integer(1)).items()},
    })

    for i in range(50):
        ju = [rnd_rational(rng, -0.3, 0.3) for _ in range(3)]
        jd = [rnd_rational(rng, -0.3, 0.3) for _ in range(3)]
        if i % 2 == 0:
            uu = rnd_rational(rng, 0.5, 3.0)
            dd = rnd_rational(rng, 0.5, 3.0)
            ud = rnd_rational(rng, 0.5, 3.0)
            vals = bosonic(ju, jd, uu, dd, ud)
            cases.append({
                "kind": "bosonic",
                "j_up": [float(v) for v in ju],
                "j_down": [float(v) for v in jd],
                "u_upup": float(uu), "u_downdown": float(dd), "u_updown": float(ud),
                "couplings": {k: float(v) for k, v in vals.items()},
            })
        else:
            u = rnd_rational(rng, 0.5, 3.0)
            vals = fermionic(ju, jd, u)
            cases.append({
                "kind": "fermionic",
                "j_up": [float(v) for v in ju],
                "j_down": [float(v) for v in jd],
                "u_updown": float(u),
                "couplings": {k: float(v) for k, v in vals.items()},
            })

    with open("coupling_fixtures.json", "w") as fh:
        json.dump(cases, fh, indent=1)
    print(f"wrote {len(cases)} cases")


if __name__ == "__main__":
    main()
