"""Named end-to-end scenarios with embedded expected values.

Each scenario replays one worked walk and checks the computed objects
against their known values.  Expected values carry a provenance tag:
[reference] for closed-form values of the underlying theory and
[derived] for values fixed by an independent oracle run (enumeration,
brute-force convolution) during development.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .dance import analyze_dance, spectral_gap, theta_by_integration
from .group import GroupSpec, subgroup_generated
from .llt import (
    build_attractor,
    classify,
    llt_sup_error,
    tv_to_uniform_coset,
)
from .measure import Distribution

half = Fraction(1, 2)
quarter = Fraction(1, 4)

Z12 = GroupSpec([12])
Z9 = GroupSpec([9])
Z2 = GroupSpec((), 2)
Z4Z = GroupSpec([4], 1)
Z4Z6 = GroupSpec([4, 6])


# Unit-modulus locus of the two-point walk on Z_4 x Z_6 with support
# difference (A, B), as generators inside the dual (isomorphic copy of)
# Z_4 x Z_6.  Derived by enumerating characters (eta, zeta) with
# A*eta/4 + B*zeta/6 = 0 mod 1 for each of the 24 difference classes.
TWO_POINT_Z4Z6_LOCUS = {
    (0, 0): [(1, 0), (0, 1)],
    (1, 0): [(0, 1)],
    (2, 0): [(2, 0), (0, 1)],
    (3, 0): [(0, 1)],
    (0, 1): [(1, 0)],
    (1, 1): [(2, 3)],
    (2, 1): [(2, 0), (1, 3)],
    (3, 1): [(2, 3)],
    (0, 2): [(1, 0), (0, 3)],
    (1, 2): [(0, 3)],
    (2, 2): [(2, 0), (0, 3)],
    (3, 2): [(0, 3)],
    (0, 3): [(1, 0), (0, 2)],
    (1, 3): [(0, 2), (2, 1)],
    (2, 3): [(0, 2), (1, 1)],
    (3, 3): [(0, 2), (2, 1)],
    (0, 4): [(1, 0), (0, 3)],
    (1, 4): [(0, 3)],
    (2, 4): [(0, 3), (2, 0)],
    (3, 4): [(0, 3)],
    (0, 5): [(1, 0)],
    (1, 5): [(2, 3)],
    (2, 5): [(2, 0), (1, 3)],
    (3, 5): [(2, 3)],
}


@dataclass(frozen=True)
class Check:
    label: str
    passed: bool
    detail: str = ""


def _walk(group, weighted_points) -> Distribution:
    return Distribution(group, {group.element(*pt): w for pt, w in weighted_points})


def z12_walk() -> Distribution:
    return _walk(Z12, [(([-1],), half), (([2],), half)])


def z9_walk(a, b) -> Distribution:
    return _walk(Z9, [(([a],), half), (([b],), half)])


def z4z6_walk() -> Distribution:
    return _walk(Z4Z6, [(([1, 1],), half), (([0, 3],), half)])


def elevator1() -> Distribution:
    return _walk(Z4Z, [(([1], [1]), half), (([-1], [1]), half)])


def elevator2() -> Distribution:
    return _walk(Z4Z, [(([1], [0]), quarter), (([-1], [0]), quarter),
                       (([0], [1]), quarter), (([0], [-1]), quarter)])


def spitzer() -> Distribution:
    return _walk(Z2, [(((), [1, 0]), half), (((), [0, 1]), half)])


def run_z12() -> list[Check]:
    p = z12_walk()
    checks = []
    ann = analyze_dance(p).walk_subgroup.annihilator()
    got = sorted(e.torsion[0] for e in ann.elements())
    checks.append(Check("unit-modulus locus equals {0,4,8} [reference]",
                        got == [0, 4, 8], f"got {got}"))
    rho = spectral_gap(p).rho
    checks.append(Check("spectral gap 1/sqrt(2) [reference]",
                        abs(rho - 1 / math.sqrt(2)) <= 1e-12, f"rho={rho!r}"))
    c = classify(p)
    checks.append(Check("irreducible with period 3 [reference]",
                        (c.irreducible, c.aperiodic, c.period) == ("yes", "no", 3),
                        f"{c.irreducible}/{c.aperiodic}/{c.period}"))
    a = build_attractor(p)
    ok = True
    worst = ""
    for n in range(10, 31):
        err = llt_sup_error(p, a, n).sup_error_exact
        bound = (9 / 12) * (1 / math.sqrt(2)) ** n * (1 + 1e-9)
        if float(err) > bound:
            ok = False
            worst = f"n={n}: {float(err):.3e} > {bound:.3e}"
            break
    checks.append(Check("sup error within (9/12) rho^n for n=10..30 [reference]", ok, worst))
    return checks


def run_z9_a1b3() -> list[Check]:
    p = z9_walk(1, 3)
    checks = []
    c = classify(p)
    checks.append(Check("irreducible and aperiodic [reference]",
                        (c.irreducible, c.aperiodic) == ("yes", "yes"),
                        f"{c.irreducible}/{c.aperiodic}"))
    rho = spectral_gap(p).rho
    expected = 0.5 * math.sqrt(2 + math.sqrt(3) * math.sin(math.pi / 9) + math.cos(math.pi / 9))
    checks.append(Check("spectral gap matches closed form [reference]",
                        abs(rho - expected) <= 1e-9, f"rho={rho!r} expected={expected!r}"))
    return checks


def run_z9_a1b4() -> list[Check]:
    p = z9_walk(1, 4)
    checks = []
    c = classify(p)
    checks.append(Check("period 3 [reference]", c.period == 3, f"period={c.period}"))
    ok = True
    worst = ""
    for n in range(1, 26):
        tv = tv_to_uniform_coset(p, n).tv_exact
        if tv > Fraction(1, 2 ** n):
            ok = False
            worst = f"n={n}: tv={tv}"
            break
    checks.append(Check("exact TV below 2^-n for n<=25 [reference]", ok, worst))
    return checks


def run_z9_a0b3() -> list[Check]:
    p = z9_walk(0, 3)
    checks = []
    c = classify(p)
    checks.append(Check("not irreducible [reference]", c.irreducible == "no",
                        f"irreducible={c.irreducible}"))
    d = analyze_dance(p)
    static = all(d.theta(n, x) == d.theta(0, x) for n in range(10) for x in Z9.elements())
    checks.append(Check("dance function is time independent [reference]", static))
    return checks


def run_z4z6() -> list[Check]:
    p = z4z6_walk()
    checks = []
    d = analyze_dance(p)
    checks.append(Check("locus invariants Z_2 [reference]",
                        d.omega_invariants == ((2,), 0), f"{d.omega_invariants}"))
    rho = spectral_gap(p).rho
    expected = math.sqrt(2 + math.sqrt(3)) / 2
    checks.append(Check("spectral gap sqrt(2+sqrt(3))/2 [reference]",
                        abs(rho - expected) <= 1e-12, f"rho={rho!r}"))
    formula = all(d.theta(n, x) == 1 + (-1) ** (n + x.torsion[1])
                  for n in range(8) for x in Z4Z6.elements())
    checks.append(Check("theta(n,x,y) = 1 + (-1)^(n+y) [reference]", formula))
    oracle = all(abs(theta_by_integration(p, n, x) - d.theta(n, x)) < 1e-9
                 for n in range(8) for x in Z4Z6.elements())
    checks.append(Check("integration oracle agrees with indicator [derived]", oracle))
    return checks


def run_z4z6_table() -> list[Check]:
    dual = Z4Z6.dual()
    checks = []
    hits = 0
    for (a, b), gens in sorted(TWO_POINT_Z4Z6_LOCUS.items()):
        p = Distribution(Z4Z6, {Z4Z6.element([a, b]): half, Z4Z6.element([0, 0]): half}
                         if (a, b) != (0, 0) else {Z4Z6.element([0, 0]): 1})
        got = analyze_dance(p).walk_subgroup.annihilator()
        want = subgroup_generated(dual, [dual.element(g) for g in gens])
        ok = got == want
        hits += ok
        if not ok:
            checks.append(Check(f"locus for difference ({a},{b}) [reference]", False,
                                f"got {got!r} want {want!r}"))
    checks.insert(0, Check("locus table matches for all 24 differences [reference]",
                           hits == 24, f"{hits}/24"))
    return checks


def run_elevator1() -> list[Check]:
    p = elevator1()
    checks = []
    a = build_attractor(p)
    checks.append(Check("rank-0 attractor over torsion order 4 [reference]",
                        a.case == "d0" and a.torsion_order == 4))
    exact = all(llt_sup_error(p, a, n).sup_error_exact == 0 for n in range(1, 21))
    checks.append(Check("sup error is exactly zero for n<=20 [reference]", exact))
    rho = spectral_gap(p).rho
    checks.append(Check("spectral gap exactly zero [reference]", rho == 0.0, f"rho={rho!r}"))
    return checks


def run_elevator2() -> list[Check]:
    p = elevator2()
    checks = []
    a = build_attractor(p)
    checks.append(Check("rank 1, mean 0, variance 1/2 [reference]",
                        a.rank_d == 1 and a.moments.mean == (0,)
                        and a.moments.covariance == ((half,),)))
    d = analyze_dance(p)
    grid = all(d.theta(n, Z4Z.element([at], [b])) == 1 + (-1) ** (n - at - b)
               for at in range(5) for b in range(-2, 3) for n in range(1, 21))
    checks.append(Check("theta(n,(a,b)) = 1 + (-1)^(n-a-b) on the grid [reference]", grid))
    scaled = [llt_sup_error(p, a, n).scaled_sup_error for n in (25, 50, 100, 200)]
    checks.append(Check("sqrt(n)-scaled sup error strictly decreasing [derived]",
                        all(x > y for x, y in zip(scaled, scaled[1:])),
                        " > ".join(f"{v:.3e}" for v in scaled)))
    return checks


# Ceiling frozen from the development oracle run of the exact n=200
# convolution (measured 9.9673e-4; 5% slack for float jitter).
SPITZER_SCALED_ERROR_N200_MAX = 1.05e-3


def run_spitzer() -> list[Check]:
    p = spitzer()
    checks = []
    a = build_attractor(p)
    checks.append(Check("mean 1/2 and variance 1/4 [reference]",
                        a.moments.mean == (half,) and a.moments.covariance == ((quarter,),)))
    d = analyze_dance(p)
    diag = all(d.theta(n, Z2.element((), [x, y])) == (1 if x + y == n else 0)
               for n in range(8) for x in range(-3, 10) for y in range(-3, 10))
    checks.append(Check("theta is the indicator of x+y=n [reference]", diag))
    scaled = [llt_sup_error(p, a, n).scaled_sup_error for n in (25, 50, 100, 200)]
    checks.append(Check("sqrt(n)-scaled sup error strictly decreasing [derived]",
                        all(x > y for x, y in zip(scaled, scaled[1:])),
                        " > ".join(f"{v:.3e}" for v in scaled)))
    checks.append(Check("n=200 scaled error under frozen ceiling [derived]",
                        scaled[-1] <= SPITZER_SCALED_ERROR_N200_MAX,
                        f"{scaled[-1]:.4e} <= {SPITZER_SCALED_ERROR_N200_MAX:.2e}"))
    return checks


SCENARIOS = {
    "z12": run_z12,
    "z9-a1b3": run_z9_a1b3,
    "z9-a1b4": run_z9_a1b4,
    "z9-a0b3": run_z9_a0b3,
    "z4z6": run_z4z6,
    "z4z6-table": run_z4z6_table,
    "elevator1": run_elevator1,
    "elevator2": run_elevator2,
    "spitzer": run_spitzer,
}
