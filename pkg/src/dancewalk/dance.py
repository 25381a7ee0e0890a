"""The coset dance of a random walk.

A finite-range walk driven by p confines its step-n distribution to the
moving coset W + n*x0, where x0 is any support point and W is the walk
subgroup generated by supp(p) - x0 (the choice of x0 does not matter).
The dance function

    theta(n, x) = c * [x - n*x0 in W]

records this, scaled by the integer c = |Tor(G/W)|, which is also the
total Haar mass of the unit-modulus locus of p's characteristic
function.  That locus,

    Omega(p) = { characters xi : |p_hat(xi)| = 1 },

is a closed subgroup of the dual, dual to G/W, and W is exactly its
annihilator.  Membership in Omega(p) is decided exactly: |p_hat(xi)| = 1
holds precisely when xi has the same rational phase at every support
point, so no floating-point comparison is ever involved.

The spectral gap rho is the largest characteristic-function modulus
strictly inside the unit circle, taken over the finite dual of the
torsion component; it controls all the exponential error terms.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .group import (
    DualPoint,
    Element,
    GroupSpec,
    Subgroup,
    UnsupportedOperationError,
    subgroup_generated,
)
from .intlinalg import InvariantViolationError
from .measure import Distribution, torsion_pushforward


@dataclass(frozen=True)
class DanceData:
    """Structural description of a walk's coset dance.

    walk_subgroup   the subgroup W generated by supp(p) - x0
    base_point      the canonical x0: least support point, lexicographic
    rank_d          free rank of W (0 exactly when W is finite)
    normalization_c total Haar mass of the unit-modulus locus; equals
                    |Tor(G/W)|, and |G|/|W| when G is finite
    omega_invariants  canonical invariants of G/W; the unit-modulus
                    locus is isomorphic to the dual of G/W
    """

    walk_subgroup: Subgroup
    base_point: Element
    rank_d: int
    normalization_c: int
    omega_invariants: tuple[tuple[int, ...], int]

    def theta(self, n: int, x: Element) -> int:
        """Dance function: normalization_c on the live coset, else 0."""
        if self.walk_subgroup.contains(x - n * self.base_point):
            return self.normalization_c
        return 0

    def coset_at(self, n: int) -> list[Element]:
        """The live coset W + n*x0 (finite walk subgroups only)."""
        shift = n * self.base_point
        return sorted(shift + w for w in self.walk_subgroup.elements())


@dataclass(frozen=True)
class SpectralGap:
    """Largest sub-unit characteristic-function modulus on the torsion dual."""

    rho: float
    achieved_at: DualPoint | None


def analyze_dance(p: Distribution) -> DanceData:
    """Compute the walk subgroup and dance data of a distribution.

    The base point is fixed as the least support element so results are
    reproducible; any other support point yields the same data.
    """
    support = p.support()
    x0 = support[0]
    walk = subgroup_generated(p.group, [x - x0 for x in support])
    moduli, free = walk.quotient_invariants()
    c = 1
    for m in moduli:
        c *= m
    return DanceData(
        walk_subgroup=walk,
        base_point=x0,
        rank_d=walk.rank(),
        normalization_c=c,
        omega_invariants=(moduli, free),
    )


def theta(p: Distribution, n: int, x: Element) -> int:
    """Dance function of p at step n and point x."""
    return analyze_dance(p).theta(n, x)


def char_fn(p: Distribution, xi: DualPoint) -> complex:
    """Characteristic function p_hat(xi), |value| <= 1.

    The value is assembled in double precision from exact rational
    phases; use omega_contains for the exact unit-modulus test.
    """
    if xi.group != p.group:
        raise ValueError("character pairs with a different group")
    return sum(complex(w) * cmath.exp(2j * cmath.pi * float(xi.phase(x)))
               for x, w in p.items())


def omega_contains(p: Distribution, xi: DualPoint) -> bool:
    """Exact test for |p_hat(xi)| = 1.

    The modulus is 1 precisely when every support point sees the same
    character phase, an equality of exact rationals.
    """
    support = p.support()
    base = xi.phase(support[0])
    return all(xi.phase(x) == base for x in support[1:])


def _torsion_dual_points(g: GroupSpec):
    for chars in itertools.product(*(range(m) for m in g.torsion_moduli)):
        yield DualPoint(g, chars, ())


def _exact_poly_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    """Exact quotient of integer polynomials (den monic, coefficients low
    to high); used only for cyclotomic factors, where divisibility holds."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    return q


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _exact_poly_div(poly, _cyclotomic(d))
    return tuple(poly)


def _unit_phase_sum_is_zero(terms: dict[Fraction, Fraction]) -> bool:
    """Exact vanishing test for sum of w * exp(2 pi i phase).

    With all phases rational the sum lives in a cyclotomic field: write
    it as a polynomial in a primitive N-th root of unity; it vanishes
    exactly when the N-th cyclotomic polynomial divides that polynomial.
    """
    n = 1
    for phase in terms:
        n = lcm(n, phase.denominator)
    coeffs = [Fraction(0)] * n
    for phase, w in terms.items():
        coeffs[int(phase * n) % n] += w
    cyc = _cyclotomic(n)
    rem = list(coeffs)
    lead = len(cyc) - 1
    for i in range(len(rem) - 1, lead - 1, -1):
        c = rem[i]
        if c:
            for j, d in enumerate(cyc):
                rem[i - lead + j] -= c * d
    return not any(rem)


def _char_modulus(p: Distribution, xi: DualPoint) -> float:
    """|p_hat(xi)| with exact zero detection at rational dual points."""
    terms: dict[Fraction, Fraction] = {}
    for x, w in p.items():
        phase = xi.phase(x)
        terms[phase] = terms.get(phase, Fraction(0)) + w
    if _unit_phase_sum_is_zero(terms):
        return 0.0
    return abs(sum(complex(w) * cmath.exp(2j * cmath.pi * float(phase))
                   for phase, w in terms.items()))


def _assert_constant_free_part(p: Distribution):
    support = p.support()
    if any(x.free != support[0].free for x in support[1:]):
        raise InvariantViolationError(
            "rank-0 walk with non-constant free part; the torsion projection "
            "would not match the sliced distribution")


def spectral_gap(p: Distribution) -> SpectralGap:
    """Exponential-error rate rho of the walk.

    Computed on the torsion projection p_A: rho is the largest
    |p_A_hat(alpha)| over torsion characters alpha outside the
    unit-modulus locus, 0 when no such character exists.  For finite
    groups p_A is p itself.  Membership in the locus is tested exactly;
    only the final modulus is floating point.
    """
    if analyze_dance(p).rank_d == 0:
        _assert_constant_free_part(p)
    pa = torsion_pushforward(p)
    rho = 0.0
    best = None
    for xi in _torsion_dual_points(pa.group):
        if omega_contains(pa, xi):
            continue
        modulus = _char_modulus(pa, xi)
        if modulus > rho:
            rho, best = modulus, xi
    return SpectralGap(rho=rho, achieved_at=best)


def theta_by_integration(p: Distribution, n: int, x: Element) -> float:
    """Brute-force dance function on a finite group.

    Sums p_hat(xi)^n * conj(chi_xi(x)) over the whole unit-modulus locus,
    located by the exact phase test; serves as an independent oracle for
    theta.  The exact result is a nonnegative integer, so the float sum
    is returned bare (its imaginary part vanishes up to rounding).
    """
    g = p.group
    if not g.is_finite:
        raise UnsupportedOperationError("integration oracle needs a finite dual")
    support = p.support()
    total = 0 + 0j
    for xi in _torsion_dual_points(g):
        base = xi.phase(support[0])
        if any(xi.phase(y) != base for y in support[1:]):
            continue
        # p_hat(xi) = exp(2 pi i * base) exactly on the locus
        phase = (n * base - xi.phase(x)) % 1
        total += cmath.exp(2j * cmath.pi * float(phase))
    return total.real


def period_if_irreducible(p: Distribution) -> int:
    """Index of the walk subgroup; the walk's period when irreducible.

    Meaningful as a period only for irreducible walks (the caller, or
    classify, must establish that); for them the index [G : W] equals
    gcd of the return times.
    """
    idx = analyze_dance(p).walk_subgroup.index()
    if idx is None:
        raise ValueError("period undefined: [G:G_p] infinite")
    return idx
