"""Local-limit attractors and convergence reports.

The step-n distribution of a finite-range walk approaches

    theta(n, x) / |Tor(G)| * K^n(phi(x) - n*mu)

where theta is the dance function, phi is a surjection onto Z^d built by
twisting the free coordinates (d is the rank of the walk subgroup), and
K^t is the heat kernel with the exact covariance of the pushed-forward
step distribution.  When d = 0 the Gaussian factor degenerates to 1 and
the error is exponentially small in the spectral gap.

Everything algebraic (moments, covariance inverses, convolution powers,
total-variation distances) is exact rational arithmetic; floating point
appears only in Gaussian evaluation and in reported error magnitudes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .dance import DanceData, analyze_dance, period_if_irreducible, spectral_gap
from .group import (
    Element,
    GroupSpec,
    Homomorphism,
    UnsupportedOperationError,
)
from .intlinalg import (
    AffinePointSet,
    IntMatrix,
    InvariantViolationError,
    TwistResult,
    affine_dim,
    twist_to_coordinates,
)
from .measure import Distribution, convolution_power, convolve, pushforward


def _fr_det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    a = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for i in range(col + 1, n):
            if a[i][col]:
                f = a[i][col] * inv
                a[i] = [e - f * g for e, g in zip(a[i], a[col])]
    return det


def _fr_inverse(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(rows)
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [e * inv for e in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [e - f * g for e, g in zip(a[i], a[col])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class MomentData:
    """Exact mean vector and covariance matrix of a distribution on Z^d."""

    dim: int
    mean: tuple[Fraction, ...]
    covariance: tuple[tuple[Fraction, ...], ...]

    def covariance_det(self) -> Fraction:
        return _fr_det([list(r) for r in self.covariance])

    def covariance_inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(r) for r in _fr_inverse([list(r) for r in self.covariance]))

    def is_positive_definite(self) -> bool:
        """Exact Sylvester test: all leading principal minors positive."""
        for k in range(1, self.dim + 1):
            minor = _fr_det([[self.covariance[i][j] for j in range(k)] for i in range(k)])
            if minor <= 0:
                return False
        return True


def mean_cov(q: Distribution) -> MomentData:
    """Exact moments of a distribution on a free group Z^d, d >= 1."""
    g = q.group
    if g.torsion_moduli or g.free_rank < 1:
        raise ValueError("moments are computed on free groups Z^d with d >= 1")
    d = g.free_rank
    mean = [Fraction(0)] * d
    for x, w in q.items():
        for i in range(d):
            mean[i] += w * x.free[i]
    cov = [[Fraction(0)] * d for _ in range(d)]
    for x, w in q.items():
        for i in range(d):
            for j in range(d):
                cov[i][j] += w * x.free[i] * x.free[j]
    for i in range(d):
        for j in range(d):
            cov[i][j] -= mean[i] * mean[j]
    return MomentData(d, tuple(mean), tuple(tuple(r) for r in cov))


def gaussian_kernel(moments: MomentData, t, y) -> float:
    """Heat kernel K^t(y) with covariance t * Gamma.

    K^t(y) = exp(-y . Gamma^(-1) y / 2t) / ((2 pi t)^(d/2) sqrt(det Gamma));
    the inverse and determinant are exact rationals, only the final
    exponential and roots are floating point.
    """
    if t <= 0:
        raise ValueError("time parameter must be positive")
    det = moments.covariance_det()
    if det == 0:
        raise ValueError("covariance is singular")
    inv = moments.covariance_inverse()
    y = list(y)
    quad = sum(y[i] * inv[i][j] * y[j] for i in range(moments.dim) for j in range(moments.dim))
    norm = (2 * math.pi * float(t)) ** (moments.dim / 2) * math.sqrt(float(det))
    return math.exp(-float(quad) / (2 * float(t))) / norm


@dataclass(frozen=True)
class Attractor:
    """Evaluable local-limit attractor of a walk.

    case "d0":   theta(n, x) / |Tor(G)|            (+ exponentially small error)
    case "dpos": theta(n, x) / |Tor(G)| * K^n(phi(x) - n*mu)   (+ o(n^(-d/2)))
    """

    dance: DanceData
    case: str
    torsion_order: int
    phi: Homomorphism | None = None
    moments: MomentData | None = None
    twist: TwistResult | None = None

    @property
    def rank_d(self) -> int:
        return self.dance.rank_d


def build_attractor(p: Distribution) -> Attractor:
    """Construct the attractor of a walk, twisting coordinates as needed.

    For rank d >= 1 the free parts of the support are moved into the
    first d coordinates by an automorphism; phi is that automorphism's
    top d rows composed with the free-part projection.  The pushforward
    of p along phi is checked to be genuinely d-dimensional with exactly
    positive-definite covariance.
    """
    dance = analyze_dance(p)
    g = p.group
    tor = g.torsion_order
    if dance.rank_d == 0:
        return Attractor(dance=dance, case="d0", torsion_order=tor)
    k = g.free_rank
    tw = twist_to_coordinates(AffinePointSet(k, {x.free for x in p.support()}))
    if tw.d != dance.rank_d:
        raise InvariantViolationError("support dimension disagrees with subgroup rank")
    d = tw.d
    t = len(g.torsion_moduli)
    rows = [[0] * t + list(tw.phi.matrix.data[i]) for i in range(d)]
    phi = Homomorphism(g, GroupSpec((), d), IntMatrix(rows, cols=g.dim))
    q = pushforward(p, phi)
    moments = mean_cov(q)
    if affine_dim(AffinePointSet(d, {x.free for x in q.support()})) != d:
        raise InvariantViolationError("pushforward is not genuinely d-dimensional")
    if not moments.is_positive_definite():
        raise InvariantViolationError("covariance failed the positive-definiteness check")
    return Attractor(dance=dance, case="dpos", torsion_order=tor,
                     phi=phi, moments=moments, twist=tw)


def attractor_eval(a: Attractor, n: int, x: Element) -> float:
    """Attractor value at step n >= 1 and point x (double precision)."""
    if n < 1:
        raise ValueError("attractor is evaluated at steps n >= 1")
    th = a.dance.theta(n, x)
    if th == 0:
        return 0.0
    if a.case == "d0":
        return th / a.torsion_order
    y = [Fraction(c) - n * m for c, m in zip(a.phi(x).free, a.moments.mean)]
    return (th / a.torsion_order) * gaussian_kernel(a.moments, n, y)


def _attractor_eval_exact_d0(a: Attractor, n: int, x: Element) -> Fraction:
    return Fraction(a.dance.theta(n, x), a.torsion_order)


def _gaussian_window(a: Attractor, n: int, center: tuple[Fraction, ...],
                     spread: int = 8) -> list[tuple[int, ...]]:
    """Integer points u with (u - c) . Gamma^(-1) (u - c) <= spread^2 * n."""
    inv = a.moments.covariance_inverse()
    d = a.moments.dim
    ranges = []
    for i in range(d):
        r = spread * math.sqrt(n * float(a.moments.covariance[i][i]))
        ranges.append(range(math.floor(float(center[i]) - r), math.ceil(float(center[i]) + r) + 1))
    limit = Fraction(spread * spread * n)
    out = []
    for u in itertools.product(*ranges):
        y = [Fraction(c) - ctr for c, ctr in zip(u, center)]
        quad = sum(y[i] * inv[i][j] * y[j] for i in range(d) for j in range(d))
        if quad <= limit:
            out.append(u)
    return out


def _coset_window(a: Attractor, n: int) -> list[Element]:
    """Points of the live coset where the attractor is not negligible.

    For d = 0 this is the whole (finite) coset.  For d >= 1 the live
    coset meets each Gaussian fiber in finitely many points: the free
    part of any coset point is phi_full^(-1) (u, n*w), so it suffices to
    scan integer u within 8 standard deviations of n*mu and filter by
    exact coset membership.
    """
    g = a.dance.base_point.group
    if a.case == "d0":
        return a.dance.coset_at(n)
    d = a.rank_d
    center = tuple(n * m for m in a.moments.mean)
    tail = tuple(n * wi for wi in a.twist.w)
    inv_full = a.twist.phi.inverse
    out = []
    for u in _gaussian_window(a, n, center):
        free = inv_full.mul_vec(tuple(u) + tail)
        for tors in itertools.product(*(range(m) for m in g.torsion_moduli)):
            x = Element(g, tors, free)
            if a.dance.theta(n, x) > 0:
                out.append(x)
    return out


def evaluation_window(p: Distribution, a: Attractor, n: int) -> list[Element]:
    """Support of p^(n) together with the effective range of the attractor."""
    pn = convolution_power(p, n)
    return sorted(set(pn.support()) | set(_coset_window(a, n)))


@dataclass(frozen=True)
class LltReport:
    """Measured distance between p^(n) and its attractor at one step."""

    n: int
    sup_error: float | None = None
    scaled_sup_error: float | None = None
    sup_error_exact: Fraction | None = None
    tv_exact: Fraction | None = None
    tv_bound: float | None = None
    worst_point: Element | None = None


def llt_sup_error(p: Distribution, a: Attractor, n: int) -> LltReport:
    """Sup over the effective range of |p^(n)(x) - attractor(n, x)|.

    The effective range is supp(p^(n)) united with the live-coset points
    whose Gaussian argument is within 8 standard deviations; outside it
    both terms vanish (exactly, or far below double precision).  In the
    d = 0 case the scan is exact rational arithmetic and the exact sup
    is reported alongside the float.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    pn = convolution_power(p, n)
    window = sorted(set(pn.support()) | set(_coset_window(a, n)))
    scale = n ** (a.rank_d / 2)
    if a.case == "d0":
        best = Fraction(0)
        best_x = None
        for x in window:
            err = abs(pn.weight(x) - _attractor_eval_exact_d0(a, n, x))
            if err > best:
                best, best_x = err, x
        return LltReport(n=n, sup_error=float(best), scaled_sup_error=scale * float(best),
                         sup_error_exact=best, worst_point=best_x)
    best_f = 0.0
    best_x = None
    for x in window:
        err = abs(float(pn.weight(x)) - attractor_eval(a, n, x))
        if err > best_f:
            best_f, best_x = err, x
    return LltReport(n=n, sup_error=best_f, scaled_sup_error=scale * best_f,
                     worst_point=best_x)


def time_average_error(p: Distribution, a: Attractor, n: int, s: int) -> float:
    """Deviation of the s-step average of p^(n..n+s-1) from its limit.

    For an irreducible walk of period s the average over s consecutive
    steps loses the dance: on a finite group it tends to the uniform
    density 1/|G|; on an infinite group with mean-zero pushforward it
    tends to K^n(phi(x)) / |Tor(G)|.  Requires s to be the walk's period
    (the index of the walk subgroup).
    """
    if s != period_if_irreducible(p):
        raise ValueError("s must be the walk's period [G:G_p]")
    g = p.group
    powers = [convolution_power(p, n)]
    for _ in range(s - 1):
        powers.append(convolve(powers[-1], p))

    def average(x: Element) -> Fraction:
        return sum((pk.weight(x) for pk in powers), Fraction(0)) / s

    if g.is_finite:
        target = Fraction(1, g.order)
        return float(max(abs(average(x) - target) for x in g.elements()))

    if a.case != "dpos":
        raise InvariantViolationError("infinite irreducible walk must have rank >= 1")
    if any(m != 0 for m in a.moments.mean):
        raise ValueError("time-average limit requires a mean-zero pushforward")
    support_union = set().union(*(pk.support() for pk in powers))
    window = set(support_union)
    center = (Fraction(0),) * a.rank_d
    inv_full = a.twist.phi.inverse
    tail = tuple(n * wi for wi in a.twist.w)
    for u in _gaussian_window(a, n, center):
        free = inv_full.mul_vec(tuple(u) + tail)
        for tors in itertools.product(*(range(m) for m in g.torsion_moduli)):
            window.add(Element(g, tors, free))
    worst = 0.0
    for x in sorted(window):
        target = gaussian_kernel(a.moments, n, [Fraction(c) for c in a.phi(x).free])
        err = abs(float(average(x)) - target / a.torsion_order)
        worst = max(worst, err)
    return worst


def tv_to_uniform_coset(p: Distribution, n: int) -> LltReport:
    """Exact total-variation distance to the uniform law on the live coset.

    Needs a finite walk subgroup W.  Reports the exact rational
    tv(p^(n), uniform on W + n*x0) and the certified exponential bound
    (|W| - 1)/2 * rho^n; the float power of rho is nudged upward so the
    asserted inequality can never fail to rounding.
    """
    dance = analyze_dance(p)
    w_order = dance.walk_subgroup.order()
    if w_order is None:
        raise UnsupportedOperationError("walk subgroup is infinite; no uniform law on it")
    pn = convolution_power(p, n)
    coset = set(dance.coset_at(n))
    uniform = Fraction(1, w_order)
    total = Fraction(0)
    for x in coset | set(pn.support()):
        total += abs(pn.weight(x) - (uniform if x in coset else 0))
    tv = total / 2
    rho = spectral_gap(p).rho
    bound = (w_order - 1) / 2 * rho ** n
    bound += bound * 1e-12  # upward rounding slack; exact when rho = 0
    if tv > Fraction(bound):
        raise InvariantViolationError("exact TV distance exceeded its certified bound")
    return LltReport(n=n, tv_exact=tv, tv_bound=bound)


@dataclass(frozen=True)
class Classification:
    """Irreducibility and period classification of a walk.

    period is None when undefined (the walk is not known irreducible).
    For infinite groups the verdicts are only those certified by exact
    criteria; anything else is reported as undetermined with the failed
    hypothesis in `reason`.
    """

    irreducible: str
    aperiodic: str
    period: int | None
    dance_cosets: str
    reason: str = ""


def _classify_finite(p: Distribution) -> Classification:
    g = p.group
    steps = p.support()
    dist = {g.identity(): 0}
    frontier = [g.identity()]
    while frontier:
        nxt = []
        for u in frontier:
            for s in steps:
                v = u + s
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    irreducible = len(dist) == g.order
    dance = analyze_dance(p)
    quotient = GroupSpec(*dance.omega_invariants).describe()
    if not irreducible:
        reach = sorted(dist)
        return Classification(
            irreducible="no", aperiodic="no", period=None,
            dance_cosets=(f"supp(p^(n)) stays inside the coset G_p + n*x0, "
                          f"G/G_p = {quotient}; only {len(reach)} of {g.order} "
                          f"elements are ever reachable"),
            reason="reachable set is a proper subset of the group",
        )
    period = 0
    for u, du in dist.items():
        for s in steps:
            period = gcd(period, du + 1 - dist[u + s])
    idx = dance.walk_subgroup.index()
    if period != idx:
        raise InvariantViolationError("digraph period disagrees with [G:G_p]")
    return Classification(
        irreducible="yes",
        aperiodic="yes" if period == 1 else "no",
        period=period,
        dance_cosets=(f"the {period} cosets G_p + k*x0 partition the group and the "
                      f"walk cycles through them; G/G_p = {quotient}"),
    )


def classify(p: Distribution) -> Classification:
    """Classify a walk as irreducible/aperiodic where exactly decidable.

    Finite groups get exact answers from reachability on the transition
    digraph (period = gcd of closed-walk lengths through the identity).
    On infinite groups, a sufficient criterion certifies yes/yes
    (G_p = G with mean-zero pushforward); proper walk subgroups yield
    sound negative verdicts; every remaining case is undetermined.
    """
    g = p.group
    if g.is_finite:
        return _classify_finite(p)
    dance = analyze_dance(p)
    w = dance.walk_subgroup
    quotient = GroupSpec(*dance.omega_invariants).describe()
    idx = w.index()
    base = f"supp(p^(n)) is confined to the moving coset G_p + n*x0; G/G_p = {quotient}"
    if idx == 1:
        att = build_attractor(p)
        if all(m == 0 for m in att.moments.mean):
            return Classification(
                irreducible="yes", aperiodic="yes", period=1,
                dance_cosets="G_p is the whole group: there is no dance",
            )
        return Classification(
            irreducible="undetermined", aperiodic="undetermined", period=None,
            dance_cosets="G_p is the whole group: there is no dance",
            reason=("the mean of the pushforward is nonzero, so the zero-mean "
                    "criterion does not apply; a drifting walk with full walk "
                    "subgroup may still fail to be irreducible"),
        )
    r = w.coset_order(dance.base_point)
    if r is None:
        return Classification(
            irreducible="no", aperiodic="no", period=None, dance_cosets=base,
            reason=("the base point has infinite order in G/G_p, so the walk "
                    "never revisits the zero coset and never returns"),
        )
    if r == 1:
        return Classification(
            irreducible="no", aperiodic="no", period=None, dance_cosets=base,
            reason="the walk is confined to the proper subgroup G_p",
        )
    if idx is None:
        return Classification(
            irreducible="no", aperiodic="no", period=None, dance_cosets=base,
            reason=("[G:G_p] is infinite, but an irreducible walk has finite "
                    "index equal to its period"),
        )
    if r < idx:
        return Classification(
            irreducible="no", aperiodic="no", period=None, dance_cosets=base,
            reason=(f"the base point generates only {r} of the {idx} cosets of "
                    f"G_p, so the coset cycle cannot cover the group"),
        )
    return Classification(
        irreducible="undetermined", aperiodic="no", period=None,
        dance_cosets=base + f"; the coset cycle has length {r}",
        reason=(f"the walk dances through {r} > 1 cosets so it is not aperiodic, "
                "but irreducibility inside the cycle is not decided by the "
                "implemented criteria"),
    )
