"""Finitely supported probability distributions with exact rational weights.

Convolution is carried out over a common denominator in pure integer
arithmetic, so repeated squaring stays exact (and fast) even when the
weights have denominators like 4**200.  Total mass is exactly 1 after
every operation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .group import Element, GroupSpec, Homomorphism


class Distribution:
    """A probability distribution with finite support and rational weights."""

    __slots__ = ("group", "_weights")

    def __init__(self, group: GroupSpec, weights):
        cleaned: dict[Element, Fraction] = {}
        for x, w in dict(weights).items():
            if x.group != group:
                raise ValueError("support point lives in a different group")
            w = Fraction(w)
            if w < 0:
                raise ValueError("negative weight")
            if w == 0:
                continue
            cleaned[x] = cleaned.get(x, Fraction(0)) + w
        if not cleaned:
            raise ValueError("support must be nonempty")
        if sum(cleaned.values()) != 1:
            raise ValueError("weights must sum to exactly 1")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "_weights", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("Distribution is immutable")

    @classmethod
    def point_mass(cls, group: GroupSpec, x: Element | None = None) -> "Distribution":
        return cls(group, {x if x is not None else group.identity(): Fraction(1)})

    @classmethod
    def uniform(cls, group: GroupSpec, points) -> "Distribution":
        pts = list(points)
        w = Fraction(1, len(pts))
        out: dict[Element, Fraction] = {}
        for p in pts:
            out[p] = out.get(p, Fraction(0)) + w
        return cls(group, out)

    def support(self) -> list[Element]:
        return sorted(self._weights)

    def weight(self, x: Element) -> Fraction:
        return self._weights.get(x, Fraction(0))

    def items(self):
        return sorted(self._weights.items())

    def __len__(self) -> int:
        return len(self._weights)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Distribution)
                and self.group == other.group
                and self._weights == other._weights)

    def __hash__(self) -> int:
        return hash((self.group, frozenset(self._weights.items())))

    def __repr__(self) -> str:
        entries = ", ".join(f"{x.coords()}: {w}" for x, w in self.items())
        return f"Distribution({{{entries}}})"


def convolve(p: Distribution, q: Distribution) -> Distribution:
    """Distribution of X + Y for independent X ~ p, Y ~ q (exact)."""
    if p.group != q.group:
        raise ValueError("distributions live on different groups")
    dp = lcm(*(w.denominator for w in p._weights.values()), 1)
    dq = lcm(*(w.denominator for w in q._weights.values()), 1)
    np_ = {x: int(w * dp) for x, w in p._weights.items()}
    nq = {y: int(w * dq) for y, w in q._weights.items()}
    acc: dict[Element, int] = {}
    for x, a in np_.items():
        for y, b in nq.items():
            z = x + y
            acc[z] = acc.get(z, 0) + a * b
    den = dp * dq
    return Distribution(p.group, {z: Fraction(n, den) for z, n in acc.items()})


def convolution_power(p: Distribution, n: int) -> Distribution:
    """The n-fold convolution of p with itself, by repeated squaring.

    n = 0 returns the point mass at the identity (the convolution unit);
    walks themselves start at n = 1.
    """
    if n < 0:
        raise ValueError("negative convolution power")
    if n == 0:
        return Distribution.point_mass(p.group)
    result = None
    base = p
    while n:
        if n & 1:
            result = base if result is None else convolve(result, base)
        n >>= 1
        if n:
            base = convolve(base, base)
    return result


def pushforward(p: Distribution, f: Homomorphism) -> Distribution:
    """Image distribution q(y) = sum of p(x) over f(x) = y."""
    if f.source != p.group:
        raise ValueError("map does not start at the distribution's group")
    out: dict[Element, Fraction] = {}
    for x, w in p._weights.items():
        y = f(x)
        out[y] = out.get(y, Fraction(0)) + w
    return Distribution(f.target, out)


def torsion_pushforward(p: Distribution) -> Distribution:
    """Project onto the torsion component, aggregating weights."""
    g = p.group
    if g.free_rank == 0:
        return p
    target = g.torsion_component()
    out: dict[Element, Fraction] = {}
    for x, w in p._weights.items():
        y = target.element(x.torsion, ())
        out[y] = out.get(y, Fraction(0)) + w
    return Distribution(target, out)


@dataclass(frozen=True)
class WalkPath:
    """Positions of one walk realization, starting at the identity."""

    positions: tuple[Element, ...]

    def __len__(self) -> int:
        return len(self.positions) - 1


def sample_path(p: Distribution, n: int, seed: int) -> WalkPath:
    """A length-n walk driven by p, deterministic for a fixed seed.

    Steps are drawn by inverse CDF over the sorted support, comparing the
    generator's output against exact cumulative weights, so two runs with
    the same seed always produce identical paths.
    """
    rng = random.Random(seed)
    support = p.support()
    cumulative = []
    acc = Fraction(0)
    for x in support:
        acc += p.weight(x)
        cumulative.append((acc, x))
    pos = p.group.identity()
    positions = [pos]
    for _ in range(n):
        u = Fraction(rng.random())
        step = next(x for acc, x in cumulative if u < acc)
        pos = pos + step
        positions.append(pos)
    return WalkPath(tuple(positions))
