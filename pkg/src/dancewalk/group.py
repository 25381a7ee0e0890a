"""Finitely generated abelian groups in coordinate form.

A group is presented as Z_{m1} x ... x Z_{mt} x Z^k.  The moduli are
kept exactly as supplied (so Z_4 x Z_6 stays in its own coordinates for
display and element arithmetic) while the canonical invariant-factor
chain is derived on demand for isomorphism-class comparisons.

Subgroups are encoded as integer lattices in Z^(t+k) that contain the
torsion relation vectors m_i * e_i; membership, index, quotients and
annihilators then all reduce to Hermite/Smith normal-form computations
on the lattice basis.  Because bases are stored in canonical Hermite
form, two equal subgroups have identical representations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
import cmath

from .intlinalg import IntMatrix, hnf, snf


class UnsupportedOperationError(ValueError):
    """The operation needs a finiteness property the input lacks."""


def _invariant_factors(moduli: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical divisor chain m1 | m2 | ... of a product of cyclic groups."""
    factors = [m for m in moduli if m > 1]
    changed = True
    while changed:
        changed = False
        for i in range(len(factors)):
            for j in range(i + 1, len(factors)):
                a, b = factors[i], factors[j]
                if b % a:
                    factors[i], factors[j] = gcd(a, b), lcm(a, b)
                    changed = True
    return tuple(sorted(factors))


@dataclass(frozen=True)
class GroupSpec:
    """Z_{m1} x ... x Z_{mt} x Z^k with the moduli as supplied."""

    torsion_moduli: tuple[int, ...]
    free_rank: int

    def __init__(self, torsion_moduli=(), free_rank: int = 0):
        moduli = tuple(int(m) for m in torsion_moduli)
        if any(m < 2 for m in moduli):
            raise ValueError("torsion moduli must be at least 2")
        if free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        object.__setattr__(self, "torsion_moduli", moduli)
        object.__setattr__(self, "free_rank", int(free_rank))

    @property
    def dim(self) -> int:
        return len(self.torsion_moduli) + self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def torsion_order(self) -> int:
        out = 1
        for m in self.torsion_moduli:
            out *= m
        return out

    @property
    def order(self) -> int | None:
        return self.torsion_order if self.is_finite else None

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return _invariant_factors(self.torsion_moduli)

    @property
    def is_trivial(self) -> bool:
        return self.dim == 0

    def isomorphic_to(self, other: "GroupSpec") -> bool:
        return (self.invariant_factors == other.invariant_factors
                and self.free_rank == other.free_rank)

    def element(self, torsion=(), free=()) -> "Element":
        return Element(self, tuple(torsion), tuple(free))

    def element_from_coords(self, coords) -> "Element":
        coords = tuple(coords)
        if len(coords) != self.dim:
            raise ValueError("coordinate length mismatch")
        t = len(self.torsion_moduli)
        return Element(self, coords[:t], coords[t:])

    def identity(self) -> "Element":
        return Element(self, (0,) * len(self.torsion_moduli), (0,) * self.free_rank)

    def elements(self):
        """All elements, lexicographic order.  Finite groups only."""
        if not self.is_finite:
            raise UnsupportedOperationError("cannot enumerate an infinite group")
        for tup in itertools.product(*(range(m) for m in self.torsion_moduli)):
            yield Element(self, tup, ())

    def torsion_component(self) -> "GroupSpec":
        return GroupSpec(self.torsion_moduli, 0)

    def dual(self) -> "GroupSpec":
        """The character group; for a finite group this is isomorphic to
        the group itself under the standard pairing."""
        if not self.is_finite:
            raise UnsupportedOperationError("only finite duals are represented as groups")
        return GroupSpec(self.torsion_moduli, 0)

    def describe(self) -> str:
        parts = [f"Z_{m}" for m in self.torsion_moduli]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"GroupSpec({list(self.torsion_moduli)}, {self.free_rank})"


@dataclass(frozen=True, order=False)
class Element:
    """A group element; torsion residues are always stored reduced."""

    group: GroupSpec
    torsion: tuple[int, ...]
    free: tuple[int, ...]

    def __init__(self, group: GroupSpec, torsion=(), free=()):
        torsion = tuple(int(c) % m for c, m in zip(torsion, group.torsion_moduli, strict=True))
        free = tuple(int(c) for c in free)
        if len(free) != group.free_rank:
            raise ValueError("free part has wrong length")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "torsion", torsion)
        object.__setattr__(self, "free", free)

    def coords(self) -> tuple[int, ...]:
        return self.torsion + self.free

    def _check(self, other: "Element"):
        if self.group != other.group:
            raise ValueError("elements live in different groups")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(
            self.group,
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
            tuple(a + b for a, b in zip(self.free, other.free)),
        )

    def __neg__(self) -> "Element":
        return Element(self.group, tuple(-a for a in self.torsion), tuple(-a for a in self.free))

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __mul__(self, n: int) -> "Element":
        return Element(self.group, tuple(n * a for a in self.torsion), tuple(n * a for a in self.free))

    __rmul__ = __mul__

    def is_identity(self) -> bool:
        return not any(self.torsion) and not any(self.free)

    def __lt__(self, other: "Element") -> bool:
        self._check(other)
        return (self.torsion, self.free) < (other.torsion, other.free)

    def __le__(self, other: "Element") -> bool:
        return self == other or self < other

    def __repr__(self) -> str:
        return f"Element({self.torsion + self.free})"


def _relation_rows(g: GroupSpec) -> list[list[int]]:
    t = len(g.torsion_moduli)
    rows = []
    for i, m in enumerate(g.torsion_moduli):
        row = [0] * g.dim
        row[i] = m
        rows.append(row)
    return rows


class Subgroup:
    """A subgroup of a GroupSpec, encoded as a canonical integer lattice.

    The lattice lives in Z^(t+k) and always contains m_i * e_i for every
    torsion coordinate, so its image under reduction is a genuine
    subgroup of the parent.
    """

    __slots__ = ("parent", "basis")

    def __init__(self, parent: GroupSpec, rows):
        all_rows = [list(r) for r in rows] + _relation_rows(parent)
        if any(len(r) != parent.dim for r in all_rows):
            raise ValueError("generator rows have wrong length")
        if all_rows:
            reduced = hnf(IntMatrix(all_rows, cols=parent.dim)).nonzero_rows
        else:
            reduced = ()
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "basis", IntMatrix(reduced, cols=parent.dim))

    def __setattr__(self, name, value):
        raise AttributeError("Subgroup is immutable")

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup)
                and self.parent == other.parent
                and self.basis == other.basis)

    def __hash__(self) -> int:
        return hash((self.parent, self.basis))

    def __repr__(self) -> str:
        return f"Subgroup({self.parent!r}, {[list(r) for r in self.basis.data]})"

    @property
    def _pivots(self) -> tuple[tuple[int, int], ...]:
        out = []
        for i, row in enumerate(self.basis.data):
            for j, e in enumerate(row):
                if e:
                    out.append((i, j))
                    break
        return tuple(out)

    def contains(self, x: Element) -> bool:
        if x.group != self.parent:
            raise ValueError("element lives in a different group")
        v = list(x.coords())
        for (i, j) in self._pivots:
            row = self.basis.data[i]
            if v[j] % row[j]:
                return False
            q = v[j] // row[j]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return not any(v)

    def index(self) -> int | None:
        """[G : H], or None when the quotient is infinite."""
        pivots = self._pivots
        if len(pivots) < self.parent.dim:
            return None
        out = 1
        for i, j in pivots:
            out *= self.basis[i, j]
        return out

    def rank(self) -> int:
        """Free rank of the subgroup itself."""
        return self.basis.rows - len(self.parent.torsion_moduli)

    def order(self) -> int | None:
        """|H|, or None when the subgroup is infinite."""
        if self.rank() > 0:
            return None
        covol = 1
        for i, j in self._pivots:
            covol *= self.basis[i, j]
        return self.parent.torsion_order // covol

    def quotient_invariants(self) -> tuple[tuple[int, ...], int]:
        """Canonical invariants (torsion chain, free rank) of parent / H."""
        q, _ = self.quotient_map()
        return q.torsion_moduli, q.free_rank

    def quotient_map(self) -> tuple[GroupSpec, "Homomorphism"]:
        """The quotient group in canonical form and the projection onto it."""
        spec, proj = group_from_presentation(self.basis, ambient=self.parent.dim)
        return spec, Homomorphism(self.parent, spec, proj.matrix)

    def coset_order(self, x: Element) -> int | None:
        """Order of x + H in parent/H, or None if infinite."""
        spec, proj = self.quotient_map()
        y = proj(x)
        if any(y.free):
            return None
        r = 1
        for c, m in zip(y.torsion, spec.torsion_moduli):
            r = lcm(r, m // gcd(c, m))
        return r

    def elements(self):
        """All elements of a finite subgroup, sorted."""
        if self.rank() > 0:
            raise UnsupportedOperationError("subgroup is infinite")
        zero_free = (0,) * self.parent.free_rank
        out = []
        for tup in itertools.product(*(range(m) for m in self.parent.torsion_moduli)):
            x = Element(self.parent, tup, zero_free)
            if self.contains(x):
                out.append(x)
        return out

    def annihilator(self) -> "Subgroup":
        """Characters of a finite parent that are identically 1 on H.

        Returned as a subgroup of parent.dual() under the pairing
        chi_xi(x) = exp(2 pi i * sum(xi_i x_i / m_i)).  A character kills
        H exactly when it solves C xi = 0 (mod M) for the scaled basis
        matrix C below; the solution lattice is read off from a Smith
        decomposition of C.
        """
        g = self.parent
        if not g.is_finite:
            raise UnsupportedOperationError(
                "annihilators of subgroups of infinite groups are not finitely "
                "enumerable; use the quotient invariants instead")
        t = len(g.torsion_moduli)
        big = reduce(lcm, g.torsion_moduli, 1)
        c_rows = [[row[i] * (big // g.torsion_moduli[i]) for i in range(t)]
                  for row in self.basis.data]
        dec = snf(IntMatrix(c_rows, cols=t))
        diag = dec.diagonal
        z_rows = []
        for j in range(t):
            d = diag[j] if j < len(diag) else 0
            row = [0] * t
            row[j] = big // gcd(d, big)
            z_rows.append(row)
        vt = dec.v.matrix.transpose()
        xi_rows = (IntMatrix(z_rows, cols=t) @ vt).data
        return Subgroup(g.dual(), xi_rows)


def subgroup_generated(g: GroupSpec, gens) -> Subgroup:
    """Subgroup generated by a list of elements (order-insensitive)."""
    rows = []
    for x in gens:
        if x.group != g:
            raise ValueError("generator lives in a different group")
        rows.append(list(x.coords()))
    return Subgroup(g, rows)


def whole_group(g: GroupSpec) -> Subgroup:
    return Subgroup(g, [list(r) for r in IntMatrix.identity(g.dim).data] if g.dim else [])


def trivial_subgroup(g: GroupSpec) -> Subgroup:
    return Subgroup(g, [])


def subgroup_contains(h: Subgroup, x: Element) -> bool:
    return h.contains(x)


def subgroup_index(h: Subgroup) -> int | None:
    return h.index()


def subgroup_rank(h: Subgroup) -> int:
    return h.rank()


def quotient_invariants(h: Subgroup) -> tuple[tuple[int, ...], int]:
    return h.quotient_invariants()


def group_from_presentation(relations: IntMatrix, ambient: int | None = None
                            ) -> tuple[GroupSpec, "Homomorphism"]:
    """Z^m modulo the row span of ``relations``, in canonical form.

    Returns the canonical GroupSpec together with the projection
    homomorphism from the free group Z^m onto it.  The invariant factors
    are the nontrivial Smith diagonal entries; the free rank is m minus
    the rank of the relation matrix.
    """
    m = relations.cols
    if ambient is not None and ambient != m:
        raise ValueError("ambient dimension does not match relation width")
    source = GroupSpec((), m)
    if relations.rows == 0:
        target = GroupSpec((), m)
        return target, Homomorphism(source, target, IntMatrix.identity(m))
    dec = snf(relations)
    diag = (list(dec.diagonal) + [0] * m)[:m]
    vt = dec.v.matrix.transpose()
    torsion_rows = [i for i, d in enumerate(diag) if d > 1]
    free_rows = [i for i, d in enumerate(diag) if d == 0]
    moduli = tuple(diag[i] for i in torsion_rows)
    target = GroupSpec(moduli, len(free_rows))
    rows = [vt.data[i] for i in torsion_rows] + [vt.data[i] for i in free_rows]
    matrix = IntMatrix(rows, cols=m) if rows else IntMatrix([], cols=m)
    return target, Homomorphism(source, target, matrix)


@dataclass(frozen=True)
class Homomorphism:
    """A homomorphism between coordinate groups, as an integer matrix
    acting on column coordinate vectors."""

    source: GroupSpec
    target: GroupSpec
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.rows != self.target.dim or self.matrix.cols != self.source.dim:
            raise ValueError("matrix shape does not match source/target")
        tt = len(self.target.torsion_moduli)
        for i, m in enumerate(self.source.torsion_moduli):
            col = [self.matrix[r, i] for r in range(self.matrix.rows)]
            for r, e in enumerate(col):
                if r < tt:
                    if (m * e) % self.target.torsion_moduli[r]:
                        raise ValueError("map is not well defined on torsion")
                elif m * e:
                    raise ValueError("map sends torsion into the free part")

    @classmethod
    def identity(cls, g: GroupSpec) -> "Homomorphism":
        return cls(g, g, IntMatrix.identity(g.dim))

    def apply(self, x: Element) -> Element:
        if x.group != self.source:
            raise ValueError("element is not in the source group")
        return self.target.element_from_coords(self.matrix.mul_vec(x.coords()))

    __call__ = apply

    def compose(self, inner: "Homomorphism") -> "Homomorphism":
        """self after inner."""
        if inner.target != self.source:
            raise ValueError("maps do not compose")
        return Homomorphism(inner.source, self.target, self.matrix @ inner.matrix)


@dataclass(frozen=True)
class DualPoint:
    """A character of a group, with exact rational data.

    The character is x -> exp(2 pi i * phase(x)) where
    phase(x) = sum(k_i x_i / m_i) + sum(theta_j y_j) mod 1; torus angles
    theta_j are exact fractions of a full turn.
    """

    group: GroupSpec
    torsion_chars: tuple[int, ...]
    torus_angles: tuple[Fraction, ...]

    def __init__(self, group: GroupSpec, torsion_chars=(), torus_angles=()):
        chars = tuple(int(c) % m for c, m in zip(torsion_chars, group.torsion_moduli, strict=True))
        angles = tuple(Fraction(a) % 1 for a in torus_angles)
        if len(angles) != group.free_rank:
            raise ValueError("torus angle count must match the free rank")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "torsion_chars", chars)
        object.__setattr__(self, "torus_angles", angles)

    @classmethod
    def zero(cls, group: GroupSpec) -> "DualPoint":
        return cls(group, (0,) * len(group.torsion_moduli), (0,) * group.free_rank)

    def phase(self, x: Element) -> Fraction:
        """Exact phase of the character at x, reduced mod 1."""
        if x.group != self.group:
            raise ValueError("element is not in the paired group")
        p = Fraction(0)
        for k, c, m in zip(self.torsion_chars, x.torsion, self.group.torsion_moduli):
            p += Fraction(k * c, m)
        for th, y in zip(self.torus_angles, x.free):
            p += th * y
        return p % 1

    def value(self, x: Element) -> complex:
        return cmath.exp(2j * cmath.pi * float(self.phase(x)))


def character_eval(xi: DualPoint, x: Element) -> complex:
    """Value of the character xi at x (unit modulus, double precision)."""
    return xi.value(x)
