"""Exact integer linear algebra.

Everything here runs in arbitrary-precision integer (or rational)
arithmetic; there is no floating point and no overflow.  The module
provides the two canonical lattice normal forms (Hermite and Smith, both
with their unimodular transforms) plus the "twisting" constructions used
to move a finite point set of affine dimension d into the first d
coordinates of the ambient lattice:

* ``bottom_row_unimodular`` completes an integer vector a to a square
  matrix with bottom row a and determinant gcd(a).
* ``flatten_affine`` finds an automorphism of Z^k sending a point set
  that misses full dimension into Z^(k-1) x {w}.
* ``twist_to_coordinates`` iterates the flattening until the set sits in
  Z^d x {w} with a genuinely d-dimensional shadow on the first d
  coordinates.

Conventions: lattices are spanned by the *rows* of their basis
matrices; automorphisms act on *column* vectors.  The canonical Hermite
form used throughout is row-style with positive pivots and entries above
each pivot reduced into [0, pivot).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class InvariantViolationError(RuntimeError):
    """An internal postcondition failed; indicates a bug, not bad input."""


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _elim_pair(a: int, b: int) -> tuple[int, int, int, int]:
    """Coefficients (x, y, bg, ag) of the unimodular 2x2 [[x, y], [-bg, ag]]
    sending (a, b) to (g, 0) with g = gcd.

    When a divides b the transform is a plain shear that leaves the pivot
    untouched; otherwise the general Bezout transform strictly shrinks the
    pivot to the gcd.  The shear case is what guarantees termination of the
    alternating row/column sweeps in the Smith reduction.
    """
    if b % a == 0:
        return 1, 0, b // a, 1
    g, x, y = _egcd(a, b)
    return x, y, b // g, a // g


class IntMatrix:
    """Immutable integer matrix with exact arithmetic."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, cols: int | None = None):
        rows = tuple(tuple(int(e) for e in row) for row in data)
        if rows:
            widths = {len(r) for r in rows}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            (width,) = widths
            if cols is not None and cols != width:
                raise ValueError("cols does not match row width")
            cols = width
        elif cols is None:
            raise ValueError("empty matrix needs an explicit column count")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diag(cls, entries) -> "IntMatrix":
        entries = list(entries)
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.data[i][j]

    def row(self, i) -> tuple[int, ...]:
        return self.data[i]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        od = other.data
        out = []
        for r in self.data:
            out.append(
                [sum(r[k] * od[k][j] for k in range(self.cols)) for j in range(other.cols)]
            )
        return IntMatrix(out, cols=other.cols)

    def mul_vec(self, v) -> tuple[int, ...]:
        """Apply to a column vector: returns self * v."""
        v = tuple(v)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(r[k] * v[k] for k in range(self.cols)) for r in self.data)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def det(self) -> int:
        """Exact determinant via fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(r) for r in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def inverse(self) -> "IntMatrix":
        """Exact inverse; requires the inverse to be integral (det = +-1)."""
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        a = [[Fraction(e) for e in row] + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self.data)]
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
        out = [[e for e in row[n:]] for row in a]
        if any(e.denominator != 1 for row in out for e in row):
            raise ValueError("inverse is not integral")
        return IntMatrix([[int(e) for e in row] for row in out], cols=n)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.data == other.data and self.cols == other.cols

    def __hash__(self) -> int:
        return hash((self.cols, self.data))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.data]!r})"


class UnimodularMatrix:
    """A square integer matrix with determinant +1 or -1."""

    __slots__ = ("matrix", "_inv")

    def __init__(self, matrix: IntMatrix):
        if matrix.rows != matrix.cols:
            raise ValueError("unimodular matrix must be square")
        if matrix.det() not in (1, -1):
            raise ValueError("determinant is not a unit")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "_inv", None)

    def __setattr__(self, name, value):
        raise AttributeError("UnimodularMatrix is immutable")

    @property
    def inverse(self) -> IntMatrix:
        if self._inv is None:
            object.__setattr__(self, "_inv", self.matrix.inverse())
        return self._inv

    def __eq__(self, other) -> bool:
        return isinstance(other, UnimodularMatrix) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(("unimodular", self.matrix))

    def __repr__(self) -> str:
        return f"UnimodularMatrix({self.matrix!r})"


@dataclass(frozen=True)
class HnfDecomposition:
    """u @ (input) = h with h in canonical row Hermite form."""

    h: IntMatrix
    u: UnimodularMatrix

    @property
    def pivots(self) -> tuple[tuple[int, int], ...]:
        """(row, col) positions of the pivots of h."""
        out = []
        for i, row in enumerate(self.h.data):
            for j, e in enumerate(row):
                if e:
                    out.append((i, j))
                    break
        return tuple(out)

    @property
    def nonzero_rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(r for r in self.h.data if any(r))


@dataclass(frozen=True)
class SnfDecomposition:
    """u @ (input) @ v = d, d diagonal nonnegative with d1 | d2 | ..."""

    u: UnimodularMatrix
    d: IntMatrix
    v: UnimodularMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        n = min(self.d.rows, self.d.cols)
        return tuple(self.d[i, i] for i in range(n))


def hnf(m: IntMatrix) -> HnfDecomposition:
    """Row Hermite normal form with transform.

    Pivots are positive, entries above a pivot are reduced into
    [0, pivot), zero rows sink to the bottom.  Two matrices have equal
    row span over Z exactly when their canonical forms agree.
    """
    h = [list(r) for r in m.data]
    u = [[int(i == j) for j in range(m.rows)] for i in range(m.rows)]
    pivot_row = 0
    for col in range(m.cols):
        if pivot_row >= m.rows:
            break
        piv = next((i for i in range(pivot_row, m.rows) if h[i][col]), None)
        if piv is None:
            continue
        h[pivot_row], h[piv] = h[piv], h[pivot_row]
        u[pivot_row], u[piv] = u[piv], u[pivot_row]
        for i in range(pivot_row + 1, m.rows):
            if not h[i][col]:
                continue
            x, y, bg, ag = _elim_pair(h[pivot_row][col], h[i][col])
            # rows <- [[x, y], [-bg, ag]] @ rows, a unimodular 2x2 block.
            for mat in (h, u):
                rp, ri = mat[pivot_row], mat[i]
                mat[pivot_row] = [x * p + y * q for p, q in zip(rp, ri)]
                mat[i] = [-bg * p + ag * q for p, q in zip(rp, ri)]
        if h[pivot_row][col] < 0:
            h[pivot_row] = [-e for e in h[pivot_row]]
            u[pivot_row] = [-e for e in u[pivot_row]]
        p = h[pivot_row][col]
        for i in range(pivot_row):
            q = h[i][col] // p
            if q:
                h[i] = [e - q * f for e, f in zip(h[i], h[pivot_row])]
                u[i] = [e - q * f for e, f in zip(u[i], u[pivot_row])]
        pivot_row += 1
    return HnfDecomposition(IntMatrix(h, cols=m.cols), UnimodularMatrix(IntMatrix(u, cols=m.rows)))


def snf(m: IntMatrix) -> SnfDecomposition:
    """Smith normal form with both transforms: u @ m @ v = d."""
    a = [list(r) for r in m.data]
    nr, nc = m.rows, m.cols
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_combine(i, j, x, y, bg, ag):
        # rows i, j <- [[x, y], [-bg, ag]] @ rows i, j
        for mat in (a, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [x * p + y * q for p, q in zip(ri, rj)]
            mat[j] = [-bg * p + ag * q for p, q in zip(ri, rj)]

    def col_combine(i, j, x, y, bg, ag):
        for mat in (a, v):
            for row in mat:
                p, q = row[i], row[j]
                row[i] = x * p + y * q
                row[j] = -bg * p + ag * q

    t = 0
    while t < min(nr, nc):
        # Bring a nonzero entry of smallest magnitude to (t, t).
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            swap_rows(t, best[0])
        if best[1] != t:
            swap_cols(t, best[1])
        while True:
            for i in range(t + 1, nr):
                if a[i][t]:
                    row_combine(t, i, *_elim_pair(a[t][t], a[i][t]))
            for j in range(t + 1, nc):
                if a[t][j]:
                    col_combine(t, j, *_elim_pair(a[t][t], a[t][j]))
            if any(a[i][t] for i in range(t + 1, nr)):
                continue
            # Pull in any entry the pivot does not divide yet.
            culprit = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % a[t][t]:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            a[t] = [p + q for p, q in zip(a[t], a[culprit])]
            u[t] = [p + q for p, q in zip(u[t], u[culprit])]
        if a[t][t] < 0:
            a[t] = [-e for e in a[t]]
            u[t] = [-e for e in u[t]]
        t += 1
    return SnfDecomposition(
        UnimodularMatrix(IntMatrix(u, cols=nr)),
        IntMatrix(a, cols=nc),
        UnimodularMatrix(IntMatrix(v, cols=nc)),
    )


def bottom_row_unimodular(a) -> IntMatrix:
    """Complete a nonzero integer vector to a square matrix.

    The result M is k x k with bottom row exactly ``a`` and
    det(M) = gcd(a); in particular M is unimodular when the entries of
    ``a`` are coprime.  Column operations are accumulated in a matrix Q
    while the Euclidean algorithm shrinks the vector to (0, ..., 0, g);
    M is then assembled as M' @ Q^(-1).  When k = 1 the bottom row
    forces det(M) = a[0], so for a negative singleton the determinant is
    -gcd(a); every caller in this package passes primitive vectors,
    where the distinction is moot.
    """
    a = [int(e) for e in a]
    b = list(a)
    k = len(b)
    if k == 0 or all(e == 0 for e in b):
        raise ValueError("vector must be nonzero")
    if k == 1:
        return IntMatrix([[b[0]]])

    q_mat = [[int(i == j) for j in range(k)] for i in range(k)]
    q_sign = 1

    def col_swap(i, j):
        nonlocal q_sign
        b[i], b[j] = b[j], b[i]
        for row in q_mat:
            row[i], row[j] = row[j], row[i]
        q_sign = -q_sign

    def col_addmul(i, j, s):
        # column i <- column i - s * column j
        b[i] -= s * b[j]
        for row in q_mat:
            row[i] -= s * row[j]

    for j in range(1, k):
        # Reduce the pair (b[j-1], b[j]) until b[j-1] = 0, b[j] = gcd so far.
        while True:
            if b[j - 1] == 0:
                break
            if b[j] == 0:
                col_swap(j - 1, j)
                break
            s = b[j - 1] // b[j]
            col_addmul(j - 1, j, s)
            if b[j - 1] == 0:
                break
            col_swap(j - 1, j)
    if b[k - 1] < 0:
        # Sign-fixing column scale, tracked so det Q stays known.
        b[k - 1] = -b[k - 1]
        for row in q_mat:
            row[k - 1] = -row[k - 1]
        q_sign = -q_sign

    g = b[k - 1]
    m_prime = [[int(i == j) for j in range(k)] for i in range(k)]
    m_prime[0][0] = q_sign
    m_prime[k - 1] = list(b)
    q_inv = IntMatrix(q_mat, cols=k).inverse()
    m = IntMatrix(m_prime, cols=k) @ q_inv
    if list(m.data[k - 1]) != a or m.det() != g:
        raise InvariantViolationError("bottom-row completion failed its contract")
    return m


@dataclass(frozen=True)
class AffinePointSet:
    """A finite set of integer points in Z^(ambient_dim)."""

    ambient_dim: int
    points: tuple[tuple[int, ...], ...]

    def __init__(self, ambient_dim: int, points):
        pts = tuple(sorted({tuple(int(c) for c in p) for p in points}))
        if any(len(p) != ambient_dim for p in pts):
            raise ValueError("point dimension mismatch")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "points", pts)


def affine_dim(s: AffinePointSet) -> int:
    """Dimension of the affine span: rank over Q of {x - x0 : x in s}.

    Independent of the choice of x0; we fix the lexicographically least
    point for determinism.
    """
    if not s.points:
        raise ValueError("empty point set has no affine dimension")
    x0 = s.points[0]
    diffs = [tuple(a - b for a, b in zip(p, x0)) for p in s.points[1:]]
    if not diffs:
        return 0
    return len(hnf(IntMatrix(diffs, cols=s.ambient_dim)).nonzero_rows)


def _primitive_orthogonal(diffs: list[tuple[int, ...]], k: int) -> tuple[int, ...]:
    """A primitive integer vector orthogonal to every row of diffs.

    Exists whenever the rows do not span Q^k.  Found by exact rational
    elimination, then clearing denominators and dividing by the content.
    """
    rows = [[Fraction(e) for e in r] for r in diffs]
    pivots: dict[int, list[Fraction]] = {}
    for r in rows:
        for col, pr in sorted(pivots.items()):
            if r[col]:
                f = r[col] / pr[col]
                r = [e - f * g for e, g in zip(r, pr)]
        lead = next((j for j in range(k) if r[j]), None)
        if lead is not None:
            pivots[lead] = r
    free_cols = [j for j in range(k) if j not in pivots]
    if not free_cols:
        raise ValueError("rows span the whole space; no orthogonal vector")
    free = free_cols[-1]
    a = [Fraction(0)] * k
    a[free] = Fraction(1)
    for col in sorted(pivots, reverse=True):
        pr = pivots[col]
        a[col] = -sum(pr[j] * a[j] for j in range(col + 1, k)) / pr[col]
    lcm = 1
    for e in a:
        lcm = lcm * e.denominator // gcd(lcm, e.denominator)
    ints = [int(e * lcm) for e in a]
    content = 0
    for e in ints:
        content = gcd(content, e)
    ints = [e // content for e in ints]
    first = next(e for e in ints if e)
    if first < 0:
        ints = [-e for e in ints]
    return tuple(ints)


def flatten_affine(s: AffinePointSet) -> tuple[UnimodularMatrix, int]:
    """Press a dimension-deficient set onto a coordinate slab.

    Returns (phi, w) with phi an automorphism of Z^k such that the last
    coordinate of phi(x) equals w for every x in s.  Requires the affine
    dimension of s to be at most k - 1.
    """
    k = s.ambient_dim
    if not s.points:
        raise ValueError("empty point set")
    if affine_dim(s) >= k:
        raise ValueError("set is genuinely full-dimensional; nothing to flatten")
    x0 = s.points[0]
    diffs = [tuple(a - b for a, b in zip(p, x0)) for p in s.points[1:]]
    a = _primitive_orthogonal(diffs, k)
    phi = UnimodularMatrix(bottom_row_unimodular(a))
    w = sum(c * x for c, x in zip(a, x0))
    for p in s.points:
        if sum(c * x for c, x in zip(a, p)) != w:
            raise InvariantViolationError("flattening row is not constant on the set")
    return phi, w


@dataclass(frozen=True)
class TwistResult:
    phi: UnimodularMatrix
    w: tuple[int, ...]
    d: int


def twist_to_coordinates(s: AffinePointSet) -> TwistResult:
    """Align a d-dimensional point set with the first d coordinates.

    Produces phi in Aut(Z^k) and w in Z^(k-d) with phi(s) contained in
    Z^d x {w}, where d = affine_dim(s), and with the projection of
    phi(s) onto the first d coordinates genuinely d-dimensional.  Built
    by flattening one trailing coordinate at a time on shrinking leading
    blocks; when d = k the identity is returned with empty w.
    """
    if not s.points:
        raise ValueError("empty point set")
    k = s.ambient_dim
    d = affine_dim(s)
    phi = IntMatrix.identity(k)
    pts = [tuple(p) for p in s.points]
    w_rev: list[int] = []
    for m in range(k, d, -1):
        leading = AffinePointSet(m, {p[:m] for p in pts})
        sub_phi, w_m = flatten_affine(leading)
        full = [
            [sub_phi.matrix[i, j] if i < m and j < m else int(i == j) for j in range(k)]
            for i in range(k)
        ]
        step = IntMatrix(full, cols=k)
        phi = step @ phi
        pts = [step.mul_vec(p) for p in pts]
        w_rev.append(w_m)
    w = tuple(reversed(w_rev))
    for p in pts:
        if p[d:] != w:
            raise InvariantViolationError("twist left trailing coordinates non-constant")
    if d and affine_dim(AffinePointSet(d, {p[:d] for p in pts})) != d:
        raise InvariantViolationError("twisted shadow lost dimension")
    return TwistResult(UnimodularMatrix(phi), w, d)
