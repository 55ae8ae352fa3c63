"""Exact integer and rational linear algebra for the polyhedral side.

Everything in this module is arbitrary-precision and exact; no floating
point enters or leaves.  All values are immutable after construction and
every operation is a pure function, so concurrent use needs no locking.
"""

from __future__ import annotations

import operator
from fractions import Fraction
from math import gcd


class ZeroVector(ValueError):
    """Raised when an operation needs a nonzero vector."""


class NotSquare(ValueError):
    """Raised when a square matrix is required."""


class NotUnimodular(ValueError):
    """Raised by integer solves when |det| != 1 (signals a non-smooth cone)."""


class DimensionMismatch(ValueError):
    """Raised when vector/matrix dimensions are incompatible."""


def _as_int(x):
    try:
        return operator.index(x)
    except TypeError:
        raise TypeError(f"expected an integer entry, got {x!r}") from None


class LatticeVector:
    """An integer vector, the ambient for rays, characters and Cartier data.

    The ``primitive`` flag, when set, certifies that the vector is nonzero
    with coordinate gcd 1.
    """

    __slots__ = ("coords", "primitive")

    def __init__(self, coords, primitive=False):
        object.__setattr__(self, "coords", tuple(_as_int(c) for c in coords))
        if primitive:
            g = gcd(*self.coords) if len(self.coords) > 1 else abs(self.coords[0])
            if g != 1:
                raise ValueError(f"vector {self.coords} is not primitive")
        object.__setattr__(self, "primitive", bool(primitive))

    def __setattr__(self, name, value):
        raise AttributeError("LatticeVector is immutable")

    @property
    def dim(self):
        return len(self.coords)

    def dot(self, other):
        """Exact pairing with another vector (int or Fraction entries)."""
        oc = other.coords if hasattr(other, "coords") else tuple(other)
        if len(oc) != len(self.coords):
            raise DimensionMismatch(f"dim {len(self.coords)} vs {len(oc)}")
        return sum(a * b for a, b in zip(self.coords, oc))

    def __add__(self, other):
        if len(other.coords) != len(self.coords):
            raise DimensionMismatch("vector dimensions differ")
        return LatticeVector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        if len(other.coords) != len(self.coords):
            raise DimensionMismatch("vector dimensions differ")
        return LatticeVector(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return LatticeVector(-a for a in self.coords)

    def __mul__(self, k):
        return LatticeVector(_as_int(k) * a for a in self.coords)

    __rmul__ = __mul__

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def __eq__(self, other):
        return isinstance(other, LatticeVector) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self):
        return f"LatticeVector{self.coords}"


class RationalVector:
    """A vector over Q; Fraction keeps denominators positive and reduced."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in coords))

    def __setattr__(self, name, value):
        raise AttributeError("RationalVector is immutable")

    @property
    def dim(self):
        return len(self.coords)

    def dot(self, other):
        oc = other.coords if hasattr(other, "coords") else tuple(other)
        if len(oc) != len(self.coords):
            raise DimensionMismatch(f"dim {len(self.coords)} vs {len(oc)}")
        return sum(a * b for a, b in zip(self.coords, oc))

    def __eq__(self, other):
        return isinstance(other, RationalVector) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self):
        return f"RationalVector{tuple(str(c) for c in self.coords)}"


class IntMatrix:
    """A rectangular integer matrix with immutable dimensions."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(_as_int(x) for x in row) for row in rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def from_columns(cls, cols):
        cols = [tuple(c) for c in cols]
        return cls(zip(*cols)) if cols else cls(())

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"IntMatrix({list(map(list, self.rows))})"


def primitive_reduce(v):
    """Divide an integer vector by the gcd of its entries.

    The result carries the primitive flag.  Sign is preserved:
    (-3, -6, 9) reduces to (-1, -2, 3).
    """
    if not isinstance(v, LatticeVector):
        v = LatticeVector(v)
    if v.is_zero():
        raise ZeroVector("cannot reduce the zero vector")
    g = 0
    for c in v.coords:
        g = gcd(g, abs(c))
    return LatticeVector((c // g for c in v.coords), primitive=True)


def det(M):
    """Exact determinant via Bareiss fraction-free elimination."""
    if M.nrows != M.ncols:
        raise NotSquare(f"{M.nrows}x{M.ncols} matrix")
    n = M.nrows
    if n == 0:
        return 1
    a = [list(row) for row in M.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # Bareiss: this division is exact over the integers
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve_integer(M, b):
    """Solve Mx = b for the unique integer x; requires det(M) = +-1.

    Unimodularity holds exactly when the cone whose generators are the
    rows of M is smooth, so a NotUnimodular error here flags a non-smooth
    cone upstream.
    """
    if M.nrows != M.ncols:
        raise NotSquare(f"{M.nrows}x{M.ncols} matrix")
    bc = b.coords if hasattr(b, "coords") else tuple(b)
    if len(bc) != M.nrows:
        raise DimensionMismatch("right side length differs from matrix size")
    d = det(M)
    if d not in (1, -1):
        raise NotUnimodular(f"det = {d}")
    n = M.nrows
    # Cramer with Bareiss determinants; division by +-1 is multiplication
    x = []
    for j in range(n):
        cols = [M.column(t) if t != j else bc for t in range(n)]
        x.append(det(IntMatrix.from_columns(cols)) * d)
    return LatticeVector(x)


def solve_rational(columns, rhs):
    """Solve sum_j x_j * columns[j] = rhs exactly over Q.

    Returns the coefficient list, or None if the system is inconsistent.
    The columns are assumed linearly independent (unique solution); a
    dependent input raises ValueError.
    """
    cols = [tuple(c) for c in columns]
    b = [Fraction(x) for x in (rhs.coords if hasattr(rhs, "coords") else rhs)]
    m = len(b)
    k = len(cols)
    if any(len(c) != m for c in cols):
        raise DimensionMismatch("column length differs from right side")
    aug = [[Fraction(cols[j][i]) for j in range(k)] + [b[i]] for i in range(m)]
    pivot_rows = []
    r = 0
    for c in range(k):
        pr = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if pr is None:
            raise ValueError("columns are linearly dependent")
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivot_rows.append(r)
        r += 1
    for i in range(r, m):
        if aug[i][k] != 0:
            return None
    return [aug[i][k] for i in range(k)]


def rational_rank(rows):
    """Rank over Q of a list of integer or rational row vectors."""
    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    row = 0
    for c in range(ncols):
        pr = next((i for i in range(row, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[row], mat[pr] = mat[pr], mat[row]
        pv = mat[row][c]
        mat[row] = [x / pv for x in mat[row]]
        for i in range(len(mat)):
            if i != row and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[row])]
        row += 1
        rank += 1
    return rank


def kernel_vector(rows):
    """A nonzero rational kernel vector of the row system, or None.

    Only meaningful when the kernel is one-dimensional (the supporting
    hyperplane searches use it on corank-1 systems); for larger kernels an
    arbitrary kernel direction is returned.
    """
    mat = [[Fraction(x) for x in row] for row in rows]
    ncols = len(mat[0]) if mat else 0
    pivots = {}
    row = 0
    for c in range(ncols):
        pr = next((i for i in range(row, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[row], mat[pr] = mat[pr], mat[row]
        pv = mat[row][c]
        mat[row] = [x / pv for x in mat[row]]
        for i in range(len(mat)):
            if i != row and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[row])]
        pivots[c] = row
        row += 1
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    fc = free[0]
    vec = [Fraction(0)] * ncols
    vec[fc] = Fraction(1)
    for c, r in pivots.items():
        vec[c] = -mat[r][fc]
    return vec
