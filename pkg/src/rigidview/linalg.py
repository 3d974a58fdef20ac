"""Small dense matrix kernels over two scalar backends.

Every matrix in this package is tiny (at most a few dozen rows for the
geometry, ~1500 columns for coefficient matrices), dense and immutable.
Two scalar backends are supported and never mixed inside one computation:

* ``"exact"``: Python ints and :class:`fractions.Fraction`, with decidable
  equality and fraction-free (Bareiss) elimination so intermediate entries
  stay minor-sized,
* ``"float"``: IEEE binary64, where every comparison against zero goes
  through an explicit tolerance, never bare equality.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction, float]

EXACT = "exact"
FLOAT = "float"

DEFAULT_RANK_TOL = 1e-9


class BackendError(TypeError):
    """Exact and float scalars were mixed, or a tolerance is missing."""


class ShapeError(ValueError):
    """Matrix dimensions do not fit the requested operation."""


class NullityError(ValueError):
    """The kernel does not have the dimension the caller required."""

    def __init__(self, message: str, nullity: int):
        super().__init__(message)
        self.nullity = nullity


def scalar_backend(x: Scalar) -> str:
    if isinstance(x, float):
        return FLOAT
    if isinstance(x, (int, Fraction)):
        return EXACT
    raise BackendError(f"unsupported scalar type {type(x).__name__}")


def encode_scalar(x: Scalar):
    """JSON form of a scalar: rationals become 'p/q' strings, floats stay numbers."""
    if isinstance(x, float):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    return str(x)


def decode_scalar(v, backend: str = EXACT) -> Scalar:
    if backend == FLOAT:
        return float(Fraction(v)) if isinstance(v, str) else float(v)
    if isinstance(v, str):
        f = Fraction(v)
    elif isinstance(v, float):
        f = Fraction(v).limit_denominator(10**12) if v != int(v) else Fraction(int(v))
    else:
        f = Fraction(v)
    return f.numerator if f.denominator == 1 else f


class Mat:
    """Immutable dense matrix with row-major entries and a fixed backend.

    Integer and Fraction entries give the exact backend; any float entry
    selects the float backend (ints are then coerced to float).  Mixing
    Fraction and float entries is an error.
    """

    __slots__ = ("rows", "cols", "data", "backend")

    def __init__(self, rows: Iterable[Iterable[Scalar]]):
        data = tuple(tuple(r) for r in rows)
        if not data or not data[0]:
            raise ShapeError("matrix must have at least one row and column")
        ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise ShapeError("ragged rows")
        has_float = any(isinstance(x, float) for r in data for x in r)
        has_frac = any(isinstance(x, Fraction) for r in data for x in r)
        if has_float and has_frac:
            raise BackendError("cannot mix Fraction and float entries in one matrix")
        if has_float:
            data = tuple(tuple(float(x) for x in r) for r in data)
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "backend", FLOAT if has_float else EXACT)

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    @classmethod
    def identity(cls, n: int, backend: str = EXACT) -> "Mat":
        one, zero = (1.0, 0.0) if backend == FLOAT else (1, 0)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int, backend: str = EXACT) -> "Mat":
        zero = 0.0 if backend == FLOAT else 0
        return cls([[zero] * c for _ in range(r)])

    @classmethod
    def from_cols(cls, cols: Sequence[Sequence[Scalar]]) -> "Mat":
        return cls(list(zip(*cols)))

    def __getitem__(self, rc):
        i, j = rc
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def transpose(self) -> "Mat":
        return Mat(zip(*self.data))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def to_float(self) -> "Mat":
        return Mat([[float(x) for x in r] for r in self.data])

    def scaled(self, c: Scalar) -> "Mat":
        return Mat([[c * x for x in r] for r in self.data])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ot = other.transpose().data
        return Mat([[sum(a * b for a, b in zip(r, c)) for c in ot] for r in self.data])

    def apply(self, vec: Sequence[Scalar]) -> tuple:
        if len(vec) != self.cols:
            raise ShapeError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.data)

    def delete_row(self, i: int) -> "Mat":
        return Mat(self.data[:i] + self.data[i + 1:])

    def delete_col(self, j: int) -> "Mat":
        return Mat([r[:j] + r[j + 1:] for r in self.data])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat([[self.data[i][j] for j in cols] for i in rows])

    def __eq__(self, other):
        return isinstance(other, Mat) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}, {self.backend})"


def vstack(mats: Sequence[Mat]) -> Mat:
    return Mat([r for m in mats for r in m.data])


def hstack(mats: Sequence[Mat]) -> Mat:
    if any(m.rows != mats[0].rows for m in mats):
        raise ShapeError("row counts differ")
    return Mat([sum((m.data[i] for m in mats), ()) for i in range(mats[0].rows)])


def _exact_div(a, b):
    # Bareiss steps divide exactly; keep ints integer to avoid Fraction churn.
    if isinstance(a, int) and isinstance(b, int):
        return a // b
    return Fraction(a) / Fraction(b)


def _clear_row_denominators(row):
    denoms = [x.denominator for x in row if isinstance(x, Fraction)]
    if not denoms:
        return list(row)
    m = lcm(*denoms) if len(denoms) > 1 else denoms[0]
    return [int(x * m) if isinstance(x, Fraction) else x * m for x in row]


def _bareiss_echelon(data):
    """Fraction-free row echelon of integer rows.

    Returns (echelon rows, pivot column list).  Entries stay bounded by the
    matrix's minors; each elimination step divides exactly by the previous
    pivot.
    """
    a = [list(r) for r in data]
    nrows, ncols = len(a), len(a[0])
    pivot_cols = []
    prev = 1
    r = 0
    for c in range(ncols):
        piv_row = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv_row is None:
            continue
        if piv_row != r:
            a[r], a[piv_row] = a[piv_row], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            factor = a[i][c]
            for j in range(c + 1, ncols):
                a[i][j] = _exact_div(a[i][j] * piv - factor * a[r][j], prev)
            a[i][c] = 0
        prev = piv
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivot_cols


def _float_echelon(data, tol):
    """Complete-pivoting elimination; returns echelon, pivot magnitudes, column permutation."""
    a = [list(map(float, r)) for r in data]
    nrows, ncols = len(a), len(a[0])
    col_perm = list(range(ncols))
    pivots = []
    k = 0
    while k < min(nrows, ncols):
        best, bi, bj = 0.0, k, k
        for i in range(k, nrows):
            for j in range(k, ncols):
                if abs(a[i][j]) > best:
                    best, bi, bj = abs(a[i][j]), i, j
        if best == 0.0:
            break
        if bi != k:
            a[k], a[bi] = a[bi], a[k]
        if bj != k:
            for row in a:
                row[k], row[bj] = row[bj], row[k]
            col_perm[k], col_perm[bj] = col_perm[bj], col_perm[k]
        pivots.append(best)
        piv = a[k][k]
        for i in range(k + 1, nrows):
            f = a[i][k] / piv
            if f != 0.0:
                for j in range(k, ncols):
                    a[i][j] -= f * a[k][j]
                a[i][k] = 0.0
        k += 1
    return a, pivots, col_perm


class RankReport:
    """Result of a rank computation: the rank, and on the float backend the
    pivot magnitudes and the tolerance that was applied."""

    __slots__ = ("rank", "pivots", "tolerance")

    def __init__(self, rank: int, pivots=(), tolerance=None):
        self.rank = rank
        self.pivots = tuple(pivots)
        self.tolerance = tolerance

    def __eq__(self, other):
        return isinstance(other, RankReport) and self.rank == other.rank

    def __repr__(self):
        return f"RankReport(rank={self.rank}, tolerance={self.tolerance})"


def det(m: Mat) -> Scalar:
    """Determinant of a square matrix of size at most 8.

    Exact backend uses fraction-free elimination; float backend uses
    partial-pivoted Gaussian elimination.
    """
    if not m.is_square():
        raise ShapeError("determinant needs a square matrix")
    if m.rows > 8:
        raise ShapeError("det supports matrices up to size 8")
    if m.backend == FLOAT:
        return _float_det(m.data)
    a = [list(r) for r in m.data]
    if any(isinstance(x, Fraction) for r in a for x in r):
        a = [[Fraction(x) for x in r] for r in a]
    n = m.rows
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv_row = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv_row is None:
                return a[0][0] * 0
            a[k], a[piv_row] = a[piv_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
            a[i][k] = 0
        prev = a[k][k]
    result = sign * a[n - 1][n - 1]
    if isinstance(result, Fraction) and result.denominator == 1:
        return result.numerator
    return result


def _float_det(data) -> float:
    a = [list(map(float, r)) for r in data]
    n = len(a)
    detval = 1.0
    for k in range(n):
        piv_row = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[piv_row][k] == 0.0:
            return 0.0
        if piv_row != k:
            a[k], a[piv_row] = a[piv_row], a[k]
            detval = -detval
        detval *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return detval


def rank(m: Mat, tol: float | None = None) -> RankReport:
    """Rank of a matrix; on the float backend pivots below ``tol`` times the
    largest pivot are treated as zero (default 1e-9)."""
    if m.backend == EXACT:
        rows = [_clear_row_denominators(r) for r in m.data]
        _, pivot_cols = _bareiss_echelon(rows)
        return RankReport(len(pivot_cols))
    if tol is None:
        tol = DEFAULT_RANK_TOL
    _, pivots, _ = _float_echelon(m.data, tol)
    if not pivots:
        return RankReport(0, pivots, tol)
    cutoff = tol * max(pivots)
    return RankReport(sum(1 for p in pivots if p > cutoff), pivots, tol)


def nullspace(m: Mat, tol: float | None = None) -> list[tuple]:
    """Basis of the kernel.  Exact vectors are integer-cleared."""
    if m.backend == EXACT:
        rows = [_clear_row_denominators(r) for r in m.data]
        ech, pivot_cols = _bareiss_echelon(rows)
        free_cols = [c for c in range(m.cols) if c not in pivot_cols]
        basis = []
        for f in free_cols:
            v = [Fraction(0)] * m.cols
            v[f] = Fraction(1)
            for r in range(len(pivot_cols) - 1, -1, -1):
                pc = pivot_cols[r]
                s = sum(Fraction(ech[r][j]) * v[j] for j in range(pc + 1, m.cols))
                v[pc] = -s / ech[r][pc]
            basis.append(integer_cleared(v))
        return basis
    if tol is None:
        tol = DEFAULT_RANK_TOL
    ech, pivots, col_perm = _float_echelon(m.data, tol)
    cutoff = tol * max(pivots) if pivots else 0.0
    rk = sum(1 for p in pivots if p > cutoff)
    basis = []
    for f in range(rk, m.cols):
        v = [0.0] * m.cols
        v[f] = 1.0
        for r in range(rk - 1, -1, -1):
            s = sum(ech[r][j] * v[j] for j in range(r + 1, m.cols))
            v[r] = -s / ech[r][r]
        w = [0.0] * m.cols
        for pos, orig in enumerate(col_perm):
            w[orig] = v[pos]
        norm = max(abs(x) for x in w)
        basis.append(tuple(x / norm for x in w))
    return basis


def kernel_vector(m: Mat, tol: float | None = None) -> tuple:
    """The kernel representative of a matrix whose nullity is exactly 1."""
    basis = nullspace(m, tol)
    if len(basis) != 1:
        raise NullityError(f"nullity is {len(basis)}, expected exactly 1", len(basis))
    return basis[0]


def integer_cleared(vec: Sequence[Scalar]) -> tuple:
    """Scale an exact vector to coprime integers (direction preserved)."""
    fracs = [Fraction(x) for x in vec]
    denoms = [f.denominator for f in fracs]
    m = lcm(*denoms) if len(denoms) > 1 else denoms[0]
    ints = [int(f * m) for f in fracs]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def signed_maximal_minors(m: Mat) -> tuple:
    """For a k x (k+1) matrix, the vector of signed maximal minors.

    Component i (0-based) is (-1)^i times the determinant of the matrix with
    column i deleted, so that ``m @ result = 0`` identically.  This sign
    convention is fixed package-wide.
    """
    if m.cols != m.rows + 1:
        raise ShapeError(f"need k x (k+1), got {m.rows}x{m.cols}")
    out = []
    for i in range(m.cols):
        d = det(m.delete_col(i))
        out.append(d if i % 2 == 0 else -d)
    return tuple(out)
