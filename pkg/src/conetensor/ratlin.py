"""Exact rational linear algebra.

Vectors are tuples of :class:`fractions.Fraction`, matrices are tuples of
row tuples.  Everything is immutable and nothing ever touches a float.
Elimination is done fraction-free on integer-scaled rows and only divided
out at the end.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Optional, Sequence

Rat = Fraction
RVec = tuple  # tuple[Fraction, ...]
RMat = tuple  # tuple[RVec, ...]


class DimensionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# construction and serialization

def rat(x) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a canonical Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a string or Fraction")
    return Fraction(x)


def vec(entries: Iterable) -> RVec:
    return tuple(rat(e) for e in entries)


def mat(rows: Iterable[Iterable]) -> RMat:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionError("ragged matrix")
    return m


def rat_str(x: Fraction) -> str:
    x = rat(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec_to_json(v: Sequence) -> list:
    return [rat_str(x) for x in v]


def mat_to_json(m: Sequence[Sequence]) -> list:
    return [vec_to_json(r) for r in m]


def zeros(n: int) -> RVec:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> RVec:
    return tuple(Fraction(int(k == i)) for k in range(n))


def identity(n: int) -> RMat:
    return tuple(unit(n, i) for i in range(n))


def zero_mat(rows: int, cols: int) -> RMat:
    return tuple(zeros(cols) for _ in range(rows))


def shape(m: RMat, cols: Optional[int] = None) -> tuple[int, int]:
    """(rows, cols); ``cols`` disambiguates the empty matrix."""
    if not m:
        return 0, (cols or 0)
    return len(m), len(m[0])


# ---------------------------------------------------------------------------
# arithmetic

def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise DimensionError(f"dot of lengths {len(u)} and {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence, v: Sequence) -> RVec:
    if len(u) != len(v):
        raise DimensionError("add: length mismatch")
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> RVec:
    if len(u) != len(v):
        raise DimensionError("sub: length mismatch")
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> RVec:
    c = rat(c)
    return tuple(c * a for a in v)


def neg(v: Sequence) -> RVec:
    return tuple(-a for a in v)


def lincomb(coeffs: Sequence, vectors: Sequence[Sequence], dim: int) -> RVec:
    out = [Fraction(0)] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            for i, a in enumerate(v):
                out[i] += c * a
    return tuple(out)


def is_zero(v: Sequence) -> bool:
    return all(a == 0 for a in v)


def transpose(m: RMat, cols: Optional[int] = None) -> RMat:
    r, c = shape(m, cols)
    return tuple(tuple(m[i][j] for i in range(r)) for j in range(c))


def matvec(m: RMat, v: Sequence) -> RVec:
    return tuple(dot(row, v) for row in m)


def matmul(a: RMat, b: RMat, cols: Optional[int] = None) -> RMat:
    """a b; ``cols`` is the column count of b, needed only when b has no rows."""
    if a and len(a[0]) != len(b):
        raise DimensionError("matmul: inner dimensions differ")
    bt = transpose(b, cols)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_add(a: RMat, b: RMat) -> RMat:
    return tuple(add(r, s) for r, s in zip(a, b))


def mat_scale(c, m: RMat) -> RMat:
    return tuple(scale(c, r) for r in m)


def outer(u: Sequence, v: Sequence) -> RMat:
    return tuple(tuple(a * b for b in v) for a in u)


def trace(m: RMat) -> Fraction:
    return sum((m[i][i] for i in range(len(m))), Fraction(0))


def flatten(m: RMat) -> RVec:
    return tuple(a for row in m for a in row)


def unflatten(v: Sequence, rows: int, cols: int) -> RMat:
    if len(v) != rows * cols:
        raise DimensionError("unflatten: wrong length")
    return tuple(tuple(rat(v[i * cols + j]) for j in range(cols)) for i in range(rows))


# ---------------------------------------------------------------------------
# integer scaling helpers (shared with the DD engine)

def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def to_integer_vector(v: Sequence) -> list[int]:
    """Positive multiple of ``v`` with coprime integer entries."""
    den = reduce(_lcm, (rat(a).denominator for a in v), 1)
    ints = [int(rat(a) * den) for a in v]
    g = reduce(gcd, ints, 0)
    if g > 1:
        ints = [a // g for a in ints]
    return ints


def primitive(v: Sequence[int]) -> list[int]:
    g = reduce(gcd, v, 0)
    if g > 1:
        return [a // g for a in v]
    return list(v)


def canonical_ray(v: Sequence) -> RVec:
    """Positive rescaling with the first nonzero entry equal to +1 or -1."""
    v = vec(v)
    for a in v:
        if a:
            s = abs(a)
            return tuple(b / s for b in v)
    return v


# ---------------------------------------------------------------------------
# elimination

def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = None
        for i in range(rank, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, len(m)):
            mi = m[i]
            f = mi[col]
            if f:
                row = m[rank]
                m[i] = [(p * mi[k] - f * row[k]) // prev for k in range(ncols)]
            else:
                m[i] = [(p * mi[k]) // prev for k in range(ncols)]
        prev = p
        rank += 1
        if rank == len(m):
            break
    return rank


def rref(m: RMat, cols: Optional[int] = None) -> tuple[RMat, list[int], int]:
    """Reduced row-echelon form, pivot columns and rank.

    Rows are scaled to integers and eliminated fraction-free; division only
    happens in the final normalization of pivot rows.
    """
    nrows, ncols = shape(m, cols)
    work = [to_integer_vector(r) for r in m]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        p = work[r][c]
        for i in range(nrows):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = primitive([p * a - f * b for a, b in zip(work[i], work[r])])
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    out = []
    for i in range(nrows):
        if i < r:
            p = work[i][pivots[i]]
            out.append(tuple(Fraction(a, p) for a in work[i]))
        else:
            out.append(zeros(ncols))
    return tuple(out), pivots, r


def rank(m: RMat) -> int:
    if not m:
        return 0
    return int_rank([to_integer_vector(r) for r in m])


def kernel_basis(m: RMat, cols: Optional[int] = None) -> list[RVec]:
    """Basis of {x : m x = 0}, one vector per free column.

    Each basis vector has a 1 in its free column and 0 in the other free
    columns, so the free coordinates give a left inverse of the basis.
    """
    _, ncols = shape(m, cols)
    red, pivots, r = rref(m, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][f]
        basis.append(tuple(v))
    return basis


def free_columns(m: RMat, cols: Optional[int] = None) -> list[int]:
    _, ncols = shape(m, cols)
    _, pivots, _ = rref(m, ncols)
    return [c for c in range(ncols) if c not in set(pivots)]


def solve(m: RMat, b: Sequence, cols: Optional[int] = None) -> Optional[RVec]:
    """Some x with m x = b, or None if the system is inconsistent."""
    nrows, ncols = shape(m, cols)
    if len(b) != nrows:
        raise DimensionError(f"solve: {nrows} rows but rhs of length {len(b)}")
    aug = tuple(tuple(row) + (rat(bi),) for row, bi in zip(m, b))
    red, pivots, r = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][ncols]
    return tuple(x)


def inverse(m: RMat) -> RMat:
    n = len(m)
    aug = tuple(tuple(row) + unit(n, i) for i, row in enumerate(m))
    red, pivots, r = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or r < n:
        raise ValueError("matrix is singular")
    return tuple(row[n:] for row in red[:n])


def independent_subset(vectors: Sequence[Sequence]) -> list[int]:
    """Indices of the first maximal linearly independent subset (greedy)."""
    if not vectors:
        return []
    cols = transpose(tuple(vec(v) for v in vectors))
    _, pivots, _ = rref(cols, len(vectors))
    return pivots


def span_equal(a: Sequence[Sequence], b: Sequence[Sequence], dim: int) -> bool:
    ra, _, ka = rref(tuple(vec(v) for v in a), dim)
    rb, _, kb = rref(tuple(vec(v) for v in b), dim)
    return ka == kb and ra[:ka] == rb[:kb]


def orthogonal_complement(vectors: Sequence[Sequence], dim: int) -> list[RVec]:
    return kernel_basis(tuple(vec(v) for v in vectors), dim)


def orthogonal_projector(basis: Sequence[Sequence], dim: int) -> RMat:
    """Matrix of the orthogonal projection onto span(basis)."""
    if not basis:
        return zero_mat(dim, dim)
    b = transpose(tuple(vec(v) for v in basis))  # dim x k
    bt = transpose(b)
    gram_inv = inverse(matmul(bt, b))
    return matmul(matmul(b, gram_inv), bt)
