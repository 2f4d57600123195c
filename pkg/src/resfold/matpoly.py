"""Dense matrices of polynomials: products, minors, Pfaffians, adjugates,
exterior powers, and probabilistic rank via random specialization."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import NotAlternating, ResfoldError
from .poly import Poly, PolyRing, scalar_normalize, specialize


@dataclass(frozen=True)
class PolyMatrix:
    ring: PolyRing
    entries: tuple  # tuple of row tuples of Poly
    row_degrees: tuple | None = None
    col_degrees: tuple | None = None
    row_labels: tuple | None = None
    col_labels: tuple | None = None

    def __post_init__(self):
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise ResfoldError("ragged matrix")

    # -- construction ------------------------------------------------------
    @staticmethod
    def from_rows(ring: PolyRing, rows, ncols: int | None = None, **labels) -> "PolyMatrix":
        conv = []
        for row in rows:
            out = []
            for x in row:
                if isinstance(x, Poly):
                    out.append(x)
                elif isinstance(x, str):
                    out.append(ring.parse(x))
                else:
                    out.append(ring.const(x))
            conv.append(tuple(out))
        if ncols is not None and conv and len(conv[0]) != ncols:
            raise ResfoldError("ncols mismatch")
        return PolyMatrix(ring, tuple(conv), **labels)

    @staticmethod
    def identity(ring: PolyRing, n: int) -> "PolyMatrix":
        one, zero = ring.one(), ring.zero()
        return PolyMatrix(ring, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @staticmethod
    def zeros(ring: PolyRing, nrows: int, ncols: int) -> "PolyMatrix":
        zero = ring.zero()
        return PolyMatrix(ring, tuple(tuple(zero for _ in range(ncols)) for _ in range(nrows)))

    @staticmethod
    def from_scalars(ring: PolyRing, rows) -> "PolyMatrix":
        return PolyMatrix.from_rows(ring, rows)

    # -- shape ---------------------------------------------------------------
    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def entry(self, i: int, j: int) -> Poly:
        return self.entries[i][j]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i][j] for i in range(self.nrows))

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    # -- arithmetic ------------------------------------------------------------
    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.nrows:
            raise ResfoldError("dimension mismatch in product")
        zero = self.ring.zero()
        rows = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = zero
                for k in range(self.ncols):
                    a = self.entries[i][k]
                    if a.is_zero():
                        continue
                    b = other.entries[k][j]
                    if b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return PolyMatrix(self.ring, tuple(rows),
                          row_degrees=self.row_degrees, col_degrees=other.col_degrees)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ResfoldError("dimension mismatch in sum")
        return PolyMatrix(self.ring, tuple(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)
        ), row_degrees=self.row_degrees, col_degrees=self.col_degrees)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + (-other)

    def __neg__(self) -> "PolyMatrix":
        return self.map_entries(lambda p: -p)

    def scale(self, c) -> "PolyMatrix":
        return self.map_entries(lambda p: p.scale(c))

    def map_entries(self, f) -> "PolyMatrix":
        return PolyMatrix(self.ring, tuple(tuple(f(p) for p in row) for row in self.entries),
                          row_degrees=self.row_degrees, col_degrees=self.col_degrees,
                          row_labels=self.row_labels, col_labels=self.col_labels)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, tuple(zip(*self.entries)) if self.entries else (),
                          row_degrees=self.col_degrees, col_degrees=self.row_degrees,
                          row_labels=self.col_labels, col_labels=self.row_labels)

    def hstack(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.nrows != other.nrows:
            raise ResfoldError("dimension mismatch in hstack")
        return PolyMatrix(self.ring, tuple(a + b for a, b in zip(self.entries, other.entries)),
                          row_degrees=self.row_degrees)

    def vstack(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.ncols:
            raise ResfoldError("dimension mismatch in vstack")
        return PolyMatrix(self.ring, self.entries + other.entries, col_degrees=self.col_degrees)

    def submatrix(self, rows, cols) -> "PolyMatrix":
        rows, cols = list(rows), list(cols)
        return PolyMatrix(self.ring, tuple(tuple(self.entries[i][j] for j in cols) for i in rows))

    def apply(self, vector) -> tuple:
        """Matrix times a column (sequence of Poly)."""
        vector = list(vector)
        if len(vector) != self.ncols:
            raise ResfoldError("vector length mismatch")
        zero = self.ring.zero()
        out = []
        for i in range(self.nrows):
            acc = zero
            for j, v in enumerate(vector):
                if v.is_zero() or self.entries[i][j].is_zero():
                    continue
                acc = acc + self.entries[i][j] * v
            out.append(acc)
        return tuple(out)

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def first_nonzero(self):
        for i, row in enumerate(self.entries):
            for j, p in enumerate(row):
                if not p.is_zero():
                    return (i, j)
        return None

    def specialize_matrix(self, assignment: dict) -> "PolyMatrix":
        return self.map_entries(lambda p: _as_poly(self.ring, specialize(p, assignment)))

    def __str__(self):
        return "\n".join(", ".join(str(p) for p in row) for row in self.entries)


def _as_poly(ring: PolyRing, x) -> Poly:
    return x if isinstance(x, Poly) else ring.const(x)


def mat_ops(A: PolyMatrix, B: PolyMatrix | None = None, op: str = "mul"):
    if op == "mul":
        return A @ B
    if op == "transpose":
        return A.transpose()
    if op == "hstack":
        return A.hstack(B)
    if op == "vstack":
        return A.vstack(B)
    if op == "submatrix":
        raise ResfoldError("use PolyMatrix.submatrix(rows, cols)")
    raise ResfoldError(f"unknown op {op!r}")


# -- determinants and minors ---------------------------------------------------


def det(M: PolyMatrix) -> Poly:
    """Determinant by Laplace expansion with subset memoization.

    Columns are visited sparsest-first (sign tracked); states are row
    bitmasks, so sparse symbolic matrices prune hard.
    """
    n = M.nrows
    if n != M.ncols:
        raise ResfoldError("determinant of a non-square matrix")
    ring = M.ring
    if n == 0:
        return ring.one()
    density = [(sum(0 if M.entries[i][j].is_zero() else 1 for i in range(n)), j) for j in range(n)]
    order = [j for _, j in sorted(density)]
    perm_sign = _permutation_sign(order)
    memo: dict = {}
    full = (1 << n) - 1

    def rec(mask: int, depth: int) -> Poly:
        if depth == n:
            return ring.one()
        key = mask
        hit = memo.get(key)
        if hit is not None:
            return hit
        col = order[depth]
        acc = ring.zero()
        sign = 1
        m = mask
        while m:
            low = m & (-m)
            r = low.bit_length() - 1
            e = M.entries[r][col]
            if not e.is_zero():
                sub = rec(mask ^ low, depth + 1)
                if not sub.is_zero():
                    term = e * sub
                    acc = acc + term if sign > 0 else acc - term
            sign = -sign
            m ^= low
        memo[key] = acc
        return acc

    result = rec(full, 0)
    return result if perm_sign > 0 else -result


def _permutation_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def minors_stream(M: PolyMatrix, k: int):
    """Yield ((rows, cols), minor) for all k x k minors, lexicographic order."""
    if k > min(M.nrows, M.ncols):
        raise ResfoldError("minor size exceeds dimensions")
    for rows in itertools.combinations(range(M.nrows), k):
        for cols in itertools.combinations(range(M.ncols), k):
            yield (rows, cols), det(M.submatrix(rows, cols))


def minors_ideal(M: PolyMatrix, k: int, normalize: bool = True) -> list:
    """All k x k minors in deterministic order; optionally content-normalized
    with duplicates removed."""
    out = []
    seen = set()
    for _, m in minors_stream(M, k):
        if m.is_zero():
            continue
        if normalize:
            m = scalar_normalize(m)
            if m in seen:
                continue
            seen.add(m)
        out.append(m)
    return out


def pfaffian(M: PolyMatrix, rows=None) -> Poly:
    """Pfaffian of the principal submatrix on `rows` (default all), which must
    be alternating there."""
    ring = M.ring
    if rows is None:
        rows = tuple(range(M.nrows))
    rows = tuple(rows)
    if len(rows) % 2:
        raise ResfoldError("Pfaffian needs an even number of indices")
    for a in rows:
        if not M.entries[a][a].is_zero():
            raise NotAlternating(f"diagonal entry ({a},{a}) is nonzero")
        for b in rows:
            if (M.entries[a][b] + M.entries[b][a]).is_zero():
                continue
            raise NotAlternating(f"entries ({a},{b}) and ({b},{a}) do not cancel")

    memo: dict = {}

    def rec(idx: tuple) -> Poly:
        if not idx:
            return ring.one()
        hit = memo.get(idx)
        if hit is not None:
            return hit
        i0 = idx[0]
        rest = idx[1:]
        acc = ring.zero()
        for t, j in enumerate(rest):
            e = M.entries[i0][j]
            if e.is_zero():
                continue
            sub = rec(tuple(x for x in rest if x != j))
            if sub.is_zero():
                continue
            term = e * sub
            acc = acc + term if t % 2 == 0 else acc - term
        memo[idx] = acc
        return acc

    return rec(rows)


def adjugate(M: PolyMatrix) -> PolyMatrix:
    """Transpose cofactor matrix: M @ adjugate(M) = det(M) * I."""
    n = M.nrows
    if n != M.ncols:
        raise ResfoldError("adjugate of a non-square matrix")
    ring = M.ring
    if n == 0:
        return M
    rows = []
    all_idx = list(range(n))
    for i in range(n):
        row = []
        for j in range(n):
            sub = M.submatrix([r for r in all_idx if r != j], [c for c in all_idx if c != i])
            c = det(sub)
            if (i + j) % 2:
                c = -c
            row.append(c)
        rows.append(tuple(row))
    return PolyMatrix(ring, tuple(rows))


# -- exact scalar linear algebra -------------------------------------------------


def scalar_rank(field, rows) -> int:
    """Rank of a matrix of field scalars by Gaussian elimination."""
    mat = [list(r) for r in rows]
    if not mat:
        return 0
    nrows, ncols = len(mat), len(mat[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = field.inv(mat[rank][col])
        mat[rank] = [field.mul(x, inv) for x in mat[rank]]
        for r in range(nrows):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(mat[r], mat[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def scalar_inverse(field, rows) -> list:
    """Inverse of a square scalar matrix; raises on singular input."""
    n = len(rows)
    mat = [list(r) + [field.one() if i == j else field.zero() for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            raise ResfoldError("singular matrix")
        mat[col], mat[piv] = mat[piv], mat[col]
        inv = field.inv(mat[col][col])
        mat[col] = [field.mul(x, inv) for x in mat[col]]
        for r in range(n):
            if r != col and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(mat[r], mat[col])]
    return [row[n:] for row in mat]


def constant_solver(field, columns):
    """Given constant columns forming an injective matrix, return a function
    solving  sum_j c_j * column_j = rhs  for polynomial right-hand sides.

    Precomputes a row-reduction transform; the returned callable raises when
    the system is inconsistent.
    """
    nrows = len(columns[0])
    ncols = len(columns)
    aug = [[columns[j][i] for j in range(ncols)] + [field.one() if r == i else field.zero() for r in range(nrows)]
           for i, _ in enumerate(range(nrows))]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if aug[r][col] != 0:
                piv = r
                break
        if piv is None:
            raise ResfoldError("columns are not independent")
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = field.inv(aug[rank][col])
        aug[rank] = [field.mul(x, inv) for x in aug[rank]]
        for r in range(nrows):
            if r != rank and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(aug[r], aug[rank])]
        pivots.append(col)
        rank += 1
    transform = [row[ncols:] for row in aug]  # T @ A = [I; 0]

    def solve(rhs):
        ring = rhs[0].ring
        coords = []
        for r in range(nrows):
            acc = ring.zero()
            for i, t in enumerate(transform[r]):
                if t != 0 and not rhs[i].is_zero():
                    acc = acc + rhs[i].scale(t)
            coords.append(acc)
        for r in range(ncols, nrows):
            if not coords[r].is_zero():
                raise ResfoldError("inconsistent constant system")
        return coords[:ncols]

    return solve


def generic_rank(M: PolyMatrix, seed: int = 0) -> int:
    """Rank over the fraction field by random specialization, 3 retries, max."""
    ring = M.ring
    field = ring.field
    best = 0
    for trial in range(3):
        rng = random.Random((seed, trial, "generic_rank").__repr__())
        assignment = {v: field.random_nonzero(rng, 1000) for v in ring.variables}
        rows = []
        for i in range(M.nrows):
            rows.append([specialize(p, assignment) if ring.nvars else p.constant_value()
                         for p in M.entries[i]])
        best = max(best, scalar_rank(field, rows))
    return best


def exterior_power(M: PolyMatrix, k: int) -> PolyMatrix:
    """Matrix of k x k minors on sorted index tuples (standard wedge bases)."""
    if k < 0 or k > min(M.nrows, M.ncols):
        raise ResfoldError("bad exterior power")
    row_idx = list(itertools.combinations(range(M.nrows), k))
    col_idx = list(itertools.combinations(range(M.ncols), k))
    rows = []
    for R in row_idx:
        rows.append(tuple(det(M.submatrix(R, C)) for C in col_idx))
    return PolyMatrix(M.ring, tuple(rows), row_labels=tuple(row_idx), col_labels=tuple(col_idx))
