"""Exact integer and prime-field linear algebra.

Everything runs on Python ints. Matrices are small (desk scale), so the
Smith normal form below is the textbook elimination with smallest-pivot
selection rather than anything modular or sparse.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence


class NotNestedError(ValueError):
    """Raised when a sublattice is not contained in the claimed superlattice."""


class IntMatrix:
    """Immutable dense integer matrix (row-major)."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable[int]):
        data = tuple(int(x) for x in entries)
        if rows < 0 or cols < 0 or len(data) != rows * cols:
            raise ValueError(f"{len(data)} entries do not fill a {rows}x{cols} matrix")
        self.rows = rows
        self.cols = cols
        self._data = data
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cannot infer the column count of an empty row list")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, (x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [list(c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise ValueError("column length mismatch")
        return cls(rows, len(columns), (columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            m[i][i] = d
        return cls.from_rows(m, cols)

    @property
    def entries(self) -> tuple[int, ...]:
        return self._data

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i * self.cols + j]

    def tolist(self) -> list[list[int]]:
        c = self.cols
        return [list(self._data[i * c:(i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self._data[j::self.cols] if self.cols else ()

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        a = self.tolist()
        bt = [other.column(j) for j in range(other.cols)]
        return IntMatrix(self.rows, other.cols, (sum(x * y for x, y in zip(r, c)) for r in a for c in bt))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, (x + y for x, y in zip(self._data, other._data)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, (x - y for x, y in zip(self._data, other._data)))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, (k * x for x in self._data))

    def mod(self, p: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, (x % p for x in self._data))

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix.from_rows([r1 + r2 for r1, r2 in zip(self.tolist(), other.tolist())], self.cols + other.cols) \
            if self.rows else IntMatrix.zeros(0, self.cols + other.cols)

    def select_rows(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(idx), self.cols, (x for i in idx for x in self.row(i)))

    def select_columns(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix(self.rows, len(idx), (self[i, j] for i in range(self.rows) for j in idx))

    def is_zero(self) -> bool:
        return not any(self._data)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, {self.tolist()})"


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of a positive integer."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def determinant(a: IntMatrix) -> int:
    """Exact determinant via fraction-free Bareiss elimination."""
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    m = a.tolist()
    sign, prev = 1, 1
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
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


class SmithForm(NamedTuple):
    D: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for r in m:
        r[i], r[j] = r[j], r[i]


def snf(a: IntMatrix) -> SmithForm:
    """Smith normal form with transforms: ``U @ a @ V == D``."""
    rows, cols = a.shape
    m = a.tolist()
    u = IntMatrix.identity(rows).tolist()
    # V is tracked transposed so column operations become row operations
    vt = IntMatrix.identity(cols).tolist()

    def row_op(i, j, q):  # row_i -= q * row_j
        if q:
            ri, rj = m[i], m[j]
            for c in range(cols):
                ri[c] -= q * rj[c]
            ui, uj = u[i], u[j]
            for c in range(rows):
                ui[c] -= q * uj[c]

    def col_op(i, j, q):  # col_i -= q * col_j
        if q:
            for r in m:
                r[i] -= q * r[j]
            vi, vj = vt[i], vt[j]
            for c in range(cols):
                vi[c] -= q * vj[c]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                r = m[i]
                for j in range(t, cols):
                    x = r[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                _swap_rows(m, i, t)
                _swap_rows(u, i, t)
            if j != t:
                _swap_cols(m, j, t)
                _swap_rows(vt, j, t)
            piv = m[t][t]
            clean = True
            for i in range(t + 1, rows):
                if m[i][t]:
                    row_op(i, t, m[i][t] // piv)
                    clean = clean and m[i][t] == 0
            for j in range(t + 1, cols):
                if m[t][j]:
                    col_op(j, t, m[t][j] // piv)
                    clean = clean and m[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if m[i][j] % piv), None)
            if bad is None:
                break
            # fold the offending row in; the next pass lowers the pivot to a gcd
            row_op(t, bad[0], -1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        if m[t][t] == 0:
            break

    d = IntMatrix.from_rows(m, cols) if rows else IntMatrix.zeros(0, cols)
    uu = IntMatrix.from_rows(u, rows) if rows else IntMatrix.zeros(0, 0)
    vv = (IntMatrix.from_rows(vt, cols) if cols else IntMatrix.zeros(0, 0)).transpose()
    return SmithForm(d, uu, vv)


def invariant_factors(a: IntMatrix) -> list[int]:
    """Non-zero Smith diagonal entries (including 1s)."""
    return [d for d in snf(a).diagonal if d]


def rank_mod_p(a: IntMatrix, p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return len(_rref_mod_p(a.tolist(), a.cols, p)[1])


def _rref_mod_p(m: list[list[int]], cols: int, p: int):
    m = [[x % p for x in r] for r in m]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_over_q(a: IntMatrix) -> int:
    return snf(a).rank


def nullspace_mod_p(a: IntMatrix, p: int) -> list[list[int]]:
    """Basis (as vectors) of {x : a x = 0 mod p}."""
    rref, pivots = _rref_mod_p(a.tolist(), a.cols, p)
    free = [c for c in range(a.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * a.cols
        v[f] = 1
        for row, pc in zip(rref, pivots):
            v[pc] = (-row[f]) % p
        basis.append(v)
    return basis


def solve_mod_p(a: IntMatrix, b: Sequence[int], p: int) -> list[int] | None:
    """One solution of ``a x = b (mod p)`` or None."""
    aug = [list(r) + [bi] for r, bi in zip(a.tolist(), b)]
    rref, pivots = _rref_mod_p(aug, a.cols + 1, p)
    if a.cols in pivots:
        return None
    x = [0] * a.cols
    for row, pc in zip(rref, pivots):
        x[pc] = row[-1] % p
    return x


def integer_kernel_basis(a: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of {x : a x = 0}."""
    form = snf(a)
    r = form.rank
    return form.V.select_columns(list(range(r, a.cols)))


def solve_integer(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """One integer solution X of ``a X = b``; raises NotNestedError if none exists."""
    if a.rows != b.rows:
        raise ValueError("row count mismatch")
    form = snf(a)
    diag = form.diagonal
    r = form.rank
    t = form.U @ b
    y = [[0] * b.cols for _ in range(a.cols)]
    for i in range(a.rows):
        for j in range(b.cols):
            x = t[i, j]
            if i < r:
                if x % diag[i]:
                    raise NotNestedError("right-hand side is not in the integer column span")
                y[i][j] = x // diag[i]
            elif x:
                raise NotNestedError("right-hand side is not in the rational column span")
    ymat = IntMatrix.from_rows(y, b.cols) if a.cols else IntMatrix.zeros(0, b.cols)
    return form.V @ ymat


def lattice_quotient_invariants(l1: IntMatrix, l2: IntMatrix) -> tuple[int, tuple[int, ...]]:
    """Isomorphism type of span(l1) / span(l2) as (free rank, invariant factors >= 2).

    Columns of either matrix may be linearly dependent; span(l2) must lie
    inside span(l1) over Z.
    """
    if l1.rows != l2.rows:
        raise ValueError("ambient dimension mismatch")
    form = snf(l1)
    diag = form.diagonal
    r = form.rank
    t = form.U @ l2
    x = []
    for i in range(l1.rows):
        row = t.row(i)
        if i < r:
            if any(v % diag[i] for v in row):
                raise NotNestedError("sublattice is not contained in the lattice")
            x.append([v // diag[i] for v in row])
        elif any(row):
            raise NotNestedError("sublattice leaves the rational span of the lattice")
    xmat = IntMatrix.from_rows(x, l2.cols) if r else IntMatrix.zeros(0, l2.cols)
    factors = invariant_factors(xmat)
    return r - len(factors), tuple(d for d in factors if d > 1)


def column_in_span_mod(vectors: IntMatrix, relations: IntMatrix) -> bool:
    """True iff every column of ``vectors`` lies in the Z-span of ``relations``."""
    try:
        solve_integer(relations, vectors)
    except NotNestedError:
        return False
    return True
