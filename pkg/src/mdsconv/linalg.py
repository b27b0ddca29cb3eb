"""Dense matrices over a finite field.

Entries are canonical integer encodings stored row-major; the owning
field travels with the matrix.  Reduction follows one pinned echelon
convention (leftmost nonzero column, first nonzero row, pivot scaled
to 1, eliminate above and below) so ranks, kernels and solutions are
deterministic across runs.

Column-selection arguments are 1-based, matching codeword positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import SingularMatrixError, UsageError
from .field import GF, FieldSpec


@dataclass(frozen=True)
class FieldMatrix:
    """Immutable rows x cols matrix over `field`."""

    field: FieldSpec
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise UsageError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise UsageError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        for e in self.entries:
            self.field.check(e)

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]


def from_rows(field: FieldSpec, rows: Sequence[Sequence[int]], cols: int | None = None) -> FieldMatrix:
    """Build a matrix from an iterable of rows; `cols` disambiguates 0-row matrices."""
    rows = [tuple(r) for r in rows]
    if rows:
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise UsageError("ragged rows")
        if cols is not None and cols != width:
            raise UsageError(f"rows have {width} columns, expected {cols}")
        cols = width
    elif cols is None:
        raise UsageError("cols required for a matrix with no rows")
    flat = tuple(e for r in rows for e in r)
    return FieldMatrix(field, len(rows), cols, flat)


def identity(field: FieldSpec, n: int) -> FieldMatrix:
    return FieldMatrix(field, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))


def zeros(field: FieldSpec, rows: int, cols: int) -> FieldMatrix:
    return FieldMatrix(field, rows, cols, (0,) * (rows * cols))


def vandermonde_ext(
    field: FieldSpec,
    r: int,
    n: int,
    gamma: Sequence[int],
    w: Sequence[int],
) -> FieldMatrix:
    """Extended Vandermonde-type r x n matrix.

    Column j < n is w_j * (1, gamma_j, ..., gamma_j^(r-1))^T; the last
    column is (0, ..., 0, w_n)^T.
    """
    if not 0 < r < n:
        raise UsageError(f"need 0 < r < n, got r={r}, n={n}")
    if len(gamma) != n - 1:
        raise UsageError(f"gamma must have n-1 = {n - 1} entries, got {len(gamma)}")
    if len(w) != n:
        raise UsageError(f"w must have n = {n} entries, got {len(w)}")
    for x in gamma:
        field.check(x)
    for x in w:
        field.check(x)
        if x == 0:
            raise UsageError("column multipliers w must be nonzero")
    mul = field.mul
    out = []
    powers = [1] * (n - 1)
    for ell in range(r):
        row = [mul(w[j], powers[j]) for j in range(n - 1)]
        row.append(w[n - 1] if ell == r - 1 else 0)
        out.append(row)
        if ell < r - 1:
            powers = [mul(powers[j], gamma[j]) for j in range(n - 1)]
    return from_rows(field, out)


# -- reduction and derived operations ------------------------------------


def rref(m: FieldMatrix) -> tuple[FieldMatrix, tuple[int, ...]]:
    """Reduced row echelon form and its 0-based pivot columns."""
    f = m.field
    mul, sub, inv = f.mul, f.sub, f.inv
    a = m.to_lists()
    pivots: list[int] = []
    pr = 0
    for c in range(m.cols):
        pivot = None
        for i in range(pr, m.rows):
            if a[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        a[pr], a[pivot] = a[pivot], a[pr]
        scale = inv(a[pr][c])
        if scale != 1:
            a[pr] = [mul(scale, x) for x in a[pr]]
        lead = a[pr]
        for i in range(m.rows):
            coef = a[i][c]
            if i != pr and coef != 0:
                a[i] = [sub(x, mul(coef, y)) for x, y in zip(a[i], lead)]
        pivots.append(c)
        pr += 1
        if pr == m.rows:
            break
    return from_rows(f, a, cols=m.cols), tuple(pivots)


def rank(m: FieldMatrix) -> int:
    return len(rref(m)[1])


def transpose(m: FieldMatrix) -> FieldMatrix:
    return FieldMatrix(
        m.field,
        m.cols,
        m.rows,
        tuple(m.entries[i * m.cols + j] for j in range(m.cols) for i in range(m.rows)),
    )


def matmul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    if a.field != b.field:
        raise UsageError("matrix product across different fields")
    if a.cols != b.rows:
        raise UsageError(f"shape mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    f = a.field
    add, mul = f.add, f.mul
    brows = b.to_lists()
    out = []
    for i in range(a.rows):
        arow = a.row(i)
        row = [0] * b.cols
        for k, coef in enumerate(arow):
            if coef == 0:
                continue
            brow = brows[k]
            row = [add(x, mul(coef, y)) for x, y in zip(row, brow)]
        out.append(row)
    return from_rows(f, out, cols=b.cols)


def matvec(m: FieldMatrix, v: Sequence[int]) -> tuple[int, ...]:
    """M . v^T as a length-rows tuple."""
    if len(v) != m.cols:
        raise UsageError(f"vector length {len(v)} does not match {m.cols} columns")
    f = m.field
    add, mul = f.add, f.mul
    out = []
    for i in range(m.rows):
        acc = 0
        row = m.row(i)
        for x, y in zip(row, v):
            if x and y:
                acc = add(acc, mul(x, y))
        out.append(acc)
    return tuple(out)


def vecmat(v: Sequence[int], m: FieldMatrix) -> tuple[int, ...]:
    """v . M as a length-cols tuple."""
    if len(v) != m.rows:
        raise UsageError(f"vector length {len(v)} does not match {m.rows} rows")
    f = m.field
    add, mul = f.add, f.mul
    out = [0] * m.cols
    for i, coef in enumerate(v):
        if coef == 0:
            continue
        row = m.row(i)
        out = [add(x, mul(coef, y)) for x, y in zip(out, row)]
    return tuple(out)


def vec_add(field: FieldSpec, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if len(a) != len(b):
        raise UsageError("vector length mismatch")
    add = field.add
    return tuple(add(x, y) for x, y in zip(a, b))


def vec_scale(field: FieldSpec, c: int, a: Sequence[int]) -> tuple[int, ...]:
    mul = field.mul
    return tuple(mul(c, x) for x in a)


def submatrix_cols(m: FieldMatrix, positions: Iterable[int]) -> FieldMatrix:
    """Columns selected by 1-based positions, keeping their relative order."""
    pos = sorted(set(positions))
    for p in pos:
        if not 1 <= p <= m.cols:
            raise UsageError(f"column position {p} out of range 1..{m.cols}")
    idx = [p - 1 for p in pos]
    out = tuple(m.entries[i * m.cols + j] for i in range(m.rows) for j in idx)
    return FieldMatrix(m.field, m.rows, len(idx), out)


def stack_rows(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    if a.field != b.field or a.cols != b.cols:
        raise UsageError("row stack requires matching fields and widths")
    return FieldMatrix(a.field, a.rows + b.rows, a.cols, a.entries + b.entries)


def invert(m: FieldMatrix) -> FieldMatrix:
    if m.rows != m.cols:
        raise UsageError(f"cannot invert a {m.rows}x{m.cols} matrix")
    n = m.rows
    aug = from_rows(
        m.field,
        [m.row(i) + identity(m.field, n).row(i) for i in range(n)],
        cols=2 * n,
    )
    red, pivots = rref(aug)
    if pivots[:n] != tuple(range(n)) or len(pivots) < n:
        raise SingularMatrixError("matrix is singular")
    return from_rows(m.field, [red.row(i)[n:] for i in range(n)], cols=n)


def right_kernel_basis(m: FieldMatrix) -> FieldMatrix:
    """Rows form a deterministic basis of {x : M . x^T = 0}."""
    red, pivots = rref(m)
    f = m.field
    free = [c for c in range(m.cols) if c not in pivots]
    rows = []
    for fc in free:
        v = [0] * m.cols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(red.at(i, fc))
        rows.append(v)
    return from_rows(f, rows, cols=m.cols)


def solve_linear(a: FieldMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """One solution x of A . x^T = b^T (free variables 0), or None if inconsistent."""
    if len(b) != a.rows:
        raise UsageError(f"right-hand side length {len(b)} does not match {a.rows} rows")
    for e in b:
        a.field.check(e)
    aug = from_rows(a.field, [a.row(i) + (b[i],) for i in range(a.rows)], cols=a.cols + 1)
    red, pivots = rref(aug)
    if a.cols in pivots:
        return None
    x = [0] * a.cols
    for i, pc in enumerate(pivots):
        x[pc] = red.at(i, a.cols)
    return tuple(x)


# -- text dump ------------------------------------------------------------


def matrix_to_text(m: FieldMatrix) -> str:
    """One row per line, space-separated encodings; header 'rows cols q'."""
    lines = [f"{m.rows} {m.cols} {m.field.q}"]
    for i in range(m.rows):
        lines.append(" ".join(str(e) for e in m.row(i)))
    return "\n".join(lines)


def matrix_from_text(text: str) -> FieldMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise UsageError("empty matrix dump")
    try:
        rows, cols, q = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise UsageError(f"bad matrix header {lines[0]!r}") from exc
    field = GF(q)
    if len(lines) - 1 != rows:
        raise UsageError(f"expected {rows} rows, got {len(lines) - 1}")
    out = []
    for ln in lines[1:]:
        try:
            row = [int(t) for t in ln.split()]
        except ValueError as exc:
            raise UsageError(f"bad matrix row {ln!r}") from exc
        if len(row) != cols:
            raise UsageError(f"expected {cols} entries per row, got {len(row)}")
        out.append(row)
    return from_rows(field, out, cols=cols)
