"""Dense exact linear algebra over Q or GF(p).

Row-vector convention throughout: module elements are rows and maps act on
the right, so composing f then g multiplies the matrices as F @ G.
"""

from __future__ import annotations

from .fields import QQ


class Mat:
    """Immutable dense matrix; ``entries`` is a tuple of row tuples."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field, rows: int, cols: int, entries):
        self.field = field
        self.rows = rows
        self.cols = cols
        ent = tuple(tuple(r) for r in entries)
        if len(ent) != rows or any(len(r) != cols for r in ent):
            raise ValueError(f"entries do not match shape {rows}x{cols}")
        self.entries = ent

    @property
    def shape(self):
        return (self.rows, self.cols)

    def row(self, i):
        return self.entries[i]

    def is_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(x) for r in self.entries for x in r)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if self.shape != other.shape or self.field != other.field:
            return False
        f = self.field
        return all(
            f.eq(a, b) for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.fmt(x) for x in r) for r in self.entries)
        return f"Mat({self.rows}x{self.cols}: {body})"


def zeros(field, rows: int, cols: int) -> Mat:
    z = field.zero()
    return Mat(field, rows, cols, [[z] * cols for _ in range(rows)])


def identity(field, n: int) -> Mat:
    z, o = field.zero(), field.one()
    return Mat(field, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])


def from_rows(field, rows) -> Mat:
    rows = [list(r) for r in rows]
    n = len(rows)
    m = len(rows[0]) if rows else 0
    return Mat(field, n, m, rows)


def add(a: Mat, b: Mat) -> Mat:
    f = a.field
    if a.shape != b.shape:
        raise ValueError("shape mismatch")
    return Mat(f, a.rows, a.cols,
               [[f.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a.entries, b.entries)])


def sub(a: Mat, b: Mat) -> Mat:
    f = a.field
    if a.shape != b.shape:
        raise ValueError("shape mismatch")
    return Mat(f, a.rows, a.cols,
               [[f.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a.entries, b.entries)])


def neg(a: Mat) -> Mat:
    f = a.field
    return Mat(f, a.rows, a.cols, [[f.neg(x) for x in r] for r in a.entries])


def scale(c, a: Mat) -> Mat:
    f = a.field
    return Mat(f, a.rows, a.cols, [[f.mul(c, x) for x in r] for r in a.entries])


def mul(a: Mat, b: Mat) -> Mat:
    f = a.field
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.shape} by {b.cols and b.shape}")
    if a.cols == 0 or b.cols == 0 or a.rows == 0:
        return zeros(f, a.rows, b.cols)
    z = f.zero()
    fadd, fmul = f.add, f.mul
    out = []
    for ra in a.entries:
        acc = [z] * b.cols
        for k, x in enumerate(ra):
            if not x:
                continue
            brow = b.entries[k]
            acc = [fadd(s, fmul(x, e)) for s, e in zip(acc, brow)]
        out.append(acc)
    return Mat(f, a.rows, b.cols, out)


def transpose(a: Mat) -> Mat:
    return Mat(a.field, a.cols, a.rows, list(zip(*a.entries)) if a.entries else [[] for _ in range(a.cols)])


def hstack(a: Mat, b: Mat) -> Mat:
    if a.rows != b.rows:
        raise ValueError("row mismatch")
    return Mat(a.field, a.rows, a.cols + b.cols,
               [list(ra) + list(rb) for ra, rb in zip(a.entries, b.entries)])


def vstack(a: Mat, b: Mat) -> Mat:
    if a.cols != b.cols:
        raise ValueError("col mismatch")
    return Mat(a.field, a.rows + b.rows, a.cols, list(a.entries) + list(b.entries))


def _rref_rows(field, rows):
    """In-place Gauss-Jordan on a list of row lists; returns pivot column list."""
    f = field
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    fmul, fsub, finv = f.mul, f.sub, f.inv
    one = f.one()
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = finv(rows[r][c])
        if inv != one:
            rows[r] = [fmul(inv, x) for x in rows[r]]
        for i in range(nrows):
            coef = rows[i][c]
            if i != r and coef:
                rows[i] = [fsub(x, fmul(coef, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rref(m: Mat):
    """Reduced row echelon form: returns (reduced, pivot columns, rank)."""
    rows = [list(r) for r in m.entries]
    pivots = _rref_rows(m.field, rows)
    return Mat(m.field, m.rows, m.cols, rows), tuple(pivots), len(pivots)


def rank(m: Mat) -> int:
    return rref(m)[2]


def row_space_basis(m: Mat) -> Mat:
    """Canonical (RREF) basis of the row space."""
    red, _, rk = rref(m)
    return Mat(m.field, rk, m.cols, red.entries[:rk])


def kernel_basis(m: Mat) -> Mat:
    """Basis of {v : v @ m = 0}, canonical rows; row count = rows(m) - rank(m)."""
    f = m.field
    # v @ m = 0  <=>  m^T @ v^T = 0; standard nullspace of m^T.
    mt = transpose(m)
    red, pivots, rk = rref(mt)
    n = m.rows
    free = [j for j in range(n) if j not in pivots]
    basis = []
    z, o = f.zero(), f.one()
    for j in free:
        v = [z] * n
        v[j] = o
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(red.entries[i][j])
        basis.append(v)
    out = from_rows(f, basis) if basis else Mat(f, 0, n, [])
    return row_space_basis(out) if basis else out


def _rref_with_transform(m: Mat):
    """Returns (R, T) with R = T @ m in RREF, plus pivot columns."""
    f = m.field
    aug = [list(r) + list(e) for r, e in zip(m.entries, identity(f, m.rows).entries)]
    if not aug:
        return Mat(f, 0, m.cols, []), Mat(f, 0, 0, []), ()
    pivots = []
    fmul, fsub, finv = f.mul, f.sub, f.inv
    one = f.one()
    nrows, ncols = m.rows, m.cols
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if aug[i][c]:
                pr = i
                break
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = finv(aug[r][c])
        if inv != one:
            aug[r] = [fmul(inv, x) for x in aug[r]]
        for i in range(nrows):
            coef = aug[i][c]
            if i != r and coef:
                aug[i] = [fsub(x, fmul(coef, y)) for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    R = Mat(f, nrows, ncols, [row[:ncols] for row in aug])
    T = Mat(f, nrows, nrows, [row[ncols:] for row in aug])
    return R, T, tuple(pivots)


def solve(a: Mat, b: Mat) -> Mat | None:
    """Return X with X @ a = b when row-space(b) is inside row-space(a), else None."""
    f = a.field
    if a.cols != b.cols:
        raise ValueError("column mismatch")
    R, T, pivots = _rref_with_transform(a)
    xrows = []
    fadd, fmul, fsub = f.add, f.mul, f.sub
    for brow in b.entries:
        resid = list(brow)
        coeffs = [f.zero()] * a.rows
        for i, pc in enumerate(pivots):
            c = resid[pc]
            if not c:
                continue
            resid = [fsub(x, fmul(c, y)) for x, y in zip(resid, R.entries[i])]
            coeffs = [fadd(x, fmul(c, y)) for x, y in zip(coeffs, T.entries[i])]
        if any(resid):
            return None
        xrows.append(coeffs)
    return Mat(f, b.rows, a.rows, xrows)


def row_space_contains(space: Mat, vectors: Mat) -> bool:
    return solve(space, vectors) is not None


def sum_row_spaces(field, cols: int, mats) -> Mat:
    rows = [r for m in mats for r in m.entries]
    if not rows:
        return Mat(field, 0, cols, [])
    return row_space_basis(from_rows(field, rows))


def invertible(m: Mat) -> bool:
    return m.rows == m.cols and rank(m) == m.rows
