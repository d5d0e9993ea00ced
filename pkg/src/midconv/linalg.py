"""Dense exact linear algebra: matrices, echelon forms, kernels, subspaces.

Everything is naive Gaussian elimination over an exact field; sizes stay
small (n*r <= ~30) so correctness beats speed.  All canonical forms are
deterministic: rref scans columns left to right and picks the first nonzero
pivot, subspace bases are reduced row echelon with ascending pivots, and
quotient complements are the standard basis vectors at non-pivot indices.
"""

from __future__ import annotations

from .fields import QQ, common_field


class Matrix:
    """Immutable dense matrix over an exact field."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field, entries):
        entries = [tuple(field(x) for x in row) for row in entries]
        self.field = field
        self.rows = len(entries)
        self.cols = len(entries[0]) if entries else 0
        if any(len(row) != self.cols for row in entries):
            raise ValueError("ragged rows")
        self.entries = tuple(entries)

    # -- constructors ------------------------------------------------------
    @staticmethod
    def identity(field, n: int) -> "Matrix":
        return Matrix(field, [[field.one if i == j else field.zero
                               for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(field, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return Matrix(field, [[field.zero] * cols for _ in range(rows)])

    @staticmethod
    def from_blocks(field, blocks) -> "Matrix":
        """Assemble from a 2D grid of matrices (all same field)."""
        rows = []
        for block_row in blocks:
            height = block_row[0].rows
            for i in range(height):
                row = []
                for blk in block_row:
                    row.extend(blk.entries[i])
                rows.append(row)
        return Matrix(field, rows)

    @staticmethod
    def column(field, vec) -> "Matrix":
        return Matrix(field, [[x] for x in vec])

    def to_field(self, field) -> "Matrix":
        return Matrix(field, self.entries)

    # -- access ------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def col(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        return Matrix(self.field, [[self.entries[i][j] for j in col_idx]
                                   for i in row_idx])

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)

    # -- arithmetic --------------------------------------------------------
    def _common(self, other: "Matrix"):
        if self.field == other.field:
            return self, other
        f = common_field(self.field, other.field)
        return self.to_field(f), other.to_field(f)

    def __add__(self, other: "Matrix") -> "Matrix":
        a, b = self._common(other)
        if (a.rows, a.cols) != (b.rows, b.cols):
            raise ValueError("shape mismatch")
        return Matrix(a.field, [[x + y for x, y in zip(r1, r2)]
                                for r1, r2 in zip(a.entries, b.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        a, b = self._common(other)
        if (a.rows, a.cols) != (b.rows, b.cols):
            raise ValueError("shape mismatch")
        return Matrix(a.field, [[x - y for x, y in zip(r1, r2)]
                                for r1, r2 in zip(a.entries, b.entries)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, [[-x for x in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            a, b = self._common(other)
            if a.cols != b.rows:
                raise ValueError("shape mismatch")
            bt = list(zip(*b.entries)) if b.entries else []
            return Matrix(a.field, [
                [_dot(row, col, a.field) for col in bt] for row in a.entries])
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix(self.field, [[c * x for x in row] for row in self.entries])

    def shift(self, c) -> "Matrix":
        """self + c * identity."""
        if not self.is_square():
            raise ValueError("shift needs a square matrix")
        c = self.field(c)
        return Matrix(self.field, [
            [self.entries[i][j] + c if i == j else self.entries[i][j]
             for j in range(self.cols)] for i in range(self.rows)])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.entries)) if self.entries else [])

    def apply(self, fn) -> "Matrix":
        return Matrix(self.field, [[fn(x) for x in row] for row in self.entries])

    def trace(self):
        return sum((self.entries[i][i] for i in range(self.rows)), self.field.zero)

    def matvec(self, vec):
        return tuple(_dot(row, vec, self.field) for row in self.entries)

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            return self.inverse() ** (-k)
        out = Matrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def det(self):
        if not self.is_square():
            raise ValueError("determinant of non-square matrix")
        f = self.field
        m = [list(row) for row in self.entries]
        n = self.rows
        det = f.one
        for col in range(n):
            piv = next((r for r in range(col, n) if m[r][col]), None)
            if piv is None:
                return f.zero
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                det = -det
            det = det * m[col][col]
            inv = f.one / m[col][col]
            for r in range(col + 1, n):
                if m[r][col]:
                    factor = m[r][col] * inv
                    for c in range(col, n):
                        m[r][c] = m[r][c] - factor * m[col][c]
        return det

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("inverse of non-square matrix")
        n = self.rows
        aug = Matrix(self.field, [list(self.entries[i]) + list(Matrix.identity(self.field, n).entries[i])
                                  for i in range(n)])
        rank, _, red = rref(aug)
        if rank < n or any(red.entries[i][i] != self.field.one for i in range(n)):
            raise ValueError("matrix not invertible")
        return red.submatrix(range(n), range(n, 2 * n))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        a, b = self._common(other)
        return a.entries == b.entries

    def __hash__(self):
        return hash((self.field, self.entries))

    def __repr__(self):
        return "Matrix([" + ",\n        ".join(
            "[" + ", ".join(str(x) for x in row) + "]" for row in self.entries) + "])"


def _dot(u, v, field):
    return sum((x * y for x, y in zip(u, v) if x and y), field.zero)


# ---------------------------------------------------------------------------
# echelon forms

def rref(m: Matrix):
    """Reduced row echelon form; returns (rank, pivot column list, R)."""
    f = m.field
    rows = [list(r) for r in m.entries]
    pivots = []
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, m.rows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = f.one / rows[r][c]
        rows[r] = [inv * x for x in rows[r]]
        for i in range(m.rows):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return r, pivots, Matrix(f, rows)


def rank(m: Matrix) -> int:
    return rref(m)[0]


class Subspace:
    """A subspace of F^ambient with a canonical reduced-echelon basis.

    The basis vectors are the nonzero rows of the rref of the spanning set,
    so equal subspaces compare equal componentwise.
    """

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field, ambient: int, vectors):
        self.field = field
        self.ambient = ambient
        vectors = [tuple(field(x) for x in v) for v in vectors]
        if any(len(v) != ambient for v in vectors):
            raise ValueError("vector length != ambient dimension")
        if vectors:
            r, pivots, red = rref(Matrix(field, vectors))
            self.basis = tuple(red.entries[i] for i in range(r))
            self.pivots = tuple(pivots)
        else:
            self.basis = ()
            self.pivots = ()

    @staticmethod
    def zero(field, ambient: int) -> "Subspace":
        return Subspace(field, ambient, [])

    @staticmethod
    def full(field, ambient: int) -> "Subspace":
        return Subspace(field, ambient, Matrix.identity(field, ambient).entries)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_field(self, field) -> "Subspace":
        return Subspace(field, self.ambient, self.basis)

    def basis_matrix(self) -> Matrix:
        """Basis vectors as columns (ambient x dim)."""
        if not self.basis:
            return Matrix.zero(self.field, self.ambient, 0)
        return Matrix(self.field, self.basis).transpose()

    def contains(self, vec) -> bool:
        return not any(self.reduce(vec))

    def reduce(self, vec):
        """Canonical representative of vec modulo the subspace.

        Subtracts basis rows to clear the pivot coordinates; the result is
        supported on non-pivot indices only.
        """
        vec = [self.field(x) for x in vec]
        for b, p in zip(self.basis, self.pivots):
            c = vec[p]
            if c:
                vec = [x - c * y for x, y in zip(vec, b)]
        return tuple(vec)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient})"


def kernel_basis(m: Matrix) -> Subspace:
    """Right kernel {v : M v = 0} with canonical echelon basis."""
    f = m.field
    r, pivots, red = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    vectors = []
    for fc in free:
        v = [f.zero] * m.cols
        v[fc] = f.one
        for i, pc in enumerate(pivots):
            v[pc] = -red.entries[i][fc]
        vectors.append(v)
    return Subspace(f, m.cols, vectors)


def image_basis(m: Matrix) -> Subspace:
    """Column span of M."""
    return Subspace(m.field, m.rows, list(zip(*m.entries)) if m.entries else [])


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    if u.ambient != v.ambient:
        raise ValueError("ambient dimension mismatch")
    return Subspace(u.field, u.ambient, list(u.basis) + list(v.basis))


def subspace_intersect(u: Subspace, v: Subspace) -> Subspace:
    """Computed via the kernel of the stacked system U x - V y = 0."""
    if u.ambient != v.ambient:
        raise ValueError("ambient dimension mismatch")
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(u.field, u.ambient)
    f = u.field
    stacked = Matrix(f, [list(ub) + [-x for x in vb]
                         for ub, vb in zip(u.basis_matrix().entries,
                                           v.basis_matrix().entries)])
    ker = kernel_basis(stacked)
    ub = u.basis_matrix()
    vectors = [ub.matvec(k[:u.dim]) for k in ker.basis]
    return Subspace(f, u.ambient, vectors)


class NotInvariantError(ValueError):
    """A subspace was not invariant under one of the matrices."""

    def __init__(self, index: int):
        super().__init__(f"subspace not invariant under matrix {index}")
        self.index = index


def quotient_action(matrices, w: Subspace):
    """Induced action of each matrix on the quotient by an invariant subspace.

    The quotient is coordinatized by the standard basis vectors at the
    non-pivot indices of w's canonical basis, so the output is deterministic.
    Raises NotInvariantError(i) if matrices[i] does not map w into w.
    """
    if not matrices:
        return []
    f = w.field
    n = w.ambient
    comp = [j for j in range(n) if j not in w.pivots]
    out = []
    for idx, m in enumerate(matrices):
        if m.rows != n or m.cols != n:
            raise ValueError("matrix size != ambient dimension")
        mm = m if m.field == f else m.to_field(f)
        for b in w.basis:
            if any(w.reduce(mm.matvec(b))):
                raise NotInvariantError(idx)
        cols = []
        for j in comp:
            red = w.reduce(mm.col(j))
            cols.append([red[i] for i in comp])
        out.append(Matrix(mm.field, list(zip(*cols)) if cols else []))
    return out


def invariant_subspace_inside(a: Matrix, u: Subspace) -> Subspace:
    """Largest A-invariant subspace contained in u (A invertible).

    Stabilizing iteration U <- U intersect A^(-1) U.
    """
    a_inv = a.inverse()
    cur = u
    while True:
        pulled = Subspace(cur.field, cur.ambient,
                          [a_inv.matvec(b) for b in cur.basis])
        nxt = subspace_intersect(cur, pulled)
        if nxt.dim == cur.dim:
            return nxt
        cur = nxt


def centralizer_dim(a: Matrix) -> int:
    """dim of {X : AX = XA}, via the kernel of X -> AX - XA."""
    n = a.rows
    f = a.field
    cols = []
    for k in range(n):
        for l in range(n):
            e = Matrix(f, [[f.one if (i, j) == (k, l) else f.zero
                            for j in range(n)] for i in range(n)])
            d = a * e - e * a
            cols.append([d.entries[i][j] for i in range(n) for j in range(n)])
    m = Matrix(f, list(zip(*cols)))
    return n * n - rank(m)
