"""Multiplicative convolution and middle convolution on matrix tuples.

A tuple (A_1, ..., A_r) of invertible n x n matrices is convolved with a
nonzero scalar lambda into the block tuple (B_1, ..., B_r) of size nr, where
B_k is the identity outside block row k and block row k is

    (lambda(A_1-1), ..., lambda(A_{k-1}-1), lambda A_k, (A_{k+1}-1), ..., (A_r-1)).

The middle convolution quotients by the invariant subspaces K (blockwise
kernels of A_k - 1) and L (fixed space of all B_k).  Alongside the functor
itself this module provides the dimension formula, the (*) / (**) conditions,
absolute irreducibility, the rigidity index, scalar multiplication, the braid
group action, conjugacy testing, and transport of invariant forms to the
convolution space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fields import QQ, CycloElem, common_field, CyclotomicField
from .linalg import (Matrix, Subspace, kernel_basis, quotient_action, rank,
                     subspace_sum, subspace_intersect, centralizer_dim,
                     invariant_subspace_inside)


class MatTuple:
    """r invertible n x n matrices over a common exact field."""

    __slots__ = ("field", "n", "r", "matrices")

    def __init__(self, matrices, field=None):
        matrices = list(matrices)
        if not matrices:
            raise ValueError("empty tuple")
        if field is None:
            field = matrices[0].field
            for m in matrices[1:]:
                field = common_field(field, m.field)
        matrices = [m.to_field(field) if m.field != field else m for m in matrices]
        n = matrices[0].rows
        for i, m in enumerate(matrices):
            if not m.is_square() or m.rows != n:
                raise ValueError("matrices must be square of equal size")
            if n and not m.det():
                raise ValueError(f"matrix {i} is singular")
        self.field = field
        self.n = n
        self.r = len(matrices)
        self.matrices = tuple(matrices)

    def __getitem__(self, i) -> Matrix:
        return self.matrices[i]

    def __iter__(self):
        return iter(self.matrices)

    def __len__(self):
        return self.r

    def __eq__(self, other):
        return isinstance(other, MatTuple) and self.matrices == other.matrices

    def __hash__(self):
        return hash(self.matrices)

    def to_field(self, field) -> "MatTuple":
        return MatTuple([m.to_field(field) for m in self.matrices], field)

    def product(self) -> Matrix:
        out = Matrix.identity(self.field, self.n)
        for m in self.matrices:
            out = out * m
        return out

    def conjugate(self, s: Matrix) -> "MatTuple":
        s_inv = s.inverse()
        return MatTuple([s_inv * m * s for m in self.matrices])

    def __repr__(self):
        return f"MatTuple(n={self.n}, r={self.r}, field={self.field!r})"


@dataclass
class ConvolutionResult:
    """Full convolution tuple with its invariant subspaces and the quotient."""

    big: MatTuple        # (B_1, ..., B_r), size nr
    kspace: Subspace     # direct sum of blockwise kernels of A_k - 1
    lspace: Subspace     # common fixed space of the B_k
    quotient: MatTuple   # induced tuple on V^r/(K+L); 0 x 0 matrices if dim 0

    @property
    def dim(self) -> int:
        return self.quotient.n


def conv_mult(a: MatTuple, lam) -> MatTuple:
    """The convolution tuple (B_1, ..., B_r) of size nr."""
    lam = a.field(lam)
    if not lam:
        raise ValueError("lambda must be nonzero")
    f, n, r = a.field, a.n, a.r
    one = Matrix.identity(f, n)
    out = []
    for k in range(r):
        blocks = []
        for i in range(r):
            row = []
            for j in range(r):
                if i != k:
                    row.append(one if i == j else Matrix.zero(f, n))
                elif j < k:
                    row.append((a[j] - one).scale(lam))
                elif j == k:
                    row.append(a[k].scale(lam))
                else:
                    row.append(a[j] - one)
            blocks.append(row)
        out.append(Matrix.from_blocks(f, blocks))
    return MatTuple(out, f)


def _embed_block(f, n, r, k, sub: Subspace) -> list:
    vectors = []
    for b in sub.basis:
        v = [f.zero] * (n * r)
        v[k * n:(k + 1) * n] = list(b)
        vectors.append(v)
    return vectors


def mc_subspaces(a: MatTuple, lam):
    """The invariant subspaces (K, L) of the convolution.

    K is the direct sum over k of the blockwise kernels of A_k - 1.  For
    lambda != 1, L is spanned by (A_2...A_r v, A_3...A_r v, ..., v) over
    v in ker(lambda A_1...A_r - 1); for lambda = 1 it is computed directly
    as the common fixed space of the B_k.
    """
    f, n, r = a.field, a.n, a.r
    lam = f(lam)
    one = Matrix.identity(f, n)
    kvecs = []
    for k in range(r):
        kvecs.extend(_embed_block(f, n, r, k, kernel_basis(a[k] - one)))
    kspace = Subspace(f, n * r, kvecs)

    if lam != f.one:
        prod = a.product()
        ker = kernel_basis(prod.scale(lam) - one)
        lvecs = []
        for v in ker.basis:
            chunks = []
            suffix = Matrix.identity(f, n)
            # entry i is (A_{i+1} ... A_r) v, built right to left
            for i in range(r - 1, -1, -1):
                chunks.append(suffix.matvec(v))
                suffix = a[i] * suffix
            chunks.reverse()
            lvecs.append([x for chunk in chunks for x in chunk])
        lspace = Subspace(f, n * r, lvecs)
    else:
        big = conv_mult(a, lam)
        eye = Matrix.identity(f, n * r)
        lspace = Subspace.full(f, n * r)
        for b in big:
            lspace = subspace_intersect(lspace, kernel_basis(b - eye))
    return kspace, lspace


def mc_mult(a: MatTuple, lam) -> ConvolutionResult:
    """Middle convolution: quotient of the convolution by K + L."""
    lam = a.field(lam)
    if not lam:
        raise ValueError("lambda must be nonzero")
    big = conv_mult(a, lam)
    kspace, lspace = mc_subspaces(a, lam)
    kl = subspace_sum(kspace, lspace)
    reduced = quotient_action(list(big), kl)  # K, L invariant by construction
    return ConvolutionResult(big=big, kspace=kspace, lspace=lspace,
                             quotient=MatTuple(reduced, a.field))


def dim_formula(a: MatTuple, lam) -> int:
    """sum_k rk(A_k - 1) - (dim V - rk(lambda A_1...A_r - 1)); needs lambda != 1."""
    f = a.field
    lam = f(lam)
    if lam == f.one:
        raise ValueError("dimension formula requires lambda != 1")
    one = Matrix.identity(f, a.n)
    total = sum(rank(m - one) for m in a)
    return total - (a.n - rank(a.product().scale(lam) - one))


def check_star(a: MatTuple) -> bool:
    """No nonzero A_i-invariant subspace inside the common fixed space of the others."""
    f, n = a.field, a.n
    one = Matrix.identity(f, n)
    for i in range(a.r):
        u = Subspace.full(f, n)
        for j in range(a.r):
            if j != i:
                u = subspace_intersect(u, kernel_basis(a[j] - one))
        if invariant_subspace_inside(a[i], u).dim > 0:
            return False
    return True


def check_starstar(a: MatTuple) -> bool:
    """Dual condition, on left kernels of the images of A_j - 1."""
    f, n = a.field, a.n
    one = Matrix.identity(f, n)
    for i in range(a.r):
        u = Subspace.full(f, n)
        for j in range(a.r):
            if j != i:
                u = subspace_intersect(u, kernel_basis(a[j].transpose() - one))
        if invariant_subspace_inside(a[i].transpose(), u).dim > 0:
            return False
    return True


def irreducible_abs(a: MatTuple) -> bool:
    """Burnside criterion: the unital algebra of the tuple has dimension n^2."""
    f, n = a.field, a.n
    if n <= 1:
        return True
    target = n * n

    def vec(m):
        return [x for row in m.entries for x in row]

    span_rows = []   # echelon rows, kept reduced
    pivots = {}

    def insert(m) -> bool:
        v = vec(m)
        for p, row in pivots.items():
            if v[p]:
                c = v[p]
                v = [x - c * y for x, y in zip(v, row)]
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        inv = f.one / v[piv]
        v = [inv * x for x in v]
        pivots[piv] = v
        span_rows.append(m)
        return True

    frontier = [Matrix.identity(f, n)]
    for m in frontier:
        insert(m)
    while frontier and len(pivots) < target:
        nxt = []
        for m in frontier:
            for g in a:
                cand = g * m
                if insert(cand):
                    nxt.append(cand)
                    if len(pivots) == target:
                        return True
        frontier = nxt
    return len(pivots) == target


def rigidity_index(a: MatTuple) -> int:
    """(2 - (r+1)) n^2 + sum of centralizer dimensions over A_1..A_r and (A_1...A_r)^(-1)."""
    mats = list(a.matrices) + [a.product().inverse()]
    n = a.n
    return (2 - len(mats)) * n * n + sum(centralizer_dim(m) for m in mats)


def scalar_mult(omega, a: MatTuple) -> MatTuple:
    """(omega_1 A_1, ..., omega_r A_r)."""
    if len(omega) != a.r:
        raise ValueError("need one scalar per matrix")
    scaled = []
    for w, m in zip(omega, a.matrices):
        w = a.field(w)
        if not w:
            raise ValueError("scalars must be nonzero")
        scaled.append(m.scale(w))
    return MatTuple(scaled, a.field)


def braid_act(word, a: MatTuple) -> MatTuple:
    """Apply braid generators Q_i (negative index: inverse) left to right.

    Q_i(g_1,...,g_r) = (g_1,...,g_{i-1}, g_i g_{i+1} g_i^(-1), g_i, g_{i+2},...,g_r).
    """
    mats = list(a.matrices)
    r = a.r
    for idx in word:
        i = abs(idx)
        if not 1 <= i <= r - 1:
            raise ValueError(f"braid generator index {idx} out of range")
        k = i - 1
        if idx > 0:
            mats[k], mats[k + 1] = mats[k] * mats[k + 1] * mats[k].inverse(), mats[k]
        else:
            mats[k], mats[k + 1] = mats[k + 1], mats[k + 1].inverse() * mats[k] * mats[k + 1]
    return MatTuple(mats, a.field)


@dataclass
class ConjugacyResult:
    status: str                 # "conjugate" | "not_conjugate" | "inconclusive"
    s: Matrix | None            # witness with S^(-1) A_i S = A'_i, exact
    intertwiner_dim: int

    def __bool__(self):
        return self.status == "conjugate"


def tuple_conjugate(a: MatTuple, b: MatTuple, attempts: int = 100) -> ConjugacyResult:
    """Search for invertible S with S^(-1) A_i S = B_i for all i.

    Solves the stacked linear system A_i S - S B_i = 0 exactly, then tests
    basis elements and small integer combinations for invertibility.
    """
    if (a.n, a.r) != (b.n, b.r):
        raise ValueError("tuples must share n and r")
    f = common_field(a.field, b.field)
    aa, bb = a.to_field(f), b.to_field(f)
    n = a.n
    rows = []
    for m1, m2 in zip(aa, bb):
        # (A S - S B) entry (i,j) as a linear form in S_{kl}
        for i in range(n):
            for j in range(n):
                coeff = [f.zero] * (n * n)
                for k in range(n):
                    coeff[k * n + j] = coeff[k * n + j] + m1.entries[i][k]
                for l in range(n):
                    coeff[i * n + l] = coeff[i * n + l] - m2.entries[l][j]
                rows.append(coeff)
    ker = kernel_basis(Matrix(f, rows))
    if ker.dim == 0:
        return ConjugacyResult("not_conjugate", None, 0)

    def unvec(v):
        return Matrix(f, [v[i * n:(i + 1) * n] for i in range(n)])

    def verify(s: Matrix) -> bool:
        if not s.det():
            return False
        s_inv = s.inverse()
        return all(s_inv * m1 * s == m2 for m1, m2 in zip(aa, bb))

    candidates = [unvec(v) for v in ker.basis]
    for s in candidates:
        if verify(s):
            return ConjugacyResult("conjugate", s, ker.dim)
    tried = 0
    for coeffs in itertools.product(range(-2, 3), repeat=ker.dim):
        if all(c == 0 for c in coeffs):
            continue
        tried += 1
        if tried > attempts:
            break
        s = Matrix.zero(f, n)
        for c, base in zip(coeffs, candidates):
            if c:
                s = s + base.scale(c)
        if verify(s):
            return ConjugacyResult("conjugate", s, ker.dim)
    return ConjugacyResult("inconclusive", None, ker.dim)


def transport_form(a: MatTuple, g: Matrix, sqrt_lam) -> Matrix:
    """Transport an invariant form of the tuple to the convolution space.

    Block pattern (i, j blocks of the nr x nr result):

        H_ii = G lam^(1/2) (A_i^(-1) - 1)(A_i - lam^(-1))
        H_ij = G lam^(-1/2) (A_i^(-1) - 1)(A_j - 1)   for i < j
        H_ij = G lam^(+1/2) (A_i^(-1) - 1)(A_j - 1)   for i > j

    The input form must be invariant either bilinearly (A_i^tr G A_i = G) or
    hermitianly (sigma(A_i)^tr G A_i = G with sigma the zeta -> zeta^(-1)
    automorphism).  The exact invariance of H is then, respectively,

        C_k^tr H B_k = H  with (C_k) the convolution at lambda^(-1)
        sigma(B_k)^tr H B_k = H

    which for bilinear G and lambda = +-1 is the plain B_k^tr H B_k = H.
    The applicable identity is asserted before returning.
    """
    f = common_field(a.field, g.field)
    if isinstance(sqrt_lam, CycloElem):
        f = common_field(f, CyclotomicField(sqrt_lam.order))
    aa = a.to_field(f)
    gg = g.to_field(f)
    s = f(sqrt_lam)
    lam = s * s
    if not gg.det():
        raise ValueError("form must be invertible")

    def sigma(m: Matrix) -> Matrix:
        return m.apply(f.conjugate)

    bilinear = all(m.transpose() * gg * m == gg for m in aa)
    hermitian = all(sigma(m).transpose() * gg * m == gg for m in aa)
    if not (bilinear or hermitian):
        raise ValueError("form is not invariant under the tuple")

    n, r = aa.n, aa.r
    one = Matrix.identity(f, n)
    s_inv = f.one / s
    lam_inv = f.one / lam
    blocks = []
    for i in range(r):
        ai_inv = aa[i].inverse()
        row = []
        for j in range(r):
            if i == j:
                blk = gg * ((ai_inv - one) * (aa[i].shift(-lam_inv))).scale(s)
            elif i < j:
                blk = gg * ((ai_inv - one) * (aa[j] - one)).scale(s_inv)
            else:
                blk = gg * ((ai_inv - one) * (aa[j] - one)).scale(s)
            row.append(blk)
        blocks.append(row)
    h = Matrix.from_blocks(f, blocks)

    big = conv_mult(aa, lam)
    if bilinear:
        left = conv_mult(aa, lam_inv)
        for c, b in zip(left, big):
            assert c.transpose() * h * b == h
    else:
        for b in big:
            assert sigma(b).transpose() * h * b == h
    return h
