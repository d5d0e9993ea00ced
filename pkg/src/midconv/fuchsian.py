"""Fuchsian systems, additive (middle) convolution, Okubo normal form, Lame systems.

A Fuchsian system is Y' = sum_i a_i/(x - t_i) Y with distinct rational
singular points t_i and square residue matrices a_i.  Convolution with a
scalar mu produces the block residues b_k (zero outside block row k, with
row k equal to (a_1, ..., a_k + mu, ..., a_r)); the middle convolution
quotients by the invariant subspaces spanned by blockwise residue kernels
and by the diagonal kernel of a_1 + ... + a_r + mu.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fields import QQ, common_field
from .linalg import (Matrix, Subspace, kernel_basis, quotient_action,
                     subspace_sum, subspace_intersect)
from .poly import Polynomial, RationalFunction


class FuchsianSystem:
    """Singular points (t_1, ..., t_r) plus residue matrices (a_1, ..., a_r)."""

    __slots__ = ("field", "points", "residues", "n", "r")

    def __init__(self, points, residues, field=None):
        points = [Fraction(t) for t in points]
        if len(set(points)) != len(points):
            raise ValueError("singular points must be pairwise distinct")
        if len(points) != len(residues):
            raise ValueError("need one residue per point")
        if not residues:
            raise ValueError("empty system")
        if field is None:
            field = residues[0].field
            for m in residues[1:]:
                field = common_field(field, m.field)
        residues = [m.to_field(field) if m.field != field else m for m in residues]
        n = residues[0].rows
        if any(not m.is_square() or m.rows != n for m in residues):
            raise ValueError("residues must be square of equal size")
        self.field = field
        self.points = tuple(points)
        self.residues = tuple(residues)
        self.n = n
        self.r = len(points)

    def residue_sum(self) -> Matrix:
        out = Matrix.zero(self.field, self.n)
        for m in self.residues:
            out = out + m
        return out

    def __eq__(self, other):
        return (isinstance(other, FuchsianSystem) and self.points == other.points
                and self.residues == other.residues)

    def __repr__(self):
        return f"FuchsianSystem(n={self.n}, r={self.r}, points={self.points})"


class OkuboSystem:
    """(x - T) Y' = b Y with T diagonal (repetitions allowed)."""

    __slots__ = ("field", "tdiag", "b")

    def __init__(self, tdiag, b: Matrix):
        tdiag = tuple(Fraction(t) for t in tdiag)
        if b.rows != len(tdiag) or not b.is_square():
            raise ValueError("size of b must match length of T")
        self.field = b.field
        self.tdiag = tdiag
        self.b = b

    @property
    def size(self) -> int:
        return len(self.tdiag)

    def distinct_points(self):
        seen = []
        for t in self.tdiag:
            if t not in seen:
                seen.append(t)
        return tuple(seen)

    def __eq__(self, other):
        return (isinstance(other, OkuboSystem) and self.tdiag == other.tdiag
                and self.b == other.b)

    def __repr__(self):
        return f"OkuboSystem(size={self.size}, T={self.tdiag})"


def residue_at_infinity(sys: FuchsianSystem) -> Matrix:
    """-(a_1 + ... + a_r)."""
    return -sys.residue_sum()


def conv_add(sys: FuchsianSystem, mu) -> FuchsianSystem:
    """Convolution: nr x nr residues b_k, zero outside block row k."""
    f, n, r = sys.field, sys.n, sys.r
    mu = f(mu)
    out = []
    for k in range(r):
        blocks = []
        for i in range(r):
            row = []
            for j in range(r):
                if i != k:
                    row.append(Matrix.zero(f, n))
                elif j == k:
                    row.append(sys.residues[k].shift(mu))
                else:
                    row.append(sys.residues[j])
            blocks.append(row)
        out.append(Matrix.from_blocks(f, blocks))
    return FuchsianSystem(sys.points, out, f)


def add_subspaces(sys: FuchsianSystem, mu):
    """Invariant subspaces (k, l) of the additive convolution.

    k = blockwise kernels of the a_k; for mu != 0, l is the diagonal
    embedding of ker(a_1 + ... + a_r + mu); for mu = 0 it is the common
    kernel of the b_k.
    """
    f, n, r = sys.field, sys.n, sys.r
    mu = f(mu)
    kvecs = []
    for k, m in enumerate(sys.residues):
        for b in kernel_basis(m).basis:
            v = [f.zero] * (n * r)
            v[k * n:(k + 1) * n] = list(b)
            kvecs.append(v)
    kspace = Subspace(f, n * r, kvecs)

    if mu:
        ker = kernel_basis(sys.residue_sum().shift(mu))
        lvecs = [list(b) * r for b in ker.basis]
        lspace = Subspace(f, n * r, lvecs)
    else:
        big = conv_add(sys, mu)
        lspace = Subspace.full(f, n * r)
        for bk in big.residues:
            lspace = subspace_intersect(lspace, kernel_basis(bk))
    return kspace, lspace


@dataclass
class AdditiveConvolutionResult:
    system: FuchsianSystem   # the middle convolution (quotient residues)
    big: FuchsianSystem      # the full convolution c_mu
    kspace: Subspace
    lspace: Subspace

    @property
    def dim(self) -> int:
        return self.system.n


def mc_add(sys: FuchsianSystem, mu) -> AdditiveConvolutionResult:
    """Middle convolution of a Fuchsian system with mu."""
    big = conv_add(sys, mu)
    kspace, lspace = add_subspaces(sys, mu)
    kl = subspace_sum(kspace, lspace)
    reduced = quotient_action(list(big.residues), kl)
    return AdditiveConvolutionResult(
        system=FuchsianSystem(sys.points, reduced, sys.field),
        big=big, kspace=kspace, lspace=lspace)


def scalar_add(delta, sys: FuchsianSystem) -> FuchsianSystem:
    """(a_1 + delta_1, ..., a_r + delta_r) with scalar shifts."""
    if len(delta) != sys.r:
        raise ValueError("need one shift per residue")
    return FuchsianSystem(
        sys.points,
        [m.shift(sys.field(d)) for d, m in zip(delta, sys.residues)],
        sys.field)


def system_matrix(sys: FuchsianSystem):
    """The coefficient matrix sum a_i/(x - t_i) as a rational-function matrix."""
    f = sys.field
    x = Polynomial.x(f)
    zero = RationalFunction.of(Polynomial(f, []))
    out = [[zero for _ in range(sys.n)] for _ in range(sys.n)]
    for t, m in zip(sys.points, sys.residues):
        den = x - f(t)
        for i in range(sys.n):
            for j in range(sys.n):
                if m.entries[i][j]:
                    out[i][j] = out[i][j] + RationalFunction.of(
                        Polynomial.constant(f, m.entries[i][j]), den)
    return out


def okubo_system_matrix(ok: OkuboSystem):
    """(x - T)^(-1) b as a rational-function matrix."""
    f = ok.field
    x = Polynomial.x(f)
    out = []
    for i in range(ok.size):
        den = x - f(ok.tdiag[i])
        out.append([RationalFunction.of(Polynomial.constant(f, ok.b.entries[i][j]), den)
                    for j in range(ok.size)])
    return out


def okubo_of_convolution(sys: FuchsianSystem, mu) -> OkuboSystem:
    """The convolution c_mu as one Okubo system (x - T) Y' = b Y.

    T repeats each singular point n times; b stacks the block rows
    (a_1, ..., a_k + mu, ..., a_r).  Consistency with sum b_k/(x - t_k) is
    asserted exactly.
    """
    f, n, r = sys.field, sys.n, sys.r
    mu = f(mu)
    tdiag = [t for t in sys.points for _ in range(n)]
    blocks = []
    for k in range(r):
        row = []
        for j in range(r):
            row.append(sys.residues[j].shift(mu) if j == k else sys.residues[j])
        blocks.append(row)
    ok = OkuboSystem(tdiag, Matrix.from_blocks(f, blocks))

    big = conv_add(sys, mu)
    lhs = okubo_system_matrix(ok)
    rhs = system_matrix(big)
    assert all(lhs[i][j] == rhs[i][j] for i in range(n * r) for j in range(n * r))
    return ok


# ---------------------------------------------------------------------------
# Lame systems

class LameEquation:
    """Second-order equation p(x) y'' + p'(x)/2 y' - (n(n+1)x + B) y with
    p(x) = 4(x - t_1)(x - t_2)(x - t_3)."""

    __slots__ = ("index", "accessory", "roots")

    def __init__(self, index, accessory, roots):
        roots = tuple(Fraction(t) for t in roots)
        if len(roots) != 3 or len(set(roots)) != 3:
            raise ValueError("need three pairwise distinct roots")
        self.index = Fraction(index)
        self.accessory = Fraction(accessory)
        self.roots = roots

    def couplings(self):
        """The residue parameters (l_1, l_2) with l_1 + l_2 = n(n+1)/4."""
        n, b = self.index, self.accessory
        t1, t2, t3 = self.roots
        w = n * (n + 1)
        l1 = (t2 * w + b) / (4 * (t2 - t3))
        l2 = w / 4 - l1
        # equivalent display of l_2; holds identically
        assert l2 == -(t3 * w + b) / (4 * (t2 - t3))
        return l1, l2

    def __repr__(self):
        return f"LameEquation(n={self.index}, B={self.accessory}, roots={self.roots})"


def lame_system(lame: LameEquation) -> FuchsianSystem:
    """The 2 x 2, r = 3 Fuchsian form of a Lame equation."""
    l1, l2 = lame.couplings()
    h = Fraction(1, 2)
    a1 = Matrix(QQ, [[0, 1], [0, h]])
    a2 = Matrix(QQ, [[0, 0], [l1, -h]])
    a3 = Matrix(QQ, [[0, 0], [l2, -h]])
    return FuchsianSystem(lame.roots, [a1, a2, a3], QQ)


class LameHypothesisError(ValueError):
    pass


def lame_okubo(lame: LameEquation, extra_points=(), extra_residues=(), mu=Fraction(0)) -> OkuboSystem:
    """The Okubo form (x - T) Y' = (c + mu) Y of the middle convolution of a
    Lame system (optionally extended by full-rank residues a_4 ... a_r).

    Built by the gauge d = diag(B_1, B_2, B_3, E_2, ...) that diagonalizes
    the three rank-one Lame residues, then deleting the kernel coordinates
    (the first coordinate of each of the three leading blocks).
    """
    mu = Fraction(mu)
    sys = lame_system(lame)
    points = list(sys.points)
    residues = list(sys.residues)
    for t, m in zip(extra_points, extra_residues):
        points.append(Fraction(t))
        residues.append(m.to_field(QQ))
    if len(set(points)) != len(points):
        raise ValueError("singular points must be pairwise distinct")
    full = FuchsianSystem(points, residues, QQ)
    r = full.r

    from .linalg import rank
    for i in range(3, r):
        if rank(full.residues[i]) != 2:
            raise LameHypothesisError(f"residue {i + 1} must have rank 2")
    if not full.residue_sum().shift(mu).det():
        raise LameHypothesisError("-mu is an eigenvalue of a_1 + ... + a_r")

    l1, l2 = lame.couplings()
    gauges = [Matrix(QQ, [[1, -2], [0, 1]]),
              Matrix(QQ, [[1, 0], [-2 * l1, 1]]),
              Matrix(QQ, [[1, 0], [-2 * l2, 1]])]
    gauges += [Matrix.identity(QQ, 2)] * (r - 3)
    inv = [g.inverse() for g in gauges]
    blocks = [[gauges[i] * full.residues[j] * inv[j] for j in range(r)]
              for i in range(r)]
    c = Matrix.from_blocks(QQ, blocks)
    # kernel coordinates: first coordinate of each of the three leading blocks
    keep = [i for i in range(2 * r) if i not in (0, 2, 4)]
    c_red = c.submatrix(keep, keep)
    tdiag = [t for t in points for _ in range(2)]
    tdiag = [tdiag[i] for i in keep]
    return OkuboSystem(tdiag, c_red.shift(mu))
