"""Construction of Fuchsian systems by iterated scalar additions and middle
convolutions from a rank-1 seed, plus the reverse reduction on matrix tuples.

The forward direction folds a user-supplied program of steps over a 1 x 1
seed system, emitting one report per step (dimensions, subspace dimensions,
rigidity index, rank flags).  The reverse direction searches scalar
multiplications and a convolution parameter that strictly reduce the
dimension of a rigid tuple, using eigenvalues found among rationals and
roots of unity of the ambient cyclotomic field.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .convolution import MatTuple, dim_formula, irreducible_abs, mc_mult, scalar_mult
from .fields import QQ, CycloElem, CyclotomicField, RationalFieldType
from .fuchsian import FuchsianSystem, mc_add, scalar_add
from .linalg import Matrix, centralizer_dim, rank
from .poly import Polynomial


# ---------------------------------------------------------------------------
# construction steps

@dataclass(frozen=True)
class ScalarAdd:
    deltas: tuple

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(Fraction(d) for d in self.deltas))


@dataclass(frozen=True)
class MiddleConv:
    mu: Fraction

    def __post_init__(self):
        object.__setattr__(self, "mu", Fraction(self.mu))


@dataclass
class StepReport:
    index: int
    step: object
    dim_before: int
    dim_after: int
    k_dim: int | None = None          # blockwise-kernel space (convolution steps)
    l_dim: int | None = None
    rigidity: int | None = None       # additive rigidity index after the step
    residue_ranks: tuple = ()
    infinity_rank: int | None = None  # rk(sum a + mu) after the step
    infinity_full: bool | None = None
    warnings: list = dc_field(default_factory=list)

    def as_dict(self):
        kind = "scalar-add" if isinstance(self.step, ScalarAdd) else "middle-conv"
        d = {"step": self.index, "kind": kind,
             "dim_before": self.dim_before, "dim_after": self.dim_after}
        if isinstance(self.step, ScalarAdd):
            d["deltas"] = [str(x) for x in self.step.deltas]
        else:
            d["mu"] = str(self.step.mu)
            d["mu_shifted"] = str(self.step.mu + 1)   # lambda = e^(2 pi i (mu+1))
        if self.k_dim is not None:
            d["k_dim"] = self.k_dim
            d["l_dim"] = self.l_dim
        if self.rigidity is not None:
            d["rigidity_index"] = self.rigidity
        d["residue_ranks"] = list(self.residue_ranks)
        if self.infinity_rank is not None:
            d["infinity_rank"] = self.infinity_rank
            d["infinity_full_rank"] = self.infinity_full
        if self.warnings:
            d["warnings"] = self.warnings
        return d


def rigidity_index_add(sys: FuchsianSystem, mu=Fraction(0)) -> int:
    """(2 - (r+1)) n^2 + sum of centralizer dims over a_1..a_r and the
    residue at infinity -(sum a_i) - mu (the scalar shift does not change
    the centralizer, but is kept for bookkeeping)."""
    a_inf = (-sys.residue_sum()).shift(sys.field(-mu))
    mats = list(sys.residues) + [a_inf]
    n = sys.n
    return (2 - len(mats)) * n * n + sum(centralizer_dim(m) for m in mats)


class SeedValidationError(ValueError):
    pass


class DimensionCollapseError(RuntimeError):
    pass


def validate_seed(seed: FuchsianSystem):
    """Rank-1 seed, integer residues zero, at least two non-integer residues."""
    if seed.n != 1:
        raise SeedValidationError("seed must be a rank-1 (1 x 1) system")
    noninteger = 0
    for m in seed.residues:
        v = Fraction(m.entries[0][0])
        if v.denominator == 1:
            if v != 0:
                raise SeedValidationError(
                    f"integer seed residue {v} must be 0 (shift it away)")
        else:
            noninteger += 1
    if noninteger < 2:
        raise SeedValidationError("seed needs at least two non-integer residues")


def apply_program(seed: FuchsianSystem, steps, validate: bool = True):
    """Fold construction steps over a rank-1 seed; returns (system, reports).

    A MiddleConv(mu) step applies the additive middle convolution with mu
    directly; the matching multiplicative parameter is e^(2 pi i (mu+1)),
    recorded in the report as mu_shifted.
    """
    if validate:
        validate_seed(seed)
    sys = seed
    reports = []
    last_mu = Fraction(0)
    for i, step in enumerate(steps):
        before = sys.n
        if isinstance(step, ScalarAdd):
            if len(step.deltas) != sys.r:
                raise ValueError(f"step {i}: need {sys.r} shifts")
            sys = scalar_add(step.deltas, sys)
            rep = StepReport(index=i, step=step, dim_before=before, dim_after=sys.n)
        elif isinstance(step, MiddleConv):
            res = mc_add(sys, step.mu)
            rep = StepReport(index=i, step=step, dim_before=before,
                             dim_after=res.dim, k_dim=res.kspace.dim,
                             l_dim=res.lspace.dim)
            sys = res.system
            last_mu = step.mu
            if sys.n == 0:
                raise DimensionCollapseError(
                    f"step {i}: middle convolution collapsed the system to dimension 0")
        else:
            raise TypeError(f"unknown step {step!r}")
        rep.rigidity = rigidity_index_add(sys, last_mu)
        rep.residue_ranks = tuple(rank(m) for m in sys.residues)
        inf = sys.residue_sum().shift(sys.field(last_mu))
        rep.infinity_rank = rank(inf)
        rep.infinity_full = rep.infinity_rank == sys.n
        reports.append(rep)
    return sys, reports


def _shift_grid(max_den: int = 12):
    """Deterministic candidate shifts: 0, then +-k/d in lowest terms by (d, k, sign)."""
    grid = [Fraction(0)]
    for d in range(1, max_den + 1):
        for k in range(1, d):
            q = Fraction(k, d)
            if q.denominator != d:
                continue
            grid.append(q)
            grid.append(-q)
    return grid


def choose_valid_shift(sys: FuchsianSystem, mu) -> list:
    """Greedy scalar shifts making rk(a_i + delta_i) and rk(sum + mu) maximal.

    Per position the first grid candidate achieving the maximal residue rank
    is chosen (so an already-maximal position keeps delta = 0); then, if the
    rank at infinity is not maximal, single positions are adjusted greedily
    without giving up residue rank.
    """
    mu = sys.field(mu)
    grid = _shift_grid()
    n = sys.n
    deltas = []
    shifted = []
    for m in sys.residues:
        best = None
        for d in grid:
            rk = rank(m.shift(sys.field(d)))
            if best is None or rk > best[1]:
                best = (d, rk)
                if rk == n:
                    break
        deltas.append(best[0])
        shifted.append(m.shift(sys.field(best[0])))

    def inf_rank(mats):
        total = Matrix.zero(sys.field, n)
        for m in mats:
            total = total + m
        return rank(total.shift(mu))

    cur = inf_rank(shifted)
    if cur < n:
        base_ranks = [rank(m) for m in shifted]
        improved = True
        while improved and cur < n:
            improved = False
            for i in range(sys.r):
                for d in grid:
                    cand = sys.residues[i].shift(sys.field(d))
                    if rank(cand) < base_ranks[i]:
                        continue
                    trial = list(shifted)
                    trial[i] = cand
                    rk = inf_rank(trial)
                    if rk > cur:
                        deltas[i] = d
                        shifted = trial
                        cur = rk
                        improved = True
                        break
                if improved:
                    break
    return deltas


# ---------------------------------------------------------------------------
# eigenvalues and reduction

class UnsupportedEigenvaluesError(ValueError):
    pass


def charpoly(m: Matrix) -> Polynomial:
    """Characteristic polynomial det(x - M) by the trace recursion
    (Faddeev-LeVerrier); valid in characteristic zero."""
    f = m.field
    n = m.rows
    coeffs = [f.zero] * (n + 1)
    coeffs[n] = f.one
    acc = Matrix.identity(f, n)
    for k in range(1, n + 1):
        acc = m * acc
        c = acc.trace() / k
        coeffs[n - k] = -c
        acc = acc.shift(-c)
    return Polynomial(f, coeffs)


def _root_candidates(field):
    if isinstance(field, CyclotomicField):
        return [CycloElem.root(field.order, k) for k in range(field.order)]
    return [QQ(1), QQ(-1)]


def _rational_candidates(poly: Polynomial):
    """Rational root candidates p/q from integer-cleared first/last coefficients."""
    coeffs = []
    for c in poly.coeffs:
        if isinstance(c, CycloElem):
            if not c.is_rational():
                return []
            coeffs.append(c.rational_value())
        else:
            coeffs.append(Fraction(c))
    if not coeffs or not coeffs[0]:
        return []
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(v):
        out = [d for d in range(1, int(abs(v) ** 0.5) + 1) if v % d == 0]
        return sorted(set(out + [v // d for d in out]))

    cands = []
    for p in divisors(a0):
        for q in divisors(an):
            cands.append(Fraction(p, q))
            cands.append(Fraction(-p, q))
    return sorted(set(cands))


def matrix_eigenvalues(m: Matrix) -> list:
    """All eigenvalues with multiplicity, restricted to rationals and roots of
    unity of the ambient cyclotomic field; raises UnsupportedEigenvaluesError
    if the characteristic polynomial does not split over that candidate set."""
    f = m.field
    poly = charpoly(m)
    candidates = list(_root_candidates(f))
    candidates += [f(c) for c in _rational_candidates(poly)]
    seen = []
    for c in candidates:
        if not any(c == s for s in seen):
            seen.append(c)
    roots = []
    x = Polynomial.x(f)
    while poly.degree > 0:
        for c in seen:
            if not poly(c):
                roots.append(c)
                poly = poly // (x - c)
                break
        else:
            raise UnsupportedEigenvaluesError(
                "eigenvalues outside rationals and ambient roots of unity")
    return roots


def _sort_key(v):
    if isinstance(v, CycloElem):
        return tuple(v.coeffs)
    return (Fraction(v),)


class NotReducible:
    def __repr__(self):
        return "NotReducible"


NOT_REDUCIBLE = NotReducible()


@dataclass
class ReductionStep:
    omega: tuple        # scalars applied to the tuple
    lam: object         # convolution parameter
    reduced: MatTuple   # MC_lam(M_omega(A))
    dim: int


def katz_reduce(a: MatTuple):
    """One reduction step: the (Omega, lambda) from per-position eigenvalue
    choices minimizing the dimension formula, applied when it strictly
    decreases the dimension.  Returns a ReductionStep or NOT_REDUCIBLE."""
    if not irreducible_abs(a):
        raise ValueError("tuple must be absolutely irreducible")
    if a.n <= 1:
        return NOT_REDUCIBLE
    eigs = [sorted(set(matrix_eigenvalues(m)), key=_sort_key) for m in a.matrices]
    eigs.append(sorted(set(matrix_eigenvalues(a.product().inverse())), key=_sort_key))
    best = None
    for combo in itertools.product(*eigs):
        alphas, beta = combo[:-1], combo[-1]
        omega = tuple(a.field.one / x for x in alphas)
        lam = beta
        for x in alphas:
            lam = lam * x
        if not lam or lam == a.field.one:
            continue
        scaled = scalar_mult(omega, a)
        d = dim_formula(scaled, lam)
        if d < 1:
            continue
        if best is None or d < best[0]:
            best = (d, omega, lam)
    if best is None or best[0] >= a.n:
        return NOT_REDUCIBLE
    d, omega, lam = best
    reduced = mc_mult(scalar_mult(omega, a), lam).quotient
    assert reduced.n == d
    return ReductionStep(omega=omega, lam=lam, reduced=reduced, dim=d)
