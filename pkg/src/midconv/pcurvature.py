"""p-curvature of Fuchsian and Okubo systems over F_p(x), with nilpotence scans.

For D: Y' = a Y the higher systems Y^(n) = a_n Y obey a_1 = a and
a_{n+1} = a_n' + a_n a; the p-curvature is a_p computed natively over
F_p(x) (only +, *, d/dx occur, so reduction mod p commutes with the
recursion).  Matrices are held as P(x)/D(x)^e with a scalar denominator
D = prod (x - t_i) over the distinct reduced singular points, which makes
nilpotence a question about exact polynomial matrix powers.

For Okubo systems (x - T) Y' = b Y there is the closed product formula

    a_n = (x-T)^(-1)(b-n+1) (x-T)^(-1)(b-n+2) ... (x-T)^(-1) b,

kept as an independent route and cross-checked against the recursion.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .fields import PrimeField, is_prime
from .fuchsian import FuchsianSystem, OkuboSystem
from .linalg import Matrix
from .poly import Polynomial


class FpRatFunMatrix:
    """P(x) / D(x)^e with P a polynomial matrix over F_p and D scalar."""

    __slots__ = ("p", "P", "D", "e")

    def __init__(self, p: int, P: Matrix, D: Polynomial, e: int):
        self.p = p
        self.P = P
        self.D = D
        self.e = e

    @property
    def size(self) -> int:
        return self.P.rows

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.P.entries for x in row)

    def entry(self, i, j):
        """(numerator polynomial, denominator exponent) for one entry."""
        return self.P.entries[i][j], self.e

    def __eq__(self, other):
        if not isinstance(other, FpRatFunMatrix):
            return NotImplemented
        if self.p != other.p or self.D != other.D:
            return NotImplemented
        # compare P1 D^e2 == P2 D^e1 to tolerate different exponents
        if self.e == other.e:
            return self.P == other.P
        lo, hi = sorted((self, other), key=lambda m: m.e)
        scale = lo.D ** (hi.e - lo.e)
        return lo.P.apply(lambda q: q * scale) == hi.P

    def __repr__(self):
        return f"FpRatFunMatrix(p={self.p}, size={self.size}, e={self.e})"


class _PolyRing:
    """Field-like wrapper so Matrix can hold Polynomial entries."""

    def __init__(self, base):
        self.base = base
        self.name = f"poly({base.name})"

    def __call__(self, v):
        if isinstance(v, Polynomial):
            return v
        return Polynomial.constant(self.base, self.base(v))

    @property
    def zero(self):
        return Polynomial(self.base, [])

    @property
    def one(self):
        return Polynomial.constant(self.base, 1)

    def __eq__(self, other):
        return isinstance(other, _PolyRing) and self.base == other.base

    def __hash__(self):
        return hash(("polyring", self.base))

    def __repr__(self):
        return f"Poly[{self.base!r}]"


def good_prime(sys: FuchsianSystem, mu, p: int):
    """Whether p avoids every denominator, keeps the points distinct mod p,
    and does not divide n_1 n_2 for mu = n_1/n_2.  Returns (ok, reason)."""
    if not is_prime(p):
        return False, f"{p} is not prime"
    mu = Fraction(mu) if mu is not None else None
    dens = [t.denominator for t in sys.points]
    for m in sys.residues:
        for row in m.entries:
            for x in row:
                dens.append(Fraction(x).denominator)
    if mu is not None:
        dens.append(mu.denominator)
    for d in dens:
        if d % p == 0:
            return False, f"p divides a denominator ({d})"
    reduced = [(t.numerator * pow(t.denominator, -1, p)) % p for t in sys.points]
    if len(set(reduced)) != len(reduced):
        return False, "singular points collide mod p"
    if mu is not None and (mu.numerator * mu.denominator) % p == 0:
        return False, "p divides n1*n2 of mu"
    return True, "good"


def good_prime_okubo(ok: OkuboSystem, mu, p: int):
    """good_prime analogue for an Okubo system (distinct diagonal values)."""
    if not is_prime(p):
        return False, f"{p} is not prime"
    mu = Fraction(mu) if mu is not None else None
    dens = [t.denominator for t in ok.tdiag]
    for row in ok.b.entries:
        for x in row:
            dens.append(Fraction(x).denominator)
    if mu is not None:
        dens.append(mu.denominator)
    for d in dens:
        if d % p == 0:
            return False, f"p divides a denominator ({d})"
    pts = ok.distinct_points()
    reduced = [(t.numerator * pow(t.denominator, -1, p)) % p for t in pts]
    if len(set(reduced)) != len(reduced):
        return False, "diagonal values collide mod p"
    if mu is not None and (mu.numerator * mu.denominator) % p == 0:
        return False, "p divides n1*n2 of mu"
    return True, "good"


def _system_mod_p(sys: FuchsianSystem, p: int):
    """(P_1, D) with the system matrix sum a_i/(x - t_i) = P_1/D over F_p."""
    fp = PrimeField(p)
    ring = _PolyRing(fp)
    x = Polynomial.x(fp)
    pts = [fp(t) for t in sys.points]
    D = Polynomial.constant(fp, 1)
    for t in pts:
        D = D * (x - t)
    n = sys.n
    P = Matrix(ring, [[Polynomial(fp, [])] * n for _ in range(n)])
    for t, m in zip(pts, sys.residues):
        cof = Polynomial.constant(fp, 1)
        for s in pts:
            if s != t:
                cof = cof * (x - s)
        add = Matrix(ring, [[cof * fp(Fraction(m.entries[i][j]))
                             for j in range(n)] for i in range(n)])
        P = P + add
    return P, D


def deriv_recursion(P1: Matrix, D: Polynomial, n: int) -> FpRatFunMatrix:
    """a_n for the system a = P1/D, via a_{k+1} = a_k' + a_k a.

    With a_k = P_k/D^k one has P_{k+1} = P_k' D - k P_k D' + P_k P1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    p = D.field.p
    Dp = D.derivative()
    Pk = P1
    for k in range(1, n):
        dPk = Pk.apply(lambda q: q.derivative())
        Pk = dPk.apply(lambda q: q * D) - Pk.apply(lambda q: q * Dp).scale(k) + Pk * P1
    return FpRatFunMatrix(p, Pk, D, n)


def p_curv_fuchsian(sys: FuchsianSystem, p: int, mu=None) -> FpRatFunMatrix:
    """The p-curvature matrix a_p of a Fuchsian system, reduced mod p."""
    ok, reason = good_prime(sys, mu, p)
    if not ok:
        raise ValueError(f"bad prime {p}: {reason}")
    P1, D = _system_mod_p(sys, p)
    return deriv_recursion(P1, D, p)


def _okubo_mod_p(ok: OkuboSystem, p: int):
    """(T values, b matrix, D) over F_p."""
    fp = PrimeField(p)
    x = Polynomial.x(fp)
    tvals = [fp(t) for t in ok.tdiag]
    D = Polynomial.constant(fp, 1)
    for t in {v.v for v in tvals}:
        D = D * (x - fp(t))
    b = [[fp(Fraction(ok.b.entries[i][j])) for j in range(ok.size)]
         for i in range(ok.size)]
    return tvals, b, D


def p_curv_okubo(ok: OkuboSystem, p: int, mu=None) -> FpRatFunMatrix:
    """Closed product formula for the p-curvature of (x - T) Y' = b Y:

        a_p = prod_{j=p-1..0} (x-T)^(-1)(b - j),

    evaluated as D^p-denominator polynomial matrices over F_p.
    """
    okp, reason = good_prime_okubo(ok, mu, p)
    if not okp:
        raise ValueError(f"bad prime {p}: {reason}")
    fp = PrimeField(p)
    ring = _PolyRing(fp)
    x = Polynomial.x(fp)
    tvals, b, D = _okubo_mod_p(ok, p)
    size = ok.size

    def factor(shift: int) -> Matrix:
        # D * (x - T)^(-1) (b + shift) as a polynomial matrix
        rows = []
        for i in range(size):
            cof = D // (x - tvals[i])
            row = []
            for j in range(size):
                c = b[i][j] + (fp(shift) if i == j else fp(0))
                row.append(cof * c)
            rows.append(row)
        return Matrix(ring, rows)

    acc = factor(-(p - 1))
    for j in range(p - 2, -1, -1):
        acc = acc * factor(-j)
    return FpRatFunMatrix(p, acc, D, p)


def okubo_recursion_matrix(ok: OkuboSystem, p: int):
    """(P1, D) for the Okubo system matrix (x - T)^(-1) b over F_p."""
    fp = PrimeField(p)
    ring = _PolyRing(fp)
    x = Polynomial.x(fp)
    tvals, b, D = _okubo_mod_p(ok, p)
    rows = []
    for i in range(ok.size):
        cof = D // (x - tvals[i])
        rows.append([cof * b[i][j] for j in range(ok.size)])
    return Matrix(ring, rows), D


class NotNilpotent:
    """Sentinel: the matrix is not nilpotent."""

    def __repr__(self):
        return "NotNilpotent"

    def __eq__(self, other):
        return isinstance(other, NotNilpotent)


NOT_NILPOTENT = NotNilpotent()


def nilpotence_index(m: FpRatFunMatrix):
    """Smallest k <= size with m^k = 0 (exact polynomial powers), else NotNilpotent.

    The zero matrix has index 1.
    """
    if m.is_zero():
        return 1
    acc = m.P
    for k in range(2, m.size + 1):
        acc = acc * m.P
        if all(x.is_zero() for row in acc.entries for x in row):
            return k
    return NOT_NILPOTENT


def primes_up_to(bound: int):
    return [p for p in range(2, bound + 1) if is_prime(p)]


@dataclass
class PCurvReport:
    prime: int
    good: bool
    reason: str
    index: object = None          # int or NotNilpotent or None (bad prime)
    seed_index: object = None     # int when a seed system was scanned too
    bound: int | None = None      # applicable Theorem bound on the index
    bound_ok: bool | None = None
    seconds: float = 0.0

    def as_dict(self):
        d = {"prime": self.prime, "good": self.good, "reason": self.reason,
             "seconds": round(self.seconds, 6)}
        if self.good:
            d["nilpotence_index"] = (self.index if isinstance(self.index, int)
                                     else "not-nilpotent")
        if self.seed_index is not None:
            d["seed_index"] = (self.seed_index if isinstance(self.seed_index, int)
                               else "not-nilpotent")
        if self.bound is not None:
            d["bound"] = self.bound
            d["bound_ok"] = self.bound_ok
        return d


def _curvature_of(target, p: int, mu):
    if isinstance(target, OkuboSystem):
        return p_curv_okubo(target, p, mu)
    return p_curv_fuchsian(target, p, mu)


def _good_for(target, mu, p):
    if isinstance(target, OkuboSystem):
        return good_prime_okubo(target, mu, p)
    return good_prime(target, mu, p)


def scan(target, p_max: int, mu=None, seed=None) -> list:
    """Nilpotence scan of a Fuchsian or Okubo system over all primes <= p_max.

    Bad primes are skipped with a reason.  When a seed system is supplied,
    target is treated as its convolution with mu and the index bounds
    (k+1 for mu = -1, else k+2 for mu-1 with mu = n1/n2 not integral)
    are recorded per prime.
    """
    if p_max < 2:
        raise ValueError("p_max must be >= 2")
    mu = Fraction(mu) if mu is not None else None
    reports = []
    for p in primes_up_to(p_max):
        t0 = time.perf_counter()
        ok, reason = _good_for(target, mu, p)
        if ok and seed is not None:
            ok, reason = good_prime(seed, mu, p)
            reason = reason if ok else f"seed: {reason}"
        if not ok:
            reports.append(PCurvReport(prime=p, good=False, reason=reason,
                                       seconds=time.perf_counter() - t0))
            continue
        idx = nilpotence_index(_curvature_of(target, p, mu))
        rep = PCurvReport(prime=p, good=True, reason="good", index=idx,
                          seconds=0.0)
        if seed is not None and mu is not None:
            sidx = nilpotence_index(p_curv_fuchsian(seed, p, mu))
            rep.seed_index = sidx
            if isinstance(sidx, int):
                rep.bound = sidx + 1 if mu == -1 else sidx + 2
                rep.bound_ok = isinstance(idx, int) and idx <= rep.bound
        rep.seconds = time.perf_counter() - t0
        reports.append(rep)
    return reports
