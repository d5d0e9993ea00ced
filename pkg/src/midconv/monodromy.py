"""Numerical monodromy of Fuchsian systems and the convolution compatibility check.

Fundamental matrices are continued along piecewise line/arc paths with an
adaptive embedded Dormand-Prince pair acting on complex matrices.  Loops are
lassos from a base point below the real axis (segment toward the singular
point, one counterclockwise circle, segment back), ordered by increasing
real part by default; the monodromy matrix of a loop is the end value of
continuing the identity fundamental matrix, acting on the right per the
continuation convention F -> F * Mon(gamma).

verify_rh checks, numerically and up to simultaneous conjugacy (with a
depth-2 pure-braid fallback), that the monodromy of the additive middle
convolution with mu - 1 equals the multiplicative middle convolution at
lambda = e^(2 pi i mu) of the monodromy of the input system.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .fuchsian import FuchsianSystem, mc_add
from .linalg import rank as exact_rank


# ---------------------------------------------------------------------------
# paths

def line(z0: complex, z1: complex):
    return ("line", complex(z0), complex(z1))

def arc(center: complex, radius: float, a0: float, a1: float):
    return ("arc", complex(center), float(radius), float(a0), float(a1))


def _piece_endpoints(piece):
    if piece[0] == "line":
        return piece[1], piece[2]
    _, c, rho, a0, a1 = piece
    return c + rho * cmath.exp(1j * a0), c + rho * cmath.exp(1j * a1)


def _piece_gamma(piece):
    """(gamma(s), gamma'(s)) for s in [0, 1]."""
    if piece[0] == "line":
        _, z0, z1 = piece
        dz = z1 - z0
        return lambda s: z0 + s * dz, lambda s: dz
    _, c, rho, a0, a1 = piece
    da = a1 - a0
    return (lambda s: c + rho * cmath.exp(1j * (a0 + s * da)),
            lambda s: 1j * rho * da * cmath.exp(1j * (a0 + s * da)))


class StepUnderflowError(RuntimeError):
    """The integrator could not maintain accuracy (path too close to a pole)."""


# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1/5, 3/10, 4/5, 8/9, 1.0, 1.0)
_DP_A = (
    (),
    (1/5,),
    (3/40, 9/40),
    (44/45, -56/15, 32/9),
    (19372/6561, -25360/2187, 64448/6561, -212/729),
    (9017/3168, -355/33, 46732/5247, 49/176, -5103/18656),
    (35/384, 0.0, 500/1113, 125/192, -2187/6784, 11/84),
)
_DP_B5 = (35/384, 0.0, 500/1113, 125/192, -2187/6784, 11/84, 0.0)
_DP_B4 = (5179/57600, 0.0, 7571/16695, 393/640, -92097/339200, 187/2100, 1/40)


def _dopri_piece(coeff, piece, y, tol):
    """Continue Y' = gamma'(s) A(gamma(s)) Y across one path piece."""
    gamma, dgamma = _piece_gamma(piece)

    def f(s, yy):
        return dgamma(s) * coeff(gamma(s)) @ yy

    s = 0.0
    h = 0.1
    k = [None] * 7
    while s < 1.0:
        h = min(h, 1.0 - s)
        if h < 1e-14:
            raise StepUnderflowError("step size underflow along path")
        k[0] = f(s, y)
        for i in range(1, 7):
            yi = y + h * sum(_DP_A[i][j] * k[j] for j in range(i))
            k[i] = f(s + _DP_C[i] * h, yi)
        y5 = y + h * sum(b * ki for b, ki in zip(_DP_B5, k))
        y4 = y + h * sum(b * ki for b, ki in zip(_DP_B4, k))
        err = np.max(np.abs(y5 - y4))
        scale = tol * max(1.0, float(np.max(np.abs(y5))))
        if err <= scale:
            s += h
            y = y5
            factor = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * (scale / err) ** 0.2))
        else:
            factor = max(0.1, 0.9 * (scale / err) ** 0.25)
        h *= factor
        if h < 1e-14 and s < 1.0:
            raise StepUnderflowError("step size underflow along path")
    return y


def system_coefficient(sys: FuchsianSystem):
    """x -> sum a_i/(x - t_i) as a complex matrix function."""
    pts = [complex(t) for t in sys.points]
    mats = [np.array([[sys.field.to_complex(x) for x in row] for row in m.entries],
                     dtype=complex) for m in sys.residues]

    def coeff(x: complex):
        acc = np.zeros((sys.n, sys.n), dtype=complex)
        for t, m in zip(pts, mats):
            acc += m / (x - t)
        return acc

    return coeff


def integrate_along(sys: FuchsianSystem, path, y0, tol: float = 1e-10):
    """Continue the matrix solution with initial value y0 along a path
    (list of line/arc pieces); returns the end value."""
    coeff = system_coefficient(sys)
    y = np.array(y0, dtype=complex)
    for piece in path:
        a, b = _piece_endpoints(piece)
        if piece[0] == "line" and abs(b - a) == 0:
            continue
        y = _dopri_piece(coeff, piece, y, tol)
    return y


# ---------------------------------------------------------------------------
# loop construction

@dataclass
class LoopConfig:
    base_point: complex | None = None     # default: mean(Re t) - (1 + max|t|) i
    ordering: tuple | None = None         # default: by (Re t, Im t)
    circle_radius_factor: float = 0.4     # fraction of nearest-neighbor distance
    tol: float = 1e-10                    # local ODE error per step
    rank_tol: float = 1e-8                # relative SVD threshold for rank/kernel

    def resolve(self, points):
        pts = [complex(t) for t in points]
        order = self.ordering
        if order is None:
            order = tuple(sorted(range(len(pts)), key=lambda i: (pts[i].real, pts[i].imag)))
        base = self.base_point
        if base is None:
            base = (sum(p.real for p in pts) / len(pts)
                    - 1j * (1.0 + max(abs(p) for p in pts)))
        base = complex(base)
        if any(abs(base - p) < 1e-12 for p in pts):
            raise ValueError("base point coincides with a singular point")
        radii = []
        for i, p in enumerate(pts):
            others = [abs(p - q) for j, q in enumerate(pts) if j != i]
            near = min(others) if others else 2.0
            radii.append(self.circle_radius_factor * min(near, abs(base - p)))
        return base, order, pts, radii


def lasso(base: complex, center: complex, radius: float):
    """Segment toward the point, one counterclockwise circle, segment back."""
    u = (base - center) / abs(base - center)
    entry = center + radius * u
    a0 = cmath.phase(u)
    return [line(base, entry), arc(center, radius, a0, a0 + 2 * math.pi),
            line(entry, base)]


def big_circle(base: complex, points, clockwise: bool):
    """A loop around all singular points, based at base."""
    c = sum(points) / len(points)
    radius = max(abs(base - c), 1.3 * max(abs(p - c) for p in points))
    u = (base - c) / abs(base - c)
    start = c + radius * u
    a0 = cmath.phase(u)
    a1 = a0 - 2 * math.pi if clockwise else a0 + 2 * math.pi
    return [line(base, start), arc(c, radius, a0, a1), line(start, base)]


@dataclass
class ComplexTuple:
    matrices: list                   # list of complex n x n arrays, in loop order
    config: LoopConfig
    diagnostics: dict = dc_field(default_factory=dict)

    @property
    def n(self):
        return self.matrices[0].shape[0]

    @property
    def r(self):
        return len(self.matrices)


def monodromy_tuple(sys: FuchsianSystem, cfg: LoopConfig | None = None) -> ComplexTuple:
    """Monodromy matrices along lassos around each singular point.

    The tuple is indexed by the original point order of the system; loops are
    traversed in cfg order.  Diagnostics carry the product-relation defect
    (the composite 'rightmost lasso first' is null-homotopic with the
    clockwise circle at infinity, so Mon(g_1)...Mon(g_r).Mon(g_inf) = 1 in
    cfg order) and the determinant/trace residue check.
    """
    cfg = cfg or LoopConfig()
    base, order, pts, radii = cfg.resolve(sys.points)
    eye = np.eye(sys.n, dtype=complex)
    mons = {}
    for i in order:
        mons[i] = integrate_along(sys, lasso(base, pts[i], radii[i]), eye, cfg.tol)
    matrices = [mons[i] for i in range(sys.r)]

    m_inf = integrate_along(sys, big_circle(base, pts, clockwise=True), eye, cfg.tol)
    prod = eye.copy()
    for i in order:
        prod = prod @ mons[i]
    product_defect = float(np.linalg.norm(prod @ m_inf - eye))

    abel = 0.0
    for i, m in enumerate(matrices):
        tr = complex(sum(complex(sys.field.to_complex(x))
                         for x in (sys.residues[i].entries[j][j] for j in range(sys.n))))
        abel = max(abel, abs(np.linalg.det(m) - cmath.exp(2j * cmath.pi * tr)))

    return ComplexTuple(matrices=matrices, config=cfg,
                        diagnostics={"product_defect": product_defect,
                                     "abel_defect": abel,
                                     "mon_infinity": m_inf})


# ---------------------------------------------------------------------------
# numeric linear algebra on tuples

def svd_rank(m: np.ndarray, rank_tol: float) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))


def null_space(m: np.ndarray, rank_tol: float) -> np.ndarray:
    """Orthonormal basis (columns) of the numeric kernel."""
    if m.size == 0:
        return np.zeros((m.shape[1], m.shape[1]))
    u, s, vh = np.linalg.svd(m)
    cutoff = rank_tol * (s[0] if s.size and s[0] > 0 else 1.0)
    nz = int(np.sum(s > cutoff))
    return vh[nz:].conj().T


def numeric_conv(mats, lam: complex):
    """Complex convolution tuple (B_1, ..., B_r)."""
    r = len(mats)
    n = mats[0].shape[0]
    eye = np.eye(n, dtype=complex)
    out = []
    for k in range(r):
        b = np.eye(n * r, dtype=complex)
        for j in range(r):
            if j < k:
                blk = lam * (mats[j] - eye)
            elif j == k:
                blk = lam * mats[k]
            else:
                blk = mats[j] - eye
            b[k * n:(k + 1) * n, j * n:(j + 1) * n] = blk
        out.append(b)
    return out


def numeric_mc(mats, lam: complex, rank_tol: float = 1e-8):
    """Complex middle convolution: quotient of the B_k by K + L (SVD kernels)."""
    r = len(mats)
    n = mats[0].shape[0]
    eye = np.eye(n, dtype=complex)
    bs = numeric_conv(mats, lam)
    cols = []
    for k in range(r):
        ker = null_space(mats[k] - eye, rank_tol)
        for v in ker.T:
            w = np.zeros(n * r, dtype=complex)
            w[k * n:(k + 1) * n] = v
            cols.append(w)
    prod = eye.copy()
    for m in mats:
        prod = prod @ m
    ker = null_space(lam * prod - eye, rank_tol)
    for v in ker.T:
        w = np.zeros(n * r, dtype=complex)
        chunk = v.copy()
        for i in range(r - 1, -1, -1):
            w[i * n:(i + 1) * n] = chunk
            chunk = mats[i] @ chunk
        cols.append(w)
    if cols:
        w = np.array(cols).T
        u, s, _ = np.linalg.svd(w, full_matrices=True)
        cutoff = rank_tol * (s[0] if s.size and s[0] > 0 else 1.0)
        dim_kl = int(np.sum(s > cutoff))
        comp = u[:, dim_kl:]
    else:
        comp = np.eye(n * r, dtype=complex)
        dim_kl = 0
    quot = [comp.conj().T @ b @ comp for b in bs]
    return quot, dim_kl


def numeric_braid(mats, word):
    """Braid action Q_i (negative index: inverse) on a complex tuple."""
    mats = [m.copy() for m in mats]
    r = len(mats)
    for idx in word:
        i = abs(idx)
        if not 1 <= i <= r - 1:
            raise ValueError("braid index out of range")
        k = i - 1
        if idx > 0:
            mats[k], mats[k + 1] = mats[k] @ mats[k + 1] @ np.linalg.inv(mats[k]), mats[k]
        else:
            mats[k], mats[k + 1] = mats[k + 1], np.linalg.inv(mats[k + 1]) @ mats[k] @ mats[k + 1]
    return mats


@dataclass
class NumericConjugacy:
    ok: bool
    s: np.ndarray | None
    residual: float
    gap: float          # second-smallest singular value (intertwiner separation)


def numeric_conjugacy(t1, t2, tol: float = 1e-6) -> NumericConjugacy:
    """Least-squares simultaneous conjugator via SVD of the stacked Sylvester system."""
    mats1 = t1.matrices if isinstance(t1, ComplexTuple) else t1
    mats2 = t2.matrices if isinstance(t2, ComplexTuple) else t2
    if len(mats1) != len(mats2) or mats1[0].shape != mats2[0].shape:
        raise ValueError("tuples must share n and r")
    n = mats1[0].shape[0]
    eye = np.eye(n)
    rows = []
    for a, b in zip(mats1, mats2):
        rows.append(np.kron(a, eye) - np.kron(eye, b.T))
    stacked = np.vstack(rows)
    _, sv, vh = np.linalg.svd(stacked)
    s = vh[-1].conj().reshape(n, n)
    gap = float(sv[-2]) if sv.size >= 2 else float("inf")
    try:
        cond = np.linalg.cond(s)
    except np.linalg.LinAlgError:
        cond = float("inf")
    if not np.isfinite(cond) or cond > 1e8:
        return NumericConjugacy(False, None, float("inf"), gap)
    s_inv = np.linalg.inv(s)
    residual = max(float(np.linalg.norm(s_inv @ a @ s - b)) for a, b in zip(mats1, mats2))
    return NumericConjugacy(residual < tol, s, residual, gap)


def numeric_irreducible(mats, rank_tol: float = 1e-8) -> bool:
    """Burnside span closure with SVD rank."""
    n = mats[0].shape[0]
    if n <= 1:
        return True
    words = [np.eye(n, dtype=complex)]
    frontier = [np.eye(n, dtype=complex)]
    cur_rank = 1
    while frontier:
        nxt = []
        for w in frontier:
            for g in mats:
                cand = g @ w
                trial = words + [cand]
                rk = svd_rank(np.array([t.flatten() for t in trial]), rank_tol)
                if rk > len(words):
                    words.append(cand)
                    nxt.append(cand)
                    cur_rank = rk
                    if cur_rank == n * n:
                        return True
        frontier = nxt
    return cur_rank == n * n


# ---------------------------------------------------------------------------
# the compatibility check

@dataclass
class RHReport:
    mu: object
    lam: complex
    hypotheses_ok: bool
    hypothesis_failures: list
    rank_pairs: list            # (i, exact rk a_i, numeric rk A_i - 1)
    infinity_ranks: tuple       # (exact rk sum a + mu, numeric rk lam prod - 1)
    dims: tuple                 # (exact mc_add dim, numeric MC dim, dim formula value)
    conjugacy: NumericConjugacy | None
    braid_word: tuple | None
    product_defects: tuple
    abel_defects: tuple
    passed: bool
    status: str                 # "pass" | "hypothesis-violation" | "inconclusive"


def _pure_braid_words(r: int, max_len: int = 2):
    gens = []
    for i in range(1, r):
        gens.append((i, i))           # Q_i^2
        gens.append((-i, -i))         # Q_i^-2
    words = [()]
    words += [g for g in gens]
    if max_len >= 2:
        words += [g + h for g in gens for h in gens]
    return words


def verify_rh(sys: FuchsianSystem, mu, cfg: LoopConfig | None = None,
              tol: float = 1e-6) -> RHReport:
    """Check Mon(mc_add(sys, mu - 1)) ~ MC_lambda(Mon(sys)) with lambda = e^(2 pi i mu).

    Rank hypotheses, irreducibility, and the two-nontrivial-generators
    condition are verified first; the conjugacy is then tested with the same
    loop configuration on both systems, retrying with pure-braid adjustments
    of word length <= 2 before giving up.
    """
    from fractions import Fraction
    mu = Fraction(mu)
    if mu.denominator == 1:
        raise ValueError("mu must not be an integer")
    cfg = cfg or LoopConfig()
    lam = cmath.exp(2j * cmath.pi * float(mu))

    mon = monodromy_tuple(sys, cfg)
    mats = mon.matrices
    n = sys.n
    eye = np.eye(n, dtype=complex)

    failures = []
    rank_pairs = []
    for i, m in enumerate(mats):
        exact = exact_rank(sys.residues[i])
        numeric = svd_rank(m - eye, cfg.rank_tol)
        rank_pairs.append((i, exact, numeric))
        if exact != numeric:
            failures.append(f"rank hypothesis fails at point {i}: "
                            f"rk(a_i)={exact} vs rk(A_i-1)={numeric}")
    prod = eye.copy()
    for m in mats:
        prod = prod @ m
    exact_inf = exact_rank(sys.residue_sum().shift(sys.field(mu)))
    numeric_inf = svd_rank(lam * prod - eye, cfg.rank_tol)
    if exact_inf != numeric_inf:
        failures.append(f"rank hypothesis fails at infinity: "
                        f"rk(sum a + mu)={exact_inf} vs rk(lam A_1..A_r - 1)={numeric_inf}")
    nontrivial = sum(1 for m in mats if np.linalg.norm(m - eye) > 1e-6)
    if nontrivial < 2:
        failures.append("fewer than two monodromy generators differ from 1")
    if not numeric_irreducible(mats, cfg.rank_tol):
        failures.append("monodromy tuple is numerically reducible")

    added = mc_add(sys, mu - 1)
    quot, dim_kl = numeric_mc(mats, lam, cfg.rank_tol)
    mc_dim = n * sys.r - dim_kl
    # dimension formula evaluated with the numeric ranks
    formula = sum(p[2] for p in rank_pairs) - (n - numeric_inf)
    dims = (added.dim, mc_dim, formula)
    if added.dim != mc_dim or added.dim != formula:
        failures.append(f"dimension mismatch: exact mc_add dim {added.dim} "
                        f"vs numeric MC dim {mc_dim}")

    if failures:
        return RHReport(mu=mu, lam=lam, hypotheses_ok=False,
                        hypothesis_failures=failures, rank_pairs=rank_pairs,
                        infinity_ranks=(exact_inf, numeric_inf), dims=dims,
                        conjugacy=None, braid_word=None,
                        product_defects=(mon.diagnostics["product_defect"],),
                        abel_defects=(mon.diagnostics["abel_defect"],),
                        passed=False, status="hypothesis-violation")

    mon2 = monodromy_tuple(added.system, cfg)
    best = None
    best_word = None
    for word in _pure_braid_words(sys.r):
        cand = numeric_braid(quot, word) if word else quot
        res = numeric_conjugacy(cand, mon2.matrices, tol)
        if best is None or res.residual < best.residual:
            best, best_word = res, word
        if res.ok:
            break
    status = "pass" if best.ok else "inconclusive"
    return RHReport(mu=mu, lam=lam, hypotheses_ok=True, hypothesis_failures=[],
                    rank_pairs=rank_pairs, infinity_ranks=(exact_inf, numeric_inf),
                    dims=dims, conjugacy=best, braid_word=best_word,
                    product_defects=(mon.diagnostics["product_defect"],
                                     mon2.diagnostics["product_defect"]),
                    abel_defects=(mon.diagnostics["abel_defect"],
                                  mon2.diagnostics["abel_defect"]),
                    passed=best.ok, status=status)
