"""Exact scalar arithmetic: rationals, cyclotomic fields Q(zeta_N), prime fields F_p.

Rationals are plain ``fractions.Fraction``.  Cyclotomic elements are stored in
the power basis 1, z, ..., z^(d-1) modulo the N-th cyclotomic polynomial
(d = deg Phi_N = phi(N)); the order N is fixed per element and equality is
coefficient comparison.  Prime field elements are residues mod p.

Every element type is immutable and hashable; arithmetic operators coerce
ints and Fractions automatically.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache


# ---------------------------------------------------------------------------
# integer polynomial helpers for Phi_N

def _poly_divmod_int(num, den):
    # exact division of integer coefficient lists (little-endian)
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        q, rem = divmod(num[i + len(den) - 1], den[-1])
        assert rem == 0
        out[i] = q
        for j, c in enumerate(den):
            num[i + j] -= q * c
    assert all(c == 0 for c in num)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(order: int) -> tuple[int, ...]:
    """Coefficients (little-endian, integer) of the cyclotomic polynomial Phi_N."""
    if order < 1:
        raise ValueError("order must be positive")
    poly = [-1] + [0] * (order - 1) + [1]  # x^N - 1
    for d in range(1, order):
        if order % d == 0:
            poly = _poly_divmod_int(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def euler_phi(order: int) -> int:
    return len(cyclotomic_polynomial(order)) - 1


# ---------------------------------------------------------------------------
# prime field

def is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in range(2, int(math.isqrt(p)) + 1):
        if p % q == 0:
            return False
    return True


class FpElem:
    """An element of F_p, reduced to [0, p)."""

    __slots__ = ("p", "v")

    def __init__(self, p: int, v: int):
        self.p = p
        self.v = v % p

    def _coerce(self, other):
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise ValueError(f"mixed characteristics {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return FpElem(self.p, other)
        if isinstance(other, Fraction):
            return FpElem(self.p, other.numerator * pow(other.denominator, -1, self.p))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else FpElem(self.p, self.v + o.v)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else FpElem(self.p, self.v - o.v)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else FpElem(self.p, o.v - self.v)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else FpElem(self.p, self.v * o.v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElem(self.p, self.v * pow(o.v, -1, self.p))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElem(self.p, o.v * pow(self.v, -1, self.p))

    def __neg__(self):
        return FpElem(self.p, -self.v)

    def __pow__(self, k: int):
        return FpElem(self.p, pow(self.v, k, self.p))

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, FpElem) else other
        return isinstance(o, FpElem) and o.p == self.p and o.v == self.v

    def __hash__(self):
        return hash((self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} (mod {self.p})"


# ---------------------------------------------------------------------------
# cyclotomic field elements

class CycloElem:
    """Element of Q(zeta_N) in the power basis modulo Phi_N.

    coeffs has length deg Phi_N = phi(N); coeffs[k] is the coordinate of
    zeta_N^k.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        d = euler_phi(order)
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > d:
            coeffs = _reduce_mod_phi(order, coeffs)
        coeffs += [Fraction(0)] * (d - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs)

    # -- constructors ------------------------------------------------------
    @staticmethod
    def root(order: int, power: int = 1) -> "CycloElem":
        """zeta_order^power."""
        power %= order
        c = [Fraction(0)] * (power + 1)
        c[power] = Fraction(1)
        return CycloElem(order, c)

    @staticmethod
    def from_rational(order: int, value) -> "CycloElem":
        return CycloElem(order, [Fraction(value)])

    # -- structure ---------------------------------------------------------
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def lift(self, order: int) -> "CycloElem":
        """Embed into Q(zeta_order); requires self.order | order."""
        if order == self.order:
            return self
        if order % self.order != 0:
            raise ValueError(f"cannot embed Q(zeta_{self.order}) into Q(zeta_{order})")
        step = order // self.order
        out = [Fraction(0)] * (len(self.coeffs) * step - step + 1 or 1)
        for k, c in enumerate(self.coeffs):
            if c:
                out[k * step] += c
        return CycloElem(order, out)

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CycloElem):
            if other.order == self.order:
                return self, other
            n = math.lcm(self.order, other.order)
            return self.lift(n), other.lift(n)
        if isinstance(other, (int, Fraction)):
            return self, CycloElem.from_rational(self.order, other)
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return CycloElem(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return CycloElem(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return CycloElem(a.order, [y - x for x, y in zip(a.coeffs, b.coeffs)])

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        prod = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycloElem(a.order, prod)

    __rmul__ = __mul__

    def inverse(self) -> "CycloElem":
        if not self:
            raise ZeroDivisionError("cyclotomic division by zero")
        # extended euclid in Q[x]: u*self + v*Phi_N = gcd = constant
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        a = list(self.coeffs)
        r0, r1 = phi, _trim(a)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod_frac(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if not r1:
            raise ZeroDivisionError("element not invertible (zero mod Phi_N)")
        c = r1[0]
        return CycloElem(self.order, [x / c for x in s1])

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return b * a.inverse()

    def __neg__(self):
        return CycloElem(self.order, [-c for c in self.coeffs])

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = CycloElem.from_rational(self.order, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "CycloElem":
        """Apply the automorphism zeta_N -> zeta_N^(-1)."""
        out = [Fraction(0)] * self.order
        for k, c in enumerate(self.coeffs):
            if c:
                out[(-k) % self.order] += c
        return CycloElem(self.order, out)

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c) * z**k for k, c in enumerate(self.coeffs))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, CycloElem):
            a, b = self._coerce(other)
            return a.coeffs == b.coeffs
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z{self.order}^{k}")
        return " + ".join(terms)


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0))
           for i in range(n)]
    return _trim(out)


def _poly_divmod_frac(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] / b[-1]
        q[i] = c
        if c:
            for j, d in enumerate(b):
                a[i + j] -= c * d
    return q, _trim(a)


def _reduce_mod_phi(order, coeffs):
    phi = [Fraction(c) for c in cyclotomic_polynomial(order)]
    _, rem = _poly_divmod_frac(coeffs, phi)
    return rem


# ---------------------------------------------------------------------------
# field descriptors

class RationalFieldType:
    """The field Q; elements are fractions.Fraction."""

    name = "rational"

    def __call__(self, v):
        if isinstance(v, Fraction):
            return v
        if isinstance(v, int):
            return Fraction(v)
        if isinstance(v, CycloElem):
            return v.rational_value()
        if isinstance(v, str):
            return Fraction(v)
        raise TypeError(f"cannot coerce {v!r} into Q")

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def to_complex(self, x) -> complex:
        return complex(float(x))

    def conjugate(self, x):
        return x

    def __eq__(self, other):
        return isinstance(other, RationalFieldType)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "QQ"


QQ = RationalFieldType()


class CyclotomicField:
    """The field Q(zeta_N); elements are CycloElem of order N."""

    def __init__(self, order: int):
        if order < 1:
            raise ValueError("order must be positive")
        self.order = order
        self.name = f"cyclotomic({order})"

    def __call__(self, v):
        if isinstance(v, CycloElem):
            return v.lift(self.order) if v.order != self.order else v
        if isinstance(v, (int, Fraction)):
            return CycloElem.from_rational(self.order, v)
        if isinstance(v, str):
            return CycloElem.from_rational(self.order, Fraction(v))
        raise TypeError(f"cannot coerce {v!r} into Q(zeta_{self.order})")

    @property
    def zero(self):
        return CycloElem.from_rational(self.order, 0)

    @property
    def one(self):
        return CycloElem.from_rational(self.order, 1)

    def root(self, power: int = 1):
        return CycloElem.root(self.order, power)

    def to_complex(self, x) -> complex:
        if isinstance(x, CycloElem):
            return x.to_complex()
        return complex(float(x))

    def conjugate(self, x):
        if isinstance(x, CycloElem):
            return x.conjugate()
        return x

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.order == self.order

    def __hash__(self):
        return hash(("cyclo", self.order))

    def __repr__(self):
        return f"QQ(zeta_{self.order})"


class PrimeField:
    """The field F_p; elements are FpElem."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"prime({p})"

    def __call__(self, v):
        if isinstance(v, FpElem):
            if v.p != self.p:
                raise ValueError("characteristic mismatch")
            return v
        if isinstance(v, int):
            return FpElem(self.p, v)
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {v} vanishes mod {self.p}")
            return FpElem(self.p, v.numerator * pow(v.denominator, -1, self.p))
        raise TypeError(f"cannot coerce {v!r} into F_{self.p}")

    @property
    def zero(self):
        return FpElem(self.p, 0)

    @property
    def one(self):
        return FpElem(self.p, 1)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))

    def __repr__(self):
        return f"GF({self.p})"


def common_field(f1, f2):
    """Smallest field containing both (Q and cyclotomic orders via lcm)."""
    if f1 == f2:
        return f1
    if isinstance(f1, RationalFieldType) and isinstance(f2, CyclotomicField):
        return f2
    if isinstance(f2, RationalFieldType) and isinstance(f1, CyclotomicField):
        return f1
    if isinstance(f1, CyclotomicField) and isinstance(f2, CyclotomicField):
        return CyclotomicField(math.lcm(f1.order, f2.order))
    raise TypeError(f"no common field for {f1!r} and {f2!r}")


# ---------------------------------------------------------------------------
# spec-level helpers

def cyclo_conjugate(z: CycloElem) -> CycloElem:
    """zeta_N -> zeta_N^(-1), entrywise on the power basis."""
    return z.conjugate()


def cyclo_sqrt_root(order: int, power: int) -> CycloElem:
    """A square root of zeta_order^power, namely zeta_(2*order)^power."""
    return CycloElem.root(2 * order, power)
