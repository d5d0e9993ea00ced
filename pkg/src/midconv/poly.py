"""Univariate polynomials and rational functions over an exact field.

Coefficients are stored little-endian with no trailing zeros; the zero
polynomial has an empty coefficient list.  Rational functions keep a monic
denominator and are reduced to lowest terms (gcd of numerator and
denominator is 1).
"""

from __future__ import annotations


class Polynomial:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        coeffs = [field(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    # -- constructors ------------------------------------------------------
    @staticmethod
    def constant(field, c) -> "Polynomial":
        return Polynomial(field, [field(c)])

    @staticmethod
    def x(field) -> "Polynomial":
        return Polynomial(field, [field.zero, field.one])

    # -- structure ---------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lc = self.leading()
        return Polynomial(self.field, [c / lc for c in self.coeffs])

    def __call__(self, point):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    # -- arithmetic --------------------------------------------------------
    def _wrap(self, other):
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(self.field, other)

    def __add__(self, other):
        o = self._wrap(other)
        n = max(len(self.coeffs), len(o.coeffs))
        z = self.field.zero
        return Polynomial(self.field, [
            (self.coeffs[i] if i < len(self.coeffs) else z)
            + (o.coeffs[i] if i < len(o.coeffs) else z) for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __neg__(self):
        return Polynomial(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        o = self._wrap(other)
        if self.is_zero() or o.is_zero():
            return Polynomial(self.field, [])
        out = [self.field.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return Polynomial(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.constant(self.field, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [self.field.zero] * max(len(rem) - len(other.coeffs) + 1, 0)
        for i in range(len(q) - 1, -1, -1):
            c = rem[i + other.degree] / other.leading()
            q[i] = c
            if c:
                for j, d in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * d
        return Polynomial(self.field, q), Polynomial(self.field, rem)

    def __floordiv__(self, other):
        return self.divmod(self._wrap(other))[0]

    def __mod__(self, other):
        return self.divmod(self._wrap(other))[1]

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "Polynomial":
        return Polynomial(self.field, [k * c for k, c in enumerate(self.coeffs)][1:])

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.field == other.field and self.coeffs == other.coeffs
        return self.coeffs == Polynomial.constant(self.field, other).coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"({c})" if k == 0 else f"({c})*x^{k}")
        return " + ".join(terms)


class RationalFunction:
    """num/den with monic den, gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if g.degree > 0:
            num = num // g
            den = den // g
        lc = den.leading()
        num = num * (den.field.one / lc)
        den = den.monic()
        self.num = num
        self.den = den

    @staticmethod
    def of(num: Polynomial, den: Polynomial | None = None) -> "RationalFunction":
        if den is None:
            den = Polynomial.constant(num.field, 1)
        return RationalFunction(num, den)

    @property
    def field(self):
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        o = self._wrap(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other):
        o = self._wrap(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._wrap(other) / self

    def _wrap(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction.of(other)
        return RationalFunction.of(Polynomial.constant(self.den.field, other))

    def derivative(self) -> "RationalFunction":
        # quotient rule, reduced by the constructor
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den)

    def __call__(self, point):
        return self.num(point) / self.den(point)

    def __eq__(self, other):
        o = self._wrap(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.den.degree == 0:
            return repr(self.num)
        return f"({self.num!r}) / ({self.den!r})"


def ratfun_derivative(f: RationalFunction) -> RationalFunction:
    return f.derivative()
