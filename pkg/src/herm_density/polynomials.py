"""Dense univariate polynomials with exact rational coefficients.

The density layer needs exact arithmetic in one variable X: products of
(1 - q^(2l) X) factors, argument rescalings X -> c X, derivatives evaluated
at X = 1, and coefficient-level equality checks.  numpy polynomials are
float based and sympy is a heavy dependency for what amounts to a small
amount of code, so we keep a minimal implementation here.  Coefficients are
fractions.Fraction throughout; integers are accepted and coerced.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Scalar = Union[int, Fraction]


def _coerce(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError("polynomial coefficients must be int or Fraction, got %r"
                    % type(value).__name__)


class Poly:
    """Polynomial sum c[i] * X^i, normalized so the top coefficient is nonzero."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def one_minus_cx(cls, c: Scalar) -> "Poly":
        """1 - c*X, the workhorse factor."""
        return cls([1, -_coerce(c)])

    # -- structure ----------------------------------------------------

    def degree(self) -> int:
        """Degree, with the zero polynomial reported as -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Poly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("%s*X" % c)
            else:
                parts.append("%s*X^%d" % (c, i))
        return "Poly(%s)" % " + ".join(parts)

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other) -> "Poly":
        return self + (-other if isinstance(other, Poly) else Poly.const(-_coerce(other)))

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- calculus and evaluation ----------------------------------------

    def __call__(self, x: Scalar) -> Fraction:
        x = _coerce(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def scale_arg(self, c: Scalar) -> "Poly":
        """Substitute X -> c*X."""
        c = _coerce(c)
        power = Fraction(1)
        out = []
        for coeff in self.coeffs:
            out.append(coeff * power)
            power *= c
        return Poly(out)


ZERO = Poly()
ONE = Poly.const(1)
X = Poly.x()


def prod(factors: Iterable[Poly]) -> Poly:
    result = ONE
    for f in factors:
        result = result * f
    return result
