"""Exact arithmetic in the ramified quadratic extension F = F0(pi), pi^2 = p.

The exact model takes F0 = Q with its p-adic valuation for a chosen odd
prime p (the same p that plays the residue size q downstream), and
F = Q(sqrt(p)) with pi = sqrt(p).  Elements are pairs (a, b) of Fractions
meaning a + b*pi; conjugation flips the sign of b, so tr(pi) = 0 and
N(a + b*pi) = a^2 - p*b^2.

Valuations are pi-normalized on F (val(pi) = 1, val(p) = 2) and exact:
val(a + b*pi) = min(2*v_p(a), 2*v_p(b) + 1) with no cancellation possible
because the two candidates have different parities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Union

try:
    from gmpy2 import mpq as _RAT
except ImportError:  # pragma: no cover
    _RAT = Fraction

INF = float("inf")

Rational = Union[int, Fraction]


def val_p(x, p: int):
    """p-adic valuation of a rational number; +inf for 0."""
    if x == 0:
        return INF
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part_mod_p(x, p: int) -> int:
    """For x = u * p^v with u a p-unit, the residue of u mod p."""
    if x == 0:
        raise ValueError("zero has no unit part")
    num, den = int(x.numerator), int(x.denominator)
    while num % p == 0:
        num //= p
    while den % p == 0:
        den //= p
    return (num * pow(den, -1, p)) % p


@dataclass(frozen=True)
class FElement:
    """a + b*pi in F = Q(sqrt(p)), with exact rational components.

    Components are stored as gmpy2.mpq when available (Fraction otherwise);
    both expose .numerator/.denominator and compare and hash alike, so either
    backend may appear and they interoperate freely.
    """

    a: Fraction
    b: Fraction
    p: int

    @classmethod
    def of(cls, a: Rational, b: Rational, p: int) -> "FElement":
        return cls(_RAT(a), _RAT(b), p)

    @classmethod
    def zero(cls, p: int) -> "FElement":
        return cls(_RAT(0), _RAT(0), p)

    @classmethod
    def one(cls, p: int) -> "FElement":
        return cls(_RAT(1), _RAT(0), p)

    @classmethod
    def pi(cls, p: int) -> "FElement":
        return cls(_RAT(0), _RAT(1), p)

    @classmethod
    def pi_power(cls, e: int, p: int) -> "FElement":
        """pi^e for any integer e (negative allowed)."""
        half, odd = divmod(e, 2)
        base = _RAT(p) ** half
        return cls(_RAT(0), base, p) if odd else cls(base, _RAT(0), p)

    def _check(self, other: "FElement"):
        if self.p != other.p:
            raise ValueError("mixed primes %d and %d" % (self.p, other.p))

    def __add__(self, other: "FElement") -> "FElement":
        self._check(other)
        return FElement(self.a + other.a, self.b + other.b, self.p)

    def __sub__(self, other: "FElement") -> "FElement":
        self._check(other)
        return FElement(self.a - other.a, self.b - other.b, self.p)

    def __neg__(self) -> "FElement":
        return FElement(-self.a, -self.b, self.p)

    def __mul__(self, other) -> "FElement":
        if isinstance(other, FElement):
            self._check(other)
            return FElement(self.a * other.a + self.p * self.b * other.b,
                            self.a * other.b + self.b * other.a, self.p)
        # any plain rational scalar (int, Fraction, mpq)
        return FElement(self.a * other, self.b * other, self.p)

    __rmul__ = __mul__

    def conj(self) -> "FElement":
        return FElement(self.a, -self.b, self.p)

    def norm(self) -> Fraction:
        return self.a * self.a - self.p * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "FElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in F")
        return FElement(self.a / n, -self.b / n, self.p)

    def __truediv__(self, other: "FElement") -> "FElement":
        return self * other.inverse()

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def val(self):
        """pi-adic valuation; +inf for zero."""
        if self.is_zero():
            return INF
        return min(2 * val_p(self.a, self.p), 2 * val_p(self.b, self.p) + 1)

    def is_integral(self) -> bool:
        return self.val() >= 0

    def f0_part(self) -> Fraction:
        return self.a

    def pi_part(self) -> Fraction:
        return self.b

    def __repr__(self):
        if self.b == 0:
            return "F(%s)" % self.a
        if self.a == 0:
            return "F(%s*pi)" % self.b
        return "F(%s + %s*pi)" % (self.a, self.b)


Matrix = List[List[FElement]]


def mat_zero(rows: int, cols: int, p: int) -> Matrix:
    return [[FElement.zero(p) for _ in range(cols)] for _ in range(rows)]


def mat_identity(n: int, p: int) -> Matrix:
    m = mat_zero(n, n, p)
    for i in range(n):
        m[i][i] = FElement.one(p)
    return m


def mat_mul(x: Matrix, y: Matrix) -> Matrix:
    p = x[0][0].p
    rows, inner, cols = len(x), len(y), len(y[0])
    out = mat_zero(rows, cols, p)
    for i in range(rows):
        for k in range(inner):
            xik = x[i][k]
            if xik.is_zero():
                continue
            for j in range(cols):
                out[i][j] = out[i][j] + xik * y[k][j]
    return out


def mat_conj_transpose(x: Matrix) -> Matrix:
    return [[x[j][i].conj() for j in range(len(x))] for i in range(len(x[0]))]


def mat_inverse(x: Matrix) -> Matrix:
    """Inverse over the field F by Gauss-Jordan elimination."""
    n = len(x)
    p = x[0][0].p
    a = [row[:] for row in x]
    inv = mat_identity(n, p)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not a[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        scale = a[col][col].inverse()
        a[col] = [e * scale for e in a[col]]
        inv[col] = [e * scale for e in inv[col]]
        for r in range(n):
            if r == col or a[r][col].is_zero():
                continue
            factor = a[r][col]
            a[r] = [e - factor * f for e, f in zip(a[r], a[col])]
            inv[r] = [e - factor * f for e, f in zip(inv[r], inv[col])]
    return inv


def mat_det(x: Matrix) -> FElement:
    """Determinant by fraction-free-ish Gaussian elimination over the field."""
    n = len(x)
    p = x[0][0].p
    if n == 0:
        return FElement.one(p)
    a = [row[:] for row in x]
    det = FElement.one(p)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not a[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            return FElement.zero(p)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det = det * a[col][col]
        inv = a[col][col].inverse()
        for r in range(col + 1, n):
            if a[r][col].is_zero():
                continue
            factor = a[r][col] * inv
            a[r] = [e - factor * f for e, f in zip(a[r], a[col])]
    return det


def gram_matrix(basis: Matrix, ambient_gram: Matrix) -> Matrix:
    """Gram of the columns of `basis` under the hermitian form of the ambient.

    The pairing is linear in the first slot and conjugate-linear in the
    second: (x, y) = sum_ij G[i][j] x_i conj(y_j), so the new Gram is
    B^T G conj(B).
    """
    p = ambient_gram[0][0].p
    n = len(ambient_gram)
    k = len(basis[0])
    conj_b = [[basis[i][j].conj() for j in range(k)] for i in range(n)]
    bt = [[basis[i][j] for i in range(n)] for j in range(k)]
    return mat_mul(mat_mul(bt, ambient_gram), conj_b)


def is_hermitian(g: Matrix) -> bool:
    n = len(g)
    for i in range(n):
        for j in range(n):
            if g[i][j] != g[j][i].conj():
                return False
    return True


def fundamental_invariants(g: Matrix) -> tuple:
    """Nondecreasing invariants (a_1, ..., a_n) of a nondegenerate hermitian Gram.

    The a_i are pi-valuations: a normal basis has rank-1 blocks u * pi^(a)
    with a even and hyperbolic pairs with off-diagonal entries pi^(a) with a
    odd (odd invariants therefore come in pairs).  The partial sums
    a_1 + ... + a_i equal the minimal pi-valuation over all i x i minors,
    which is basis independent, so no normal form is needed here.
    """
    n = len(g)
    import itertools as _it
    prev = 0
    out = []
    for size in range(1, n + 1):
        best = INF
        for rows in _it.combinations(range(n), size):
            for cols in _it.combinations(range(n), size):
                minor = [[g[r][c] for c in cols] for r in rows]
                v = mat_det(minor).val()
                if v < best:
                    best = v
        if best == INF:
            raise ValueError("degenerate lattice")
        out.append(int(best) - prev)
        prev = int(best)
    return tuple(out)
