"""Gaussian binomials, general linear group orders, and q-series identities.

The q parameter is any integer >= 2 in this module (prime powers included;
nothing here touches field arithmetic).  All values are exact integers or
polynomials over Fraction.

The identity checkers return True/False rather than asserting so the CLI
verify command can aggregate them; the test suite asserts on them.
"""

from __future__ import annotations

from fractions import Fraction

from .polynomials import ONE, Poly, prod


def q_binomial(n: int, i: int, q: int) -> int:
    """Gaussian binomial [n choose i]_q, the number of i-dim subspaces of F_q^n."""
    if i < 0 or i > n:
        return 0
    num, den = 1, 1
    for l in range(i):
        num *= q ** (n - l) - 1
        den *= q ** (i - l) - 1
    assert num % den == 0
    return num // den


def gl_order(n: int, q: int) -> int:
    """|GL_n(F_q)|; the empty group has order 1."""
    order = 1
    for i in range(n):
        order *= q ** n - q ** i
    return order


def triangular(i: int) -> int:
    """i*(i-1)/2, the exponent that tags i-th terms in all the alternating sums."""
    return i * (i - 1) // 2


# ---------------------------------------------------------------------------
# identity checks
# ---------------------------------------------------------------------------

def check_q_binomial_theorem(n: int, q: int) -> bool:
    """prod_{i<n} (1 - q^i X) = sum_i (-1)^i q^(i(i-1)/2) [n,i]_q X^i."""
    lhs = prod(Poly([1, -(q ** i)]) for i in range(n))
    rhs = Poly([(-1) ** i * q ** triangular(i) * q_binomial(n, i, q)
                for i in range(n + 1)])
    return lhs == rhs


def check_vanishing(n: int, q: int) -> bool:
    """sum_i (-1)^i q^(i(i-1)/2) [n,i]_q f(q^-i) = 0 for every f of degree < n.

    Checked on the monomial basis f = X^j, j = 0..n-1, which is equivalent.
    """
    for j in range(n):
        total = Fraction(0)
        for i in range(n + 1):
            total += ((-1) ** i * q ** triangular(i) * q_binomial(n, i, q)
                      * Fraction(1, q ** i) ** j)
        if total != 0:
            return False
    return True


def check_inverse_identity(n: int, q: int) -> bool:
    """sum_i (-1)^i q^(i(i-1)/2) [n,i]_q prod_{l<i} (1 + q^-l X) = (-X)^n."""
    lhs = Poly()
    for i in range(n + 1):
        factor = prod(Poly([1, Fraction(1, q ** l)]) for l in range(i))
        lhs = lhs + (-1) ** i * q ** triangular(i) * q_binomial(n, i, q) * factor
    rhs = Poly([0] * n + [(-1) ** n])
    return lhs == rhs


def check_pascal(n: int, q: int) -> bool:
    """[n+1,i]_q = [n,i]_q + q^(n+1-i) [n,i-1]_q for 0 <= i <= n+1."""
    for i in range(n + 2):
        if q_binomial(n + 1, i, q) != (q_binomial(n, i, q)
                                       + q ** (n + 1 - i) * q_binomial(n, i - 1, q)):
            return False
    return True


def check_binomial_expansion(n: int, t: int, i: int, q: int) -> bool:
    """[t,i]_q = sum_a (-1)^a q^(a(t+1-i) + a(a-1)/2) [n-t,a]_q [n-a,i-a]_q."""
    rhs = 0
    for a in range(n - t + 1):
        rhs += ((-1) ** a * q ** (a * (t + 1 - i) + triangular(a))
                * q_binomial(n - t, a, q) * q_binomial(n - a, i - a, q))
    return q_binomial(t, i, q) == rhs
