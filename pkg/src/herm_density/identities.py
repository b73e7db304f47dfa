"""The polynomial laboratory behind the derived-density closed forms.

Everything here lives over F_q quadratic-space combinatorics: the auxiliary
polynomials f, h, g, F in one variable X, the scalar factors I_eps, and a
battery of identity checkers that the test suite and the CLI verify command
drive over exhaustive small-parameter sweeps.

Sign slots: eps is the ambient sign that the target U_n^(-eps) carries
through every |O| factor; eps1 labels the nondegenerate part of the source
reduction; eps2 labels embedded nondegenerate subspaces.  All checkers
return booleans so failures can be aggregated with full inputs attached.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Tuple

from .density import pden_piece, pden_poly, pden_prime_raw
from .fqspaces import (FqQuadSpace, alpha, delta_sign, isometry_count,
                       isotropic_subspace_count, subspace_count)
from .lattices import Block, GenusSymbol, unimodular
from .polynomials import ONE, Poly, ZERO, prod
from .qcombo import q_binomial, triangular


def _qx2_prod(lo: int, hi: int, q: int) -> Poly:
    """prod of q^(2l) X^2 over l = lo..hi (empty product for lo > hi)."""
    return prod(Poly([0, 0, q ** (2 * l)]) for l in range(lo, hi + 1))


def _qx2_minus_one_prod(lo: int, hi: int, q: int) -> Poly:
    """prod of (q^(2l) X^2 - 1) over l = lo..hi."""
    return prod(Poly([-1, 0, q ** (2 * l)]) for l in range(lo, hi + 1))


def i_factor(n: int, eps: int, q: int) -> int:
    """I_eps(n): prod (q^(2l)-1) over l <= (n-1)/2 for odd n, with the extra
    factor (q^(n/2)+eps) replacing the top term for even n."""
    if n % 2:
        out = 1
        for l in range(1, (n - 1) // 2 + 1):
            out *= q ** (2 * l) - 1
        return out
    out = q ** (n // 2) + eps
    for l in range(1, n // 2):
        out *= q ** (2 * l) - 1
    return out


def i_factor_rel(nprime: int, n: int, eps: int, q: int) -> int:
    """I_eps(n', n), the rank-shifted variant for n' > n of the same parity."""
    if nprime <= n or (nprime - n) % 2:
        raise ValueError("need n' > n with n' - n even")
    lo = (nprime - n) // 2
    if n % 2:
        out = 1
        for l in range(lo, (nprime - 1) // 2 + 1):
            out *= q ** (2 * l) - 1
        return out
    out = q ** (nprime // 2) + eps
    for l in range(lo, nprime // 2):
        out *= q ** (2 * l) - 1
    return out


def f_poly(n: int, s: int, eps2: int, eps: int, q: int) -> Poly:
    """The degree-(n-1) polynomial f_eps2(n, s, X), by parity of n and s."""
    if not 0 <= s <= n - 1:
        raise ValueError("need 0 <= s <= n-1")
    if s == 0:
        eps2 = 1
    if n % 2 and s % 2:
        part1 = _qx2_prod((n + 1) // 2, (n + s - 2) // 2, q)
        mid = Poly([0, q ** ((n + s) // 2)]) * Poly([-eps * eps2, q ** ((n + s) // 2)])
        part3 = _qx2_minus_one_prod((n + s + 2) // 2, n - 1, q)
    elif n % 2:
        part1 = _qx2_prod((n + 1) // 2, (n - 1) // 2 + s // 2, q)
        mid = ONE
        part3 = _qx2_minus_one_prod((n + 1 + s) // 2, n - 1, q)
    elif s % 2:
        part1 = _qx2_prod(n // 2, (n + s - 3) // 2, q)
        mid = Poly([0, q ** (n // 2 + s - 1)])
        part3 = _qx2_minus_one_prod((n + s + 1) // 2, n - 1, q)
    else:
        part1 = _qx2_prod(n // 2, (n + s - 2) // 2, q)
        mid = Poly([-eps * eps2, q ** ((n + s) // 2)]) * (q ** (s // 2))
        part3 = _qx2_minus_one_prod((n + s + 2) // 2, n - 1, q)
    return part1 * mid * part3


def h_poly(n: int, s: int, eps1: int, eps: int, q: int) -> Poly:
    """The degree-(n-s-1) polynomial h_eps1(n, s, X)."""
    if not 0 <= s <= n - 1:
        raise ValueError("need 0 <= s <= n-1")
    if (n - s) % 2:
        return _qx2_minus_one_prod((n + s + 1) // 2, n - 1, q)
    head = Poly([-eps * eps1, q ** ((n + s) // 2)])
    return head * _qx2_minus_one_prod((n + s + 2) // 2, n - 1, q)


def g_sum_limit(n: int, t: int) -> int:
    """min(n - t, n - 1), the top index of the alternating g-sum."""
    return min(n - t, n - 1)


def g_poly(n: int, m: int, r: int, eps1: int, eps: int, q: int) -> Poly:
    """The triple class sum g_eps1(n, m, r, X) over embedded subspace types.

    g = sum_k (-1)^k q^(k(k-1)/2) sum_eps2 m(U_k^eps2, U_m^eps1)
        [sum_j (-1)^j q^(j(j-1)/2) binom(m-j-k, r-j-k)_q m(0_j, U_(m-k)^delta)]
        f_eps2(n, k, X).
    """
    if not 0 <= r <= m <= n:
        raise ValueError("need 0 <= r <= m <= n")
    if r > n - 1:
        raise ValueError("need r <= n-1")
    total = ZERO
    for k in range(r + 1):
        for eps2 in ((1,) if k == 0 else (1, -1)):
            outer = subspace_count(FqQuadSpace.nondegenerate(k, eps2),
                                   FqQuadSpace.nondegenerate(m, eps1), q)
            if outer == 0:
                continue
            dsign = delta_sign(m, k, eps1, eps2)
            inner = 0
            for j in range(r - k + 1):
                inner += ((-1) ** j * q ** triangular(j)
                          * q_binomial(m - j - k, r - j - k, q)
                          * isotropic_subspace_count(j, m - k, dsign, q))
            if inner:
                scalar = (-1) ** k * q ** triangular(k) * outer * inner
                total = total + f_poly(n, k, eps2, eps, q) * scalar
    return total


def F_poly(n: int, m: int, eps1: int, eps: int, q: int) -> Poly:
    """The closed form that the alternating g-sum collapses to.

    For t = n - m > 0 it is q^(n(n-1)/2) f_eps1(n, m, X); at t = 0 it is the
    geometric sum (-1)^(n-1) alpha(n) sum_l (-q^n X)^l, l < n.
    """
    t = n - m
    if t:
        return f_poly(n, m, eps1, eps, q) * (q ** triangular(n))
    lead = (-1) ** (n - 1) * alpha(n, q)
    return Poly([lead * (-q ** n) ** l for l in range(n)])


# ---------------------------------------------------------------------------
# identity checkers
# ---------------------------------------------------------------------------

def check_h_shift(n: int, s: int, eps1: int, eps: int, q: int) -> bool:
    """h(n, s, qX) = h(n+1, s+1, X)."""
    return h_poly(n, s, eps1, eps, q).scale_arg(q) == h_poly(n + 1, s + 1, eps1, eps, q)


def check_h_three_term(n: int, s: int, eps1: int, eps: int, q: int) -> bool:
    """q^floor((n+s+2)/2) X h(n+1, s+1, X)
       = h(n+1, s, X) + (-1)^(n+s+1) eps eps1 h(n+1, s+1, X)."""
    high = h_poly(n + 1, s + 1, eps1, eps, q)
    lhs = Poly([0, q ** ((n + s + 2) // 2)]) * high
    rhs = h_poly(n + 1, s, eps1, eps, q) + high * ((-1) ** (n + s + 1) * eps * eps1)
    return lhs == rhs


def check_g_base(n: int, m: int, eps1: int, eps: int, q: int) -> bool:
    """g(n, m, 0, X) = f_1(n, 0, X) for every m."""
    return g_poly(n, m, 0, eps1, eps, q) == f_poly(n, 0, 1, eps, q)


def check_g_diagonal(n: int, r: int, eps1: int, eps: int, q: int) -> bool:
    """g(n, r, r, X) = (-1)^(r(n-1)) eps1^n eps^r alpha(r) h_eps1(n, r, X)."""
    if not 0 < r <= n - 1:
        raise ValueError("need 0 < r <= n-1")
    scalar = (-1) ** (r * (n - 1)) * eps1 ** n * eps ** r * alpha(r, q)
    return g_poly(n, r, r, eps1, eps, q) == h_poly(n, r, eps1, eps, q) * scalar


def check_g_independence(n: int, m: int, r: int, eps1: int, eps: int, q: int) -> bool:
    """g(n, m, r, X) = sum_eps3 m(U_r^eps3, U_m^eps1) g(n, r, r, X with eps3)."""
    rhs = ZERO
    for eps3 in ((1,) if r == 0 else (1, -1)):
        count = subspace_count(FqQuadSpace.nondegenerate(r, eps3),
                               FqQuadSpace.nondegenerate(m, eps1), q)
        if count:
            rhs = rhs + g_poly(n, r, r, eps3, eps, q) * count
    return g_poly(n, m, r, eps1, eps, q) == rhs


def check_g_sum(n: int, t: int, eps1: int, eps: int, q: int) -> bool:
    """sum_r (-1)^r q^((n-r)(n-r-1)/2) q^(rt) g(n, n-t, r, X) = F(n, n-t, X)."""
    if t == n:
        eps1 = 1  # the reduced space is empty, its sign label is +1
    if t == 0 and eps1 != eps:
        return True  # no lattice realizes this profile
    total = ZERO
    for r in range(g_sum_limit(n, t) + 1):
        scalar = (-1) ** r * q ** (triangular(n - r) + r * t)
        total = total + g_poly(n, n - t, r, eps1, eps, q) * scalar
    return total == F_poly(n, n - t, eps1, eps, q)


def check_transfer_product_1(n: int, i: int, s: int, eps2: int, eps: int,
                             q: int) -> bool:
    """prod_(1<=l<=n-i-1) (1 - q^(2l)) |O(0_(i-s) perp U_s^eps2, U_n^(-eps))|
       = (-1)^(n-i-1) q^(i(i-1)/2) I_eps(n) f_eps2(n, s, q^(-i))."""
    lhs = Fraction(isometry_count(FqQuadSpace(i - s, s, eps2 if s else 1),
                                  FqQuadSpace.nondegenerate(n, -eps), q))
    for l in range(1, n - i):
        lhs *= 1 - q ** (2 * l)
    rhs = ((-1) ** (n - i - 1) * q ** triangular(i) * i_factor(n, eps, q)
           * f_poly(n, s, eps2, eps, q)(Fraction(1, q ** i)))
    return lhs == rhs


def check_transfer_product_2(n: int, nprime: int, i: int, s: int, eps2: int,
                             eps: int, q: int) -> bool:
    """The rank-shifted variant of the transfer product, target U_n'^(-eps)."""
    lhs = Fraction(isometry_count(FqQuadSpace(i - s, s, eps2 if s else 1),
                                  FqQuadSpace.nondegenerate(nprime, -eps), q))
    for l in range(n - i):
        lhs *= 1 - q ** (2 * l + nprime - n)
    arg = Fraction(q) ** ((nprime - n) // 2 - i)
    rhs = ((-1) ** (n - i) * q ** triangular(i) * i_factor_rel(nprime, n, eps, q)
           * f_poly(n, s, eps2, eps, q)(arg))
    return lhs == rhs


def reduction_profile(symbol: GenusSymbol, q: int) -> Tuple[int, int, int]:
    """(t, eps1, eps) of an integral lattice: type, reduction sign, chi."""
    red = symbol.reduction(q)
    return red.rad, red.sign, symbol.chi(q)


def symbol_with_profile(n: int, t: int, eps1: int, eps: int,
                        q: int) -> Optional[GenusSymbol]:
    """An integral rank-n lattice with type t, reduction sign eps1 and
    chi = eps, or None when the profile is not realizable (t = 0 forces
    eps = eps1, and a rank-0 reduction forces eps1 = +1)."""
    if t == 0:
        return unimodular(n, eps1) if eps == eps1 else None
    if t == n and eps1 != 1:
        return None
    base = [Block(0, n - t, eps1)] if n > t else []
    for sign in (1, -1):
        candidate = GenusSymbol(base + [Block(2, t, sign)])
        if candidate.chi(q) == eps:
            return candidate
    return None


def check_piece_prime_expansion(symbol: GenusSymbol, i: int, q: int) -> bool:
    """-2 d/dX at 1 of the i-th class-sum piece of Pden(I_n^(-eps), L, X)
    equals 2 I_eps(n) sum_r binom(n-r, i-r)_q (-1)^(i-r+n-1)
    q^((i-r)(i-r-1)/2) q^(rt) g_eps1(n, n-t, r, q^(-i))."""
    n = symbol.rank
    if i >= n:
        return True  # the expansion is only claimed for i <= n-1
    t, eps1, eps = reduction_profile(symbol, q)
    lhs = -2 * pden_piece(n, -eps, symbol, i, q).derivative()(1)
    rhs = Fraction(0)
    arg = Fraction(1, q ** i)
    for r in range(g_sum_limit(n, t) + 1):
        binom = q_binomial(n - r, i - r, q)
        if binom == 0:
            continue
        rhs += (binom * (-1) ** (i - r + n - 1) * q ** (triangular(i - r) + r * t)
                * g_poly(n, n - t, r, eps1, eps, q)(arg))
    return lhs == 2 * i_factor(n, eps, q) * rhs


def check_piece_shifted(symbol: GenusSymbol, nprime: int, i: int, q: int) -> bool:
    """The i-th piece against the rank-n' target, evaluated at X = q^(n'-n),
    against the same g-sum at argument q^((n'-n)/2 - i)."""
    n = symbol.rank
    t, eps1, eps = reduction_profile(symbol, q)
    if t == 0:
        return True  # the shifted expansion is only claimed for m < n
    lhs = pden_piece(nprime, -eps, symbol, i, q)(Fraction(q) ** (nprime - n))
    rhs = Fraction(0)
    arg = Fraction(q) ** ((nprime - n) // 2 - i)
    for r in range(g_sum_limit(n, t) + 1):
        binom = q_binomial(n - r, i - r, q)
        if binom == 0:
            continue
        rhs += (binom * (-1) ** (i - r + n) * q ** (triangular(i - r) + r * t)
                * g_poly(n, n - t, r, eps1, eps, q)(arg))
    return lhs == i_factor_rel(nprime, n, eps, q) * rhs


def check_pden_prime_eval(symbol: GenusSymbol, q: int) -> bool:
    """Pden'(I_n, L) = 2 I_eps(n) F_eps1(n, n-t, q^(-n))."""
    n = symbol.rank
    t, eps1, eps = reduction_profile(symbol, q)
    lhs = pden_prime_raw(symbol, q)
    rhs = 2 * i_factor(n, eps, q) * F_poly(n, n - t, eps1, eps, q)(Fraction(1, q ** n))
    return lhs == rhs


def check_F_eval(n: int, t: int, eps1: int, eps: int, q: int) -> bool:
    """F_eps1(n, n-t, q^(-n)) = alpha(n) x a pure type-t product:
    delta_odd(n) at t = 0, prod (1-q^(2l)) for odd t, and
    (1 - eps eps1 q^(t/2)) prod (1-q^(2l)) for even t > 0."""
    if t == n:
        eps1 = 1  # the reduced space is empty, its sign label is +1
    if t == 0 and eps1 != eps:
        return True  # no lattice realizes this profile
    lhs = F_poly(n, n - t, eps1, eps, q)(Fraction(1, q ** n))
    if t == 0:
        closed = Fraction(n % 2)
    elif t % 2:
        closed = Fraction(1)
        for l in range(1, (t - 1) // 2 + 1):
            closed *= 1 - q ** (2 * l)
    else:
        closed = Fraction(1 - eps * eps1 * q ** (t // 2))
        for l in range(1, t // 2):
            closed *= 1 - q ** (2 * l)
    return lhs == alpha(n, q) * closed


def check_piece_sum(symbol: GenusSymbol, q: int) -> bool:
    """The class-sum pieces add up to the full primitive density polynomial."""
    n = symbol.rank
    eps = symbol.chi(q)
    total = ZERO
    for i in range(n + 1):
        total = total + pden_piece(n, -eps, symbol, i, q)
    return total == pden_poly(n, -eps, symbol, q)
