"""Quadratic spaces over F_q (q an odd prime) and their counting functions.

A space is (radical dimension j) + (nondegenerate part U_k^eps), written
0_j perp U_k^eps.  The sign label follows the discriminant convention
eps = legendre((-1)^(k(k-1)/2) * det), so U_2^+ is the split (hyperbolic)
plane for every odd q.

Main operations:
  isometry_count(U, V, q)   number of isometric embeddings U -> V, |O(U, V)|
  subspace_count(U, V, q)   number of subspaces of V isometric to U, m(U, V)
plus the closed forms used all over the density layer (alpha, beta,
delta_sign, isotropic subspace counts) and brute-force F_q enumerations the
tests use to certify the closed forms.

All counts are exact integers; intermediate products use Fraction so that
the q^(-l) factors in the published product formulas stay exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .qcombo import gl_order, q_binomial


def legendre(a: int, q: int) -> int:
    """Legendre symbol of a mod q for an odd prime q (0 on multiples of q)."""
    a %= q
    if a == 0:
        return 0
    r = pow(a, (q - 1) // 2, q)
    return 1 if r == 1 else -1


def smallest_nonresidue(q: int) -> int:
    for a in range(2, q):
        if legendre(a, q) == -1:
            return a
    raise ValueError("no quadratic nonresidue mod %d; is q an odd prime?" % q)


@dataclass(frozen=True)
class FqQuadSpace:
    """0_rad perp U_k^sign over F_q.  sign is +1 or -1; forced +1 when k = 0."""

    rad: int
    k: int
    sign: int

    def __post_init__(self):
        if self.rad < 0 or self.k < 0:
            raise ValueError("negative dimension")
        if self.k == 0 and self.sign != 1:
            raise ValueError("the zero-dimensional nondegenerate space has sign +1")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def dim(self) -> int:
        return self.rad + self.k

    @classmethod
    def nondegenerate(cls, k: int, sign: int) -> "FqQuadSpace":
        return cls(0, k, sign if k > 0 else 1)

    def __repr__(self):
        if self.k == 0:
            return "0_%d" % self.rad if self.rad else "U_0"
        core = "U_%d^%+d" % (self.k, self.sign)
        return core if self.rad == 0 else "0_%d + %s" % (self.rad, core)


def alpha(n: int, q: int) -> int:
    """alpha(n) = q^(floor(n/2) * floor((n-1)/2))."""
    return q ** ((n // 2) * ((n - 1) // 2))


def beta(n: int, eps: int) -> int:
    """beta_eps(n): (-1)^((n-1)/2) for n odd, eps*(-1)^(n/2) for n even, 1 for n=0."""
    if n == 0:
        return 1
    if n % 2:
        return (-1) ** ((n - 1) // 2)
    return eps * (-1) ** (n // 2)


def delta_sign(n: int, k: int, eps: int, eps2: int) -> int:
    """Sign of the orthogonal complement of a U_k^eps2 inside U_n^eps."""
    if k == 0:
        return eps
    if k % 2 and (n - k) % 2:
        return -eps * eps2
    return eps * eps2


def _embed_count_nondeg(j: int, k: int, eps1: int, m: int, eps: int, q: int) -> int:
    """|O(0_j perp U_k^eps1, U_m^eps)| by the four-parity product formula."""
    if j < 0 or k < 0:
        return 0
    if j == 0 and k == 0:
        return 1
    if m == 0:
        return 0
    if j + k > m:
        return 0
    if k == 0:
        eps1 = 1
    exp2 = (k + j) * (2 * m - k - j - 1)
    assert exp2 % 2 == 0
    value = Fraction(q) ** (exp2 // 2)
    lo = (m - k) // 2 + 1 - j
    hi = (m - 1) // 2
    if lo <= 0 <= hi:
        # the product formally includes a (1 - q^0) factor: the count is zero
        # (e.g. a totally isotropic subspace larger than the Witt index)
        return 0
    for l in range(lo, hi + 1):
        value *= 1 - Fraction(1, q ** (2 * l))
    if m % 2 == 1 and k % 2 == 1:
        value *= 1 + eps * eps1 * Fraction(1, q ** ((m - k) // 2 - j))
    elif m % 2 == 1 and k % 2 == 0:
        pass
    elif m % 2 == 0 and k % 2 == 1:
        value *= 1 - eps * Fraction(1, q ** (m // 2))
    else:
        value *= 1 - eps * Fraction(1, q ** (m // 2))
        value *= 1 + eps * eps1 * Fraction(1, q ** ((m - k) // 2 - j))
    assert value.denominator == 1
    return int(value)


def isometry_count(u: FqQuadSpace, v: FqQuadSpace, q: int) -> int:
    """|O(u, v)|: isometric embeddings of u into v (v may be degenerate)."""
    j, k, eps1 = u.rad, u.k, u.sign
    if v.rad == 0:
        return _embed_count_nondeg(j, k, eps1, v.k, v.sign, q)
    # v = 0_t perp U_(n-t)^eps: embeddings may drop part of u's radical into
    # v's radical; classified by the dimension l of that intersection.
    t, kv, eps = v.rad, v.k, v.sign
    total = 0
    for l in range(0, min(t, j) + 1):
        inner = _embed_count_nondeg(j - l, k, eps1, kv, eps, q)
        if inner == 0:
            continue
        weight = (q_binomial(t, l, q)
                  * q ** ((t - l) * (j + k - l) + l * k)
                  * gl_order(j, q) // gl_order(j - l, q))
        total += weight * inner
    return total


def subspace_count(u: FqQuadSpace, v: FqQuadSpace, q: int) -> int:
    """m(u, v): subspaces of v isometric to u."""
    j, k, eps1 = u.rad, u.k, u.sign
    if v.rad == 0:
        unit = FqQuadSpace.nondegenerate(k, eps1)
        denom = q ** (j * k) * isometry_count(unit, unit, q) * gl_order(j, q)
        num = isometry_count(u, v, q)
        assert num % denom == 0
        return num // denom
    t, kv, eps = v.rad, v.k, v.sign
    total = 0
    for l in range(0, min(t, j) + 1):
        total += (q_binomial(t, l, q)
                  * q ** ((t - l) * (j + k - l))
                  * subspace_count(FqQuadSpace(j - l, k, eps1),
                                   FqQuadSpace.nondegenerate(kv, eps), q))
    return total


def isotropic_subspace_count(j: int, n: int, eps: int, q: int) -> int:
    """m(0_j, U_n^eps) in closed form."""
    if n == 0:
        # the sign label carries no information on the empty space
        return 1 if j == 0 else 0
    if n % 2:
        d, e = (n - 1) // 2, 1
    else:
        d, e = n // 2 - (1 - eps) // 2, 1 - eps
    count = q_binomial(d, j, q)
    if count == 0:
        return 0
    for l in range(1, j + 1):
        count *= q ** (d + e - l) + 1
    return count


# ---------------------------------------------------------------------------
# gram matrices and brute-force enumeration (the oracle layer for this module)
# ---------------------------------------------------------------------------

def gram_of(space: FqQuadSpace, q: int):
    """A concrete symmetric Gram matrix over F_q realizing the space."""
    n = space.dim
    g = [[0] * n for _ in range(n)]
    k, eps = space.k, space.sign
    if k:
        want = eps * legendre((-1) ** (k * (k - 1) // 2), q)
        units = [1] * k
        if want == -1:
            units[-1] = smallest_nonresidue(q)
        for i in range(k):
            g[space.rad + i][space.rad + i] = units[i]
    return g


def classify_gram(g, q: int) -> FqQuadSpace:
    """Radical dimension and sign of a symmetric matrix over F_q."""
    n = len(g)
    a = [[x % q for x in row] for row in g]
    diag = []
    rows = list(range(n))
    while rows:
        pivot = None
        for i in rows:
            if a[i][i] % q:
                pivot = i
                break
        if pivot is None:
            pair = None
            for i in rows:
                for jj in rows:
                    if jj != i and a[i][jj] % q:
                        pair = (i, jj)
                        break
                if pair:
                    break
            if pair is None:
                diag.extend(0 for _ in rows)
                break
            i, jj = pair
            # char != 2: e_i + e_j has nonzero norm 2*a[i][j]
            for r in range(n):
                a[i][r] = (a[i][r] + a[jj][r]) % q
            for r in range(n):
                a[r][i] = (a[r][i] + a[r][jj]) % q
            pivot = i
        p = a[pivot][pivot] % q
        pinv = pow(p, q - 2, q)
        rows.remove(pivot)
        for i in rows:
            c = (a[i][pivot] * pinv) % q
            if c:
                for r in range(n):
                    a[i][r] = (a[i][r] - c * a[pivot][r]) % q
                for r in range(n):
                    a[r][i] = (a[r][i] - c * a[r][pivot]) % q
        diag.append(p)
    nonzero = [d for d in diag if d % q]
    k = len(nonzero)
    rad = n - k
    if k == 0:
        return FqQuadSpace(rad, 0, 1)
    det = 1
    for d in nonzero:
        det = (det * d) % q
    sign = legendre((-1) ** (k * (k - 1) // 2) * det, q)
    return FqQuadSpace(rad, k, sign)


def brute_isometry_count(u: FqQuadSpace, v: FqQuadSpace, q: int) -> int:
    """|O(u, v)| by exhaustive column-by-column search.  Small dims only.

    Columns are chosen one at a time with the partial Gram conditions checked
    immediately, which prunes the q^(du*dv) space down to something a plain
    python loop handles for dims <= 4.
    """
    du, dv = u.dim, v.dim
    gu, gv = gram_of(u, q), gram_of(v, q)
    if du == 0:
        return 1
    columns = list(itertools.product(range(q), repeat=dv))

    def pairing(x, y):
        return sum(gv[i][j] * x[i] * y[j] for i in range(dv) for j in range(dv)) % q

    def injective(cols):
        for coeffs in itertools.product(range(q), repeat=len(cols)):
            if not any(coeffs):
                continue
            if not any(sum(c * col[r] for c, col in zip(coeffs, cols)) % q
                       for r in range(dv)):
                return False
        return True

    count = 0
    stack = [()]
    while stack:
        cols = stack.pop()
        i = len(cols)
        if i == du:
            if injective(cols):
                count += 1
            continue
        for cand in columns:
            if pairing(cand, cand) != gu[i][i] % q:
                continue
            if any(pairing(cols[j], cand) != gu[j][i] % q for j in range(i)):
                continue
            stack.append(cols + (cand,))
    return count


def _echelon_subspaces(n: int, k: int, q: int):
    """All k-dim subspaces of F_q^n, one reduced echelon basis each."""
    for pivots in itertools.combinations(range(n), k):
        free_positions = []
        for r, p in enumerate(pivots):
            for c in range(p + 1, n):
                if c not in pivots:
                    free_positions.append((r, c))
        for values in itertools.product(range(q), repeat=len(free_positions)):
            basis = [[0] * n for _ in range(k)]
            for r, p in enumerate(pivots):
                basis[r][p] = 1
            for (r, c), val in zip(free_positions, values):
                basis[r][c] = val
            yield basis


def brute_subspace_count(u: FqQuadSpace, v: FqQuadSpace, q: int) -> int:
    """m(u, v) by enumerating subspaces of a concrete model of v."""
    dv = len(gram_of(v, q))
    gv = gram_of(v, q)
    count = 0
    for basis in _echelon_subspaces(dv, u.dim, q):
        sub = [[sum(gv[a][b] * x[a] * y[b] for a in range(dv) for b in range(dv)) % q
                for y in basis] for x in basis]
        if classify_gram(sub, q) == u:
            count += 1
    return count


# ---------------------------------------------------------------------------
# identity checks used by the verify command and the test suite
# ---------------------------------------------------------------------------

def check_alternating_isotropic_sum(n: int, eps: int, q: int) -> bool:
    """sum_j (-1)^j q^(j(j-1)/2) m(0_j, U_n^eps) = alpha(n) beta_eps(n)."""
    total = 0
    for j in range(n + 1):
        total += ((-1) ** j * q ** (j * (j - 1) // 2)
                  * subspace_count(FqQuadSpace(j, 0, 1),
                                   FqQuadSpace.nondegenerate(n, eps), q))
    return total == alpha(n, q) * beta(n, eps)


def check_binom_times_m_sum(n: int, r: int, eps: int, q: int) -> bool:
    """The weighted isotropic sum against [n-j, r-j]_q collapses onto m(U_r^tau, .)."""
    space = FqQuadSpace.nondegenerate(n, eps)
    lhs = 0
    for j in range(r + 1):
        lhs += ((-1) ** j * q ** (j * (j - 1) // 2) * q_binomial(n - j, r - j, q)
                * subspace_count(FqQuadSpace(j, 0, 1), space, q))
    rhs = 0
    for tau in (1, -1):
        if r == 0 and tau == -1:
            continue
        rhs += (subspace_count(FqQuadSpace.nondegenerate(r, tau), space, q)
                * alpha(r, q) * beta(r, tau))
    return lhs == rhs


def check_quotient_ratios(r: int, n: int, eps1: int, eps: int, q: int) -> bool:
    """The two closed-form ratios of m-counts (sign flip and rank bump)."""
    space = FqQuadSpace.nondegenerate(n, eps)

    def m(rank, sign):
        return Fraction(subspace_count(FqQuadSpace.nondegenerate(rank, sign), space, q))

    ok = True
    if 0 < r < n:
        lhs_den = m(r, eps1)
        if lhs_den:
            ratio = m(r, -eps1) / lhs_den
            if r % 2 == 1 and n % 2 == 0:
                expected = Fraction(1)
            elif r % 2 == 1 and n % 2 == 1:
                w = Fraction(1, q ** ((n - r) // 2))
                expected = (1 - eps * eps1 * w) / (1 + eps * eps1 * w)
            elif r % 2 == 0 and n % 2 == 1:
                w = Fraction(1, q ** (r // 2))
                expected = (1 - eps1 * w) / (1 + eps1 * w)
            else:
                w1 = Fraction(1, q ** ((n - r) // 2))
                w2 = Fraction(1, q ** (r // 2))
                expected = ((1 - eps * eps1 * w1) / (1 + eps * eps1 * w1)
                            * (1 - eps1 * w2) / (1 + eps1 * w2))
            ok = ok and ratio == expected
    if r + 1 <= n:
        lhs_den = m(r, eps1) if r > 0 or eps1 == 1 else None
        if r == 0 and eps1 == -1:
            return ok
        if lhs_den:
            ratio = m(r + 1, eps1) / lhs_den
            num = 1 - (-1) ** (n - r) * eps * eps1 * Fraction(1, q ** ((n - r) // 2))
            den = 1 - (-1) ** (r + 1) * eps1 * Fraction(1, q ** ((r + 1) // 2))
            expected = Fraction(q) ** (n - 2 * r - 1) * num / den
            ok = ok and ratio == expected
    return ok


def check_m_product_split(n: int, j: int, k: int, eps: int, eps2: int, q: int) -> bool:
    """m(0_j perp U_k^eps2, U_n^eps) = q^(-jk) m(0_j, U_(n-k)^delta) m(U_k^eps2, U_n^eps)."""
    if k == 0:
        eps2 = 1
    space = FqQuadSpace.nondegenerate(n, eps)
    lhs = subspace_count(FqQuadSpace(j, k, eps2 if k else 1), space, q)
    d = delta_sign(n, k, eps, eps2)
    rhs = (Fraction(1, q ** (j * k))
           * subspace_count(FqQuadSpace(j, 0, 1),
                            FqQuadSpace.nondegenerate(n - k, d), q)
           * subspace_count(FqQuadSpace.nondegenerate(k, eps2), space, q))
    return lhs == rhs


def check_flag_identity(n: int, r: int, i: int, eps: int, dprime: int, sigma: int,
                        q: int) -> bool:
    """Two ways of counting flags U_i^sigma inside U_r^dprime inside U_n^eps."""
    def m(rank, sign, amb_rank, amb_sign):
        return subspace_count(FqQuadSpace.nondegenerate(rank, sign),
                              FqQuadSpace.nondegenerate(amb_rank, amb_sign), q)

    if i == 0:
        sigma = 1
    if r == 0:
        dprime = 1
    if n == 0:
        eps = 1
    if r == i:
        # the middle space equals the inner one; the flag exists only when
        # the isometry classes agree
        contain = 1 if dprime == sigma else 0
    else:
        contain = m(r - i, delta_sign(r, i, dprime, sigma), n - i,
                    delta_sign(n, i, eps, sigma))
    lhs = m(i, sigma, n, eps) * contain
    rhs = m(r, dprime, n, eps) * m(i, sigma, r, dprime)
    return lhs == rhs


def check_isotropic_closed_form(j: int, n: int, eps: int, q: int) -> bool:
    return (subspace_count(FqQuadSpace(j, 0, 1),
                           FqQuadSpace.nondegenerate(n, eps), q)
            == isotropic_subspace_count(j, n, eps, q))


def check_grassmannian_completeness(n: int, j: int, eps: int, q: int) -> bool:
    """Every j-subspace is 0_l perp U_(j-l)^s for exactly one class: the class
    counts add up to the Gaussian binomial."""
    total = 0
    space = FqQuadSpace.nondegenerate(n, eps)
    for l in range(j + 1):
        k = j - l
        signs = (1,) if k == 0 else (1, -1)
        for s in signs:
            total += subspace_count(FqQuadSpace(l, k, s), space, q)
    return total == q_binomial(n, j, q)
