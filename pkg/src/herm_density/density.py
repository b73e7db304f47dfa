"""Local density polynomials Den(I_m, L, X) and Pden(I_m, L, X), their
derivatives at X = 1, the correction coefficients c_t, and the modified
derived densities.

Conventions
-----------
* Targets are the unimodular lattices I_m^eps (eps a chi-style sign label);
  rank-0 targets are allowed and correspond to hyperbolic-space densities
  through Den(I_0, L, q^(-2k)).
* Den'(L) and Pden'(L) are -2 d/dX at X = 1 of the polynomial against the
  target I_n^(-eps) with eps = chi(L), normalized by the self-density
  unimodular_self_density(n, eps, q).
* A lattice whose genus symbol has an invariant <= -2 has identically zero
  density polynomials; invariants equal to -1 always sit in hyperbolic
  blocks and factor out of Pden as prod (1 - q^(2l) X) with an argument
  shift X -> q^(2j) X.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .fqspaces import (FqQuadSpace, isometry_count, isotropic_subspace_count,
                       subspace_count)
from .lattices import (Block, GenusSymbol, lambda_sharp, overlattices,
                       sublattices_in_pi_inverse, t_max)
from .polynomials import ONE, Poly, ZERO, prod
from .qcombo import q_binomial, triangular

SymbolLike = Union[GenusSymbol, str]


class InternalConsistencyError(RuntimeError):
    """Two independent routes to the same quantity disagreed."""

    def __init__(self, message: str, dump: Dict[str, object]):
        details = "; ".join("%s=%r" % kv for kv in sorted(dump.items()))
        super().__init__("%s [%s]" % (message, details))
        self.dump = dump


def _as_symbol(symbol: SymbolLike) -> GenusSymbol:
    if isinstance(symbol, str):
        return GenusSymbol.parse(symbol)
    return symbol


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def delta_odd(n: int) -> int:
    """1 for odd rank, 0 for even rank."""
    return n % 2


def unimodular_self_density(n: int, eps_formula: int, q: int) -> Fraction:
    """Den(I_n, I_n) where I_n means I_n^(-eps_formula).

    Closed form: 2 q^(n(n-1)/2) (1 + eps q^(-n/2)) prod_(s<n/2) (1 - q^(-2s))
    for even n, and 2 q^(n(n-1)/2) prod_(s<=(n-1)/2) (1 - q^(-2s)) for odd n.
    """
    if n <= 0:
        raise ValueError("rank must be positive")
    value = 2 * Fraction(q) ** triangular(n)
    if n % 2 == 0:
        value *= 1 + Fraction(eps_formula, q ** (n // 2))
        half = n // 2
    else:
        half = (n - 1) // 2 + 1
    for s in range(1, half):
        value *= 1 - Fraction(1, q ** (2 * s))
    return value


# ---------------------------------------------------------------------------
# primitive density polynomials
# ---------------------------------------------------------------------------

_PDEN_CACHE: Dict[Tuple[str, int, int, int], Poly] = {}


def pden_poly(m: Optional[int], eps_target: Optional[int],
              symbol: SymbolLike, q: int) -> Poly:
    """Pden(I_m^eps_target, L, X).

    Defaults: m = rank(L), eps_target = -chi(L).
    """
    symbol = _as_symbol(symbol)
    n = symbol.rank
    if m is None:
        m = n
    if eps_target is None:
        eps_target = -symbol.chi(q)
    key = (str(symbol), m, eps_target, q)
    hit = _PDEN_CACHE.get(key)
    if hit is not None:
        return hit
    invs = symbol.invariants()
    if invs and min(invs) <= -2:
        result = ZERO
    elif invs and min(invs) == -1:
        hyp = [b for b in symbol.blocks if b.scale == -1][0]
        j = hyp.planes
        rest = symbol.sub_symbol(lambda b: b.scale >= 0)
        core = pden_poly(m, eps_target, rest, q) if rest is not None else ONE
        prefactor = prod(Poly.one_minus_cx(q ** (2 * ell)) for ell in range(j))
        result = prefactor * core.scale_arg(q ** (2 * j))
    else:
        result = _pden_integral(m, eps_target, symbol, q)
    _PDEN_CACHE[key] = result
    return result


def _class_sum(i: int, reduced: FqQuadSpace, target: FqQuadSpace, q: int) -> int:
    """Sum over isometry classes of i-dimensional subspaces V of the reduced
    lattice of m(V, reduced) * |O(V, target)|."""
    total = 0
    for jdim in range(i + 1):
        k = i - jdim
        for e2 in ((1,) if k == 0 else (1, -1)):
            sub = FqQuadSpace(jdim, k, e2)
            inside = subspace_count(sub, reduced, q)
            if inside == 0:
                continue
            total += inside * isometry_count(sub, target, q)
    return total


def _pden_integral(m: int, eps_target: int, symbol: GenusSymbol, q: int) -> Poly:
    n = symbol.rank
    reduced = symbol.reduction(q)
    target = FqQuadSpace.nondegenerate(m, eps_target)
    result = ZERO
    for i in range(n + 1):
        s_i = _class_sum(i, reduced, target, q)
        if s_i == 0:
            continue
        xpow = Poly([Fraction(0)] * i + [Fraction(q) ** ((n - m) * i) * s_i])
        prefactor = prod(Poly.one_minus_cx(q ** (2 * ell)) for ell in range(n - i))
        result = result + xpow * prefactor
    return result


def pden_piece(m: Optional[int], eps_target: Optional[int],
               symbol: SymbolLike, i: int, q: int) -> Poly:
    """The class-sum summand of pden_poly with i-dimensional subspaces.

    Integral lattices only; the pieces sum to pden_poly.
    """
    symbol = _as_symbol(symbol)
    if not symbol.is_integral():
        raise ValueError("pieces are defined for integral lattices")
    n = symbol.rank
    if not 0 <= i <= n:
        raise ValueError("piece index out of range")
    if m is None:
        m = n
    if eps_target is None:
        eps_target = -symbol.chi(q)
    s_i = _class_sum(i, symbol.reduction(q), FqQuadSpace.nondegenerate(m, eps_target), q)
    if s_i == 0:
        return ZERO
    xpow = Poly([Fraction(0)] * i + [Fraction(q) ** ((n - m) * i) * s_i])
    return xpow * prod(Poly.one_minus_cx(q ** (2 * ell)) for ell in range(n - i))


# ---------------------------------------------------------------------------
# full density polynomials (overlattice sums)
# ---------------------------------------------------------------------------

_OVER_CACHE: Dict[Tuple[str, int], List[Tuple[int, GenusSymbol]]] = {}
_DEN_CACHE: Dict[Tuple[str, int, int, int], Poly] = {}


def _overlattice_list(symbol: GenusSymbol, q: int) -> List[Tuple[int, GenusSymbol]]:
    """Overlattices with min pairing valuation >= -1, as (index, genus)."""
    if not _is_prime(q):
        raise ValueError("overlattice enumeration needs a prime residue size")
    key = (str(symbol), q)
    hit = _OVER_CACHE.get(key)
    if hit is None:
        hit = overlattices(symbol, q, -1)
        _OVER_CACHE[key] = hit
    return hit


def _vertex_co_type(symbol: GenusSymbol) -> Optional[Tuple[int, int, int]]:
    """(i, r, eps_red) when L = H^i perp I_r^eps (invariants in {-1, 0})."""
    i = r = 0
    eps_red = 1
    for b in symbol.blocks:
        if b.scale == -1:
            i = b.planes
        elif b.scale == 0:
            r, eps_red = b.rank, b.sign
        else:
            return None
    return i, r, eps_red


def _vertex_chain_symbol(n: int, planes: int, r: int, eps_red: int) -> GenusSymbol:
    blocks = []
    if planes:
        blocks.append(Block(-1, 2 * planes, None))
    if r:
        blocks.append(Block(0, r, eps_red))
    return GenusSymbol(blocks)


def den_poly(m: Optional[int], eps_target: Optional[int],
             symbol: SymbolLike, q: int) -> Poly:
    """Den(I_m^eps_target, L, X) = sum over overlattices L' with invariants
    >= -1 of (q^(n-m) X)^(index length) Pden(I_m^eps_target, L', X).

    Lattices of the shape H^i perp I_r use the closed overlattice structure
    (overlattices correspond to totally isotropic subspaces of the rank-r
    reduction); everything else enumerates overlattices directly.  Both
    routes are cross-checked in the test suite.
    """
    symbol = _as_symbol(symbol)
    n = symbol.rank
    if m is None:
        m = n
    if eps_target is None:
        eps_target = -symbol.chi(q)
    key = (str(symbol), m, eps_target, q)
    hit = _DEN_CACHE.get(key)
    if hit is not None:
        return hit
    invs = symbol.invariants()
    if invs and min(invs) <= -2:
        result = ZERO
    else:
        fast = _vertex_co_type(symbol)
        step = Fraction(q) ** (n - m)
        if fast is not None:
            i, r, eps_red = fast
            result = ZERO
            for s in range(r // 2 + 1):
                count = isotropic_subspace_count(s, r, eps_red, q)
                if count == 0:
                    continue
                bigger = _vertex_chain_symbol(n, i + s, r - 2 * s, eps_red)
                xpow = Poly([Fraction(0)] * s + [step ** s * count])
                result = result + xpow * pden_poly(m, eps_target, bigger, q)
        else:
            result = ZERO
            for ell, gsym in _overlattice_list(symbol, q):
                piece = pden_poly(m, eps_target, gsym, q)
                if piece.is_zero():
                    continue
                xpow = Poly([Fraction(0)] * ell + [step ** ell])
                result = result + xpow * piece
    _DEN_CACHE[key] = result
    return result


# ---------------------------------------------------------------------------
# derivatives at X = 1 and their normalizations
# ---------------------------------------------------------------------------

def pden_prime_raw(symbol: SymbolLike, q: int) -> Fraction:
    """-2 d/dX Pden(I_n^(-chi(L)), L, X) at X = 1."""
    symbol = _as_symbol(symbol)
    eps = symbol.chi(q)
    return -2 * pden_poly(symbol.rank, -eps, symbol, q).derivative()(1)


def pden_prime(symbol: SymbolLike, q: int) -> Fraction:
    symbol = _as_symbol(symbol)
    return pden_prime_raw(symbol, q) / unimodular_self_density(
        symbol.rank, symbol.chi(q), q)


def den_prime_raw(symbol: SymbolLike, q: int) -> Fraction:
    """-2 d/dX Den(I_n^(-chi(L)), L, X) at X = 1."""
    symbol = _as_symbol(symbol)
    eps = symbol.chi(q)
    return -2 * den_poly(symbol.rank, -eps, symbol, q).derivative()(1)


def den_prime(symbol: SymbolLike, q: int) -> Fraction:
    symbol = _as_symbol(symbol)
    return den_prime_raw(symbol, q) / unimodular_self_density(
        symbol.rank, symbol.chi(q), q)


# ---------------------------------------------------------------------------
# correction coefficients and modified derived densities
# ---------------------------------------------------------------------------

_C_CACHE: Dict[Tuple[int, int, int], Dict[int, Fraction]] = {}


def coefficients_c(n: int, eps: int, q: int) -> Dict[int, Fraction]:
    """c_t = -Pden'(Lambda_t-sharp) for even t in (0, t_max].

    Also verifies the defining linear system: with these coefficients,
    dDen(Lambda_(2i)-sharp) = Den'(...) + sum_j c_(2j) n(Lambda_(2j)-sharp,
    Lambda_(2i)-sharp) vanishes for every i >= 1.
    """
    if n < 2:
        return {}
    key = (n, eps, q)
    hit = _C_CACHE.get(key)
    if hit is not None:
        return hit
    ts = list(range(2, t_max(n, eps) + 1, 2))
    coeffs = {t: -pden_prime(lambda_sharp(n, t, eps), q) for t in ts}
    for t in ts:
        lam = lambda_sharp(n, t, eps)
        lhs = den_prime(lam, q)
        for t2 in ts:
            if t2 < t:
                continue
            count = isotropic_subspace_count((t2 - t) // 2, n - t, eps, q)
            lhs += coeffs[t2] * count
        if lhs != 0:
            raise InternalConsistencyError(
                "correction coefficients fail their defining system",
                {"n": n, "eps": eps, "q": q, "t": t, "residual": lhs})
    _C_CACHE[key] = coeffs
    return coeffs


def pdden_closed(symbol: SymbolLike, q: int) -> Fraction:
    """Closed form of the modified primitive derived density.

    0 for non-integral L; delta_odd(n) for unimodular L; otherwise a product
    depending only on the type t and on chi of the positive-scale part.
    """
    symbol = _as_symbol(symbol)
    if not symbol.is_integral():
        return Fraction(0)
    t = symbol.type_t
    if t == 0:
        return Fraction(delta_odd(symbol.rank))
    value = Fraction(1)
    if t % 2:
        for ell in range(1, (t - 1) // 2 + 1):
            value *= 1 - q ** (2 * ell)
    else:
        positive = symbol.sub_symbol(lambda b: b.scale >= 1)
        value = Fraction(1 - positive.chi(q) * q ** (t // 2))
        for ell in range(1, t // 2):
            value *= 1 - q ** (2 * ell)
    return value


def pdden_machine(symbol: SymbolLike, q: int) -> Fraction:
    """Pden'(L) plus the Lambda-sharp correction, straight from the engine."""
    symbol = _as_symbol(symbol)
    n = symbol.rank
    value = pden_prime(symbol, q)
    if n >= 2:
        eps = symbol.chi(q)
        for t in range(2, t_max(n, eps) + 1, 2):
            if symbol == lambda_sharp(n, t, eps):
                value += coefficients_c(n, eps, q)[t]
    return value


def den_t_counts(symbol: SymbolLike, q: int) -> Dict[int, int]:
    """t -> n(Lambda_t-sharp, L), the overlattices of L isomorphic to the
    dual type-t vertex lattice (Den_t(L) by the vanishing collapse)."""
    symbol = _as_symbol(symbol)
    n = symbol.rank
    eps = symbol.chi(q)
    ts = list(range(2, t_max(n, eps) + 1, 2))
    if not ts:
        return {}
    fast = _vertex_co_type(symbol)
    counts = {}
    if fast is not None:
        i, r, eps_red = fast
        for t in ts:
            j = t // 2
            counts[t] = (isotropic_subspace_count(j - i, r, eps_red, q)
                         if j >= i else 0)
    else:
        overs = _overlattice_list(symbol, q)
        for t in ts:
            lam = lambda_sharp(n, t, eps)
            counts[t] = sum(1 for _, gsym in overs if gsym == lam)
    return counts


def dden(symbol: SymbolLike, q: int) -> int:
    """The modified derived density, computed two independent ways.

    (a) Den'(L) + sum_t c_t n(Lambda_t-sharp, L).
    (b) sum of pdden_closed over all integral overlattices of L.
    The two values must agree and be an integer.
    """
    symbol = _as_symbol(symbol)
    n = symbol.rank
    route_b = Fraction(0)
    for _, gsym in overlattices(symbol, q, 0):
        route_b += pdden_closed(gsym, q)
    route_a = den_prime(symbol, q)
    counts = den_t_counts(symbol, q)
    if counts:
        coeffs = coefficients_c(n, symbol.chi(q), q)
        for t, cnt in counts.items():
            route_a += coeffs[t] * cnt
    if route_a != route_b or route_b.denominator != 1:
        raise InternalConsistencyError(
            "derived density routes disagree",
            {"symbol": str(symbol), "q": q, "route_direct": route_a,
             "route_overlattice": route_b, "den_prime": den_prime(symbol, q),
             "counts": counts})
    return int(route_b)


# ---------------------------------------------------------------------------
# inversion: primitive densities from full densities
# ---------------------------------------------------------------------------

def pden_from_den_roundtrip(symbol: SymbolLike, q: int,
                            m: Optional[int] = None,
                            eps_target: Optional[int] = None,
                            verbose: bool = True) -> bool:
    """Recompute Pden(I_m, L, X) as
    sum_i (-1)^i q^(i(i-1)/2 + i(n-m)) X^i sum_(L <= L' <= pi^(-1)L, index i)
    Den(I_m, L', X) and compare with pden_poly."""
    symbol = _as_symbol(symbol)
    if not symbol.is_integral():
        raise ValueError("roundtrip is defined for integral lattices")
    n = symbol.rank
    if n > 4:
        raise ValueError("roundtrip supported for rank <= 4")
    if m is None:
        m = n
    if eps_target is None:
        eps_target = -symbol.chi(q)
    recon = ZERO
    for dim, gsym in sublattices_in_pi_inverse(symbol, q):
        coeff = Fraction(-1) ** dim * Fraction(q) ** (triangular(dim) + dim * (n - m))
        xpow = Poly([Fraction(0)] * dim + [coeff])
        recon = recon + xpow * den_poly(m, eps_target, gsym, q)
    direct = pden_poly(m, eps_target, symbol, q)
    if recon == direct:
        return True
    if verbose:
        print("pden_from_den_roundtrip mismatch for %s (q=%d, m=%d, eps=%+d):"
              "\n  inverted: %r\n  direct:   %r"
              % (symbol, q, m, eps_target, recon, direct))
    return False


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _rat(x: Fraction) -> str:
    f = Fraction(x)
    return "%d/%d" % (f.numerator, f.denominator)


def density_report(symbol: SymbolLike, q: int) -> Dict[str, object]:
    """All densities of one lattice, JSON-ready (rationals as "num/den")."""
    symbol = _as_symbol(symbol)
    n = symbol.rank
    eps = symbol.chi(q)
    closed = pdden_closed(symbol, q)
    machine = pdden_machine(symbol, q)
    if closed != machine:
        raise InternalConsistencyError(
            "modified primitive derived density routes disagree",
            {"symbol": str(symbol), "q": q, "closed": closed,
             "machine": machine})
    return {
        "genus": str(symbol),
        "q": q,
        "rank": n,
        "chi": eps,
        "den_poly": [_rat(c) for c in den_poly(n, -eps, symbol, q).coeffs],
        "den_prime": _rat(den_prime_raw(symbol, q)),
        "den_prime_norm": _rat(den_prime(symbol, q)),
        "den_t": {str(t): c for t, c in sorted(den_t_counts(symbol, q).items())},
        "c": {str(t): _rat(c)
              for t, c in sorted(coefficients_c(n, eps, q).items())},
        "dden": dden(symbol, q),
        "pdden": _rat(machine),
    }
