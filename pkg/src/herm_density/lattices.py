"""Hermitian O_F-lattices: genus symbols, duals, reductions, overlattices.

A lattice is described up to isometry by its genus symbol: a list of Jordan
blocks with strictly increasing scales, where the scale is the pi-valuation
of the block's normal-form entries.  Even scales carry diagonalizable blocks
(scale, rank, sign); odd scales occur only through hyperbolic planes
[[0, pi^a], [(-pi)^a, 0]] and carry (scale, planes).

Sign convention for even-scale blocks: the stored sign is the chi-style
label of the block viewed as a unimodular-scaled lattice,
    sign = legendre((-1)^(r(r-1)/2) * unit part of det),
so the symbol "0^n+" is the rank-n self-dual lattice whose mod-pi reduction
is the plus-type quadratic space U_n^+, for every odd q.  (A raw-determinant
convention would flip labels exactly when -1 is a nonresidue; this one keeps
lattice labels and reduced-space labels aligned.)

Text grammar, comma separated blocks:
    even scale:  SCALE "^" RANK SIGN      e.g.  0^3+   2^1-
    odd scale:   SCALE "H^" PLANES        e.g.  -1H^1  1H^2
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .felements import (FElement, INF, Matrix, _RAT, fundamental_invariants,
                        gram_matrix, mat_identity, mat_inverse, is_hermitian,
                        unit_part_mod_p, val_p)
from .fqspaces import FqQuadSpace, legendre, smallest_nonresidue


@dataclass(frozen=True)
class Block:
    scale: int
    rank: int
    sign: Optional[int]  # None exactly when scale is odd (hyperbolic block)

    def __post_init__(self):
        if self.rank <= 0:
            raise ValueError("empty block")
        if self.scale % 2:
            if self.sign is not None:
                raise ValueError("odd-scale blocks carry no sign")
            if self.rank % 2:
                raise ValueError("odd-scale blocks have even rank")
        else:
            if self.sign not in (1, -1):
                raise ValueError("even-scale blocks need sign +1 or -1")

    @property
    def planes(self) -> int:
        assert self.scale % 2
        return self.rank // 2


_BLOCK_RE = re.compile(r"^(-?\d+)(H?)\^(\d+)([+-]?)$")


class GenusSymbol:
    """Canonical genus symbol: blocks sorted by strictly increasing scale."""

    __slots__ = ("blocks",)

    def __init__(self, blocks: Sequence[Block]):
        merged: Dict[int, Block] = {}
        for b in blocks:
            if b.scale in merged:
                prev = merged[b.scale]
                if b.scale % 2:
                    merged[b.scale] = Block(b.scale, prev.rank + b.rank, None)
                else:
                    # merging even-scale signs needs q (a legendre(-1) factor);
                    # use merge_symbols for orthogonal sums
                    raise ValueError("colliding even scales; use merge_symbols")
            else:
                merged[b.scale] = b
        self.blocks = tuple(sorted(merged.values(), key=lambda b: b.scale))

    def __eq__(self, other):
        return isinstance(other, GenusSymbol) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return "GenusSymbol(%s)" % str(self)

    def __str__(self):
        parts = []
        for b in self.blocks:
            if b.scale % 2:
                parts.append("%dH^%d" % (b.scale, b.planes))
            else:
                parts.append("%d^%d%s" % (b.scale, b.rank,
                                          "+" if b.sign > 0 else "-"))
        return ",".join(parts)

    @classmethod
    def parse(cls, text: str) -> "GenusSymbol":
        blocks = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            m = _BLOCK_RE.match(chunk)
            if not m:
                raise ValueError("bad genus block %r" % chunk)
            scale, hyp, count, sign = m.groups()
            scale, count = int(scale), int(count)
            if hyp:
                if sign:
                    raise ValueError("hyperbolic block %r carries no sign" % chunk)
                if scale % 2 == 0:
                    raise ValueError("hyperbolic block %r needs odd scale" % chunk)
                blocks.append(Block(scale, 2 * count, None))
            else:
                if not sign:
                    raise ValueError("diagonal block %r needs a sign" % chunk)
                if scale % 2:
                    raise ValueError("diagonal block %r needs even scale" % chunk)
                blocks.append(Block(scale, count, 1 if sign == "+" else -1))
        return cls(blocks)

    # -- basic invariants ------------------------------------------------

    @property
    def rank(self) -> int:
        return sum(b.rank for b in self.blocks)

    def invariants(self) -> Tuple[int, ...]:
        out: List[int] = []
        for b in self.blocks:
            out.extend([b.scale] * b.rank)
        return tuple(out)

    @property
    def val(self) -> int:
        return sum(b.scale * b.rank for b in self.blocks)

    @property
    def type_t(self) -> int:
        return sum(b.rank for b in self.blocks if b.scale > 0)

    def is_integral(self) -> bool:
        return all(b.scale >= 0 for b in self.blocks)

    def is_full_type(self) -> bool:
        return all(b.scale >= 1 for b in self.blocks)

    def is_vertex(self) -> bool:
        return all(b.scale in (0, 1) for b in self.blocks)

    def min_scale(self) -> int:
        return min(b.scale for b in self.blocks)

    def dual(self) -> "GenusSymbol":
        return GenusSymbol([Block(-b.scale, b.rank, b.sign) for b in self.blocks])

    def scaled(self, e: int) -> "GenusSymbol":
        """Symbol of pi^e L (signs of even blocks are unit classes, unchanged
        when e is even; odd e turns diagonal blocks into odd-scale ones and is
        not needed anywhere, so it is rejected)."""
        if e % 2:
            raise ValueError("only even rescalings preserve the block kinds")
        return GenusSymbol([Block(b.scale + e, b.rank, b.sign) for b in self.blocks])

    def orthogonal_sum(self, other: "GenusSymbol", q: int) -> "GenusSymbol":
        return merge_symbols(self, other, q)

    def sub_symbol(self, keep) -> Optional["GenusSymbol"]:
        kept = [b for b in self.blocks if keep(b)]
        return GenusSymbol(kept) if kept else None

    # -- chi and reduction -------------------------------------------------

    def chi(self, q: int) -> int:
        """legendre class of (-1)^(n(n-1)/2) det(L)."""
        n = self.rank
        total_val = self.val
        assert total_val % 2 == 0
        exponent = (n * (n - 1) // 2) + total_val // 2
        unit_sign = 1
        for b in self.blocks:
            if b.scale % 2 == 0:
                unit_sign *= b.sign
                exponent += b.rank * (b.rank - 1) // 2
        return unit_sign * legendre(-1, q) ** (exponent % 2)

    def reduction(self, q: int) -> FqQuadSpace:
        """The quadratic space L/pi L over F_q (integral lattices only)."""
        if not self.is_integral():
            raise ValueError("reduction needs an integral lattice")
        rad = sum(b.rank for b in self.blocks if b.scale >= 1)
        zero = [b for b in self.blocks if b.scale == 0]
        if zero:
            return FqQuadSpace(rad, zero[0].rank, zero[0].sign)
        return FqQuadSpace(rad, 0, 1)

    # -- concrete grams ---------------------------------------------------

    def gram(self, q: int) -> Matrix:
        n = self.rank
        g = [[FElement.zero(q) for _ in range(n)] for _ in range(n)]
        pos = 0
        for b in self.blocks:
            if b.scale % 2 == 0:
                want = b.sign * legendre(-1, q) ** ((b.rank * (b.rank - 1) // 2) % 2)
                units = [1] * b.rank
                if want == -1:
                    units[-1] = smallest_nonresidue(q)
                scale = FElement.pi_power(b.scale, q)
                for u in units:
                    g[pos][pos] = scale * u
                    pos += 1
            else:
                for _ in range(b.planes):
                    top = FElement.pi_power(b.scale, q)
                    g[pos][pos + 1] = top
                    g[pos + 1][pos] = -top  # (-pi)^a = -pi^a for odd a
                    pos += 2
        return g


def dual_sharp(symbol: GenusSymbol) -> GenusSymbol:
    """Genus symbol of the dual lattice: scales negate, signs persist."""
    return symbol.dual()


def reduction_mod_pi(symbol: GenusSymbol, q: int) -> FqQuadSpace:
    return symbol.reduction(q)


def lattice_stats(symbol: GenusSymbol) -> Dict[str, object]:
    """Rank, type, valuation, integrality, and vertex status in one shot."""
    invs = symbol.invariants()
    is_vertex = symbol.is_vertex()
    if is_vertex:
        assert symbol.type_t % 2 == 0
    return {
        "rank": symbol.rank,
        "invariants": list(invs),
        "type": symbol.type_t,
        "val": symbol.val,
        "is_integral": symbol.is_integral(),
        "is_vertex": is_vertex,
        "is_full_type": symbol.is_full_type(),
    }


def merge_symbols(a: GenusSymbol, b: GenusSymbol, q: int) -> GenusSymbol:
    """Orthogonal sum with the q-aware sign merge for colliding even scales."""
    blocks: Dict[int, Block] = {}
    for blk in list(a.blocks) + list(b.blocks):
        if blk.scale not in blocks:
            blocks[blk.scale] = blk
            continue
        prev = blocks[blk.scale]
        if blk.scale % 2:
            blocks[blk.scale] = Block(blk.scale, prev.rank + blk.rank, None)
        else:
            sign = (prev.sign * blk.sign
                    * legendre(-1, q) ** ((prev.rank * blk.rank) % 2))
            blocks[blk.scale] = Block(blk.scale, prev.rank + blk.rank, sign)
    return GenusSymbol(list(blocks.values()))


def unimodular(n: int, sign: int) -> GenusSymbol:
    return GenusSymbol([Block(0, n, sign)])


def hyperbolic_planes(scale: int, planes: int) -> GenusSymbol:
    return GenusSymbol([Block(scale, 2 * planes, None)])


def t_max(n: int, eps: int) -> int:
    """Largest even t for which the dual vertex lattice of type t exists."""
    if n % 2:
        return n - 1
    return n if eps == 1 else n - 2


def lambda_sharp(n: int, t: int, eps: int) -> GenusSymbol:
    """Dual of the type-t vertex lattice: H^(t/2) perp I_(n-t)^eps."""
    if t % 2 or t < 0 or t > t_max(n, eps):
        raise ValueError("no type-%d vertex lattice at rank %d, sign %+d"
                         % (t, n, eps))
    blocks = []
    if t:
        blocks.append(Block(-1, t, None))
    if n - t:
        blocks.append(Block(0, n - t, eps))
    return GenusSymbol(blocks)


# ---------------------------------------------------------------------------
# genus extraction from an explicit Gram matrix (Jordan splitting)
# ---------------------------------------------------------------------------

def genus_from_gram(g: Matrix, q: int) -> GenusSymbol:
    """Genus symbol of a nondegenerate hermitian Gram matrix."""
    if not is_hermitian(g):
        raise ValueError("matrix is not hermitian")
    n = len(g)
    a = [row[:] for row in g]
    live = list(range(n))
    diag_units: Dict[int, List[int]] = {}
    plane_counts: Dict[int, int] = {}

    def schur_eliminate(pivots: List[int]):
        """Make everything outside `pivots` orthogonal to their span."""
        others = [k for k in live if k not in pivots]
        if not others:
            return
        block = [[a[r][c] for c in pivots] for r in pivots]
        binv = mat_inverse(block)
        npv = len(pivots)
        for k in others:
            rhs = [a[k][c] for c in pivots]
            coeff = [sum((rhs[s] * binv[s][t] for s in range(npv)),
                         FElement.zero(q)) for t in range(npv)]
            # e_k <- e_k - sum coeff_t e_(pivot_t); the second-slot correction
            # vanishes because the new vectors are orthogonal to the pivots
            for l in others:
                delta = FElement.zero(q)
                for t, pv in enumerate(pivots):
                    delta = delta + coeff[t] * a[pv][l]
                a[k][l] = a[k][l] - delta
        for k in others:
            for pv in pivots:
                a[k][pv] = FElement.zero(q)
                a[pv][k] = FElement.zero(q)

    while live:
        best = INF
        where = None
        for i in live:
            for j in live:
                v = a[i][j].val()
                if v < best:
                    best, where = v, (i, j)
        if where is None or best == INF:
            raise ValueError("degenerate lattice")
        i, j = where
        if best % 2 == 0:
            if i != j:
                diag_hit = None
                for k in live:
                    if a[k][k].val() == best:
                        diag_hit = k
                        break
                if diag_hit is None:
                    # symmetrize: e_i <- e_i + e_j gets norm of valuation `best`
                    for l in live:
                        a[i][l] = a[i][l] + a[j][l]
                    for l in live:
                        a[l][i] = a[l][i] + a[l][j]
                else:
                    i = diag_hit
            assert a[i][i].val() == best
            value = a[i][i]
            assert value.pi_part() == 0
            scale = int(best)
            unit = value.f0_part() / _RAT(q) ** (scale // 2)
            diag_units.setdefault(scale, []).append(unit_part_mod_p(unit, q))
            schur_eliminate([i])
            live.remove(i)
        else:
            assert i != j
            plane_counts[int(best)] = plane_counts.get(int(best), 0) + 1
            schur_eliminate([i, j])
            live.remove(i)
            live.remove(j)

    blocks: List[Block] = []
    for scale, units in diag_units.items():
        r = len(units)
        prod = 1
        for u in units:
            prod = (prod * u) % q
        sign = legendre(prod, q) * legendre(-1, q) ** ((r * (r - 1) // 2) % 2)
        blocks.append(Block(scale, r, sign))
    for scale, planes in plane_counts.items():
        blocks.append(Block(scale, 2 * planes, None))
    return GenusSymbol(blocks)


# ---------------------------------------------------------------------------
# lattices inside an explicit ambient space
# ---------------------------------------------------------------------------

def _residue_mod_ppow(x, k: int, p: int):
    """Canonical representative of x modulo p^k Z_(p) (k may be <= 0)."""
    v = val_p(x, p)
    if v == INF:
        return _RAT(0)
    m = max(0, -int(v))
    if k + m <= 0:
        return _RAT(0)
    # write x = A / (B p^m) with p coprime to B
    A, B = int(x.numerator), int(x.denominator)
    e = 0
    while B % p == 0:
        B //= p
        e += 1
    assert e == m
    res = (A * pow(B, -1, p ** (k + m))) % p ** (k + m)
    return _RAT(res, p ** m)


def _felement_mod_pi_power(x: FElement, e: int) -> FElement:
    """Canonical representative of x modulo pi^e O_F."""
    ka = (e + 1) // 2  # pi^e O has F0-part pi0^ceil(e/2)
    kb = e // 2
    return FElement(_residue_mod_ppow(x.a, ka, x.p),
                    _residue_mod_ppow(x.b, kb, x.p), x.p)


def hermite_normal_form(columns: List[List[FElement]], p: int) -> List[List[FElement]]:
    """Canonical pi-adic column HNF of a full-rank column family.

    Input: list of columns (each a list of FElements, ambient coordinates).
    Output: n canonical columns spanning the same O_F-module, upper triangular
    with diagonal pi^(e_r) and entries to the right reduced mod pi^(e_r).
    """
    n = len(columns[0])
    cols = [c[:] for c in columns]
    out: List[List[FElement]] = []
    for row in range(n):
        pivot_idx = None
        best = INF
        for idx, c in enumerate(cols):
            v = c[row].val()
            if v < best:
                best, pivot_idx = v, idx
        if pivot_idx is None or best == INF:
            raise ValueError("columns do not have full rank")
        pivot = cols.pop(pivot_idx)
        for c in cols:
            if c[row].is_zero():
                continue
            factor = c[row] / pivot[row]
            for r in range(n):
                c[r] = c[r] - factor * pivot[r]
        # normalize pivot: unit-scale so the leading entry is exactly pi^e
        e = int(best)
        unit = pivot[row] / FElement.pi_power(e, p)
        uinv = unit.inverse()
        pivot = [x * uinv for x in pivot]
        out.append((row, e, pivot))
        cols = [c for c in cols if any(not x.is_zero() for x in c)]
    # reduce entries of earlier pivots against later ones, top-left convention:
    # column i has its entries at rows of later pivots reduced mod their pi^e
    result = [pv for (_, _, pv) in out]
    rows_e = [(row, e) for (row, e, _) in out]
    for i in range(n):
        for jj in range(i + 1, n):
            row_j, e_j, col_j = rows_e[jj][0], rows_e[jj][1], result[jj]
            t = result[i][row_j]
            red = _felement_mod_pi_power(t, e_j)
            factor = (t - red) / FElement.pi_power(e_j, p)
            if not factor.is_zero():
                result[i] = [x - factor * y for x, y in zip(result[i], col_j)]
    return result


class AmbientLattice:
    """A lattice with a chosen ambient hermitian space.

    The ambient space carries the Gram matrix `ambient_gram` of a fixed basis;
    the lattice is the O_F-span of `basis` (a list of columns in ambient
    coordinates).  Canonicalization uses the pi-adic Hermite normal form, so
    equality of `key()` is equality of lattices.
    """

    def __init__(self, ambient_gram: Matrix, basis: Optional[Matrix] = None,
                 q: Optional[int] = None):
        self.p = ambient_gram[0][0].p if q is None else q
        self.ambient_gram = ambient_gram
        n = len(ambient_gram)
        if basis is None:
            basis = mat_identity(n, self.p)
        self.basis_cols = [[basis[r][c] for r in range(n)] for c in range(len(basis[0]))]
        self.basis_cols = hermite_normal_form(self.basis_cols, self.p)
        self._gram: Optional[Matrix] = None
        self._genus: Optional[GenusSymbol] = None

    @classmethod
    def from_symbol(cls, symbol: GenusSymbol, q: int) -> "AmbientLattice":
        return cls(symbol.gram(q))

    @property
    def n(self) -> int:
        return len(self.ambient_gram)

    def key(self) -> str:
        return ";".join(",".join(repr(x) for x in col) for col in self.basis_cols)

    def gram(self) -> Matrix:
        if self._gram is None:
            n = self.n
            b = [[self.basis_cols[c][r] for c in range(len(self.basis_cols))]
                 for r in range(n)]
            self._gram = gram_matrix(b, self.ambient_gram)
        return self._gram

    def invariants(self) -> Tuple[int, ...]:
        return tuple(sorted(self.genus().invariants()))

    def genus(self) -> GenusSymbol:
        if self._genus is None:
            self._genus = genus_from_gram(self.gram(), self.p)
        return self._genus

    def min_pairing_val(self):
        g = self.gram()
        return min(x.val() for row in g for x in row)

    def val(self) -> int:
        return self.genus().val

    def enlarged_by_lines(self, coeff_vectors) -> "AmbientLattice":
        """The lattice L + sum_v O_F pi^(-1) (sum_i v_i b_i), all coefficient
        vectors taken against the current basis."""
        p = self.p
        pi_inv = FElement.pi_power(-1, p)
        extras = []
        for coeffs in coeff_vectors:
            extra = [FElement.zero(p) for _ in range(self.n)]
            for c, col in zip(coeffs, self.basis_cols):
                if c:
                    for r in range(self.n):
                        extra[r] = extra[r] + col[r] * c
            extras.append([x * pi_inv for x in extra])
        cols = [col[:] for col in self.basis_cols] + extras
        out = AmbientLattice.__new__(AmbientLattice)
        out.p = p
        out.ambient_gram = self.ambient_gram
        out.basis_cols = hermite_normal_form(cols, p)
        out._gram = None
        out._genus = None
        return out

    def enlarged_by_line(self, coeffs: Sequence[int]) -> "AmbientLattice":
        return self.enlarged_by_lines([coeffs])

    def intersect_coordinate_hyperplane(self) -> "AmbientLattice":
        """L intersected with the span of the first n-1 ambient basis vectors.

        Result is re-expressed as a lattice of rank n-1 with ambient Gram the
        top-left (n-1) x (n-1) block of the current ambient Gram.
        """
        p = self.p
        n = self.n
        f = [col[n - 1] for col in self.basis_cols]
        pivot = None
        best = INF
        for idx, x in enumerate(f):
            if x.val() < best:
                best, pivot = x.val(), idx
        kernel_cols = []
        if best == INF:
            # the lattice already lies in the hyperplane
            kernel_cols = [col[:] for col in self.basis_cols]
        else:
            pcol = self.basis_cols[pivot]
            for idx, col in enumerate(self.basis_cols):
                if idx == pivot:
                    continue
                factor = f[idx] / f[pivot]
                kernel_cols.append([x - factor * y for x, y in zip(col, pcol)])
        trimmed = [col[:n - 1] for col in kernel_cols]
        sub_gram = [row[:n - 1] for row in self.ambient_gram[:n - 1]]
        out = AmbientLattice.__new__(AmbientLattice)
        out.p = p
        out.ambient_gram = sub_gram
        out.basis_cols = hermite_normal_form(trimmed, p)
        out._gram = None
        out._genus = None
        return out


def projective_lines(n: int, q: int):
    """Representatives of lines in F_q^n: first nonzero coordinate 1."""
    for pivot in range(n):
        for tail in itertools.product(range(q), repeat=n - pivot - 1):
            yield (0,) * pivot + (1,) + tail


def overlattices(symbol: GenusSymbol, q: int, min_invariant: int):
    """All lattices L' containing L with min pairing valuation >= min_invariant.

    Yields (index_length, genus_symbol) pairs, including L itself when it
    qualifies.  Sound because enlarging a lattice can only decrease the
    minimal pairing valuation, so the search tree can be pruned at the bound.
    """
    if min_invariant >= 0 and all(a == 0 for a in symbol.invariants()):
        # a unimodular lattice is a maximal integral lattice
        return [(0, symbol)]
    root = AmbientLattice.from_symbol(symbol, q)
    if root.min_pairing_val() < min_invariant:
        return []
    base_val = symbol.val
    seen = {root.key()}
    frontier = [root]
    results = []
    lines = list(projective_lines(root.n, q))
    while frontier:
        lat = frontier.pop()
        ell = (base_val - lat.val()) // 2
        results.append((ell, lat.genus()))
        g = lat.gram()
        n = lat.n
        cur_min = min(x.val() for row in g for x in row)
        for line in lines:
            # exact min pairing valuation of lat + O_F pi^(-1) v for
            # v = sum_i line_i b_i, from the pairings of the generators:
            # (pi^(-1) v, b_j) drops val(v, b_j) by 1 and the norm
            # (pi^(-1) v, pi^(-1) v) drops val(v, v) by 2
            rows = [None] * n
            for j in range(n):
                acc = None
                for i in range(n):
                    c = line[i]
                    if c:
                        term = g[i][j] if c == 1 else g[i][j] * c
                        acc = term if acc is None else acc + term
                rows[j] = acc
            cand = cur_min
            vv = None
            for j in range(n):
                c = line[j]
                if c:
                    term = rows[j] if c == 1 else rows[j] * c
                    vv = term if vv is None else vv + term
                cand = min(cand, rows[j].val() - 1)
            cand = min(cand, vv.val() - 2)
            if cand < min_invariant:
                continue
            bigger = lat.enlarged_by_line(line)
            k = bigger.key()
            if k not in seen:
                seen.add(k)
                frontier.append(bigger)
    return results


def overlattice_count(symbol: GenusSymbol, target: GenusSymbol, q: int) -> int:
    """n(target, L): overlattices of L isomorphic to the target symbol."""
    bound = min(0, target.min_scale())
    return sum(1 for _, gsym in overlattices(symbol, q, bound)
               if gsym == target)


def sublattices_in_pi_inverse(symbol: GenusSymbol, q: int):
    """All L' with L <= L' <= pi^(-1) L, as (index_length, genus) pairs.

    Such L' correspond bijectively to F_q-subspaces of L / pi L, enumerated
    through echelon bases; the index length equals the subspace dimension.
    """
    root = AmbientLattice.from_symbol(symbol, q)
    n = symbol.rank
    results = []
    for dim in range(n + 1):
        for basis in _echelon_bases(n, dim, q):
            lat = root.enlarged_by_lines(basis)
            results.append((dim, lat.genus()))
    return results


def _echelon_bases(n: int, k: int, q: int):
    if k == 0:
        yield []
        return
    for pivots in itertools.combinations(range(n), k):
        free_positions = []
        for r, piv in enumerate(pivots):
            for c in range(piv + 1, n):
                if c not in pivots:
                    free_positions.append((r, c))
        for values in itertools.product(range(q), repeat=len(free_positions)):
            basis = [[0] * n for _ in range(k)]
            for r, piv in enumerate(pivots):
                basis[r][piv] = 1
            for (r, c), val in zip(free_positions, values):
                basis[r][c] = val
            yield basis


# ---------------------------------------------------------------------------
# coset counts in the dual quotient (full type lattices)
# ---------------------------------------------------------------------------

def _dual_basis_gram(symbol: GenusSymbol, q: int):
    """Gram matrix and dual basis columns for L realized on its symbol Gram.

    The pairing is (x, y) = sum_ij g_ij x_i conj(y_j), so the dual basis
    condition (d_k, b_l) = delta reads (D^T g)_kl = delta, i.e. D = (g^-1)^T.
    """
    g = symbol.gram(q)
    n = symbol.rank
    inv = mat_inverse(g)
    dual_cols = [[inv[c][r] for r in range(n)] for c in range(n)]
    return g, dual_cols


def _residues_mod_pi_power(m: int, p: int):
    """All canonical residues of O_F mod pi^m."""
    ka = (m + 1) // 2
    kb = m // 2
    for aa in range(p ** ka):
        for bb in range(p ** kb):
            yield FElement.of(aa, bb, p)


def mu_counts(symbol: GenusSymbol, q: int) -> Dict[str, int]:
    """Valuation stratification of (L^sharp)degree-zero cosets for full-type L.

    Returns counts mu_plus, mu_zero, mu_zero_plus, mu_zero_minus, mu_minus of
    cosets x + L in L^sharp/L with norm valuation behavior:
      mu_plus:  x in pi L^sharp, val (x,x) >= 1   (the zero coset included)
      mu_zero:  x in pi L^sharp, val (x,x) = 0, refined by legendre class
      mu_minus: x in L^sharp - pi L^sharp, val (x,x) >= 0
    Valuations are pi0-normalized valuations of the norm.
    """
    if not symbol.is_full_type():
        raise ValueError("mu counts are defined for full-type lattices")
    p = q
    g, dual_cols = _dual_basis_gram(symbol, q)
    n = symbol.rank
    invs = symbol.invariants()
    counts = {"mu_plus": 0, "mu_zero": 0, "mu_zero_plus": 0,
              "mu_zero_minus": 0, "mu_minus": 0}
    # cosets of L in L^sharp: coordinates c_i modulo pi^(a_i) on dual basis
    ranges = [list(_residues_mod_pi_power(a, p)) for a in invs]
    ambient = symbol.gram(q)
    for combo in itertools.product(*ranges):
        x = [FElement.zero(p) for _ in range(n)]
        for c, col in zip(combo, dual_cols):
            if not c.is_zero():
                for r in range(n):
                    x[r] = x[r] + col[r] * c
        norm = FElement.zero(p)
        for i in range(n):
            for j in range(n):
                norm = norm + ambient[i][j] * x[i] * x[j].conj()
        assert norm.pi_part() == 0
        v = val_p(norm.f0_part(), p)
        in_pi_dual = all(c.val() >= 1 for c in combo)
        if in_pi_dual:
            if v >= 1:
                counts["mu_plus"] += 1
            elif v == 0:
                counts["mu_zero"] += 1
                cls = legendre(unit_part_mod_p(norm.f0_part(), p), p)
                counts["mu_zero_plus" if cls == 1 else "mu_zero_minus"] += 1
            # v < 0 inside pi L^sharp: outside the degree-zero locus, ignored
        else:
            if v >= 0:
                counts["mu_minus"] += 1
    return counts


# ---------------------------------------------------------------------------
# symbol enumeration
# ---------------------------------------------------------------------------

def enumerate_genus_symbols(rank: int, min_scale: int, max_scale: int):
    """All genus symbols of the given rank with scales in [min_scale, max_scale].

    Even-scale blocks come in both signs; odd-scale blocks must have even
    rank.  Yields every local isometry class exactly once.
    """
    scales = list(range(min_scale, max_scale + 1))

    def options(scale: int, r: int):
        if r == 0:
            yield None
            return
        if scale % 2:
            if r % 2 == 0:
                yield Block(scale, r, None)
        else:
            yield Block(scale, r, 1)
            yield Block(scale, r, -1)

    def rec(idx: int, remaining: int, blocks):
        if idx == len(scales):
            if remaining == 0:
                yield GenusSymbol(blocks)
            return
        for r in range(remaining + 1):
            for blk in options(scales[idx], r):
                yield from rec(idx + 1, remaining - r,
                               blocks + ([blk] if blk else []))

    if rank > 0:
        yield from rec(0, rank, [])


def check_mu_identities(symbol: GenusSymbol, q: int) -> bool:
    """The linear relations tying the mu strata of a full-type lattice.

    With t = rank and chi = chi(L):
      odd t:  (1 - chi q^((t+1)/2)) (1 + chi q^((t-1)/2)) mu+ +
              (1 + chi q^((t-1)/2)) mu0 + mu- = 0
      even t: (1 - q^t) mu+ + (1 - chi q^(t/2)) mu0+ +
              (1 + chi q^(t/2)) mu0- + mu- = 0
      both:   mu+ + mu0 + mu- = q^t mu+
    """
    counts = mu_counts(symbol, q)
    t = symbol.rank
    chi = symbol.chi(q)
    mp, m0, mm = counts["mu_plus"], counts["mu_zero"], counts["mu_minus"]
    if mp + m0 + mm != q ** t * mp:
        return False
    if t % 2:
        w = 1 + chi * q ** ((t - 1) // 2)
        return (1 - chi * q ** ((t + 1) // 2)) * w * mp + w * m0 + mm == 0
    return ((1 - q ** t) * mp
            + (1 - chi * q ** (t // 2)) * counts["mu_zero_plus"]
            + (1 + chi * q ** (t // 2)) * counts["mu_zero_minus"]
            + mm == 0)
