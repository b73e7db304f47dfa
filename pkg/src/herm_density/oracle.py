"""Brute-force representation-density counters.

Everything here counts Gram-matrix congruences directly, with no input from
the polynomial engines, so it can serve as an independent referee for them.

The congruence being counted: for target M' and source L of rank n, a
candidate is a matrix phi of n columns over M'/pi0^d M', and it counts when
val_pi((phi^T G_M' conj(phi) - G_L)_ij) >= 2d - 1
for every entry: the defining congruence lives on the pi-scaled pairing
pi * ( , ) taken mod pi0^d, and val_pi(pi * delta) >= 2d unwinds to the
bound above.  The normalized sequence count_d / q^(d n(2m'-n)) stabilizes
in d at the local density Den(M', L, 1).

Two engines:

* herm_count: literal enumeration of all q^(2 m' n d) candidates, chunked
  through numpy, with a hard budget guard.  Handles any ranks and also the
  primitive variant (columns independent mod pi).
* class-table engine (den_oracle fast path, n <= 2, M' = I_m perp H^(<=1)):
  vectors of one block are grouped by (pi-content, scaled norm); for each
  class one representative's pairing histogram against all vectors stands
  in for every member.  The transitivity behind that grouping is
  cross-checked against herm_count in the test suite.

All pairings are scaled by p once so every stored value is an integer:
s = p * value, kept mod p^(d+1) for diagonal and a-components (their
congruence is v_p >= d) and mod p^d for b-components (v_p >= d-1).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .felements import FElement, Matrix
from .lattices import GenusSymbol, hyperbolic_planes

SymbolOrGram = Union[GenusSymbol, Matrix]


class BudgetError(RuntimeError):
    """Raised instead of attempting an enumeration that would not finish."""

    def __init__(self, estimate: int, budget: int):
        super().__init__(
            "refusing to enumerate %.3g candidates (budget %.3g)"
            % (float(estimate), float(budget)))
        self.estimate = estimate
        self.budget = budget


class StabilizationError(RuntimeError):
    """The normalized counts did not repeat within the depth cap."""


def _threads_from_env() -> int:
    try:
        return max(1, int(os.environ.get("HERM_DENSITY_THREADS", "1")))
    except ValueError:
        return 1


def _as_gram(x: SymbolOrGram, q: int) -> Matrix:
    if isinstance(x, GenusSymbol):
        return x.gram(q)
    return x


def _min_scale(gram: Matrix) -> int:
    vals = [entry.val() for row in gram for entry in row if not entry.is_zero()]
    return min(0, min(vals)) if vals else 0


def _scaled_int(x, p: int) -> int:
    num, den = int(x.numerator) * p, int(x.denominator)
    if num % den:
        raise ValueError("pairing has valuation below -2")
    return num // den


def _scaled_target(l_gram: Matrix, p: int, mod_a: int, mod_b: int):
    """(n, diag targets, a-part targets, b-part targets), all scaled by p."""
    n = len(l_gram)
    diag = [_scaled_int(l_gram[i][i].a, p) % mod_a for i in range(n)]
    ta = [[_scaled_int(l_gram[i][j].a, p) % mod_a for j in range(n)] for i in range(n)]
    tb = [[_scaled_int(l_gram[i][j].b, p) % mod_b for j in range(n)] for i in range(n)]
    return n, diag, ta, tb


# ---------------------------------------------------------------------------
# naive enumeration
# ---------------------------------------------------------------------------

def herm_count(l_gram: SymbolOrGram, m_gram: SymbolOrGram, d: int, q: int,
               primitive: bool = False, budget: int = 2 ** 34,
               chunk: int = 1 << 17) -> int:
    """Number of rank-preserving Gram congruences phi: L -> M' at depth d.

    Enumerates every candidate matrix; raises BudgetError when the candidate
    count q^(2 m' n d) exceeds the budget.
    """
    p = q
    lg = _as_gram(l_gram, q)
    mg = _as_gram(m_gram, q)
    n, mm = len(lg), len(mg)
    total = q ** (2 * mm * n * d)
    if total > budget:
        raise BudgetError(total, budget)
    mod_a = p ** (d + 1)
    mod_b = p ** d
    _, tdiag, ta, tb = _scaled_target(lg, p, mod_a, mod_b)
    # scaled ambient gram entries (integers after one multiplication by p)
    sga = [[_scaled_int(mg[r][s].a, p) for s in range(mm)] for r in range(mm)]
    sgb = [[_scaled_int(mg[r][s].b, p) for s in range(mm)] for r in range(mm)]
    if primitive and n > 2:
        raise ValueError("primitive counting implemented for n <= 2")
    pd = p ** d
    ndigits = 2 * mm * n

    def count_chunk(start: int) -> int:
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = []
        rest = idx
        for _ in range(ndigits):
            digits.append(rest % pd)
            rest = rest // pd
        # digits laid out as a[r][i] then b[r][i], row-major over (r, i)
        xa = [[digits[(r * n + i)] for i in range(n)] for r in range(mm)]
        xb = [[digits[mm * n + (r * n + i)] for i in range(n)] for r in range(mm)]
        ok = np.ones(len(idx), dtype=bool)
        for i in range(n):
            for j in range(i, n):
                pa = np.zeros(len(idx), dtype=np.int64)
                pb = np.zeros(len(idx), dtype=np.int64)
                for r in range(mm):
                    for s in range(mm):
                        if sga[r][s] == 0 and sgb[r][s] == 0:
                            continue
                        # x_r conj(y_s) with x = column i, y = column j
                        areal = xa[r][i] * xa[s][j] - p * (xb[r][i] * xb[s][j])
                        bim = xb[r][i] * xa[s][j] - xa[r][i] * xb[s][j]
                        pa += sga[r][s] * areal + p * sgb[r][s] * bim
                        pb += sga[r][s] * bim + sgb[r][s] * areal
                if i == j:
                    ok &= (pa - tdiag[i]) % mod_a == 0
                else:
                    ok &= (pa - ta[i][j]) % mod_a == 0
                    ok &= (pb - tb[i][j]) % mod_b == 0
                if not ok.any():
                    break
            else:
                continue
            break
        if primitive and ok.any():
            prim = np.zeros(len(idx), dtype=bool)
            if n == 1:
                for r in range(mm):
                    prim |= xa[r][0] % p != 0
            else:
                for r in range(mm):
                    for s in range(r + 1, mm):
                        minor = xa[r][0] * xa[s][1] - xa[r][1] * xa[s][0]
                        prim |= minor % p != 0
            ok &= prim
        return int(np.count_nonzero(ok))

    starts = range(0, total, chunk)
    workers = _threads_from_env()
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(count_chunk, starts))
    return sum(count_chunk(s) for s in starts)


def pherm_count(l_gram: SymbolOrGram, m_gram: SymbolOrGram, d: int, q: int,
                budget: int = 2 ** 34) -> int:
    """herm_count restricted to phi with mod-pi independent columns."""
    return herm_count(l_gram, m_gram, d, q, primitive=True, budget=budget)


# ---------------------------------------------------------------------------
# class-table engine
# ---------------------------------------------------------------------------

def _vp_array(arr: np.ndarray, p: int, cap: int) -> np.ndarray:
    out = np.zeros(arr.shape, dtype=np.int64)
    cur = arr.copy()
    for _ in range(cap):
        divisible = (cur % p == 0) & (out < cap)
        zero = cur == 0
        step = divisible & ~zero
        out[zero] = cap
        out[step] += 1
        cur = np.where(step, cur // p, cur)
    out[arr == 0] = cap
    return out


class _BlockVectors:
    """All vectors of one block mod pi0^d with norms, contents and pairings.

    kind "diag": Gram diag(units), scale 0.  kind "hyp": one hyperbolic
    plane at scale -1.  Pairings follow (x, y) = sum G_rs x_r conj(y_s).
    """

    def __init__(self, kind: str, units: Sequence[int], d: int, q: int,
                 mod_a: int, mod_b: int):
        self.kind = kind
        self.units = list(units)
        self.d = d
        self.p = q
        self.mod_a = mod_a
        self.mod_b = mod_b
        ncomp = 2 if kind == "hyp" else len(units)
        pd = q ** d
        size = pd ** (2 * ncomp)
        idx = np.arange(size, dtype=np.int64)
        comps = []
        rest = idx
        for _ in range(2 * ncomp):
            comps.append(rest % pd)
            rest = rest // pd
        self.a = comps[:ncomp]
        self.b = comps[ncomp:]
        self.norm = self._norms(self.a, self.b)
        cap = 2 * d
        content = np.full(size, cap, dtype=np.int64)
        for t in range(ncomp):
            va = 2 * _vp_array(self.a[t], q, d)
            vb = 2 * _vp_array(self.b[t], q, d) + 1
            content = np.minimum(content, np.minimum(va, np.minimum(vb, cap)))
        self.content = content
        self.size = size

    def _norms(self, xs_a, xs_b) -> np.ndarray:
        p = self.p
        if self.kind == "diag":
            total = np.zeros(len(xs_a[0]), dtype=np.int64)
            for u, a, b in zip(self.units, xs_a, xs_b):
                total += u * (a * a - p * (b * b))
        else:
            total = 2 * (xs_b[0] * xs_a[1] - xs_a[0] * xs_b[1])
        return (p * total) % self.mod_a

    def _pair(self, rep: Tuple[int, ...], ys_a, ys_b):
        """Scaled components of (x_rep, y) for all y, mod (mod_a, mod_b)."""
        p = self.p
        ncomp = len(self.a)
        ra = rep[:ncomp]
        rb = rep[ncomp:]
        if self.kind == "diag":
            pa = np.zeros(len(ys_a[0]), dtype=np.int64)
            pb = np.zeros(len(ys_a[0]), dtype=np.int64)
            for u, xa, xb, ya, yb in zip(self.units, ra, rb, ys_a, ys_b):
                pa += u * (xa * ya - p * (xb * yb))
                pb += u * (xb * ya - xa * yb)
            pa *= p
            pb *= p
        else:
            xa1, xa2 = ra
            xb1, xb2 = rb
            areal = (xa1 * ys_a[1] - p * (xb1 * ys_b[1])) - (xa2 * ys_a[0] - p * (xb2 * ys_b[0]))
            bim = (xb1 * ys_a[1] - xa1 * ys_b[1]) - (xb2 * ys_a[0] - xa2 * ys_b[0])
            pa = p * bim
            pb = areal
        return pa % self.mod_a, pb % self.mod_b

    def classes(self) -> List[Tuple[int, int, int, Tuple[int, ...]]]:
        """(content, norm, member count, representative coords) per class."""
        key = self.content * self.mod_a + self.norm
        order = np.argsort(key, kind="stable")
        sorted_key = key[order]
        boundaries = np.nonzero(np.diff(sorted_key))[0] + 1
        starts = np.concatenate(([0], boundaries))
        ends = np.concatenate((boundaries, [len(sorted_key)]))
        out = []
        for s, e in zip(starts, ends):
            first = order[s]
            rep = tuple(int(c[first]) for c in self.a + self.b)
            out.append((int(sorted_key[s] // self.mod_a),
                        int(sorted_key[s] % self.mod_a), int(e - s), rep))
        return out

    def pair_histogram(self, rep: Tuple[int, ...]) -> np.ndarray:
        """3d histogram over (s_pair_a, s_pair_b, s_norm_y) for all y."""
        pa, pb = self._pair(rep, self.a, self.b)
        combined = (pa * self.mod_b + pb) * self.mod_a + self.norm
        counts = np.bincount(combined, minlength=self.mod_a * self.mod_b * self.mod_a)
        return counts.reshape(self.mod_a, self.mod_b, self.mod_a)

    def norm_histogram(self) -> np.ndarray:
        return np.bincount(self.norm, minlength=self.mod_a)


def _aligned(hist: np.ndarray, targets: Tuple[int, int, int]) -> np.ndarray:
    """aligned[S] = hist[(T - S) mod ring], per axis."""
    out = hist
    for axis, t in enumerate(targets):
        out = np.roll(np.flip(out, axis), t + 1, axis)
    return out


def _class_tables(blocks: List[_BlockVectors]):
    tables = []
    for blk in blocks:
        entries = []
        for content, norm, cnt, rep in blk.classes():
            entries.append((norm, cnt, blk.pair_histogram(rep)))
        tables.append(entries)
    return tables


def smart_pair_count(l_gram: Matrix, units: Sequence[int], k: int, d: int,
                     q: int) -> int:
    """Class-table count for n = rank(L) <= 2 against I_m(units) perp H^k,
    k <= 1."""
    p = q
    n = len(l_gram)
    if n > 2 or k > 1:
        raise ValueError("class-table engine handles n <= 2, k <= 1")
    mod_a = p ** (d + 1)
    mod_b = p ** d
    _, tdiag, ta, tb = _scaled_target(l_gram, p, mod_a, mod_b)
    blocks = []
    if units:
        blocks.append(_BlockVectors("diag", units, d, q, mod_a, mod_b))
    if k:
        blocks.append(_BlockVectors("hyp", (), d, q, mod_a, mod_b))
    if not blocks:
        ok = all(x == 0 for x in tdiag)
        if n == 2:
            ok = ok and ta[0][1] == 0 and tb[0][1] == 0
        return 1 if ok else 0
    if n == 1:
        hists = [blk.norm_histogram() for blk in blocks]
        if len(hists) == 1:
            return int(hists[0][tdiag[0]])
        total = 0
        h0, h1 = hists
        for s in range(mod_a):
            c0 = int(h0[s])
            if c0:
                total += c0 * int(h1[(tdiag[0] - s) % mod_a])
        return total
    t_rest = (ta[0][1], tb[0][1], tdiag[1])
    if len(blocks) == 1:
        total = 0
        for content, norm, cnt, rep in blocks[0].classes():
            if norm != tdiag[0]:
                continue
            hist = blocks[0].pair_histogram(rep)
            total += cnt * int(hist[t_rest])
        return total
    tab0, tab1 = _class_tables(blocks)
    aligned1 = [(norm, cnt, _aligned(hist, t_rest)) for norm, cnt, hist in tab1]
    total = 0
    for norm0, cnt0, hist0 in tab0:
        flat0 = hist0.ravel()
        for norm1, cnt1, ahist in aligned1:
            if (norm0 + norm1) % mod_a != tdiag[0]:
                continue
            dot = int(np.dot(flat0, ahist.ravel()))
            total += cnt0 * cnt1 * dot
    return total


# ---------------------------------------------------------------------------
# stabilized densities
# ---------------------------------------------------------------------------

def _diag_units(m_symbol: Optional[GenusSymbol], q: int) -> Optional[List[int]]:
    """Units of a unimodular diagonal symbol, or None if not of that shape."""
    if m_symbol is None or m_symbol.rank == 0:
        return []
    if any(b.scale != 0 for b in m_symbol.blocks):
        return None
    gram = m_symbol.gram(q)
    units = []
    for i in range(len(gram)):
        a = Fraction(gram[i][i].a)
        if a.denominator != 1:
            return None
        units.append(int(a))
    return units


def _compound_gram(m_symbol: Optional[GenusSymbol], k: int, q: int) -> Matrix:
    parts = []
    if m_symbol is not None and m_symbol.rank:
        parts.append(m_symbol.gram(q))
    if k:
        parts.append(hyperbolic_planes(-1, k).gram(q))
    size = sum(len(g) for g in parts)
    out = [[FElement.zero(q) for _ in range(size)] for _ in range(size)]
    pos = 0
    for g in parts:
        for i in range(len(g)):
            for j in range(len(g)):
                out[pos + i][pos + j] = g[i][j]
        pos += len(g)
    return out


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def den_oracle_sequence(m_symbol: Optional[GenusSymbol], l_gram: SymbolOrGram,
                        k: int, q: int, d_max: int = 3,
                        force_naive: bool = False,
                        budget: int = 2 ** 34) -> List[Fraction]:
    """Normalized counts count_d / q^(d n (2m' - n)) for d = 1..d_max
    against the target M perp H^k (stops early once two agree)."""
    if not _is_prime(q) or q == 2:
        raise ValueError("counting works over the concrete model: q an odd prime")
    lg = _as_gram(l_gram, q)
    n = len(lg)
    units = None if force_naive else _diag_units(m_symbol, q)
    mprime = (m_symbol.rank if m_symbol is not None else 0) + 2 * k
    smart = units is not None and n <= 2 and k <= 1
    values: List[Fraction] = []
    for d in range(1, d_max + 1):
        if smart:
            cnt = smart_pair_count(lg, units, k, d, q)
        else:
            cnt = herm_count(lg, _compound_gram(m_symbol, k, q), d, q,
                             budget=budget)
        values.append(Fraction(cnt) / Fraction(q) ** (d * n * (2 * mprime - n)))
        if len(values) >= 2 and values[-1] == values[-2]:
            break
    return values


def den_oracle(m_symbol: Optional[GenusSymbol], l_gram: SymbolOrGram, k: int,
               q: int, d_max: int = 3, force_naive: bool = False,
               budget: int = 2 ** 34) -> Fraction:
    """Stabilized local density Den(M perp H^k, L, 1) by direct counting.

    Raises StabilizationError when the normalized sequence has not repeated
    by depth d_max.
    """
    values = den_oracle_sequence(m_symbol, l_gram, k, q, d_max=d_max,
                                 force_naive=force_naive, budget=budget)
    if len(values) >= 2 and values[-1] == values[-2]:
        return values[-1]
    raise StabilizationError(
        "counts still moving at depth %d: %s"
        % (d_max, ", ".join(str(v) for v in values)))
