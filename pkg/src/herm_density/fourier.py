"""Horizontal/vertical decompositions and the dual-coset D-sum.

The setting: a nondegenerate rank-(n-1) lattice L-flat sits in a hyperplane
of an ambient hermitian space V of rank n and sign chi(V), and is extended
by an orthogonal vector x of norm valuation val(x).  The derived density of
L = L-flat perp <x> splits over the integral overlattices L' according to
whether the hyperplane part L' cap V-flat is "horizontal":

* unimodular, or
* unimodular perp one rank-1 block of even positive scale, with
  chi(V) * chi(unimodular part) = -1.

The D-sum attaches to each dual coset u of (L-flat)sharp / L-flat with
integral norm the lattice spanned by L-flat and u + x, and adds up the
closed modified primitive derived densities of those lattices.  For
non-horizontal L-flat the sum collapses to zero, which is the counting
shadow of the vertical part of the decomposition.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .density import dden, pdden_closed
from .felements import FElement, Matrix, val_p
from .fqspaces import legendre, smallest_nonresidue
from .lattices import (AmbientLattice, GenusSymbol, _dual_basis_gram,
                       _residues_mod_pi_power, genus_from_gram,
                       projective_lines)

SymbolOrLattice = Union[GenusSymbol, AmbientLattice]

HORIZONTAL_ERROR = "D-sum undefined for horizontal lattices in this check"


def is_horizontal(lb: GenusSymbol, chi_ambient: int, q: int) -> bool:
    """Whether a rank-(n-1) lattice is horizontal in an ambient space of
    sign chi_ambient (see the module docstring for the two shapes)."""
    if not lb.is_integral():
        return False
    invs = lb.invariants()
    positive = [a for a in invs if a > 0]
    if not positive:
        return True
    if len(positive) != 1 or positive[0] % 2:
        return False
    uni = lb.sub_symbol(lambda b: b.scale == 0)
    chi_m = uni.chi(q) if uni is not None else 1
    return chi_ambient * chi_m == -1


def _integral_overlattices(lat: AmbientLattice) -> List[AmbientLattice]:
    """All integral lattices containing lat, as realized lattice objects."""
    q = lat.p
    seen = {lat.key()}
    frontier = [lat]
    results = []
    while frontier:
        cur = frontier.pop()
        if cur.min_pairing_val() < 0:
            continue
        results.append(cur)
        for line in projective_lines(cur.n, q):
            bigger = cur.enlarged_by_line(line)
            k = bigger.key()
            if k not in seen:
                seen.add(k)
                frontier.append(bigger)
    return results


def horizontal_set(lb: SymbolOrLattice, chi_ambient: int, q: int) -> List[AmbientLattice]:
    """The horizontal integral overlattices of lb (empty for non-integral lb)."""
    lat = AmbientLattice.from_symbol(lb, q) if isinstance(lb, GenusSymbol) else lb
    if lat.min_pairing_val() < 0:
        return []
    return [over for over in _integral_overlattices(lat)
            if is_horizontal(over.genus(), chi_ambient, q)]


class FlatConfiguration:
    """L = L-flat perp <x> inside an ambient space of prescribed sign.

    The norm of x is xi = u pi0^val_x with the unit class of u pinned so
    that the ambient sign comes out as chi_ambient: chi of the orthogonal
    complement line W must be chi_ambient * chi(V-flat) * legendre(-1)^(n-1).
    """

    def __init__(self, flat: GenusSymbol, chi_ambient: int, val_x: int, q: int):
        if isinstance(flat, str):
            flat = GenusSymbol.parse(flat)
        self.flat = flat
        self.chi_ambient = chi_ambient
        self.val_x = val_x
        self.q = q
        n = flat.rank + 1
        chi_w = chi_ambient * flat.chi(q) * legendre(-1, q) ** (n - 1)
        unit_class = chi_w * legendre(-1, q) ** val_x
        self.unit = 1 if unit_class == 1 else smallest_nonresidue(q)
        self.xi = FElement.of(Fraction(self.unit) * Fraction(q) ** val_x, 0, q)
        gb = flat.gram(q)
        gram = [row[:] + [FElement.zero(q)] for row in gb]
        gram.append([FElement.zero(q)] * flat.rank + [self.xi])
        self.lattice = AmbientLattice(gram)
        assert self.lattice.genus().chi(q) == chi_ambient

    def dden_split(self) -> Tuple[Fraction, Fraction]:
        """(vertical, horizontal) parts of dDen(L), split by whether the
        hyperplane section of each integral overlattice is horizontal.

        Checks that the parts add up to dden computed symbol-wise.
        """
        q = self.q
        vertical = Fraction(0)
        horizontal = Fraction(0)
        for over in _integral_overlattices(self.lattice):
            term = pdden_closed(over.genus(), q)
            if term == 0:
                continue
            section = over.intersect_coordinate_hyperplane().genus()
            if is_horizontal(section, self.chi_ambient, q):
                horizontal += term
            else:
                vertical += term
        total = dden(self.lattice.genus(), q)
        if vertical + horizontal != total:
            raise AssertionError(
                "horizontal/vertical split does not refine the derived density:"
                " %s + %s != %s" % (vertical, horizontal, total))
        return vertical, horizontal


def dden_vertical(cfg: FlatConfiguration) -> Fraction:
    return cfg.dden_split()[0]


def dden_horizontal(cfg: FlatConfiguration) -> Fraction:
    return cfg.dden_split()[1]


def d_sum_terms(flat: GenusSymbol, chi_ambient: int, val_x: int,
                q: int) -> List[Tuple[GenusSymbol, Fraction]]:
    """The (genus, closed pdden) summands of the D-sum, one per dual coset
    of L-flat with integral norm."""
    if isinstance(flat, str):
        flat = GenusSymbol.parse(flat)
    if not flat.is_integral():
        raise ValueError("D-sum needs an integral hyperplane lattice")
    cfg = FlatConfiguration(flat, chi_ambient, val_x, q)
    p = q
    nb = flat.rank
    gb, dual_cols = _dual_basis_gram(flat, q)
    invs = flat.invariants()
    ranges = [list(_residues_mod_pi_power(a, p)) for a in invs]
    terms = []
    for combo in itertools.product(*ranges):
        u = [FElement.zero(p) for _ in range(nb)]
        for c, col in zip(combo, dual_cols):
            if not c.is_zero():
                for r in range(nb):
                    u[r] = u[r] + col[r] * c
        norm = FElement.zero(p)
        for i in range(nb):
            for j in range(nb):
                norm = norm + gb[i][j] * u[i] * u[j].conj()
        assert norm.pi_part() == 0
        if val_p(norm.f0_part(), p) < 0:
            continue
        gram = [[gb[i][j] for j in range(nb)] + [combo[i].conj()]
                for i in range(nb)]
        gram.append([combo[j] for j in range(nb)] + [norm + cfg.xi])
        genus = genus_from_gram(gram, q)
        terms.append((genus, pdden_closed(genus, q)))
    return terms


def d_sum(flat: GenusSymbol, chi_ambient: int, val_x: int, q: int) -> Fraction:
    """Sum of closed modified primitive derived densities over the dual
    cosets of a non-horizontal integral hyperplane lattice; zero is the
    expected value."""
    if isinstance(flat, str):
        flat = GenusSymbol.parse(flat)
    if is_horizontal(flat, chi_ambient, q):
        raise ValueError(HORIZONTAL_ERROR)
    return sum((value for _, value in d_sum_terms(flat, chi_ambient, val_x, q)),
               Fraction(0))
