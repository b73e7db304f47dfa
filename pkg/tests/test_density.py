"""Density polynomials, derived densities, and correction coefficients."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from herm_density.density import (InternalConsistencyError, coefficients_c,
                                  dden, delta_odd, den_poly, den_prime,
                                  den_prime_raw, den_t_counts, density_report,
                                  pden_from_den_roundtrip, pden_piece,
                                  pden_poly, pden_prime, pdden_closed,
                                  pdden_machine, unimodular_self_density)
from herm_density.lattices import (GenusSymbol, enumerate_genus_symbols,
                                   unimodular)
from herm_density.polynomials import Poly


# ---------------------------------------------------------------------------
# fixed polynomial values (rank <= 2 targets against small lattices)
# ---------------------------------------------------------------------------

def test_pden_poly_fixed_values():
    q = 3
    table = [
        (1, -1, "0^1+", Poly([1, -1])),
        (2, 1, "0^2+", Poly([1, 2, 1])),
        (2, -1, "0^2-", Poly([1, 6, 1])),
        (2, -1, "0^2+", Poly([1, -2, 1])),
        (3, -1, "0^1+", Poly([1, Fraction(-1, 3)])),
        (4, -1, "0^2+", Poly([1, Fraction(10, 9), Fraction(1, 9)])),
        (2, -1, "1H^1", Poly([1, -10, 9])),
        (3, 1, "2^1+", Poly([1, Fraction(-1, 9)])),
    ]
    for m, eps, text, expected in table:
        assert pden_poly(m, eps, text, q) == expected


def test_pden_of_hyperbolic_plane():
    # the scale -1 hyperbolic plane represents both rank 2 targets the
    # same way: a single linear factor
    q = 3
    for eps in (1, -1):
        assert pden_poly(2, eps, "-1H^1", q) == Poly([1, -1])


def test_den_poly_fixed_values():
    q = 3
    table = [
        (2, 1, "0^2+", Poly([1, 4, -1])),
        (2, -1, "0^2-", Poly([1, 6, 1])),
        (2, -1, "0^2+", Poly([1, 0, -1])),
        (2, -1, "0^1+", Poly([1, Fraction(1, 3)])),
        (2, 1, "0^1+", Poly([1, Fraction(-1, 3)])),
    ]
    for m, eps, text, expected in table:
        assert den_poly(m, eps, text, q) == expected


def test_den_equals_pden_for_unimodular_self_pairing():
    # a unimodular lattice has no proper integral overlattices, so the
    # class sum collapses to the primitive term
    q = 3
    assert den_poly(2, -1, "0^2-", q) == pden_poly(2, -1, "0^2-", q)


def test_constant_term_is_one_on_integral_symbols():
    q = 3
    for rank in (1, 2):
        for sym in enumerate_genus_symbols(rank, 0, 2):
            for eps in (1, -1):
                for m in (rank, rank + 1):
                    assert den_poly(m, eps, sym, q).coeffs[0] == 1
                    assert pden_poly(m, eps, sym, q).coeffs[0] == 1


def test_opposite_sign_target_vanishes_at_one():
    # Den against the target of the other sign has a zero at X = 1; the
    # same-rank same-sign value stays positive
    q = 3
    for rank in (1, 2):
        for sym in enumerate_genus_symbols(rank, 0, 2):
            chi = sym.chi(q)
            assert den_poly(rank, -chi, sym, q)(1) == 0
            assert den_poly(rank, chi, sym, q)(1) > 0


def test_pden_piece_reassembles_poly():
    q = 3
    for text in ("0^2+", "0^1+,2^1+", "2^2-", "1H^1"):
        sym = GenusSymbol.parse(text)
        for eps in (1, -1):
            whole = pden_poly(3, eps, sym, q)
            total = Poly([])
            for i in range(sym.rank + 1):
                total = total + pden_piece(3, eps, sym, i, q)
            assert total == whole


# ---------------------------------------------------------------------------
# normalized derivatives
# ---------------------------------------------------------------------------

def test_unimodular_self_density_closed_form_matches_polynomial():
    for q in (3, 5):
        for n in (1, 2, 3):
            for eps in (1, -1):
                sym = unimodular(n, -eps)
                assert den_poly(n, -eps, sym, q)(1) == \
                    unimodular_self_density(n, eps, q)


def test_den_prime_normalization():
    q = 3
    sym = GenusSymbol.parse("0^1+,2^1+")
    assert den_prime_raw(sym, q) == 12
    assert den_prime(sym, q) == Fraction(3, 2)
    assert den_prime(sym, q) == den_prime_raw(sym, q) / \
        unimodular_self_density(sym.rank, sym.chi(q), q)


def test_pden_prime_fixed_values():
    q = 3
    assert pden_prime("1H^1", q) == -2
    assert pden_prime("0^1+,2^1+", q) == 1


# ---------------------------------------------------------------------------
# primitive derived densities: closed form vs machine
# ---------------------------------------------------------------------------

def test_pdden_fixed_values():
    q = 3
    assert pdden_closed("1H^1", q) == -2
    assert pdden_closed("0^1+,2^1+", q) == 1
    assert pdden_closed("-1H^1", q) == 0       # not integral
    assert pdden_closed("0^2+", q) == 0        # type 0, even rank
    assert pdden_closed("0^3+", q) == 1        # type 0, odd rank


def test_pdden_closed_matches_machine_small():
    q = 3
    for rank in (1, 2):
        for sym in enumerate_genus_symbols(rank, -1, 2):
            assert pdden_closed(sym, q) == pdden_machine(sym, q), str(sym)


def test_pdden_sign_pattern_for_two_positive_invariants():
    # type 2: (1 - chi(L) q) at q = 3 gives -2 for chi = +1 and 4 for
    # chi = -1
    q = 3
    for text, expected in (("1H^1", -2), ("2^2+", -2), ("2^2-", 4)):
        assert pdden_closed(text, q) == expected


# ---------------------------------------------------------------------------
# derived densities
# ---------------------------------------------------------------------------

def test_dden_parity_on_unimodular():
    q = 3
    for n in range(1, 5):
        assert dden(unimodular(n, 1), q) == n % 2


def test_dden_fixed_values():
    q = 3
    assert dden("0^1+,2^1+", q) == 1
    assert dden("0^2+,2^2+", q) == -4


def test_dden_returns_plain_int():
    q = 3
    assert isinstance(dden("2^1+", q), int)


def test_den_t_counts_fixture():
    q = 3
    assert den_t_counts("0^1+,2^1+", q) == {2: 2}


# ---------------------------------------------------------------------------
# correction coefficients
# ---------------------------------------------------------------------------

def test_coefficient_fixed_table():
    assert coefficients_c(2, 1, 3) == {2: Fraction(-1, 4)}
    assert coefficients_c(3, 1, 3) == {2: Fraction(1, 12)}
    assert coefficients_c(4, 1, 3) == {2: Fraction(-1, 36),
                                       4: Fraction(1, 90)}
    assert coefficients_c(5, 1, 3) == {2: Fraction(1, 108),
                                       4: Fraction(-1, 810)}
    assert coefficients_c(4, 1, 5) == {2: Fraction(-1, 150),
                                       4: Fraction(1, 650)}
    assert coefficients_c(4, -1, 3) == {2: Fraction(-1, 36)}


def test_coefficient_keys_are_even_up_to_t_max():
    from herm_density.lattices import t_max
    for q in (3, 5):
        for n in range(2, 7):
            for eps in (1, -1):
                keys = sorted(coefficients_c(n, eps, q))
                assert keys == list(range(2, t_max(n, eps) + 1, 2))


# ---------------------------------------------------------------------------
# roundtrip and report
# ---------------------------------------------------------------------------

def test_pden_from_den_roundtrip_small():
    q = 3
    for text in ("0^2+", "0^1+,2^1+", "2^2-", "1H^1", "0^1-,1H^1"):
        assert pden_from_den_roundtrip(text, q, verbose=False)


def test_density_report_shape():
    rep = density_report("0^1+,2^1+", 3)
    assert rep["genus"] == "0^1+,2^1+"
    assert rep["q"] == 3
    assert rep["rank"] == 2
    assert rep["chi"] == 1
    assert rep["den_poly"] == ["1/1", "3/1", "-3/1", "-1/1"]
    assert rep["den_prime"] == "12/1"
    assert rep["den_prime_norm"] == "3/2"
    assert rep["den_t"] == {"2": 2}
    assert rep["c"] == {"2": "-1/4"}
    assert rep["dden"] == 1
    assert rep["pdden"] == "1/1"


def test_delta_odd():
    assert [delta_odd(n) for n in range(6)] == [0, 1, 0, 1, 0, 1]


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

_SYMBOLS_R2 = [str(s) for s in enumerate_genus_symbols(2, 0, 2)]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(_SYMBOLS_R2), st.sampled_from([1, -1]),
       st.integers(min_value=2, max_value=4))
def test_den_dominates_pden_coefficientwise_start(text, eps, m):
    # the class sum adds nonnegative overlattice contributions at X^0,
    # so both polynomials share the constant term
    q = 3
    d = den_poly(m, eps, text, q)
    p = pden_poly(m, eps, text, q)
    assert d.coeffs[0] == p.coeffs[0] == 1


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(_SYMBOLS_R2))
def test_roundtrip_property(text):
    assert pden_from_den_roundtrip(text, 3, verbose=False)
