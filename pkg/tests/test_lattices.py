# tests/test_lattices.py
import itertools

import pytest

from herm_density.felements import FElement
from herm_density.lattices import (AmbientLattice, Block, GenusSymbol,
                                   check_mu_identities, enumerate_genus_symbols,
                                   genus_from_gram, hermite_normal_form,
                                   hyperbolic_planes, lambda_sharp, mu_counts,
                                   overlattice_count, overlattices,
                                   projective_lines, sublattices_in_pi_inverse,
                                   t_max, unimodular)

# ---------------------------------------------------------------------------
# genus symbol grammar and invariants
# ---------------------------------------------------------------------------

def test_parse_and_format_round_trip():
    for text in ("0^3+", "0^2+,2^1-", "-1H^1", "1H^1,2^1-", "-2^1-,0^2+",
                 "1H^2", "0^1+,1H^1,2^1+"):
        symbol = GenusSymbol.parse(text)
        assert str(symbol) == text
        assert GenusSymbol.parse(str(symbol)) == symbol


def test_parse_rejects_garbage():
    for bad in ("", "0^2", "1^1+", "0H^1", "2^0+", "xyz"):
        with pytest.raises((ValueError, IndexError)):
            GenusSymbol.parse(bad)


def test_merge_same_odd_scale():
    a = GenusSymbol([Block(1, 2, None), Block(1, 2, None)])
    assert a == hyperbolic_planes(1, 2)


def test_merge_same_even_scale_collision_raises():
    with pytest.raises(ValueError):
        GenusSymbol([Block(0, 1, 1), Block(0, 1, -1)])


def test_invariants_type_val():
    s = GenusSymbol.parse("0^2+,2^1-")
    assert s.invariants() == (0, 0, 2)
    assert s.rank == 3
    assert s.val == 2
    assert s.type_t == 1
    assert s.is_integral()
    assert not GenusSymbol.parse("-1H^1").is_integral()


def test_dual_involution_and_fixed_points():
    for text in ("0^3+", "0^2-", "1H^1", "0^1+,2^1-", "-2^1+"):
        s = GenusSymbol.parse(text)
        assert s.dual().dual() == s
    # unimodular lattices are self-dual
    for n in (1, 2, 3):
        for eps in (1, -1):
            s = unimodular(n, eps)
            assert s.dual() == s
    # vertex lattice duality: dual of 0^(n-t)+,1H^(t/2) is -1H^(t/2),0^(n-t)+
    s = GenusSymbol([Block(0, 2, 1), Block(1, 2, None)])
    assert s.dual() == GenusSymbol([Block(-1, 2, None), Block(0, 2, 1)])


def test_t_max_table():
    assert t_max(4, 1) == 4
    assert t_max(5, 1) == 4 and t_max(5, -1) == 4
    assert t_max(4, -1) == 2


def test_lambda_sharp_shapes():
    assert lambda_sharp(3, 0, 1) == unimodular(3, 1)
    s = lambda_sharp(4, 2, -1)
    assert s.invariants() == (-1, -1, 0, 0)
    with pytest.raises(ValueError):
        lambda_sharp(4, 4, -1)
    with pytest.raises(ValueError):
        lambda_sharp(3, 3, 1)


def test_chi_multiplicativity():
    # chi(L perp L') = chi(L) chi(L') legendre(-1)^(n n')
    from herm_density.fqspaces import legendre
    q = 3
    pool = [GenusSymbol.parse(t) for t in ("0^1+", "0^1-", "0^2+", "1H^1",
                                           "2^1-", "-1H^1")]
    for a, b in itertools.product(pool, pool):
        try:
            joint = GenusSymbol(list(a.blocks) + list(b.blocks))
        except ValueError:
            continue  # same even scale with clashing signs has no merge
        expect = a.chi(q) * b.chi(q) * legendre(-1, q) ** (a.rank * b.rank)
        assert joint.chi(q) == expect


def test_chi_of_hyperbolic_plane_is_plus():
    for q in (3, 5, 7):
        assert GenusSymbol.parse("-1H^1").chi(q) == 1
        assert GenusSymbol.parse("1H^1").chi(q) == 1


# ---------------------------------------------------------------------------
# gram realization and genus extraction
# ---------------------------------------------------------------------------

def test_gram_genus_round_trip_rank_le_3():
    for q in (3, 5):
        for rank in (1, 2, 3):
            for symbol in enumerate_genus_symbols(rank, -2, 2):
                assert genus_from_gram(symbol.gram(q), q) == symbol


def test_genus_from_scrambled_basis():
    # change of basis must not change the genus
    q = 3
    symbol = GenusSymbol.parse("0^2+,2^1-")
    g = symbol.gram(q)
    lat = AmbientLattice(g)
    # mix basis vectors: b0 += pi * b2, b1 += b0
    cols = [col[:] for col in lat.basis_cols]
    pi = FElement.pi(q)
    cols[0] = [x + pi * y for x, y in zip(cols[0], cols[2])]
    cols[1] = [x + y for x, y in zip(cols[1], cols[0])]
    mixed = AmbientLattice(g, [[cols[c][r] for c in range(3)] for r in range(3)])
    assert mixed.genus() == symbol
    assert mixed.key() == lat.key()


def test_hermite_normal_form_canonical():
    # two generating sets of the same module get the same canonical columns
    q = 3
    one = FElement.one(q)
    z = FElement.zero(q)
    pi = FElement.pi(q)
    cols_a = [[one, z], [pi, one]]
    cols_b = [[one, pi + pi], [pi, one + pi * pi]]
    # span check: cols_b = cols_a * unimodular matrix over O_F
    hnf_a = hermite_normal_form(cols_a, q)
    hnf_b = hermite_normal_form(cols_b, q)
    assert hnf_a == hnf_b


def test_projective_lines_count():
    for q in (2, 3):
        for n in (1, 2, 3, 4):
            lines = list(projective_lines(n, q))
            assert len(lines) == (q ** n - 1) // (q - 1)
            assert len(set(lines)) == len(lines)


# ---------------------------------------------------------------------------
# overlattices
# ---------------------------------------------------------------------------

def test_unimodular_is_maximal_integral():
    q = 3
    for n in (1, 2, 3):
        for eps in (1, -1):
            over = overlattices(unimodular(n, eps), q, 0)
            assert over == [(0, unimodular(n, eps))]


def test_pi0_line_has_unique_unimodular_overlattice():
    # <u pi0> has exactly one unimodular overlattice, <pi^(-1) x>; its norm
    # is u pi0 / (pi conj(pi)) = -u, so the sign twists by legendre(-1)
    from herm_density.fqspaces import legendre
    for q in (3, 5):
        for sign in (1, -1):
            symbol = GenusSymbol([Block(2, 1, sign)])
            flipped = sign * legendre(-1, q)
            assert overlattice_count(symbol, unimodular(1, flipped), q) == 1
            assert overlattice_count(symbol, unimodular(1, -flipped), q) == 0
            over = overlattices(symbol, q, 0)
            assert sorted(ell for ell, _ in over) == [0, 1]


def test_overlattice_chain_of_hyperbolic():
    # 1H^1 has itself, q+1 unimodular lattices in between (the isotropic
    # lines of the reduction), and at the bound -1 both the full enlargement
    # pi^-1 L and q+1 cyclic lattices L + O pi^-2 v with val(v, v) >= 4,
    # all of genus -1H^1
    q = 3
    over = overlattices(GenusSymbol.parse("1H^1"), q, -1)
    by_ell = {}
    for ell, sym in over:
        by_ell.setdefault(ell, []).append(str(sym))
    assert by_ell[0] == ["1H^1"]
    assert len(by_ell[1]) == q + 1
    assert set(by_ell[1]) == {"0^2+"}
    assert len(by_ell[2]) == q + 2
    assert set(by_ell[2]) == {"-1H^1"}


def test_index_length_consistency():
    q = 3
    symbol = GenusSymbol.parse("2^2+")
    for ell, over in overlattices(symbol, q, -1):
        assert (symbol.val - over.val) == 2 * ell
        assert ell >= 0


def test_sublattices_in_pi_inverse():
    q = 3
    symbol = unimodular(2, 1)
    subs = sublattices_in_pi_inverse(symbol, q)
    # dimensions 0..2 of subspaces of L/piL, counted by q-binomials
    from herm_density.qcombo import q_binomial
    for dim in (0, 1, 2):
        count = sum(1 for d, _ in subs if d == dim)
        assert count == q_binomial(2, dim, q)
    # dim 0 gives L back, dim n gives pi^(-1) L
    assert [str(s) for d, s in subs if d == 0] == ["0^2+"]
    assert [str(s) for d, s in subs if d == 2] == ["-2^2+"]


def test_enumerate_genus_symbols_counts():
    # closed count: symbols of rank r with scales in a 7-element window
    got = [sum(1 for _ in enumerate_genus_symbols(r, -2, 4)) for r in (1, 2, 3, 4)]
    assert got == [8, 35, 112, 294]


def test_enumerate_genus_symbols_distinct():
    seen = set()
    for s in enumerate_genus_symbols(3, -1, 2):
        key = str(s)
        assert key not in seen
        seen.add(key)
        assert s.rank == 3


# ---------------------------------------------------------------------------
# mu stratification
# ---------------------------------------------------------------------------

def test_mu_counts_fixed_values():
    q = 3
    mu = mu_counts(GenusSymbol.parse("1H^1,2^1-"), q)
    assert (mu["mu_plus"], mu["mu_zero"], mu["mu_minus"]) == (1, 2, 24)
    mu = mu_counts(GenusSymbol.parse("1H^1"), q)
    assert (mu["mu_plus"], mu["mu_zero"], mu["mu_minus"]) == (1, 0, 8)
    # t even split case: both refined strata present
    mu = mu_counts(GenusSymbol.parse("2^2-"), q)
    assert mu["mu_zero_plus"] == mu["mu_zero_minus"] == 4
    assert mu["mu_plus"] == 1 and mu["mu_minus"] == 0


def test_mu_total_scales_with_rank():
    # the counted cosets (norm valuation bounded below) total q^rank times
    # the deep stratum, independent of the invariants
    q = 3
    for text in ("2^1+", "2^1-", "1H^1", "2^2+", "4^1-"):
        s = GenusSymbol.parse(text)
        mu = mu_counts(s, q)
        total = mu["mu_plus"] + mu["mu_zero"] + mu["mu_minus"]
        assert total == q ** s.rank * mu["mu_plus"]


def test_mu_requires_full_type():
    with pytest.raises(ValueError):
        mu_counts(GenusSymbol.parse("0^1+,2^1+"), 3)


def test_mu_identities_small_sweep():
    q = 3
    for text in ("2^1+", "2^1-", "1H^1", "2^2+", "2^2-", "1H^1,2^1+",
                 "1H^1,2^1-", "4^1+"):
        assert check_mu_identities(GenusSymbol.parse(text), q)


# ---------------------------------------------------------------------------
# property tests
# ---------------------------------------------------------------------------

hypothesis = pytest.importorskip("hypothesis")
from hypothesis import given, settings, strategies as st  # noqa: E402

_SYMBOLS = ([s for r in (1, 2, 3) for s in enumerate_genus_symbols(r, -2, 2)])


@given(symbol=st.sampled_from(_SYMBOLS))
@settings(max_examples=60, deadline=None)
def test_dual_negates_invariants(symbol):
    assert symbol.dual().invariants() == tuple(
        sorted(-a for a in symbol.invariants()))


@given(symbol=st.sampled_from(_SYMBOLS), q=st.sampled_from([3, 5]))
@settings(max_examples=60, deadline=None)
def test_gram_realizes_symbol(symbol, q):
    assert genus_from_gram(symbol.gram(q), q) == symbol
    lat = AmbientLattice.from_symbol(symbol, q)
    assert lat.genus() == symbol
    assert lat.val() == symbol.val
    assert lat.invariants() == tuple(sorted(symbol.invariants()))
