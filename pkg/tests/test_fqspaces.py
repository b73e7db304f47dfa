# tests/test_fqspaces.py
import pytest

from herm_density.fqspaces import (FqQuadSpace, alpha, beta,
                                   brute_isometry_count, brute_subspace_count,
                                   check_alternating_isotropic_sum,
                                   check_binom_times_m_sum, check_flag_identity,
                                   check_grassmannian_completeness,
                                   check_isotropic_closed_form,
                                   check_m_product_split, check_quotient_ratios,
                                   classify_gram, delta_sign, gram_of,
                                   isometry_count, isotropic_subspace_count,
                                   legendre, smallest_nonresidue,
                                   subspace_count)

# ---------------------------------------------------------------------------
# ground layer: legendre symbol, nonresidues
# ---------------------------------------------------------------------------

def test_legendre_basic():
    assert legendre(1, 3) == 1
    assert legendre(2, 3) == -1
    assert legendre(4, 5) == 1
    assert legendre(0, 5) == 0
    squares = {x * x % 7 for x in range(1, 7)}
    for a in range(1, 7):
        assert legendre(a, 7) == (1 if a in squares else -1)


def test_smallest_nonresidue():
    assert smallest_nonresidue(3) == 2
    assert smallest_nonresidue(5) == 2
    assert smallest_nonresidue(7) == 3
    for q in (3, 5, 7, 11, 13):
        u = smallest_nonresidue(q)
        assert legendre(u, q) == -1


# ---------------------------------------------------------------------------
# embedding and subspace counts against brute force
# ---------------------------------------------------------------------------

def test_empty_space_embeds_once():
    empty = FqQuadSpace(0, 0, 1)
    for n in range(4):
        for eps in (1, -1) if n else (1,):
            v = FqQuadSpace.nondegenerate(n, eps)
            assert isometry_count(empty, v, 3) == 1
            assert subspace_count(empty, v, 3) == 1


def test_isotropic_line_counts():
    # hyperbolic plane has 2 isotropic lines, anisotropic plane none
    line = FqQuadSpace(1, 0, 1)
    assert subspace_count(line, FqQuadSpace.nondegenerate(2, 1), 3) == 2
    assert subspace_count(line, FqQuadSpace.nondegenerate(2, -1), 3) == 0
    # nonzero isotropic vectors of the split plane: 2(q-1)
    assert isometry_count(line, FqQuadSpace.nondegenerate(2, 1), 3) == 4


def test_orthogonal_group_orders():
    # |O(U)| = isometry_count(U, U)
    assert isometry_count(FqQuadSpace.nondegenerate(2, 1),
                          FqQuadSpace.nondegenerate(2, 1), 3) == 4
    # whole space as a subspace of itself
    assert subspace_count(FqQuadSpace.nondegenerate(2, 1),
                          FqQuadSpace.nondegenerate(2, 1), 5) == 1


def test_counts_match_brute_force_dims_le_3():
    q = 3
    for n in range(0, 4):
        for eps in (1, -1) if n else (1,):
            v = FqQuadSpace.nondegenerate(n, eps)
            for j in range(n + 1):
                for k in range(n - j + 1):
                    for eps2 in ((1,) if k == 0 else (1, -1)):
                        u = FqQuadSpace(j, k, eps2)
                        assert (isometry_count(u, v, q)
                                == brute_isometry_count(u, v, q))
                        assert (subspace_count(u, v, q)
                                == brute_subspace_count(u, v, q))


def test_classify_gram_round_trip():
    q = 3
    for n in range(1, 4):
        for eps in (1, -1):
            space = FqQuadSpace.nondegenerate(n, eps)
            assert classify_gram(gram_of(space, q), q) == space


# ---------------------------------------------------------------------------
# closed forms and degenerate conventions
# ---------------------------------------------------------------------------

def test_isotropic_subspace_count_closed_form():
    for q in (3, 5):
        for n in range(0, 5):
            for eps in (1, -1) if n else (1,):
                for j in range(0, n + 1):
                    assert check_isotropic_closed_form(j, n, eps, q)


def test_isotropic_count_empty_space():
    # the empty space has exactly one 0-dim subspace whatever the sign label
    assert isotropic_subspace_count(0, 0, 1, 3) == 1
    assert isotropic_subspace_count(0, 0, -1, 3) == 1
    assert isotropic_subspace_count(1, 0, -1, 3) == 0


def test_isotropic_count_overflow_is_zero():
    # no isotropic j-spaces above the Witt index
    assert isotropic_subspace_count(2, 2, 1, 3) == 0
    assert isotropic_subspace_count(1, 2, -1, 3) == 0
    assert isotropic_subspace_count(3, 4, -1, 3) == 0


def test_alpha_beta():
    assert alpha(0, 3) == 1 and beta(0, 1) == 1
    # rank 3: alpha = q, beta = (-1)^((n-1)/2)
    assert alpha(3, 3) == 3 and beta(3, -1) == -1
    # checksum: sum_j (-1)^j q^(j(j-1)/2) m(0_j, U_3^eps) = alpha * beta
    q = 3
    for eps in (1, -1):
        total = 0
        sign = 1
        for j in range(0, 4):
            total += sign * q ** (j * (j - 1) // 2) * isotropic_subspace_count(j, 3, eps, q)
            sign = -sign
        assert total == alpha(3, q) * beta(3, eps)


def test_delta_sign_values():
    assert delta_sign(4, 0, -1, 1) == -1
    assert delta_sign(4, 1, 1, -1) == 1
    assert delta_sign(5, 2, -1, -1) == 1


# ---------------------------------------------------------------------------
# identity checkers
# ---------------------------------------------------------------------------

def test_counting_identities_smoke():
    for q in (3, 5):
        for n in range(1, 5):
            for eps in (1, -1):
                assert check_alternating_isotropic_sum(n, eps, q)
                assert check_grassmannian_completeness(n, 1, eps, q)
                for r in range(n + 1):
                    assert check_binom_times_m_sum(n, r, eps, q)
                    for eps1 in (1, -1):
                        assert check_quotient_ratios(r, n, eps1, eps, q)


def test_m_product_split():
    for q in (3, 5):
        for n in range(1, 5):
            for eps in (1, -1):
                for j in range(n + 1):
                    for k in range(n - j + 1):
                        for eps2 in ((1,) if k == 0 else (1, -1)):
                            assert check_m_product_split(n, j, k, eps, eps2, q)


def test_flag_identity_including_rank_collisions():
    q = 3
    for n in range(0, 5):
        for eps in (1, -1) if n else (1,):
            for r in range(n + 1):
                for i in range(r + 1):
                    for dprime in (1, -1) if r else (1,):
                        for sigma in (1, -1) if i else (1,):
                            assert check_flag_identity(n, r, i, eps, dprime,
                                                       sigma, q)


def test_quotient_ratio_negative_exponent_is_exact():
    # the r > (n-1)/2 range exercises negative powers of q; the ratio has to
    # stay an exact rational, not a float
    assert check_quotient_ratios(2, 3, 1, 1, 3)
    assert check_quotient_ratios(3, 4, -1, 1, 5)


# ---------------------------------------------------------------------------
# property tests
# ---------------------------------------------------------------------------

hypothesis = pytest.importorskip("hypothesis")
from hypothesis import given, settings, strategies as st  # noqa: E402


@given(n=st.integers(1, 6), j=st.integers(0, 6), q=st.sampled_from([3, 5, 7]),
       eps=st.sampled_from([1, -1]))
@settings(max_examples=100, deadline=None)
def test_isotropic_counts_nonnegative(n, j, q, eps):
    assert isotropic_subspace_count(j, n, eps, q) >= 0


@given(n=st.integers(1, 4), q=st.sampled_from([3, 5]),
       eps=st.sampled_from([1, -1]))
@settings(max_examples=40, deadline=None)
def test_self_isometries_divide_embeddings(n, q, eps):
    # |O(U, V)| = m(U, V) * |O(U, U)|: embeddings fiber over subspaces
    v = FqQuadSpace.nondegenerate(n, eps)
    for j in range(n + 1):
        for k in range(n - j + 1):
            for eps2 in ((1,) if k == 0 else (1, -1)):
                u = FqQuadSpace(j, k, eps2)
                emb = isometry_count(u, v, q)
                sub = subspace_count(u, v, q)
                aut = isometry_count(u, u, q)
                assert emb == sub * aut
