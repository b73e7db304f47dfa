# tests/test_qcombo.py
import pytest

from herm_density.qcombo import (check_binomial_expansion,
                                 check_inverse_identity, check_pascal,
                                 check_q_binomial_theorem, check_vanishing,
                                 gl_order, q_binomial, triangular)

# ---------------------------------------------------------------------------
# fixed values
# ---------------------------------------------------------------------------

def test_q_binomial_small_values():
    # 1-dim subspaces of F_3^3: q^2 + q + 1
    assert q_binomial(3, 1, 3) == 13
    # 2-dim subspaces of F_2^4, counted by brute force offline
    assert q_binomial(4, 2, 2) == 35
    # out of range
    assert q_binomial(5, 7, 3) == 0
    assert q_binomial(5, -1, 3) == 0


def test_q_binomial_counts_subspaces():
    """binom(n, k)_q really counts k-dim subspaces of F_q^n.

    Brute force over all subsets of nonzero vectors is hopeless, so count
    echelon matrices instead: a k-dim subspace has a unique reduced echelon
    basis, and the number of free entries depends only on the pivot set.
    """
    import itertools
    for q in (2, 3):
        for n in range(5):
            for k in range(n + 1):
                total = 0
                for pivots in itertools.combinations(range(n), k):
                    free = 0
                    for r, piv in enumerate(pivots):
                        free += sum(1 for c in range(piv + 1, n)
                                    if c not in pivots)
                    total += q ** free
                assert q_binomial(n, k, q) == total


def test_gl_order_values():
    assert gl_order(0, 3) == 1
    assert gl_order(1, 3) == 2
    # invertible 2x2 matrices over F_3
    assert gl_order(2, 3) == 48
    # (q^n - 1)(q^n - q)...(q^n - q^(n-1))
    assert gl_order(3, 2) == (8 - 1) * (8 - 2) * (8 - 4)


def test_triangular():
    assert [triangular(i) for i in range(6)] == [0, 0, 1, 3, 6, 10]


# ---------------------------------------------------------------------------
# identity checkers, acceptance-scale sweep kept in test_acceptance
# ---------------------------------------------------------------------------

def test_identity_checkers_smoke():
    for q in (2, 3):
        for n in range(1, 6):
            assert check_q_binomial_theorem(n, q)
            assert check_vanishing(n, q)
            assert check_inverse_identity(n, q)
            assert check_pascal(n, q)


def test_binomial_expansion_checker_smoke():
    for n in range(1, 6):
        for t in range(n + 1):
            for i in range(t + 1):
                assert check_binomial_expansion(n, t, i, 3)


def test_pascal_explicit():
    # binom(n, k)_q = binom(n-1, k-1)_q + q^k binom(n-1, k)_q
    for q in (2, 3, 5):
        for n in range(1, 8):
            for k in range(1, n):
                assert q_binomial(n, k, q) == (q_binomial(n - 1, k - 1, q)
                                               + q ** k * q_binomial(n - 1, k, q))


def test_symmetry():
    for q in (2, 3, 4):
        for n in range(8):
            for k in range(n + 1):
                assert q_binomial(n, k, q) == q_binomial(n, n - k, q)


# ---------------------------------------------------------------------------
# property tests
# ---------------------------------------------------------------------------

hypothesis = pytest.importorskip("hypothesis")
from hypothesis import given, settings, strategies as st  # noqa: E402


@given(n=st.integers(0, 10), k=st.integers(0, 10), q=st.integers(2, 9))
@settings(max_examples=120, deadline=None)
def test_q_binomial_positive_in_range(n, k, q):
    value = q_binomial(n, k, q)
    if 0 <= k <= n:
        assert value >= 1
    else:
        assert value == 0


@given(n=st.integers(1, 8), q=st.integers(2, 9))
@settings(max_examples=80, deadline=None)
def test_gl_order_via_flags(n, q):
    # |GL_n| = (prod of (q^n - q^i)) and also q^T(n) * prod (q^i - 1)
    direct = 1
    for i in range(n):
        direct *= q ** n - q ** i
    assert gl_order(n, q) == direct
    shaped = q ** triangular(n)
    for i in range(1, n + 1):
        shaped *= q ** i - 1
    assert gl_order(n, q) == shaped
