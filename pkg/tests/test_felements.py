# tests/test_felements.py
from fractions import Fraction

import pytest

from herm_density.felements import (FElement, INF, fundamental_invariants,
                                    gram_matrix, is_hermitian, mat_det,
                                    mat_identity, mat_inverse, mat_mul,
                                    unit_part_mod_p, val_p)

# ---------------------------------------------------------------------------
# scalar layer
# ---------------------------------------------------------------------------

def test_val_p():
    assert val_p(Fraction(9, 2), 3) == 2
    assert val_p(Fraction(1, 27), 3) == -3
    assert val_p(Fraction(10), 5) == 1
    assert val_p(Fraction(0), 3) == INF


def test_unit_part_mod_p():
    # 9/2 = 3^2 * (1/2) and 1/2 = 2 mod 3
    assert unit_part_mod_p(Fraction(9, 2), 3) == 2
    assert unit_part_mod_p(Fraction(1, 3), 3) == 1
    assert unit_part_mod_p(Fraction(-5, 7), 3) == (-5 * pow(7, -1, 3)) % 3
    with pytest.raises(ValueError):
        unit_part_mod_p(Fraction(0), 3)


# ---------------------------------------------------------------------------
# field arithmetic in F = Q(sqrt(p))
# ---------------------------------------------------------------------------

def test_basic_arithmetic():
    p = 3
    x = FElement.of(1, 2, p)       # 1 + 2 pi
    y = FElement.of(0, 1, p)       # pi
    assert x + y == FElement.of(1, 3, p)
    assert x * y == FElement.of(6, 1, p)        # (1 + 2pi) pi = 2p + pi
    assert x.conj() == FElement.of(1, -2, p)
    assert x.norm() == 1 - 3 * 4                # a^2 - p b^2
    assert x.trace() == 2
    assert (x * x.inverse()) == FElement.one(p)


def test_scalar_multiplication_accepts_rationals():
    p = 5
    x = FElement.of(Fraction(1, 2), 3, p)
    assert x * 2 == FElement.of(1, 6, p)
    assert 2 * x == x * 2
    assert x * Fraction(1, 3) == FElement.of(Fraction(1, 6), 1, p)


def test_pi_valuation():
    p = 3
    assert FElement.of(1, 0, p).val() == 0
    assert FElement.of(0, 1, p).val() == 1          # pi
    assert FElement.of(3, 0, p).val() == 2          # pi0 = pi^2
    assert FElement.of(0, 3, p).val() == 3
    assert FElement.of(Fraction(1, 3), 0, p).val() == -2
    assert FElement.of(0, Fraction(1, 3), p).val() == -1   # pi^(-1)
    assert FElement.of(3, 1, p).val() == 1          # min of 2 and 1
    assert FElement.zero(p).val() == INF


def test_pi_power():
    p = 3
    for e in range(-5, 6):
        x = FElement.pi_power(e, p)
        assert x.val() == e
        assert (x * FElement.pi_power(-e, p)) == FElement.one(p)


def test_conjugation_is_field_automorphism():
    p = 3
    x = FElement.of(Fraction(2, 3), 5, p)
    y = FElement.of(-1, Fraction(1, 2), p)
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).conj() == x.conj() + y.conj()
    assert x.conj().conj() == x


def test_mixed_prime_rejected():
    with pytest.raises(ValueError):
        FElement.one(3) + FElement.one(5)


# ---------------------------------------------------------------------------
# matrix layer
# ---------------------------------------------------------------------------

def _h_plane(scale_p, p):
    # [[0, pi^s], [conj(pi^s)... with the (-pi)^s convention]]
    up = FElement.pi_power(scale_p, p)
    lo = up.conj() if scale_p % 2 == 0 else -up.conj()
    # for odd s, (-pi)^s = -pi^s; conj(pi^s) = -pi^s as well, so lo = up.conj()
    lo = FElement.pi_power(scale_p, p)
    if scale_p % 2:
        lo = -lo
    z = FElement.zero(p)
    return [[z, up], [lo, z]]


def test_mat_inverse_and_det():
    p = 3
    g = _h_plane(-1, p)
    assert is_hermitian(g)
    inv = mat_inverse(g)
    assert mat_mul(g, inv) == mat_identity(2, p)
    d = mat_det(g)
    assert d.val() == -2


def test_gram_matrix_sesquilinearity():
    # scaling a basis column by pi multiplies its diagonal Gram entry by
    # pi * conj(pi) = -pi0 and keeps hermitian symmetry
    p = 3
    g = [[FElement.one(p), FElement.zero(p)],
         [FElement.zero(p), FElement.of(2, 0, p)]]
    basis = [[FElement.pi(p), FElement.zero(p)],
             [FElement.zero(p), FElement.one(p)]]
    gram = gram_matrix(basis, g)
    assert gram[0][0] == FElement.of(-3, 0, p)
    assert gram[1][1] == FElement.of(2, 0, p)
    assert is_hermitian(gram)


def test_fundamental_invariants_fixed_points():
    p = 3
    one = [[FElement.one(p)]]
    assert fundamental_invariants(one) == (0,)
    assert fundamental_invariants(_h_plane(-1, p)) == (-1, -1)
    q5 = 5
    diag = [[FElement.zero(q5) for _ in range(3)] for _ in range(3)]
    diag[0][0] = FElement.one(q5)
    diag[1][1] = FElement.one(q5)
    diag[2][2] = FElement.of(3 * 5, 0, q5)
    assert fundamental_invariants(diag) == (0, 0, 2)


def test_fundamental_invariants_rejects_degenerate():
    p = 3
    z = FElement.zero(p)
    with pytest.raises(ValueError):
        fundamental_invariants([[FElement.one(p), z], [z, z]])
