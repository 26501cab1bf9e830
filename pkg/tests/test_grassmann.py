import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nccapelli.errors import DomainError, UsageError
from nccapelli.free_algebra import free_matrices
from nccapelli.grassmann import GrassmannAlgebra, berezin_integral, exp_even, gr_mul
from nccapelli.ncdet import NCMatrix, nc_det
from nccapelli.scalars import ZZ

G1, G2 = GrassmannAlgebra(1), GrassmannAlgebra(2)


def test_nilpotent():
    assert not gr_mul(G2.psi(0), G2.psi(0))


def test_anticommute():
    assert gr_mul(G2.psi(0), G2.psi(1)) == -gr_mul(G2.psi(1), G2.psi(0))


def test_even_pairs_commute():
    p = G2.psibar(0) * G2.psi(0)
    q = G2.psibar(1) * G2.psi(1)
    assert p * q == q * p


def test_mismatched_generators():
    with pytest.raises(UsageError):
        gr_mul(G1.psi(0), G2.psi(0))


def test_single_pair_convention():
    assert berezin_integral(1 + 7 * G1.psibar(0) * G1.psi(0)) == 7
    assert berezin_integral(G1.psi(0) * G1.psibar(0)) == -1


def test_two_by_two_determinant():
    M = [[1, 2], [3, 4]]
    assert berezin_integral(exp_even(G2.bilinear(M))) == -2


def test_missing_generator_integrates_to_zero():
    assert berezin_integral(G2.psibar(0) * G2.psi(0)) == 0
    assert berezin_integral(G2.one()) == 0


def test_exp_examples():
    assert exp_even(G2.zero()) == G2.one()
    e = G1.psibar(0) * G1.psi(0)
    assert exp_even(e) == 1 + e
    b = G2.bilinear([[1, 2], [3, 4]])
    assert exp_even(b) == 1 + b + (b * b).scale(Fraction(1, 2))


def test_exp_rejections():
    with pytest.raises(DomainError):
        exp_even(G2.one() + G2.bilinear([[1, 0], [0, 1]]))
    with pytest.raises(DomainError):
        exp_even(G2.psi(0))
    with pytest.raises(DomainError):
        exp_even(GrassmannAlgebra(1, ZZ).bilinear([[1]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10**6))
def test_integral_is_determinant(n, seed):
    rng = random.Random(seed)
    M = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    expected = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in M]).det()
    got = berezin_integral(exp_even(GrassmannAlgebra(n).bilinear(M)))
    assert got == Fraction(str(expected))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_free_generators_give_symmetric_determinant(n):
    alg, mats = free_matrices({"M": (n, n)})
    M = NCMatrix(mats["M"], alg)
    G = GrassmannAlgebra(n, alg)
    assert berezin_integral(exp_even(G.bilinear(M))) == nc_det("sym", M)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ordered_products_give_column_and_row_determinants(n):
    alg, mats = free_matrices({"M": (n, n)})
    M = NCMatrix(mats["M"], alg)
    H = GrassmannAlgebra(n, alg, barred=False)
    col, row = H.one(), H.one()
    for j in range(n):
        col = col * sum((H.psi(i) * M[i, j] for i in range(n)), H.zero())
        row = row * sum((H.psi(i) * M[j, i] for i in range(n)), H.zero())
    assert berezin_integral(col) == nc_det("col", M)
    assert berezin_integral(row) == nc_det("row", M)
