import pytest
from hypothesis import given, settings, strategies as st

from nccapelli.errors import UsageError
from nccapelli.free_algebra import FreeAlgebra, fp_commutator, fp_mul, free_matrices

F = FreeAlgebra(["u", "v", "w"])
u, v, w = F.gens()


def test_product_is_concatenation():
    assert fp_mul(u, v) == F.word(["u", "v"])


def test_distributivity():
    assert fp_mul(u + v, w) == F.word("uw") + F.word("vw")


def test_freeness():
    assert fp_mul(u, v) != fp_mul(v, u)


def test_commutator_examples():
    assert not fp_commutator(u, u)
    assert fp_commutator(u, v) == u * v - v * u
    assert fp_commutator(u * v, w) == u * fp_commutator(v, w) + fp_commutator(u, w) * v


def test_unit_is_two_sided():
    assert F.one() * u == u * F.one() == u


def test_alphabet_mismatch():
    G = FreeAlgebra(["u"])
    with pytest.raises(UsageError):
        fp_mul(u, G.gen("u"))
    with pytest.raises(UsageError):
        F.gen("q")


def test_degree_cutoff():
    G = FreeAlgebra(["x"], max_degree=2)
    x = G.gen("x")
    assert not x * x * x
    assert (x * x).degree() == 2


def test_free_matrices_names():
    alg, mats = free_matrices({"U": (2, 2)})
    assert str(mats["U"][0][1]) == "U_12"


_words = st.lists(st.sampled_from("uvw"), max_size=3)
_elems = st.lists(st.tuples(_words, st.integers(-3, 3)), max_size=3).map(
    lambda ts: sum((F.word(wd) * c for wd, c in ts), F.zero())
)


@settings(max_examples=80, deadline=None)
@given(_elems, _elems, _elems)
def test_jacobi(p, q, r):
    c = fp_commutator
    assert not (c(p, c(q, r)) + c(r, c(p, q)) + c(q, c(r, p)))


@settings(max_examples=60, deadline=None)
@given(_elems, _elems, _elems)
def test_associativity(p, q, r):
    assert (p * q) * r == p * (q * r)
