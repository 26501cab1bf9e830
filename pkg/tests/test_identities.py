import json
from fractions import Fraction
from itertools import permutations

import pytest

from nccapelli.errors import UsageError
from nccapelli.ncdet import NCMatrix, cauchy_binet_lhs, nc_det, q_correction
from nccapelli.identities import (
    FIGURE_PATH,
    grassmann_rhs,
    lem_faf_value,
    multilin_sides,
    oscillator_rhs,
    quantum_cb_rhs,
    realize_capelli,
    realize_free,
    realize_weyl_example,
    resummation_check,
    verify_berezin,
    verify_cauchy_binet_quantum,
    verify_cbh,
    verify_coherence,
    verify_direct_grassmann,
    verify_grassmann_rep,
    verify_holomorphic_coldet,
    verify_lukasiewicz,
    verify_oracles,
    verify_oscillator_rep,
    verify_substitution,
    verify_support_lemmas,
)
from nccapelli.scalars import ParamRing
from nccapelli.series import binom_s


@pytest.fixture(scope="module")
def capelli2():
    return realize_capelli(2)


@pytest.fixture(scope="module")
def weyl231():
    return realize_weyl_example(2, 3, 1)


def test_single_variable_capelli():
    r = realize_capelli(1)
    W = r.ring
    assert cauchy_binet_lhs("col", r.X, r.Y) == W.z(0, 0) * W.d(0, 0)
    assert verify_cauchy_binet_quantum(r).passed


@pytest.mark.parametrize("variant", ["col", "row"])
def test_capelli_cauchy_binet(capelli2, variant):
    res = verify_cauchy_binet_quantum(capelli2, variant)
    assert res.passed and res.first_discrepancy is None
    assert res.lhs_terms == res.rhs_terms > 0


def test_capelli_identity_is_diagonal():
    r = realize_capelli(2)
    assert r.A == NCMatrix.identity(2, r.ring)


def test_b_not_identity_is_gated(weyl231):
    res = verify_cauchy_binet_quantum(weyl231)
    assert res.status == "fail"
    assert res.first_discrepancy.startswith("precondition: b_identity")


def test_free_realization_is_gated():
    res = verify_oscillator_rep(realize_free(2, 2))
    assert not res.passed
    assert "X_row_pc" in res.first_discrepancy


def test_weyl_example_shape_errors():
    with pytest.raises(UsageError):
        realize_weyl_example(3, 2, 1)
    with pytest.raises(UsageError):
        realize_weyl_example(2, 2, 0)
    with pytest.raises(UsageError):
        verify_cauchy_binet_quantum(realize_capelli(1), "diag")


def test_rank_one_b(weyl231):
    B = weyl231.B
    for i, j in permutations(range(3), 2):
        assert B[i, i] * B[j, j] == B[i, j] * B[j, i]
    assert weyl231.report().holds("xy_relation", "b_central")


def test_weyl_example_with_unit_flavors_is_capelli():
    r = realize_weyl_example(2, 2, 2, alpha=[[1, 0], [0, 1]], beta=[[1, 0], [0, 1]])
    c = realize_capelli(2)
    assert str(cauchy_binet_lhs("col", r.X, r.Y)) == str(cauchy_binet_lhs("col", c.X, c.Y))
    assert r.B == NCMatrix.identity(2, r.ring)
    assert verify_cauchy_binet_quantum(r).passed


@pytest.mark.parametrize("variant", ["col", "row"])
def test_oscillator_capelli(capelli2, variant):
    res = verify_oscillator_rep(capelli2, variant)
    assert res.passed
    assert res.rhs_value == quantum_cb_rhs(capelli2, variant)


@pytest.mark.parametrize("dims,variant", [((2, 3, 1), "col"), ((2, 3, 2), "row"), ((2, 2, 1), "col")])
def test_oscillator_weyl(dims, variant):
    assert verify_oscillator_rep(realize_weyl_example(*dims), variant).passed


def test_truncation_soundness(weyl231):
    base = oscillator_rhs(weyl231, "col")
    assert oscillator_rhs(weyl231, "col", trunc=3) == base
    assert oscillator_rhs(weyl231, "col", trunc=4) == base
    assert not verify_oscillator_rep(realize_capelli(2), "col", trunc=0).passed


def test_lhs_vanishes_when_flavors_are_few():
    r = realize_weyl_example(2, 3, 1)
    assert not cauchy_binet_lhs("col", r.X, r.Y)
    assert verify_oscillator_rep(r).lhs_terms == 0


@pytest.mark.parametrize("variant", ["col", "row"])
def test_grassmann_weyl(variant):
    r = realize_weyl_example(2, 3, 2)
    res = verify_grassmann_rep(r, variant)
    assert res.passed
    assert res.params["scope"] == "commutative Y"
    assert res.rhs_value == oscillator_rhs(r, variant)


def test_grassmann_capelli_matches_direct_form(capelli2):
    res = verify_grassmann_rep(capelli2)
    assert res.passed
    assert res.params["scope"] == "commutative Y"
    assert verify_direct_grassmann(capelli2).rhs_value == res.rhs_value


def test_grassmann_gate():
    res = verify_grassmann_rep(realize_free(2, 2))
    assert not res.passed and res.first_discrepancy.startswith("precondition")


@pytest.mark.parametrize("maker", [lambda: realize_capelli(1), lambda: realize_capelli(2),
                                   lambda: realize_weyl_example(2, 3, 1)])
def test_holomorphic(maker):
    assert verify_holomorphic_coldet(maker()).passed


def test_direct_grassmann(capelli2):
    assert verify_direct_grassmann(capelli2).passed
    assert resummation_check(5)
    assert not verify_direct_grassmann(realize_weyl_example(2, 3, 1)).passed


def test_support_lemmas():
    res = verify_support_lemmas(realize_capelli(3))
    assert res.passed and res.params["checks"] > 1
    assert verify_support_lemmas(realize_weyl_example(2, 3, 2)).passed


@pytest.mark.parametrize("maker", [lambda: realize_capelli(2), lambda: realize_weyl_example(2, 3, 2)])
def test_coherence(maker):
    res = verify_coherence(maker())
    assert res.passed
    assert len(res.params["representations"]) >= 3


def test_coherence_needs_two_representations():
    assert not verify_coherence(realize_free(2, 2)).passed


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("variant", ["col", "row"])
def test_prop_old(n, variant):
    assert verify_substitution("prop_old", n=n, variant=variant).passed


@pytest.mark.parametrize("s", [0, 1, 2, "symbolic"])
def test_multilin(s):
    assert verify_substitution("multilin", n=2, k=2, f=(1, -1, "1/2"), s=s).passed


def test_multilin_wrong_s_fails():
    lhs, rhs, _ = multilin_sides(2, 2, (1, -1), 1)
    lhs2, _, _ = multilin_sides(2, 2, (1, -1), 2)
    assert lhs == rhs
    assert lhs2 != rhs


def test_multilin_recovers_row_determinant():
    n = 2
    sign = {(0, 1): 1, (1, 0): -1}
    lhs, rhs, _ = multilin_sides(n, 1, (1, -1), 1, cols=n, coeffs=sign)
    alg = lhs.parent
    U = NCMatrix([[alg.gen(f"x0_{i + 1}{j + 1}") for j in range(n)] for i in range(n)], alg)
    V = NCMatrix([[alg.gen(f"x1_{i + 1}{j + 1}") for j in range(n)] for i in range(n)], alg)
    assert lhs == nc_det("row", U + q_correction("row", V))
    assert lhs == rhs


@pytest.mark.parametrize("h,m", [(0, 0), (1, 0), (2, 0), (2, 1), (1, 2)])
def test_lem_faf(h, m):
    P = ParamRing(["l", "s"])
    value = lem_faf_value(h, m, (1, -1), P)
    expected = binom_s(P.var("l"), h, P.var("s")) if m == 0 else 0
    assert value == P.coerce(expected)


def test_lem_faf_explicit():
    P = ParamRing(["l", "s"])
    l, s = P.var("l"), P.var("s")
    assert lem_faf_value(2, 0, (1, -1), P) == (l * l - l * s) * P.coerce(Fraction(1, 2))
    assert not lem_faf_value(2, 1, (1, -1), P)


def test_substitution_errors():
    with pytest.raises(UsageError):
        verify_substitution("nope")
    with pytest.raises(UsageError):
        verify_substitution("prop_old", n=4)


@pytest.mark.parametrize("f", [(0, 1), (0, 0, 1), (1, 1, 0, 1), (0,), (1,)])
def test_cbh(f):
    assert verify_cbh(f, K=5).passed


def test_cbh_numeric_c():
    assert verify_cbh((0, 1), K=6, c=1).passed
    assert verify_cbh((0, 0, 1), K=4, c="2/3").passed


def test_lukasiewicz_verifier():
    res = verify_lukasiewicz(max_len=4, samples=50, count_len=6)
    assert res.passed
    assert FIGURE_PATH == (-1, -1, 0, -1, 2, 0, -1, -1, 1, 2)


def test_calibration_verifiers():
    assert verify_berezin(samples=20, max_n=3, free_n=2).passed
    assert verify_oracles(fock_samples=100, weyl_samples=50).passed


def test_result_serialization(capelli2):
    res = verify_cauchy_binet_quantum(capelli2)
    d = res.as_dict(timing=False)
    assert d["elapsed_ms"] is None
    assert set(d) == {"identity", "params", "status", "lhs_terms", "rhs_terms",
                      "first_discrepancy", "elapsed_ms"}
    json.dumps(d)


def test_failure_reports_a_term():
    res = verify_oscillator_rep(realize_capelli(2), "col", trunc=0)
    assert res.status == "fail" and res.first_discrepancy
