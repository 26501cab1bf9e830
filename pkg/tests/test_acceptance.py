"""Acceptance criteria 1-10, each printing one PASS/FAIL line."""
import json
import subprocess
import sys
import time
from fractions import Fraction
from itertools import product

import pytest

from nccapelli.identities import (
    FIGURE_PATH,
    oscillator_rhs,
    realize_capelli,
    realize_weyl_example,
    verify_berezin,
    verify_cbh,
    verify_direct_grassmann,
    verify_grassmann_rep,
    verify_holomorphic_coldet,
    verify_oracles,
    verify_oscillator_rep,
    verify_substitution,
    lukasiewicz_sweep,
)
from nccapelli.lukasiewicz import c_formula, count_excursions_brute, enumerate_excursions, recursion_coefficient
from nccapelli.ncdet import NCMatrix, cauchy_binet_lhs, nc_det

WEYL_GRID = [(2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 3, 1), (3, 4, 2)]


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_capelli(report):
    t0 = time.perf_counter()
    bad = []
    for n in (1, 2, 3):
        r = realize_capelli(n)
        W = r.ring
        xy = r.X @ r.Y
        down = NCMatrix.diag(list(range(n - 1, -1, -1)), W)
        up = NCMatrix.diag(list(range(n)), W)
        if cauchy_binet_lhs("col", r.X, r.Y) != nc_det("col", xy + down):
            bad.append(f"col n={n}")
        if cauchy_binet_lhs("row", r.X, r.Y) != nc_det("row", xy + up):
            bad.append(f"row n={n}")
    elapsed = time.perf_counter() - t0
    report(1, not bad and elapsed < 10,
           f"Capelli col/row identities for n=1..3 exact ({elapsed:.1f}s){' failures: ' + str(bad) if bad else ''}")


@pytest.fixture(scope="module")
def weyl_grid():
    return {dims: realize_weyl_example(*dims) for dims in WEYL_GRID}


@pytest.fixture(scope="module")
def oscillator_results(weyl_grid):
    t0 = time.perf_counter()
    out = {(dims, v): verify_oscillator_rep(r, v) for dims, r in weyl_grid.items() for v in ("col", "row")}
    return out, time.perf_counter() - t0


def test_criterion_2_oscillator(report, oscillator_results):
    results, elapsed = oscillator_results
    bad = [k for k, r in results.items() if not r.passed]
    report(2, not bad and elapsed < 180,
           f"oscillator representation on {len(results)} grid cases ({elapsed:.1f}s){' failures: ' + str(bad) if bad else ''}")


def test_criterion_3_grassmann(report, weyl_grid, oscillator_results):
    osc, _ = oscillator_results
    t0 = time.perf_counter()
    bad = []
    for dims, r in weyl_grid.items():
        for v in ("col", "row"):
            res = verify_grassmann_rep(r, v)
            if not res.passed:
                bad.append((dims, v, res.first_discrepancy))
            elif res.rhs_value != osc[dims, v].rhs_value:
                bad.append((dims, v, "differs from the oscillator value"))
    elapsed = time.perf_counter() - t0
    report(3, not bad and elapsed < 180,
           f"Grassmann representation equals oscillator value on {2 * len(weyl_grid)} cases ({elapsed:.1f}s)"
           f"{' failures: ' + str(bad) if bad else ''}")


def test_criterion_4_paths(report):
    t0 = time.perf_counter()
    checked, problems = lukasiewicz_sweep(max_len=6, samples=1000, sample_lengths=(7, 8), seed=0)
    if c_formula(FIGURE_PATH) != 36 or recursion_coefficient(FIGURE_PATH) != 36:
        problems.append("figure path weight is not 36")
    counts = [len(enumerate_excursions(n)) for n in range(1, 9)]
    if counts != [count_excursions_brute(n) for n in range(1, 9)] or counts[:3] != [1, 2, 5]:
        problems.append(f"excursion counts {counts}")
    elapsed = time.perf_counter() - t0
    report(4, not problems and elapsed < 60,
           f"four-way weight agreement on {checked} sequences, figure path 36, counts {counts} ({elapsed:.1f}s)"
           f"{' problems: ' + str(problems[:3]) if problems else ''}")


def test_criterion_5_substitution(report):
    bad = []
    runs = 0
    for n, variant in product((1, 2, 3), ("col", "row")):
        runs += 1
        if not verify_substitution("prop_old", n=n, variant=variant).passed:
            bad.append(("prop_old", n, variant))
    fs = ((1, -1), (1, -1, Fraction(1, 2)))
    for n, k, f, s in product((1, 2, 3), (0, 1, 2), fs, (0, 1, 2, "symbolic")):
        runs += 1
        if not verify_substitution("multilin", n=n, k=k, f=f, s=s).passed:
            bad.append(("multilin", n, k, f, s))
    for h, m, f in product(range(4), range(4), fs):
        runs += 1
        if not verify_substitution("lem_faf", h=h, m=m, f=f).passed:
            bad.append(("lem_faf", h, m, f))
    report(5, not bad, f"substitution identities exact on {runs} cases{' failures: ' + str(bad) if bad else ''}")


def test_criterion_6_cbh(report):
    t0 = time.perf_counter()
    bad = [f for f in ((0, 1), (0, 0, 1), (1, 1, 0, 1)) if not verify_cbh(f, K=6).passed]
    elapsed = time.perf_counter() - t0
    report(6, not bad and elapsed < 30,
           f"exponential splitting to order 6 with symbolic c for f = a, a^2, 1+a+a^3 ({elapsed:.1f}s)"
           f"{' failures: ' + str(bad) if bad else ''}")


def test_criterion_7_berezin(report):
    res = verify_berezin(samples=100, max_n=4, free_n=3, seed=0)
    report(7, res.passed, "Grassmann integrals match det, sym-det, col-det and row-det"
           + (f" ({res.first_discrepancy})" if not res.passed else ""))


def test_criterion_8_holomorphic_and_direct(report):
    bad = []
    for n in (1, 2, 3):
        r = realize_capelli(n)
        if not verify_holomorphic_coldet(r).passed:
            bad.append(("holomorphic", n))
        if not verify_direct_grassmann(r).passed:
            bad.append(("direct_grassmann", n))
    if not verify_holomorphic_coldet(realize_weyl_example(2, 3, 1)).passed:
        bad.append(("holomorphic", (2, 3, 1)))
    report(8, not bad, f"holomorphic and direct Grassmann forms exact{' failures: ' + str(bad) if bad else ''}")


def test_criterion_9_oracles(report):
    res = verify_oracles(fock_samples=1000, weyl_samples=500, seed=0)
    report(9, res.passed, "vacuum values on 1000 Fock words and Weyl action on 500 cases agree"
           + (f" ({res.first_discrepancy})" if not res.passed else ""))


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "nccapelli", *argv], capture_output=True, text=True, check=False)


def test_criterion_10_cli(report):
    problems = []
    t0 = time.perf_counter()
    first = _cli("suite", "--format", "json", "--no-timestamp")
    elapsed = time.perf_counter() - t0
    if first.returncode != 0:
        problems.append(f"suite exit code {first.returncode}")
    data = json.loads(first.stdout)
    if data["overall"] != "pass":
        problems.append("suite overall status is not pass")
    second = _cli("suite", "--format", "json", "--no-timestamp")
    if second.stdout != first.stdout:
        problems.append("suite JSON differs between runs")
    if _cli("verify", "oscillator", "--realization", "free").returncode != 1:
        problems.append("failing verification does not exit 1")
    if _cli("verify", "capelli", "--n", "99").returncode != 2:
        problems.append("usage error does not exit 2")
    report(10, not problems and elapsed < 600,
           f"suite of {len(data['results'])} checks passes in {elapsed:.0f}s, byte-identical JSON, exit codes 0/1/2"
           f"{' problems: ' + str(problems) if problems else ''}")
