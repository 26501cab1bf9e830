"""Concrete realizations and exact verifiers for the Capelli-type identities.

Every verifier returns a :class:`VerificationResult`.  A failed hypothesis or
a mismatch is reported as data; only malformed input raises.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import factorial, lcm

from .errors import UsageError
from .fock import (
    CoherentAlgebra,
    FockAlgebra,
    bra_apply,
    matrix_element,
    reduce_all_pairs,
    vacuum_expectation,
    word_element,
    word_matrix_element,
)
from .free_algebra import FreeAlgebra, free_matrices
from .grassmann import GrassmannAlgebra, berezin_integral, exp_even
from .lukasiewicz import (
    LukasPath,
    c_formula,
    count_excursions_brute,
    enumerate_excursions,
    fock_weight,
    holomorphic_weight,
    recursion_coefficient,
)
from .ncdet import (
    NCMatrix,
    Permutation,
    cauchy_binet_lhs,
    commutation_report,
    nc_det,
    permute,
    q_correction,
    weak_row_symmetric,
)
from .scalars import QQ, ParamRing, first_term, is_scalar, rational, term_count
from .series import TruncSeries, binom_s, cbh_rhs, chi_h_operator, g_from_f, ts_pow_param
from .weyl_algebra import WeylAlgebra, weyl_apply


# -- realizations -------------------------------------------------------------

@dataclass
class Realization:
    """Matrices ``X`` (n x m), ``Y`` (m x n), ``A`` (n x n), ``B`` (m x m) over one ring."""

    X: NCMatrix
    Y: NCMatrix
    A: NCMatrix
    B: NCMatrix
    provenance: str
    n: int
    m: int
    s_dim: int
    ring: object

    def params(self):
        return {"realization": self.provenance, "n": self.n, "m": self.m, "s_dim": self.s_dim}

    def report(self):
        return commutation_report(self.X, self.Y, self.A, self.B)


def _param_names(n, m, s_dim):
    alphas = [f"α_{j + 1}^{a + 1}" for j in range(m) for a in range(s_dim)]
    betas = [f"β_{k + 1}^{a + 1}" for k in range(m) for a in range(s_dim)]
    return alphas + betas


def realize_weyl_example(n, m, s_dim, alpha=None, beta=None):
    """``X_ij = sum_a z_i^a α_j^a``, ``Y_kl = sum_a β_k^a ∂_l^a``, ``A = I``, ``B = β αᵀ``.

    ``alpha`` and ``beta`` (``m x s_dim`` rational matrices) replace the symbolic
    parameters when given.
    """
    if min(n, m, s_dim) < 1:
        raise UsageError("n, m and s_dim must be positive")
    if n > m:
        raise UsageError(f"need n <= m, got n={n}, m={m}")
    if (alpha is None) != (beta is None):
        raise UsageError("give both alpha and beta, or neither")
    if alpha is None:
        P = ParamRing(_param_names(n, m, s_dim))
        al = [[P.var(f"α_{j + 1}^{a + 1}") for a in range(s_dim)] for j in range(m)]
        be = [[P.var(f"β_{k + 1}^{a + 1}") for a in range(s_dim)] for k in range(m)]
        coeff = P
    else:
        coeff = QQ
        al = [[rational(x) for x in row] for row in alpha]
        be = [[rational(x) for x in row] for row in beta]
        if len(al) != m or len(be) != m or any(len(r) != s_dim for r in al + be):
            raise UsageError("alpha and beta must be m x s_dim")
    W = WeylAlgebra(n, s_dim, coeff)

    def lin(coeffs, gen):
        out = W.zero()
        for a, c in enumerate(coeffs):
            out = out + gen(a) * c
        return out

    X = NCMatrix([[lin(al[j], lambda a, i=i: W.z(i, a)) for j in range(m)] for i in range(n)], W)
    Y = NCMatrix([[lin(be[k], lambda a, l=l: W.d(l, a)) for l in range(n)] for k in range(m)], W)
    A = NCMatrix.identity(n, W)
    B = NCMatrix(
        [[W.coerce(sum((be[k][a] * al[j][a] for a in range(s_dim)), coeff.zero())) for j in range(m)]
         for k in range(m)],
        W,
    )
    return Realization(X, Y, A, B, "weyl_example", n, m, s_dim, W)


def realize_capelli(n):
    """``X_ij = z_ij``-type positions and ``Y_kl = ∂`` so that ``XY = Zᵀ∂`` and ``A = B = I``.

    Weyl variable ``(i, a)`` plays the role of ``z_{a i}``.
    """
    if n < 1:
        raise UsageError("n must be positive")
    W = WeylAlgebra(n, n)
    X = NCMatrix([[W.z(i, j) for j in range(n)] for i in range(n)], W)
    Y = NCMatrix([[W.d(l, k) for l in range(n)] for k in range(n)], W)
    eye = NCMatrix.identity(n, W)
    return Realization(X, Y, eye, eye, "capelli", n, n, n, W)


def realize_free(n, m):
    """Free generators for X and Y with ``A = B = I``: satisfies no hypothesis."""
    if n > m or n < 1:
        raise UsageError(f"need 1 <= n <= m, got n={n}, m={m}")
    alg, mats = free_matrices({"X": (n, m), "Y": (m, n)})
    return Realization(
        NCMatrix(mats["X"], alg), NCMatrix(mats["Y"], alg),
        NCMatrix.identity(n, alg), NCMatrix.identity(m, alg), "free", n, m, 0, alg,
    )


# -- results ------------------------------------------------------------------

@dataclass
class VerificationResult:
    identity: str
    params: dict
    status: str
    lhs_terms: int = 0
    rhs_terms: int = 0
    first_discrepancy: str | None = None
    elapsed_ms: float | None = None
    lhs_value: object = field(default=None, repr=False, compare=False)
    rhs_value: object = field(default=None, repr=False, compare=False)

    @property
    def passed(self):
        return self.status == "pass"

    def as_dict(self, timing=True):
        return {
            "identity": self.identity,
            "params": self.params,
            "status": self.status,
            "lhs_terms": self.lhs_terms,
            "rhs_terms": self.rhs_terms,
            "first_discrepancy": self.first_discrepancy,
            "elapsed_ms": round(self.elapsed_ms, 3) if timing and self.elapsed_ms is not None else None,
        }


def _ms(t0):
    return (time.perf_counter() - t0) * 1000.0


def _compare(identity, params, lhs, rhs, t0, problems=()):
    """Build a result from a main comparison plus any side-check failures."""
    diff = lhs - rhs
    ok = not diff and not problems
    first = None
    if diff:
        first = first_term(diff)
    elif problems:
        first = problems[0]
    return VerificationResult(
        identity, params, "pass" if ok else "fail", term_count(lhs), term_count(rhs),
        first, _ms(t0), lhs, rhs,
    )


def _precondition_failure(identity, params, report, names, t0):
    bad = report.failures(*names)
    name, witness = next(iter(bad.items()))
    where = f" at {witness}" if witness else ""
    return VerificationResult(
        identity, params, "fail", 0, 0, f"precondition: {name} fails{where}", _ms(t0)
    )


def _gate(identity, params, r, names, t0):
    report = r.report()
    if report.holds(*names):
        return None
    return _precondition_failure(identity, params, report, names, t0)


def _check_variant(variant):
    if variant not in ("col", "row"):
        raise UsageError(f"variant must be 'col' or 'row', not {variant!r}")


# -- Cauchy-Binet with a quantum correction -----------------------------------

_CB_GATES = {"col": ("X_row_pc", "xy_relation", "b_identity"),
             "row": ("Y_col_pc", "xy_relation", "b_identity")}


def quantum_cb_rhs(r, variant):
    return nc_det(variant, r.X @ r.Y + q_correction(variant, r.A))


def verify_cauchy_binet_quantum(r, variant="col"):
    _check_variant(variant)
    t0 = time.perf_counter()
    params = dict(r.params(), variant=variant)
    fail = _gate("cauchy_binet", params, r, _CB_GATES[variant], t0)
    if fail:
        return fail
    return _compare("cauchy_binet", params, cauchy_binet_lhs(variant, r.X, r.Y),
                    quantum_cb_rhs(r, variant), t0)


# -- oscillator representation -------------------------------------------------

_OSC_GATES = {"col": ("X_row_pc", "xa", "xy_relation", "b_central"),
              "row": ("Y_col_pc", "ya", "xy_relation", "b_central")}


def _xbky(r, upto):
    """``[X B^k Y for k = 0..upto]``."""
    out = []
    XB = r.X
    for _ in range(upto + 1):
        out.append(XB @ r.Y)
        XB = XB @ r.B
    return out


def oscillator_matrix(r, variant, trunc=None):
    """``a A + X (1 - a† B)^-1 Y`` (col) or ``a† A + X (1 - a B)^-1 Y`` (row) over Fock(ring)."""
    _check_variant(variant)
    trunc = r.n if trunc is None else trunc
    F = FockAlgebra(r.ring)
    mats = _xbky(r, trunc)
    a_key, geo = ((0, 1), lambda k: (k, 0)) if variant == "col" else ((1, 0), lambda k: (0, k))
    rows = []
    for i in range(r.n):
        row = []
        for j in range(r.n):
            terms = {}
            if r.A[i, j]:
                terms[a_key] = r.A[i, j]
            for k, Mk in enumerate(mats):
                if Mk[i, j]:
                    terms[geo(k)] = terms.get(geo(k), r.ring.zero()) + Mk[i, j]
            row.append(F.element(terms))
        rows.append(row)
    return NCMatrix(rows, F)


def vacuum_det(variant, M, one=None):
    """``<0| det M |0>`` for a Fock matrix, pushing the bra through each ordered product.

    Partial products share prefixes and bra levels that can no longer return to
    the vacuum are dropped.
    """
    _check_variant(variant)
    n = M.nrows
    E = M.entries
    entry = (lambda pos, c: E[c][pos]) if variant == "col" else (lambda pos, c: E[pos][c])
    most = [max(entry(pos, c).creation_degree() for c in range(n)) for pos in range(n)]
    cap = [sum(most[pos + 1:]) for pos in range(n)]
    one = M.ring.coeff.one() if one is None else one
    total = None

    def walk(pos, used, state, sign):
        nonlocal total
        if pos == n:
            v = state.get(0)
            if v is not None:
                v = v if sign > 0 else -v
                total = v if total is None else total + v
            return
        inversions = 0
        for c in range(n - 1, -1, -1):
            if used >> c & 1:
                inversions += 1
                continue
            x = entry(pos, c)
            if not x:
                continue
            nxt = bra_apply(state, x, cap[pos])
            if nxt:
                walk(pos + 1, used | 1 << c, nxt, -sign if inversions % 2 else sign)

    walk(0, 0, {0: one}, 1)
    return M.ring.coeff.zero() if total is None else total


def oscillator_rhs(r, variant, trunc=None):
    return vacuum_det(variant, oscillator_matrix(r, variant, trunc))


def verify_oscillator_rep(r, variant="col", trunc=None):
    _check_variant(variant)
    t0 = time.perf_counter()
    trunc = r.n if trunc is None else trunc
    params = dict(r.params(), variant=variant, trunc=trunc)
    fail = _gate("oscillator", params, r, _OSC_GATES[variant], t0)
    if fail:
        return fail
    return _compare("oscillator", params, cauchy_binet_lhs(variant, r.X, r.Y),
                    oscillator_rhs(r, variant, trunc), t0)


# -- Grassmann representation --------------------------------------------------

_GR_GATES = {"col": ("X_row_pc", "Y_row_pc", "xa", "ya", "xy_relation", "b_central"),
             "row": ("X_col_pc", "Y_col_pc", "xa", "ya", "xy_relation", "b_central")}


def _berezin_exp(parts):
    """``∫ exp(sum_k parts[k] / (k+1))`` for even Grassmann elements without constant term.

    The exponent is rescaled to integer weights so that the coefficient
    arithmetic stays in integers until the single division at the end.
    """
    G = parts[0].parent
    n = G.ngens // 2
    L = lcm(*range(1, len(parts) + 1))
    e = G.zero()
    for k, part in enumerate(parts):
        e = e + part.scale(L // (k + 1))
    total = G.coeff.zero()
    power = G.one()
    for j in range(1, n + 1):
        power = power * e
        if not power:
            break
        top = berezin_integral(power)
        if top:
            total = total + top * Fraction(1, factorial(j) * L**j)
    return total


def grassmann_rhs(r, variant):
    """Berezin integral of ``exp(sum_k (ψ̄Aψ)^k/(k+1) (ψ̄XB^kYψ))`` (factors swapped for ``row``)."""
    G = GrassmannAlgebra(r.n, r.ring)
    pa = G.bilinear(r.A)
    parts = []
    apow = G.one()
    for Mk in _xbky(r, r.n - 1):
        pm = G.bilinear(Mk)
        parts.append(apow * pm if variant == "col" else pm * apow)
        apow = apow * pa
    return _berezin_exp(parts)


def verify_grassmann_rep(r, variant="col"):
    _check_variant(variant)
    t0 = time.perf_counter()
    params = dict(r.params(), variant=variant)
    report = r.report()
    params["scope"] = "commutative Y" if report["Y_commutative"] else "noncommutative Y"
    if not r.ring.has_rationals:
        return VerificationResult("grassmann", params, "fail", 0, 0,
                                  "precondition: ring lacks rationals", _ms(t0))
    if not report.holds(*_GR_GATES[variant]):
        return _precondition_failure("grassmann", params, report, _GR_GATES[variant], t0)
    return _compare("grassmann", params, cauchy_binet_lhs(variant, r.X, r.Y),
                    grassmann_rhs(r, variant), t0)


# -- holomorphic representation ------------------------------------------------

def holomorphic_rhs(r):
    """Moment-rule value of ``col-det [A_ij z_j + (X (1 - z̄_(j-1) B)^-1 Y)_ij]``."""
    n = r.n
    C = CoherentAlgebra(n, r.ring)
    mats = _xbky(r, n)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            col = j + 1
            x = C.z(col) * r.A[i, j] if r.A[i, j] else C.zero()
            zb = C.zbar(col - 1)
            zpow = C.one()
            for Mk in mats:
                if Mk[i, j]:
                    x = x + zpow * Mk[i, j]
                zpow = zpow * zb
                if not zpow:
                    break
            row.append(x)
        rows.append(row)
    return reduce_all_pairs(nc_det("col", NCMatrix(rows, C)))


def verify_holomorphic_coldet(r):
    t0 = time.perf_counter()
    params = r.params()
    fail = _gate("holomorphic", params, r, _OSC_GATES["col"], t0)
    if fail:
        return fail
    holo = holomorphic_rhs(r)
    fock = oscillator_rhs(r, "col")
    problems = []
    if holo != fock:
        problems.append("holomorphic value differs from the oscillator value: " + str(first_term(holo - fock)))
    return _compare("holomorphic", params, cauchy_binet_lhs("col", r.X, r.Y), holo, t0, problems)


# -- direct Grassmann form with B = I ------------------------------------------

def resummation_check(order=5):
    """``exp(t u sum_k (t v)^k/(k+1)) = sum_N t^N/N! (u+(N-1)v)...(u+v)u`` up to ``t^order``."""
    P = ParamRing(["u", "v", "t"])
    u, v, t = P.gens()
    inner = P.zero()
    for k in range(order):
        inner = inner + (t * v) ** k * Fraction(1, k + 1)
    x = (t * u * inner).truncate("t", order)
    lhs, power = P.one(), P.one()
    for j in range(1, order + 1):
        power = (power * x).truncate("t", order)
        lhs = lhs + power * Fraction(1, factorial(j))
    rhs = P.zero()
    for N in range(order + 1):
        prod_ = P.one()
        for j in range(N - 1, -1, -1):
            prod_ = prod_ * (u + v * j)
        rhs = rhs + t ** N * prod_ * Fraction(1, factorial(N))
    return lhs == rhs


def direct_grassmann_rhs(U, V, ring):
    n = U.nrows
    G = GrassmannAlgebra(n, ring)
    pu, pv = G.bilinear(U), G.bilinear(V)
    parts = []
    vpow = G.one()
    for _ in range(n):
        parts.append(vpow * pu)
        vpow = vpow * pv
    return _berezin_exp(parts)


def verify_direct_grassmann(r):
    t0 = time.perf_counter()
    params = r.params()
    fail = _gate("direct_grassmann", params, r, ("b_identity",), t0)
    if fail:
        return fail
    U, V = r.X @ r.Y, r.A
    G = GrassmannAlgebra(r.n, r.ring)
    pu, pv = G.bilinear(U), G.bilinear(V)
    if pu * pv - pv * pu:
        return VerificationResult("direct_grassmann", params, "fail", 0, 0,
                                  "precondition: bilinear forms of U and V do not commute", _ms(t0))
    lhs = nc_det("col", U + q_correction("col", V))
    for tau in Permutation.all(r.n):
        other = nc_det("col", permute(U, tau, "cols") + q_correction("col", permute(V, tau, "cols")))
        if (other if tau.sign() > 0 else -other) != lhs:
            return VerificationResult(
                "direct_grassmann", params, "fail", 0, 0,
                f"precondition: column permutation {[i + 1 for i in tau.image]} breaks the sign rule",
                _ms(t0),
            )
    problems = [] if resummation_check(5) else ["scalar resummation check failed"]
    return _compare("direct_grassmann", params, lhs, direct_grassmann_rhs(U, V, r.ring), t0, problems)


# -- support lemmas ------------------------------------------------------------

def manin_probe(W, n):
    """Row-pseudo-commutative, noncommutative ``M_ij = x_i z_j + y_i sum_a E_ja ∂_a``."""
    if W.nvars < n:
        raise UsageError("the probe needs at least n Weyl variables")
    xs = [1, 2, 3, -1, 4][:n]
    ys = [2, -1, 5, 3, -2][:n]
    flav = W.flavors

    def z(v):
        return W.z(*divmod(v, flav))

    def d(v):
        return W.d(*divmod(v, flav))

    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            x = z(j) * xs[i]
            for a in range(n):
                if a != j:
                    x = x + d(a) * (ys[i] * (a - j))
            row.append(x)
        rows.append(row)
    return NCMatrix(rows, W)


def _lemma_checks(M, label):
    """Column-permutation sign rule, sym-det = col-det, and the row-symmetric reshuffle."""
    problems = []
    n = M.nrows
    base = nc_det("col", M)
    for tau in Permutation.all(n):
        v = nc_det("col", permute(M, tau, "cols"))
        if v != (base if tau.sign() > 0 else -base):
            problems.append(f"{label}: column sign rule fails for {[i + 1 for i in tau.image]}")
            break
    if M.ring.has_rationals and nc_det("sym", M) != base:
        problems.append(f"{label}: sym-det differs from col-det")
    if weak_row_symmetric(M):
        perms = Permutation.all(n)
        E = M.entries
        for ell in product(range(n), repeat=n):
            ref = None
            for pi in perms:
                total = M.ring.zero()
                for sigma in perms:
                    term = M.ring.one()
                    for i in range(n):
                        term = term * E[sigma(pi(i))][ell[pi(i)]]
                    total = total + (term if sigma.sign() > 0 else -term)
                if ref is None:
                    ref = total
                elif total != ref:
                    problems.append(f"{label}: reshuffle fails for columns {[c + 1 for c in ell]}")
                    break
            if problems and problems[-1].startswith(f"{label}: reshuffle"):
                break
    return problems


def verify_support_lemmas(r, max_s=2):
    t0 = time.perf_counter()
    params = dict(r.params(), max_s=max_s)
    report = r.report()
    problems = []
    probes = []
    if isinstance(r.ring, WeylAlgebra) and r.ring.nvars >= r.n:
        probes.append(("probe", manin_probe(r.ring, r.n)))
    if report["X_row_pc"]:
        for L in combinations(range(r.m), r.n):
            probes.append((f"X[:, {[c + 1 for c in L]}]",
                           NCMatrix([[r.X[i, c] for c in L] for i in range(r.n)], r.ring)))
    for label, M in probes:
        problems += _lemma_checks(M, label)
    checked = len(probes)

    if report.holds("xa", "ya", "b_central", "xy_relation"):
        G = GrassmannAlgebra(r.n, r.ring)
        pa = G.bilinear(r.A)
        for s, Mk in enumerate(_xbky(r, max_s)):
            pm = G.bilinear(Mk)
            if pm * pa - pa * pm:
                problems.append(f"bilinear forms of X B^{s} Y and A do not commute")
            checked += 1
    if not report["xa"]:
        problems.append(f"xa fails at {report['xa'].witness}")
    return _compare("support", dict(params, checks=checked), 0, 0, t0, problems)


# -- substitution identities ---------------------------------------------------

def _poly_series(f_coeffs):
    coeffs = [rational(c) for c in f_coeffs]
    if not coeffs:
        raise UsageError("f needs at least a constant term")
    return TruncSeries.from_polynomial(coeffs)


def _verify_prop_old(n, variant, t0):
    if not 1 <= n <= 3:
        raise UsageError("prop_old runs for 1 <= n <= 3")
    _check_variant(variant)
    params = {"kind": "prop_old", "n": n, "variant": variant}
    alg, mats = free_matrices({"U": (n, n), "V": (n, n)})
    U, V = NCMatrix(mats["U"], alg), NCMatrix(mats["V"], alg)
    lhs = nc_det(variant, U + q_correction(variant, V))
    F = FockAlgebra(alg)
    a_key, geo = ((0, 1), lambda k: (k, 0)) if variant == "col" else ((1, 0), lambda k: (0, k))
    rows = [[F.element({a_key: V[i, j], **{geo(k): U[i, j] for k in range(n + 1)}})
             for j in range(n)] for i in range(n)]
    rhs = vacuum_det(variant, NCMatrix(rows, F))
    return _compare("substitution", params, lhs, rhs, t0)


def _s_value(s, P):
    if s == "symbolic":
        return P.var("s")
    if isinstance(s, str):
        s = Fraction(s)
    return rational(s)


def multilin_sides(n, k, f_coeffs, s, cols=2, seed=0, coeffs=None):
    """Both sides of the substitution identity for one ordered-multilinear form.

    The form is random unless ``coeffs`` is given.  Returns ``(lhs, rhs, coefficients)``
    with ``coefficients[J]`` the weight of the word ``prod_i x_(i, J_i)``.
    """
    P = ParamRing(["s"])
    sv = _s_value(s, P)
    names = [f"x{h}_{i + 1}{j + 1}" for h in range(k + 1) for i in range(n) for j in range(cols)]
    alg = FreeAlgebra(names, P)
    x = {(h, i, j): alg.gen(f"x{h}_{i + 1}{j + 1}")
         for h in range(k + 1) for i in range(n) for j in range(cols)}
    if coeffs is None:
        rng = random.Random(seed)
        coeffs = {J: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for J in product(range(cols), repeat=n)}
    coeffs = {J: coeffs.get(J, 0) for J in product(range(cols), repeat=n)}

    y = {(i, j): sum((x[h, i, j] * binom_s(i, h, sv) for h in range(k + 1)), alg.zero())
         for i in range(n) for j in range(cols)}
    lhs = alg.zero()
    for J, c in coeffs.items():
        if not c:
            continue
        term = alg.one()
        for i, j in enumerate(J):
            term = term * y[i, j]
        lhs = lhs + term * c

    f = _poly_series(f_coeffs)
    D = n * k
    Fp = FockAlgebra(P)
    chis = [chi_h_operator(f, sv, h, D, Fp) for h in range(k + 1)]
    F = FockAlgebra(alg)
    z = {}
    for i in range(n):
        for j in range(cols):
            terms = {}
            for h, ch in enumerate(chis):
                for key, c in ch.terms.items():
                    v = x[h, i, j] * c
                    terms[key] = terms[key] + v if key in terms else v
            z[i, j] = F.element(terms)
    cap_row = [max(z[i, j].creation_degree() for j in range(cols)) for i in range(n)]
    cap = [sum(cap_row[i + 1:]) for i in range(n)]

    rhs = alg.zero()

    def walk(i, J, state):
        nonlocal rhs
        if i == n:
            c = coeffs[J]
            if c and 0 in state:
                rhs = rhs + state[0] * c
            return
        for j in range(cols):
            nxt = bra_apply(state, z[i, j], cap[i])
            if nxt:
                walk(i + 1, J + (j,), nxt)

    walk(0, (), {0: alg.one()})
    return lhs, rhs, coeffs


def _verify_multilin(n, k, f_coeffs, s, cols, seed, t0):
    if not (1 <= n <= 3 and 0 <= k <= 2):
        raise UsageError("multilin runs for 1 <= n <= 3 and 0 <= k <= 2")
    params = {"kind": "multilin", "n": n, "k": k, "f": [str(rational(c)) for c in f_coeffs],
              "s": str(s), "cols": cols, "seed": seed}
    lhs, rhs, _ = multilin_sides(n, k, f_coeffs, s, cols, seed)
    return _compare("substitution", params, lhs, rhs, t0)


def lem_faf_value(h, m, f_coeffs, P=None):
    """``(1/h!) <0| f^(-l) (a† g)^h f^(l - h s) |m>`` with symbolic ``l`` and ``s``."""
    P = P or ParamRing(["l", "s"])
    l, s = P.var("l"), P.var("s")
    D = h + m
    f = _poly_series(f_coeffs).extend(D + 1).in_ring(P)
    F = FockAlgebra(P)
    base = f.truncate(D)
    g = g_from_f(f, s).truncate(D).to_fock(F)
    factors = [ts_pow_param(base, -l).to_fock(F)]
    for _ in range(h):
        factors += [F.adag(), g]
    factors.append(ts_pow_param(base, l - s * h).to_fock(F))
    creators = [w.creation_degree() for w in factors]
    state = {0: P.one()}
    remaining = sum(creators)
    for w, c in zip(factors, creators):
        remaining -= c
        state = bra_apply(state, w, remaining + m)
        if not state:
            return P.zero()
    return state.get(m, P.zero()) * Fraction(factorial(m), factorial(h))


def _verify_lem_faf(h, m, f_coeffs, t0):
    if not (0 <= h <= 3 and 0 <= m <= 3):
        raise UsageError("lem_faf runs for 0 <= h <= 3 and 0 <= m <= 3")
    P = ParamRing(["l", "s"])
    params = {"kind": "lem_faf", "h": h, "m": m, "f": [str(rational(c)) for c in f_coeffs]}
    lhs = lem_faf_value(h, m, f_coeffs, P)
    rhs = binom_s(P.var("l"), h, P.var("s")) if m == 0 else P.zero()
    return _compare("substitution", params, lhs, P.coerce(rhs), t0)


def verify_substitution(kind, **params):
    """``kind``: ``prop_old`` (n, variant), ``multilin`` (n, k, f, s, cols, seed) or ``lem_faf`` (h, m, f)."""
    t0 = time.perf_counter()
    if kind == "prop_old":
        return _verify_prop_old(params.get("n", 2), params.get("variant", "col"), t0)
    if kind == "multilin":
        return _verify_multilin(params.get("n", 2), params.get("k", 1), params.get("f", (1, -1)),
                                params.get("s", 1), params.get("cols", 2), params.get("seed", 0), t0)
    if kind == "lem_faf":
        return _verify_lem_faf(params.get("h", 1), params.get("m", 0), params.get("f", (1, -1)), t0)
    raise UsageError(f"unknown substitution kind {kind!r}")


# -- CBH ------------------------------------------------------------------------

def _exp_graded(x, K):
    """``sum_j x^j / j!`` with every coefficient cut at ``t``-degree ``K``."""
    cut = lambda w: w.map_coefficients(lambda c: c.truncate("t", K))  # noqa: E731
    out, power = x.parent.one(), x.parent.one()
    for j in range(1, K + 1):
        power = cut(power * x)
        if not power:
            break
        out = out + power.scale(Fraction(1, factorial(j)))
    return out


def cbh_sides(f_coeffs, K, c=None, conjugate=False):
    """Both sides of the graded exponential splitting, cut at ``t``-degree ``K``."""
    P = ParamRing(["c", "t"])
    cv = P.var("c") if c is None else P.coerce(rational(c))
    t = P.var("t")
    F = FockAlgebra(P)
    f = _poly_series(f_coeffs)
    cut = lambda w: w.map_coefficients(lambda q: q.truncate("t", K))  # noqa: E731
    fa = f.in_ring(P).to_fock(F, creation=conjugate)
    lin = F.a() if conjugate else F.adag()
    lhs = _exp_graded((lin * cv + fa) * t, K)
    exponent = cbh_rhs(f, cv * t, K).to_fock(F, creation=conjugate) * t
    left, right = _exp_graded(lin * (cv * t), K), _exp_graded(exponent, K)
    rhs = cut(right * left) if conjugate else cut(left * right)
    return lhs, rhs


def verify_cbh(f_coeffs, K=6, c=None):
    if K < 1:
        raise UsageError("the order K must be at least 1")
    t0 = time.perf_counter()
    params = {"f": [str(rational(q)) for q in f_coeffs], "order": K,
              "c": "symbolic" if c is None else str(rational(c))}
    lhs, rhs = cbh_sides(f_coeffs, K, c)
    lhs2, rhs2 = cbh_sides(f_coeffs, K, c, conjugate=True)
    problems = [] if lhs2 == rhs2 else ["conjugate form: " + str(first_term(lhs2 - rhs2))]
    return _compare("cbh", params, lhs, rhs, t0, problems)


# -- cross-representation coherence ---------------------------------------------

def verify_coherence(r):
    """The available right-hand sides agree with each other directly."""
    t0 = time.perf_counter()
    params = r.params()
    report = r.report()
    values = {}
    if report.holds(*_OSC_GATES["col"]):
        values["oscillator"] = oscillator_rhs(r, "col")
        values["holomorphic"] = holomorphic_rhs(r)
    if report.holds(*_CB_GATES["col"]):
        values["cauchy_binet"] = quantum_cb_rhs(r, "col")
    if report.holds(*_GR_GATES["col"]) and r.ring.has_rationals:
        values["grassmann"] = grassmann_rhs(r, "col")
    if report.holds("b_identity"):
        values["direct_grassmann"] = direct_grassmann_rhs(r.X @ r.Y, r.A, r.ring)
    if len(values) < 2:
        return VerificationResult("coherence", params, "fail", 0, 0,
                                  "precondition: fewer than two representations apply", _ms(t0))
    names = sorted(values)
    params["representations"] = names
    ref = values[names[0]]
    problems = [f"{names[0]} vs {nm}: {first_term(ref - values[nm])}"
                for nm in names[1:] if values[nm] != ref]
    return _compare("coherence", params, ref, ref, t0, problems)


# -- path weights, Berezin calibration and oracle cross-checks -------------------

def _four_way(nu):
    """Mismatch description for one ν-sequence, or ``None`` when all four weights agree."""
    c = c_formula(nu) if all(v >= -1 for v in nu) else 0
    rec = recursion_coefficient(nu)
    fk = fock_weight(nu)
    if c == rec == fk:
        # the moment-rule evaluation is the slowest, so it runs last
        hw = holomorphic_weight(nu)
        if hw == c:
            return None
        return f"ν={list(nu)}: formula {c}, holomorphic {hw}"
    return f"ν={list(nu)}: formula {c}, recursion {rec}, fock {fk}"


def _sweep_chunk(args):
    n, start, stop = args
    values = range(-1, n + 1)
    out = []
    for idx, nu in enumerate(product(values, repeat=n)):
        if idx < start:
            continue
        if idx >= stop:
            break
        msg = _four_way(nu)
        if msg:
            out.append(msg)
    return out


def lukasiewicz_sweep(max_len=6, samples=1000, sample_lengths=(7, 8), seed=0, jobs=1):
    """Return ``(checked, problems)`` for the exhaustive and randomized four-way comparison."""
    tasks = []
    for n in range(1, max_len + 1):
        total = (n + 2) ** n
        step = max(1, total // max(1, 4 * jobs))
        tasks += [(n, a, min(a + step, total)) for a in range(0, total, step)]
    checked = sum((n + 2) ** n for n in range(1, max_len + 1))
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as pool:
            chunks = list(pool.map(_sweep_chunk, tasks))
    else:
        chunks = [_sweep_chunk(t) for t in tasks]
    problems = [m for ch in chunks for m in ch]
    rng = random.Random(seed)
    for n in sample_lengths:
        for _ in range(samples):
            # half the draws are excursions so that nonzero weights are exercised
            if rng.random() < 0.5:
                nu = _random_excursion(n, rng)
            else:
                nu = tuple(rng.randint(-1, n) for _ in range(n))
            msg = _four_way(nu)
            checked += 1
            if msg:
                problems.append(msg)
    return checked, problems


def _random_excursion(n, rng):
    """Uniform next height in ``0..h+1`` at each step, then a final drop to 0."""
    h, nu = 0, []
    for i in range(n):
        nxt = rng.randint(0, h + 1) if i < n - 1 else 0
        nu.append(h - nxt)
        h = nxt
    return tuple(nu)


FIGURE_PATH = (-1, -1, 0, -1, 2, 0, -1, -1, 1, 2)


def verify_lukasiewicz(max_len=6, samples=1000, count_len=8, seed=0, jobs=1):
    t0 = time.perf_counter()
    params = {"max_len": max_len, "samples": samples, "count_len": count_len, "seed": seed}
    checked, problems = lukasiewicz_sweep(max_len, samples, seed=seed, jobs=jobs)
    fig = (c_formula(FIGURE_PATH), recursion_coefficient(FIGURE_PATH), fock_weight(FIGURE_PATH),
           holomorphic_weight(FIGURE_PATH))
    if fig != (36,) * 4:
        problems.append(f"figure path weights {fig}, expected 36")
    for n in range(1, count_len + 1):
        a, b = len(enumerate_excursions(n)), count_excursions_brute(n)
        if a != b:
            problems.append(f"excursion count at length {n}: {a} vs brute force {b}")
    params["sequences"] = checked
    return _compare("lukasiewicz", params, 36, fig[1], t0, problems)


def _random_free_matrix(alg, prefix, n):
    return NCMatrix([[alg.gen(f"{prefix}_{i + 1}{j + 1}") for j in range(n)] for i in range(n)], alg)


def verify_berezin(samples=100, max_n=4, free_n=3, seed=0):
    """Grassmann integrals against determinants, numerically and over free generators."""
    t0 = time.perf_counter()
    params = {"samples": samples, "max_n": max_n, "free_n": free_n, "seed": seed}
    rng = random.Random(seed)
    problems = []
    for idx in range(samples):
        n = 1 + idx % max_n
        M = NCMatrix([[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)])
        G = GrassmannAlgebra(n)
        v = berezin_integral(exp_even(G.bilinear(M)))
        if v != nc_det("col", M):
            problems.append(f"random matrix {idx}: integral {v} vs det {nc_det('col', M)}")
    for n in range(1, free_n + 1):
        alg, mats = free_matrices({"M": (n, n)})
        M = NCMatrix(mats["M"], alg)
        G = GrassmannAlgebra(n, alg)
        if berezin_integral(exp_even(G.bilinear(M))) != nc_det("sym", M):
            problems.append(f"free {n}x{n}: integral differs from sym-det")
        H = GrassmannAlgebra(n, alg, barred=False)
        psi = [H.psi(i) for i in range(n)]
        col_prod, row_prod = H.one(), H.one()
        for j in range(n):
            col_prod = col_prod * sum((psi[i] * M[i, j] for i in range(n)), H.zero())
            row_prod = row_prod * sum((psi[i] * M[j, i] for i in range(n)), H.zero())
        if berezin_integral(col_prod) != nc_det("col", M):
            problems.append(f"free {n}x{n}: ordered column product differs from col-det")
        if berezin_integral(row_prod) != nc_det("row", M):
            problems.append(f"free {n}x{n}: ordered row product differs from row-det")
    return _compare("berezin", params, 0, 0, t0, problems)


def _random_word(rng, max_len):
    return [rng.choice(("a", "a+")) for _ in range(rng.randint(0, max_len))]


def verify_oracles(fock_samples=1000, weyl_samples=500, seed=0):
    """Normal ordering against letter-by-letter action, for Fock words and Weyl operators."""
    t0 = time.perf_counter()
    params = {"fock_samples": fock_samples, "weyl_samples": weyl_samples, "seed": seed}
    rng = random.Random(seed)
    problems = []
    F = FockAlgebra()
    for _ in range(fock_samples):
        word = _random_word(rng, 8)
        w = word_element(word, F)
        if vacuum_expectation(w) != matrix_element(0, w, 0) or matrix_element(0, w, 0) != word_matrix_element(0, word, 0):
            problems.append(f"vacuum value disagrees for word {' '.join(word)}")
    for idx in range(weyl_samples):
        nv = rng.randint(1, 3)
        W = WeylAlgebra(nv)

        def rand_op(maxdeg, position_only=False):
            out = W.zero()
            for _ in range(rng.randint(1, 3)):
                ze = [rng.randint(0, maxdeg) for _ in range(nv)]
                de = [0] * nv if position_only else [rng.randint(0, maxdeg) for _ in range(nv)]
                out = out + W.from_exponents(ze, de, rng.randint(-3, 3))
            return out

        p, q, f = rand_op(2), rand_op(2), rand_op(3, True)
        if weyl_apply(p * q, f) != weyl_apply(p, weyl_apply(q, f)):
            problems.append(f"Weyl case {idx}: product action differs from composed action")
    return _compare("oracles", params, 0, 0, t0, problems)


__all__ = [
    "Realization",
    "VerificationResult",
    "realize_weyl_example",
    "realize_capelli",
    "realize_free",
    "verify_cauchy_binet_quantum",
    "verify_oscillator_rep",
    "verify_grassmann_rep",
    "verify_substitution",
    "verify_cbh",
    "verify_holomorphic_coldet",
    "verify_direct_grassmann",
    "verify_support_lemmas",
    "verify_coherence",
    "verify_lukasiewicz",
    "verify_berezin",
    "verify_oracles",
    "oscillator_matrix",
    "oscillator_rhs",
    "grassmann_rhs",
    "holomorphic_rhs",
    "quantum_cb_rhs",
    "vacuum_det",
    "multilin_sides",
    "lem_faf_value",
    "cbh_sides",
    "resummation_check",
    "manin_probe",
    "FIGURE_PATH",
]
