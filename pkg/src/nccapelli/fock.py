"""One bosonic mode: normal-ordered words in ``a``/``a†`` and their Fock matrix elements.

States are normalised so that ``(a†)^n |m> = |m+n>``, ``a^n |m> = m!/(m-n)! |m-n>``
and ``<n|m> = n! δ_nm``.  Coefficients come from any ring whose elements commute
with ``a`` and ``a†``.
"""
from __future__ import annotations

from math import comb, factorial

from ._sparse import Algebra, SparseElement, coerce_into
from .errors import UsageError
from .scalars import QQ


def _ordered_product(k1, l1, k2, l2):
    # a^l1 (a†)^k2 = sum_j C(l1,j) C(k2,j) j! (a†)^(k2-j) a^(l1-j)
    if not l1 or not k2:
        return (((k1 + k2, l1 + l2), 1),)
    return tuple(
        ((k1 + k2 - j, l1 + l2 - j), comb(l1, j) * comb(k2, j) * factorial(j))
        for j in range(min(l1, k2) + 1)
    )


class FockElement(SparseElement):
    __slots__ = ()

    def creation_degree(self):
        return max((k for k, _ in self.terms), default=0)

    def annihilation_degree(self):
        return max((l for _, l in self.terms), default=0)

    def truncate(self, max_annihilation):
        """Drop every term with more than ``max_annihilation`` factors of ``a``."""
        return self.parent.element({kl: c for kl, c in self.terms.items() if kl[1] <= max_annihilation})


class FockAlgebra(Algebra):
    """Normal-ordered polynomials ``sum c_{kl} (a†)^k a^l``.

    >>> F = FockAlgebra()
    >>> F.a() * F.adag()
    1 + a† a
    """

    element_class = FockElement
    unit_key = (0, 0)

    def _same(self, other):
        return self.coeff == other.coeff

    def __hash__(self):
        return hash(("Fock", hash(self.coeff)))

    def __repr__(self):
        return f"FockAlgebra(over {self.coeff})"

    def a(self, power=1):
        return self.monomial((0, power))

    def adag(self, power=1):
        return self.monomial((power, 0))

    def key_str(self, key):
        k, l = key
        parts = []
        if k:
            parts.append("a†" if k == 1 else f"(a†)^{k}")
        if l:
            parts.append("a" if l == 1 else f"a^{l}")
        return " ".join(parts) if parts else "1"

    def key_sort(self, key):
        return (key[0] + key[1], -key[0])

    def _mul_keys(self, k1, k2):
        return _ordered_product(k1[0], k1[1], k2[0], k2[1])

    def from_series(self, coeffs, creation=False):
        """``sum_i coeffs[i] x^i`` with ``x = a†`` (``creation=True``) or ``x = a``."""
        terms = {}
        for i, c in enumerate(coeffs):
            c = coerce_into(self.coeff, c)
            if c:
                terms[(i, 0) if creation else (0, i)] = c
        return self.element(terms)


def _check(w):
    if not isinstance(w, FockElement):
        raise UsageError("expected a Fock element")


def fock_mul(p, q):
    """Normal-ordered product of two Fock elements."""
    _check(p)
    _check(q)
    if p.parent != q.parent:
        raise UsageError("Fock elements over different coefficient rings")
    return p * q


def vacuum_expectation(p):
    """``<0| p |0>``: the coefficient of the identity in normal order."""
    _check(p)
    return p.coefficient((0, 0))


def _falling(n, k):
    return factorial(n) // factorial(n - k) if 0 <= k <= n else 0


def matrix_element(p, w, q):
    """``<p| w |q>`` evaluated by letting each normal-ordered term act on the ket."""
    _check(w)
    if p < 0 or q < 0:
        raise UsageError("occupation numbers are non-negative")
    total = w.parent.coeff.zero()
    for (k, l), c in w.terms.items():
        if l <= q and q - l + k == p:
            total = total + c * (_falling(q, l) * factorial(p))
    return total


def word_matrix_element(p, letters, q):
    """``<p| L_1 L_2 ... L_r |q>`` for a word in the letters ``'a'`` and ``'a+'``.

    Letters act on the ket from the right one at a time; this never forms a
    normal-ordered product and is used as an oracle for :func:`vacuum_expectation`.
    """
    weight, level = 1, q
    for letter in reversed(letters):
        if letter == "a":
            if level == 0:
                return 0
            weight *= level
            level -= 1
        elif letter in ("a+", "a†"):
            level += 1
        else:
            raise UsageError(f"unknown letter {letter!r}")
    return weight * factorial(p) if level == p else 0


def word_element(letters, algebra=None):
    """The Fock element spelled by a word of ``'a'`` / ``'a+'`` letters."""
    F = algebra or FockAlgebra()
    out = F.one()
    for letter in letters:
        if letter == "a":
            out = out * F.a()
        elif letter in ("a+", "a†"):
            out = out * F.adag()
        else:
            raise UsageError(f"unknown letter {letter!r}")
    return out


def chi(nu, algebra=None):
    """``(a†)^nu`` for ``nu >= 0`` and ``a`` for ``nu = -1``."""
    if not isinstance(nu, int) or nu < -1:
        raise UsageError(f"chi is defined for integers >= -1, got {nu!r}")
    F = algebra or FockAlgebra()
    return F.a() if nu == -1 else F.adag(nu)


# -- ordered products evaluated between bras and kets ------------------------

def bra_apply(state, w, capacity=None):
    """Push the bra ``sum_j state[j] <j|`` through ``w`` from the left.

    ``<j| (a†)^k a^l = j!/(j-k)! <j-k+l|``.  Bra levels above ``capacity`` (the
    number of creators still to come, plus the final ket level) are dropped since
    they can no longer reach the target.
    """
    out = {}
    for j, s in state.items():
        for (k, l), c in w.terms.items():
            f = _falling(j, k)
            if not f:
                continue
            j2 = j - k + l
            if capacity is not None and j2 > capacity:
                continue
            v = s * c
            if f != 1:
                v = v * f
            if not v:
                continue
            out[j2] = out[j2] + v if j2 in out else v
    return out


def bra_ket_product(factors, ket=0, one=1):
    """``<0| F_1 ... F_r |ket>`` without forming the full normal-ordered product."""
    creators = [f.creation_degree() for f in factors]
    remaining = sum(creators)
    state = {0: one}
    for f, k in zip(factors, creators):
        remaining -= k
        state = bra_apply(state, f, remaining + ket)
        if not state:
            break
    v = state.get(ket)
    if v is None:
        return factors[0].parent.coeff.zero() if factors else 0
    return v * factorial(ket)


# -- holomorphic (coherent-state) representation ------------------------------

class CoherentExpr(SparseElement):
    """Polynomial in commuting pairs ``z_j, z̄_j`` (j = 1..n-1) over a client ring."""

    __slots__ = ()


class CoherentAlgebra(Algebra):
    """Commutative polynomials in ``z_1..z_{n-1}``, ``z̄_1..z̄_{n-1}``.

    Keys are ``(z exponents, z̄ exponents)``; index ``j`` lives at position ``j-1``.
    """

    element_class = CoherentExpr

    def __init__(self, n, coeff=QQ):
        if n < 1:
            raise UsageError("need n >= 1")
        super().__init__(coeff)
        self.n = n
        self.pairs = n - 1
        self.unit_key = ((0,) * self.pairs, (0,) * self.pairs)

    def _same(self, other):
        return (self.n, self.coeff) == (other.n, other.coeff)

    def __hash__(self):
        return hash(("Coherent", self.n))

    def __repr__(self):
        return f"CoherentAlgebra(n={self.n} over {self.coeff})"

    def _unit(self, j):
        if not 1 <= j <= self.pairs:
            raise UsageError(f"pair index {j} outside 1..{self.pairs}")
        e = [0] * self.pairs
        e[j - 1] = 1
        return tuple(e)

    def z(self, j):
        """``z_j``; the boundary values ``z_0`` and ``z_n`` are zero."""
        if j in (0, self.n):
            return self.zero()
        return self.monomial((self._unit(j), self.unit_key[1]))

    def zbar(self, j):
        """``z̄_j``; ``z̄_0`` and ``z̄_n`` are zero."""
        if j in (0, self.n):
            return self.zero()
        return self.monomial((self.unit_key[0], self._unit(j)))

    def key_str(self, key):
        zs, zb = key
        parts = []
        for j in range(self.pairs):
            if zs[j]:
                parts.append(f"z_{j + 1}" + (f"^{zs[j]}" if zs[j] > 1 else ""))
            if zb[j]:
                parts.append(f"z̄_{j + 1}" + (f"^{zb[j]}" if zb[j] > 1 else ""))
        return " ".join(parts) if parts else "1"

    def key_sort(self, key):
        return (sum(key[0]) + sum(key[1]), key)

    def _mul_keys(self, k1, k2):
        return (
            ((tuple(x + y for x, y in zip(k1[0], k2[0])), tuple(x + y for x, y in zip(k1[1], k2[1]))), 1),
        )


def gaussian_pair_reduce(e, j):
    """Integrate out the pair ``(z_j, z̄_j)``: ``z_j^p z̄_j^q -> p!/(p-q)! η^(p-q)``.

    ``η`` is ``z_{j+1}``, or zero when ``j + 1 = n``.  Terms with ``q > p`` vanish.
    """
    if not isinstance(e, CoherentExpr):
        raise UsageError("expected a coherent-state expression")
    C = e.parent
    if not 1 <= j <= C.pairs:
        raise UsageError(f"pair index {j} outside 1..{C.pairs}")
    i = j - 1
    out = {}
    for (zs, zb), c in e.terms.items():
        p, q = zs[i], zb[i]
        if q > p:
            continue
        if j + 1 == C.n and p > q:
            continue
        znew = list(zs)
        znew[i] = 0
        if j + 1 < C.n:
            znew[i + 1] += p - q
        zbnew = list(zb)
        zbnew[i] = 0
        key = (tuple(znew), tuple(zbnew))
        v = c * (factorial(p) // factorial(p - q))
        out[key] = out[key] + v if key in out else v
    return C.element(out)


def reduce_all_pairs(e):
    """Apply :func:`gaussian_pair_reduce` for ``j = 1, ..., n-1`` and return the constant."""
    for j in range(1, e.parent.n):
        e = gaussian_pair_reduce(e, j)
    return e.coefficient(e.parent.unit_key)


def falling_factorial(n, k):
    """``n!/(n-k)!`` for ``0 <= k <= n`` and 0 otherwise."""
    return _falling(n, k)


__all__ = [
    "FockAlgebra",
    "FockElement",
    "fock_mul",
    "vacuum_expectation",
    "matrix_element",
    "word_matrix_element",
    "word_element",
    "chi",
    "bra_apply",
    "bra_ket_product",
    "CoherentAlgebra",
    "CoherentExpr",
    "gaussian_pair_reduce",
    "reduce_all_pairs",
    "falling_factorial",
]
