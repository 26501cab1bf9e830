"""Exterior algebra on ``ψ̄_1, ψ_1, ..., ψ̄_n, ψ_n`` (or on ``ψ_1..ψ_n`` alone).

Monomials are bitmasks over the fixed order ``ψ̄_1 < ψ_1 < ψ̄_2 < ψ_2 < ...``:
``ψ̄_i`` is bit ``2i`` and ``ψ_i`` is bit ``2i+1`` for 0-based ``i``.  Without
the barred generators ``ψ_i`` is bit ``i``.  Coefficients may come from a
noncommutative ring but must commute with the generators.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from ._sparse import Algebra, SparseElement
from .errors import DomainError, UsageError
from .scalars import QQ


@lru_cache(maxsize=1 << 16)
def _merge_sign(m1, m2):
    """Sign of reordering ``mono(m1) * mono(m2)`` into canonical order (0 if they overlap)."""
    if m1 & m2:
        return 0
    swaps = 0
    rest = m2
    while rest:
        low = rest & -rest
        swaps += bin(m1 & ~((low << 1) - 1)).count("1")
        rest ^= low
    return -1 if swaps & 1 else 1


class GrassmannElement(SparseElement):
    __slots__ = ()

    def is_even(self):
        return all(bin(m).count("1") % 2 == 0 for m in self.terms)


class GrassmannAlgebra(Algebra):
    """Grassmann algebra on ``2n`` (``barred=True``) or ``n`` generators.

    >>> G = GrassmannAlgebra(1)
    >>> G.psi(0) * G.psibar(0)
    -1*ψ̄_1 ψ_1
    """

    element_class = GrassmannElement
    unit_key = 0

    def __init__(self, n, coeff=QQ, barred=True):
        if n < 1:
            raise UsageError("need at least one generator pair")
        super().__init__(coeff)
        self.n = n
        self.barred = barred
        self.ngens = 2 * n if barred else n
        self.top = (1 << self.ngens) - 1

    def _same(self, other):
        return (self.n, self.barred, self.coeff) == (other.n, other.barred, other.coeff)

    def __hash__(self):
        return hash(("Grassmann", self.n, self.barred))

    def __repr__(self):
        kind = "ψ̄,ψ" if self.barred else "ψ"
        return f"GrassmannAlgebra(n={self.n}, {kind} over {self.coeff})"

    def _check_index(self, i):
        if not 0 <= i < self.n:
            raise UsageError(f"generator index {i} out of range")

    def psi(self, i):
        self._check_index(i)
        return self.monomial(1 << (2 * i + 1 if self.barred else i))

    def psibar(self, i):
        self._check_index(i)
        if not self.barred:
            raise UsageError("this algebra has no barred generators")
        return self.monomial(1 << (2 * i))

    def key_str(self, key):
        if not key:
            return "1"
        out = []
        for b in range(self.ngens):
            if key >> b & 1:
                if self.barred:
                    i, odd = divmod(b, 2)
                    out.append(f"ψ_{i + 1}" if odd else f"ψ̄_{i + 1}")
                else:
                    out.append(f"ψ_{b + 1}")
        return " ".join(out)

    def key_sort(self, key):
        return (bin(key).count("1"), key)

    def _mul_keys(self, k1, k2):
        s = _merge_sign(k1, k2)
        return ((k1 | k2, s),) if s else ()

    def bilinear(self, M):
        """``ψ̄ M ψ = sum_ij M_ij ψ̄_i ψ_j`` for an ``n x n`` matrix of coefficients."""
        if not self.barred:
            raise UsageError("the bilinear form needs barred generators")
        rows = getattr(M, "entries", M)
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise UsageError("matrix size does not match the number of generator pairs")
        terms = {}
        for i, row in enumerate(rows):
            for j, m in enumerate(row):
                c = self.coeff.scalar(m) if isinstance(m, (int, Fraction)) else m
                if not c:
                    continue
                key = (1 << 2 * i) | (1 << (2 * j + 1))
                # ψ̄_i ψ_j is canonical when i <= j; otherwise one swap
                if i > j:
                    c = -c
                terms[key] = c
        return self.element(terms)


def gr_mul(p, q):
    """Product of two Grassmann elements over the same generators."""
    if not isinstance(p, GrassmannElement) or not isinstance(q, GrassmannElement):
        raise UsageError("expected Grassmann elements")
    if p.parent != q.parent:
        raise UsageError("Grassmann elements over different generator sets")
    return p * q


def berezin_integral(p):
    """Coefficient of the top monomial ``ψ̄_1 ψ_1 ... ψ̄_n ψ_n`` (or ``ψ_1 ... ψ_n``).

    With measure ``prod_i dψ_i dψ̄_i`` each pair integrates as ``∫ ψ̄_i ψ_i = 1``;
    for the unbarred algebra the measure is ``dψ_n ... dψ_1``.
    """
    if not isinstance(p, GrassmannElement):
        raise UsageError("expected a Grassmann element")
    return p.coefficient(p.parent.top)


def exp_even(e):
    """``sum_k e^k / k!`` for a nilpotent even element (the sum stops by itself)."""
    if not isinstance(e, GrassmannElement):
        raise UsageError("expected a Grassmann element")
    G = e.parent
    if not G.has_rationals:
        raise DomainError("the exponential needs division by integers")
    if 0 in e.terms:
        raise DomainError("exp_even needs an element without constant term")
    if not e.is_even():
        raise DomainError("exp_even needs an even element")
    out = G.one()
    power = G.one()
    for k in range(1, G.ngens // 2 + 1):
        power = power * e
        if not power:
            break
        out = out + power.scale(Fraction(1, factorial(k)))
    return out
