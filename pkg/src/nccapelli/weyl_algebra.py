"""Polynomial differential operators in normal order (positions left of derivatives).

Variables are indexed by ``(row, flavor)`` pairs; with a single flavor they are
just ``z_1 .. z_rows``.  A monomial key is ``(z exponents, d exponents)``, two
tuples of length ``rows * flavors``.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import comb, factorial

from ._sparse import Algebra, SparseElement
from .errors import UsageError
from .scalars import QQ


@lru_cache(maxsize=1 << 18)
def _monomial_product(k1, k2):
    """Normal form of ``(z^a d^b)(z^c d^e)`` as a tuple of ``(key, factor)``."""
    za, db = k1
    zc, de = k2
    overlap = [i for i, (b, c) in enumerate(zip(db, zc)) if b and c]
    if not overlap:
        z = tuple(x + y for x, y in zip(za, zc))
        d = tuple(x + y for x, y in zip(db, de))
        return (((z, d), 1),)
    out = []
    ranges = [range(min(db[i], zc[i]) + 1) for i in overlap]
    for cs in product(*ranges):
        f = 1
        z = list(x + y for x, y in zip(za, zc))
        d = list(x + y for x, y in zip(db, de))
        for i, c in zip(overlap, cs):
            f *= comb(db[i], c) * comb(zc[i], c) * factorial(c)
            z[i] -= c
            d[i] -= c
        out.append(((tuple(z), tuple(d)), f))
    return tuple(out)


class WeylElement(SparseElement):
    __slots__ = ()

    def is_position_only(self):
        return all(not any(d) for _, d in self.terms)


class WeylAlgebra(Algebra):
    """Weyl algebra on ``rows * flavors`` position/derivative pairs over ``coeff``.

    >>> W = WeylAlgebra(1)
    >>> W.d(0) * W.z(0)
    1 + z_1 ∂_1
    """

    element_class = WeylElement

    def __init__(self, rows, flavors=1, coeff=QQ):
        if rows < 1 or flavors < 1:
            raise UsageError("a Weyl algebra needs at least one variable")
        super().__init__(coeff)
        self.rows = rows
        self.flavors = flavors
        self.nvars = rows * flavors
        self.unit_key = ((0,) * self.nvars, (0,) * self.nvars)

    def _same(self, other):
        return (self.rows, self.flavors, self.coeff) == (other.rows, other.flavors, other.coeff)

    def __hash__(self):
        return hash(("Weyl", self.rows, self.flavors))

    def __repr__(self):
        return f"WeylAlgebra({self.rows}x{self.flavors} over {self.coeff})"

    # -- generators ------------------------------------------------------
    def _var(self, row, flavor):
        if not (0 <= row < self.rows and 0 <= flavor < self.flavors):
            raise UsageError(f"variable ({row}, {flavor}) out of range")
        return row * self.flavors + flavor

    def _unit_vec(self, v):
        e = [0] * self.nvars
        e[v] = 1
        return tuple(e)

    def z(self, row, flavor=0):
        """Position generator for 0-based ``(row, flavor)``."""
        return self.monomial((self._unit_vec(self._var(row, flavor)), self.unit_key[1]))

    def d(self, row, flavor=0):
        """Derivative with respect to the position generator ``z(row, flavor)``."""
        return self.monomial((self.unit_key[0], self._unit_vec(self._var(row, flavor))))

    def from_exponents(self, zexp, dexp, c=1):
        if len(zexp) != self.nvars or len(dexp) != self.nvars:
            raise UsageError("exponent vector has the wrong dimension")
        return self.monomial((tuple(zexp), tuple(dexp)), c)

    # -- rendering -------------------------------------------------------
    def _label(self, v):
        r, a = divmod(v, self.flavors)
        return f"{r + 1}" if self.flavors == 1 else f"{r + 1},{a + 1}"

    def key_str(self, key):
        zs, ds = key
        parts = [f"z_{self._label(v)}" + (f"^{e}" if e > 1 else "") for v, e in enumerate(zs) if e]
        parts += [f"∂_{self._label(v)}" + (f"^{e}" if e > 1 else "") for v, e in enumerate(ds) if e]
        return " ".join(parts) if parts else "1"

    def key_sort(self, key):
        zs, ds = key
        return (sum(zs) + sum(ds), tuple(-e for e in zs), tuple(-e for e in ds))

    def _mul_keys(self, k1, k2):
        return _monomial_product(k1, k2)


def _check_pair(p, q):
    if not isinstance(p, WeylElement) or not isinstance(q, WeylElement):
        raise UsageError("expected Weyl elements")
    if p.parent != q.parent:
        raise UsageError("Weyl elements over different generator sets")


def weyl_mul(p, q):
    """Normal-ordered product of two Weyl elements."""
    _check_pair(p, q)
    return p * q


def weyl_apply(p, f):
    """Act with the operator ``p`` on the position-only polynomial ``f``.

    Uses the derivative action directly (``d^b z^c = c!/(c-b)! z^(c-b)``) rather
    than the normal-ordering product, so it serves as an independent check.
    """
    _check_pair(p, f)
    if not f.is_position_only():
        raise UsageError("weyl_apply acts on polynomials in the position generators only")
    W = p.parent
    zero_d = W.unit_key[1]
    out = {}
    for (za, db), cp in p.terms.items():
        for (zc, _), cf in f.terms.items():
            factor = 1
            for b, c in zip(db, zc):
                if b > c:
                    factor = 0
                    break
                if b:
                    factor *= factorial(c) // factorial(c - b)
            if not factor:
                continue
            key = (tuple(a + c - b for a, b, c in zip(za, db, zc)), zero_d)
            v = cp * cf * factor
            out[key] = out[key] + v if key in out else v
    return W.element(out)
