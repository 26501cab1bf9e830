"""Shared machinery for algebras whose elements are sparse maps monomial -> coefficient.

Coefficients live in a client ring and are assumed to commute with the
algebra's own generators, so a product of two terms is
``(c1 * c2) * (m1 * m2)`` with the coefficient order preserved.
"""
from __future__ import annotations

from .errors import UsageError
from .scalars import QQ, ParamPoly, ParamRing, Ring, is_scalar, rational


def coerce_into(ring, x):
    """Embed ``x`` into ``ring`` (rationals, coefficient-ring elements, same-ring elements)."""
    if isinstance(ring, Algebra):
        return ring.coerce(x)
    if isinstance(ring, ParamRing):
        return ring.coerce(x)
    if is_scalar(x):
        return ring.scalar(x)
    if getattr(x, "parent", None) == ring:
        return x
    raise UsageError(f"cannot coerce {x!r} into {ring}")


def tower_contains(ring, inner):
    """True if ``inner`` occurs strictly below ``ring`` in its coefficient tower."""
    while isinstance(ring, Algebra):
        ring = ring.coeff
        if ring == inner:
            return True
    return False


class Algebra(Ring):
    """A free module over ``coeff`` with a basis of monomial keys and a product rule."""

    element_class = None
    unit_key = None

    def __init__(self, coeff=QQ):
        self.coeff = coeff
        self.has_rationals = coeff.has_rationals

    # keys and products are supplied by subclasses
    def _mul_keys(self, k1, k2):
        """Return an iterable of ``(key, integer factor)`` for the product of two monomials."""
        raise NotImplementedError

    def key_str(self, key):
        return str(key)

    def key_sort(self, key):
        return key

    def _same(self, other):
        raise NotImplementedError

    def __eq__(self, other):
        return self is other or (type(self) is type(other) and self._same(other))

    def __hash__(self):
        return hash((type(self).__name__, repr(self)))

    # -- element construction -------------------------------------------
    def element(self, terms):
        """Build an element from ``{key: coefficient}``, dropping zeros."""
        return self.element_class(self, {k: c for k, c in terms.items() if c})

    def zero(self):
        return self.element_class(self, {})

    def one(self):
        return self.from_coeff(self.coeff.one())

    def scalar(self, q):
        return self.from_coeff(self.coeff.scalar(q))

    def from_coeff(self, c):
        return self.element_class(self, {self.unit_key: c} if c else {})

    def monomial(self, key, c=None):
        c = self.coeff.one() if c is None else coerce_into(self.coeff, c)
        return self.element_class(self, {key: c} if c else {})

    def coerce(self, x):
        if isinstance(x, SparseElement) and x.parent == self:
            return x
        if is_scalar(x):
            return self.scalar(x)
        return self.from_coeff(coerce_into(self.coeff, x))


class SparseElement:
    """Immutable element ``sum_k c_k * m_k`` of an :class:`Algebra`."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent, terms):
        self.parent = parent
        self.terms = terms

    # -- inspection ------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, key):
        return self.terms.get(key, self.parent.coeff.zero())

    def term_count(self):
        total = 0
        for c in self.terms.values():
            total += (1 if c else 0) if is_scalar(c) else c.term_count()
        return total

    def flat_terms(self):
        p = self.parent
        for k in sorted(self.terms, key=p.key_sort):
            c = self.terms[k]
            label = p.key_str(k)
            if is_scalar(c):
                yield (label,), c
            else:
                for inner, q in c.flat_terms():
                    yield inner + (label,), q

    def __repr__(self):
        if not self.terms:
            return "0"
        p = self.parent
        parts = []
        for k in sorted(self.terms, key=p.key_sort):
            c = self.terms[k]
            if isinstance(c, ParamPoly) and c.is_constant():
                c = c.constant_value()
            label = p.key_str(k)
            cs = str(c)
            if label == "1":
                parts.append(f"({cs})" if not is_scalar(c) else cs)
            elif is_scalar(c):
                parts.append(label if c == 1 else f"{c}*{label}")
            else:
                parts.append(f"({cs})*{label}")
        return " + ".join(parts)

    def map_coefficients(self, fn, parent=None):
        """Apply ``fn`` to every coefficient, optionally landing in another algebra."""
        parent = parent or self.parent
        return parent.element({k: fn(c) for k, c in self.terms.items()})

    # -- comparison ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, SparseElement) and other.parent is self.parent:
            return other
        try:
            return self.parent.coerce(other)
        except UsageError:
            # an element of a larger algebra built over ours handles the reflected op
            if isinstance(other, SparseElement) and tower_contains(other.parent, self.parent):
                return None
            if isinstance(other, (SparseElement, ParamPoly)):
                raise
            return None

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except UsageError:
            return False
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset((k, hash(c)) for k, c in self.terms.items()))

    # -- linear structure ------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in o.terms.items():
            if k in out:
                v = out[k] + c
                if v:
                    out[k] = v
                else:
                    del out[k]
            else:
                out[k] = c
        return type(self)(self.parent, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return type(self)(self.parent, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, q):
        q = rational(q)
        if not q:
            return self.parent.zero()
        return type(self)(self.parent, {k: c * q for k, c in self.terms.items()})

    def lmul(self, c):
        """Multiply every coefficient by the coefficient-ring element ``c`` on the left."""
        return self.parent.element({k: c * v for k, v in self.terms.items()})

    def rmul(self, c):
        """Multiply every coefficient by the coefficient-ring element ``c`` on the right."""
        return self.parent.element({k: v * c for k, v in self.terms.items()})

    # -- multiplication --------------------------------------------------
    def _mul(self, other):
        mul_keys = self.parent._mul_keys
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                c = c1 * c2
                if not c:
                    continue
                for k, f in mul_keys(k1, k2):
                    v = c if f == 1 else c * f
                    if k in out:
                        out[k] = out[k] + v
                    else:
                        out[k] = v
        return self.parent.element(out)

    def __mul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._mul(o)

    def __rmul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o._mul(self)

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise UsageError("powers must be non-negative integers")
        result = self.parent.one()
        for _ in range(e):
            result = result * self
        return result
