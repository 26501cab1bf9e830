"""Exact base arithmetic: rationals and commutative parameter polynomials.

Rationals are plain Python ``int`` / :class:`fractions.Fraction` values
(normalised so that integral values are stored as ``int``).  Polynomials in a
declared, ordered set of commuting parameters live in :class:`ParamRing`.

Monomials are packed into a single integer, ``_BITS`` bits per parameter, so
that multiplying monomials is integer addition.  Exponents must stay below
``2**_BITS``.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

from .errors import DomainError, UsageError

_BITS = 16
_MASK = (1 << _BITS) - 1


def rational(q):
    """Return ``q`` as an exact rational, collapsing integral fractions to ``int``."""
    if isinstance(q, bool):
        return int(q)
    if isinstance(q, int):
        return q
    if isinstance(q, Fraction):
        return q.numerator if q.denominator == 1 else q
    if isinstance(q, _RationalABC):
        return rational(Fraction(q.numerator, q.denominator))
    if isinstance(q, str):
        return rational(Fraction(q))
    raise UsageError(f"not an exact rational: {q!r}")


def is_scalar(x):
    """True for Python exact rationals (the coefficients of the base field)."""
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class Ring:
    """Minimal ring contract used by every algebra in the package.

    Elements must support ``+``, ``-``, ``*``, unary ``-``, ``==`` and
    ``bool()`` (false exactly for zero).  ``scalar`` embeds an exact rational;
    rings without division by integers set ``has_rationals = False``.
    """

    has_rationals = True

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def scalar(self, q):
        raise NotImplementedError

    def commutative(self):
        return False


class RationalField(Ring):
    """The field of rationals, with elements stored as ``int`` / ``Fraction``."""

    def zero(self):
        return 0

    def one(self):
        return 1

    def scalar(self, q):
        return rational(q)

    def commutative(self):
        return True

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField) and not isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("QQ")


class IntegerRing(RationalField):
    """Integers: same element type as :data:`QQ` but no division by integers."""

    has_rationals = False

    def scalar(self, q):
        q = rational(q)
        if not isinstance(q, int):
            raise DomainError(f"{q} is not an integer")
        return q

    def __repr__(self):
        return "ZZ"

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")


QQ = RationalField()
ZZ = IntegerRing()


def ring_of(x, default=QQ):
    """The ring an element belongs to (``QQ`` for plain rationals)."""
    return getattr(x, "parent", default)


def term_count(x):
    """Number of rational terms in the fully expanded normal form of ``x``."""
    if is_scalar(x):
        return 1 if x else 0
    return x.term_count()


def flat_terms(x):
    """Yield ``(monomial labels innermost first, rational coefficient)`` pairs."""
    if is_scalar(x):
        if x:
            yield (), x
        return
    yield from x.flat_terms()


def render_term(labels, coeff):
    """Render one flattened term, e.g. ``'2 · α_1^1 ⊗ z_1^1 ∂_2^1'``."""
    shown = [lab for lab in labels if lab != "1"]
    if not shown:
        return str(coeff)
    return f"{coeff} · " + " ⊗ ".join(shown)


def first_term(x):
    """Deterministically chosen term of ``x`` (smallest rendering), or ``None``."""
    best = None
    for labels, c in flat_terms(x):
        s = render_term(labels, c)
        if best is None or (len(s), s) < (len(best), best):
            best = s
    return best


class ParamRing(Ring):
    """Commutative polynomials over QQ in a fixed, ordered tuple of parameter names.

    >>> R = ParamRing(["s", "l"])
    >>> s, l = R.gens()
    >>> (1 + s) * (1 - s)
    -s^2 + 1
    """

    def __init__(self, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate parameter names in {names}")
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    def __repr__(self):
        return f"ParamRing({list(self.names)})"

    def __eq__(self, other):
        return self is other or (isinstance(other, ParamRing) and self.names == other.names)

    def __hash__(self):
        return hash(("ParamRing", self.names))

    def commutative(self):
        return True

    # -- construction ----------------------------------------------------
    def zero(self):
        return ParamPoly(self, {})

    def one(self):
        return ParamPoly(self, {0: 1})

    def scalar(self, q):
        q = rational(q)
        return ParamPoly(self, {0: q} if q else {})

    const = scalar

    def var(self, name):
        try:
            i = self._index[name]
        except KeyError:
            raise UsageError(f"parameter {name!r} was not declared in {self}") from None
        return ParamPoly(self, {1 << (_BITS * i): 1})

    def gens(self):
        return tuple(self.var(n) for n in self.names)

    def from_exponents(self, terms):
        """Build from ``{exponent tuple: coefficient}``."""
        out = {}
        for exps, c in terms.items():
            if len(exps) != len(self.names):
                raise UsageError(f"exponent vector {exps} has wrong length")
            key = self._pack(exps)
            out[key] = out.get(key, 0) + rational(c)
        return ParamPoly(self, {k: v for k, v in out.items() if v})

    def coerce(self, x):
        if isinstance(x, ParamPoly):
            if x.ring != self:
                raise UsageError(f"parameter-set mismatch: {x.ring} vs {self}")
            return x
        if is_scalar(x):
            return self.scalar(x)
        raise UsageError(f"cannot coerce {x!r} into {self}")

    # -- packed monomials ------------------------------------------------
    def _pack(self, exps):
        key = 0
        for i, e in enumerate(exps):
            if e < 0 or e > _MASK:
                raise UsageError(f"exponent {e} out of range")
            key |= e << (_BITS * i)
        return key

    def _unpack(self, key):
        return tuple((key >> (_BITS * i)) & _MASK for i in range(len(self.names)))

    def _mono_str(self, key):
        parts = []
        for name, e in zip(self.names, self._unpack(key)):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"({name})^{e}" if "^" in name else f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def _sort_key(self, key):
        exps = self._unpack(key)
        return (-sum(exps), tuple(-e for e in exps))


class ParamPoly:
    """Immutable polynomial with exact rational coefficients; see :class:`ParamRing`."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    @property
    def parent(self):
        return self.ring

    # -- inspection ------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        """The rational value of a constant polynomial (``DomainError`` otherwise)."""
        if not self.is_constant():
            raise DomainError(f"{self} is not constant")
        return self.terms.get(0, 0)

    def coefficient(self, exps):
        return self.terms.get(self.ring._pack(exps), 0)

    def exponent_dict(self):
        return {self.ring._unpack(k): c for k, c in self.terms.items()}

    def degree(self, name=None):
        if not self.terms:
            return -1
        if name is None:
            return max(sum(self.ring._unpack(k)) for k in self.terms)
        i = self.ring._index[name]
        return max((k >> (_BITS * i)) & _MASK for k in self.terms)

    def term_count(self):
        return len(self.terms)

    def flat_terms(self):
        for k in sorted(self.terms, key=self.ring._sort_key):
            yield (self.ring._mono_str(k),), self.terms[k]

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for k in sorted(self.terms, key=self.ring._sort_key):
            c = self.terms[k]
            mono = self.ring._mono_str(k)
            if mono == "1":
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            out.append((sign, body))
        first_sign, first_body = out[0]
        s = ("-" if first_sign == "-" else "") + first_body
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self.ring == other.ring and self.terms == other.terms
        if is_scalar(other):
            return self.terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.terms.get(0, 0))
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ------------------------------------------------------
    def _other(self, other):
        if isinstance(other, ParamPoly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise UsageError(f"parameter-set mismatch: {self.ring} vs {other.ring}")
            return other
        if is_scalar(other):
            return self.ring.scalar(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in o.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return ParamPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if is_scalar(other):
            q = rational(other)
            if not q:
                return ParamPoly(self.ring, {})
            return ParamPoly(self.ring, {k: rational(c * q) for k, c in self.terms.items()})
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b = self.terms, o.terms
        if len(a) < len(b):
            a, b = b, a
        out = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return ParamPoly(self.ring, {k: rational(v) for k, v in out.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if is_scalar(other):
            q = rational(other)
            if not q:
                raise DomainError("division by zero")
            return self * (Fraction(1) / q)
        return NotImplemented

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise UsageError("ParamPoly powers must be non-negative integers")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- parameter manipulation -----------------------------------------
    def substitute(self, bindings):
        """Evaluate the bound parameters at exact rationals; others stay symbolic."""
        idx = []
        for name, value in bindings.items():
            if name not in self.ring._index:
                raise UsageError(f"parameter {name!r} was not declared in {self.ring}")
            idx.append((self.ring._index[name], rational(value)))
        out = {}
        for k, c in self.terms.items():
            for i, v in idx:
                e = (k >> (_BITS * i)) & _MASK
                if e:
                    c = c * v**e
                    k -= e << (_BITS * i)
                    if not c:
                        break
            if c:
                out[k] = out.get(k, 0) + c
        return ParamPoly(self.ring, {k: rational(v) for k, v in out.items() if v})

    def truncate(self, name, max_degree):
        """Drop every term whose degree in ``name`` exceeds ``max_degree``."""
        i = self.ring._index[name]
        return ParamPoly(
            self.ring,
            {k: c for k, c in self.terms.items() if ((k >> (_BITS * i)) & _MASK) <= max_degree},
        )

    def coefficient_in(self, name, degree):
        """Coefficient of ``name**degree`` as a polynomial in the remaining parameters."""
        i = self.ring._index[name]
        shift = _BITS * i
        out = {}
        for k, c in self.terms.items():
            if ((k >> shift) & _MASK) == degree:
                out[k - (degree << shift)] = c
        return ParamPoly(self.ring, out)


def poly_mul(p, q):
    """Exact product of two parameter polynomials over the same declared parameters."""
    if not isinstance(p, ParamPoly) or not isinstance(q, ParamPoly):
        raise UsageError("poly_mul expects ParamPoly operands")
    if p.ring != q.ring:
        raise UsageError(f"parameter-set mismatch: {p.ring} vs {q.ring}")
    return p * q


def poly_substitute(p, bindings):
    """Evaluate the parameters named in ``bindings``; unbound ones remain symbolic."""
    return p.substitute(bindings)
