"""Truncated power series in one oscillator variable and the substitution calculus built on them.

A :class:`TruncSeries` stores coefficients of ``x^0 .. x^D``.  Coefficients are
rationals or :class:`~nccapelli.scalars.ParamPoly` values, so exponents such as
``f^(-l)`` can stay symbolic in ``l``.  Binary operations keep the smaller
truncation order.  A series flagged ``polynomial`` is known exactly (all
coefficients past ``D`` vanish), which lets it be re-expanded to any order.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import DomainError, UsageError
from .fock import FockAlgebra
from .scalars import QQ, ParamPoly, ParamRing, is_scalar, rational


def _ring_of(values):
    for v in values:
        if isinstance(v, ParamPoly):
            return v.ring
    return QQ


def _coerce(ring, v):
    if isinstance(ring, ParamRing):
        return ring.coerce(v)
    if is_scalar(v):
        return rational(v)
    raise UsageError(f"{v!r} is not a rational")


def _join(r1, r2):
    if r1 == r2:
        return r1
    if r1 == QQ:
        return r2
    if r2 == QQ:
        return r1
    raise UsageError(f"parameter-set mismatch: {r1} vs {r2}")


def _invert_constant(c):
    """Exact inverse of a nonzero rational or constant parameter polynomial."""
    if isinstance(c, ParamPoly):
        if not c.is_constant() or not c:
            raise DomainError(f"{c} is not invertible")
        return c.ring.scalar(Fraction(1) / c.constant_value())
    if not c:
        raise DomainError("zero is not invertible")
    return rational(Fraction(1) / c)


class TruncSeries:
    """``c_0 + c_1 x + ... + c_D x^D + O(x^(D+1))``.

    >>> f = TruncSeries([1, -1], 4, polynomial=True)
    >>> f.inverse()
    1 + x + x^2 + x^3 + x^4 + O(x^5)
    """

    __slots__ = ("coeffs", "D", "ring", "polynomial")

    def __init__(self, coeffs, D, ring=None, polynomial=False):
        if D < 0:
            raise UsageError("truncation order must be non-negative")
        coeffs = list(coeffs)
        if polynomial and any(coeffs[D + 1:]):
            raise UsageError("polynomial degree exceeds the truncation order")
        ring = ring or _ring_of(coeffs)
        coeffs = [_coerce(ring, c) for c in coeffs[: D + 1]]
        coeffs += [ring.zero()] * (D + 1 - len(coeffs))
        self.coeffs = tuple(coeffs)
        self.D = D
        self.ring = ring
        self.polynomial = polynomial

    @classmethod
    def from_polynomial(cls, coeffs, D=None, ring=None):
        """Exact polynomial ``sum coeffs[i] x^i`` (trailing zeros allowed)."""
        coeffs = list(coeffs)
        while len(coeffs) > 1 and not coeffs[-1]:
            coeffs.pop()
        D = len(coeffs) - 1 if D is None else D
        return cls(coeffs, D, ring, polynomial=True)

    # -- inspection ------------------------------------------------------
    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return self.D + 1

    def degree(self):
        """Index of the last nonzero coefficient (-1 for zero)."""
        for i in range(self.D, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        D = min(self.D, other.D)
        return self.coeffs[: D + 1] == other.coeffs[: D + 1]

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                parts.append(f"({c})" if isinstance(c, ParamPoly) and c.term_count() > 1 else str(c))
            elif c == 1:
                parts.append(mono)
            elif isinstance(c, ParamPoly) and c.term_count() > 1:
                parts.append(f"({c})*{mono}")
            else:
                parts.append(f"{c}*{mono}")
        body = " + ".join(parts) if parts else "0"
        return body if self.polynomial else f"{body} + O(x^{self.D + 1})"

    # -- order management ------------------------------------------------
    def truncate(self, D):
        if D > self.D and not self.polynomial:
            raise DomainError(f"cannot raise the truncation order of an inexact series beyond {self.D}")
        return TruncSeries(self.coeffs[: D + 1], D, self.ring, polynomial=self.polynomial and D >= self.degree())

    def extend(self, D):
        """Same exact polynomial carried to truncation order ``D``."""
        if not self.polynomial:
            raise DomainError("only exact polynomials can be re-expanded")
        return TruncSeries(self.coeffs, D, self.ring, polynomial=D >= self.degree())

    def in_ring(self, ring):
        if ring == self.ring:
            return self
        return TruncSeries([_coerce(ring, c) for c in self.coeffs], self.D, ring, self.polynomial)

    # -- arithmetic ------------------------------------------------------
    def _align(self, other):
        if isinstance(other, TruncSeries):
            return other
        ring = _ring_of([other])
        return TruncSeries([other], max(self.D, 0), ring, polynomial=True)

    def __add__(self, other):
        o = self._align(other)
        ring = _join(self.ring, o.ring)
        inexact = [x.D for x in (self, o) if not x.polynomial]
        D = min(inexact) if inexact else max(self.D, o.D)
        a, b = self.in_ring(ring), o.in_ring(ring)
        out = [
            (a.coeffs[i] if i <= a.D else ring.zero()) + (b.coeffs[i] if i <= b.D else ring.zero())
            for i in range(D + 1)
        ]
        return TruncSeries(out, D, ring, polynomial=self.polynomial and o.polynomial)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.D, self.ring, self.polynomial)

    def __sub__(self, other):
        return self + (-self._align(other))

    def __rsub__(self, other):
        return self._align(other) + (-self)

    def scale(self, c):
        """Multiply every coefficient by a rational or parameter polynomial."""
        ring = _join(self.ring, _ring_of([c]))
        c = _coerce(ring, c)
        return TruncSeries([c * v for v in self.in_ring(ring).coeffs], self.D, ring, self.polynomial)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        ring = _join(self.ring, other.ring)
        a, b = self.in_ring(ring), other.in_ring(ring)
        if a.polynomial and b.polynomial:
            D = a.degree() + b.degree() if a.degree() >= 0 and b.degree() >= 0 else 0
            D = max(D, a.D, b.D)
            exact = True
        else:
            D = min(x.D for x in (a, b) if not x.polynomial)
            exact = False
        out = [ring.zero()] * (D + 1)
        for i, ci in enumerate(a.coeffs):
            if not ci or i > D:
                continue
            for j, cj in enumerate(b.coeffs[: D - i + 1]):
                if cj:
                    out[i + j] = out[i + j] + ci * cj
        return TruncSeries(out, D, ring, polynomial=exact)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise UsageError("use ts_pow_param for non-integer or negative exponents")
        out = TruncSeries([1], self.D, self.ring, polynomial=self.polynomial)
        for _ in range(e):
            out = out * self
        return out

    def derivative(self):
        """Formal derivative; an inexact series loses one order of precision."""
        out = [self.coeffs[i] * i for i in range(1, self.D + 1)]
        if self.polynomial:
            return TruncSeries(out or [0], self.D, self.ring, polynomial=True)
        if self.D == 0:
            raise DomainError("derivative of a series known only to order 0")
        return TruncSeries(out, self.D - 1, self.ring)

    def inverse(self):
        """Multiplicative inverse; the constant term must be invertible."""
        inv0 = _invert_constant(self.coeffs[0])
        D = self.D
        b = [inv0]
        for k in range(1, D + 1):
            acc = self.ring.zero()
            for i in range(1, k + 1):
                if self.coeffs[i]:
                    acc = acc + self.coeffs[i] * b[k - i]
            b.append(-(inv0 * acc))
        return TruncSeries(b, D, self.ring)

    def log(self):
        """``sum_{k>=1} (-1)^(k+1) (f-1)^k / k`` for ``f(0) = 1``."""
        if self.coeffs[0] != 1:
            raise DomainError("log needs constant term 1")
        u = TruncSeries([0] + list(self.coeffs[1:]), self.D, self.ring)
        out = TruncSeries([0], self.D, self.ring)
        power = u
        for k in range(1, self.D + 1):
            out = out + power.scale(Fraction((-1) ** (k + 1), k))
            power = power * u
        return out

    def exp(self):
        """``sum_k u^k / k!`` for a series ``u`` with zero constant term."""
        if self.coeffs[0]:
            raise DomainError("exp needs zero constant term")
        u = TruncSeries(self.coeffs, self.D, self.ring)
        out = TruncSeries([1], self.D, self.ring)
        power = TruncSeries([1], self.D, self.ring)
        for k in range(1, self.D + 1):
            power = power * u
            out = out + power.scale(Fraction(1, factorial(k)))
        return out

    def to_fock(self, fock=None, creation=False):
        """The operator ``sum c_i a^i`` (or ``(a†)^i``) in a Fock algebra."""
        F = fock or FockAlgebra(self.ring)
        return F.from_series(self.coeffs, creation=creation)


def ts_pow_param(f, sigma):
    """``f^sigma = exp(sigma * log f)`` for ``f(0) = 1`` and a symbolic exponent."""
    if f.coeffs[0] != 1:
        raise DomainError("f(0) must be 1 to raise to a symbolic power")
    if f.polynomial:
        f = TruncSeries(f.coeffs, f.D, f.ring)
    return f.log().scale(sigma).exp()


def binom_s(l, h, s):
    """``l (l - s) ... (l - (h-1) s) / h!``."""
    if h < 0:
        raise UsageError("h must be non-negative")
    out = 1
    for i in range(h):
        out = (l - s * i) * out
    out = out * Fraction(1, factorial(h))
    return rational(out) if is_scalar(out) else out


def g_from_f(f, s):
    """``-[f'(a)]^(-1) f(a)^(s+1)``; ``f'(0)`` must be a nonzero constant."""
    if f.coeffs[0] != 1:
        raise DomainError("f(0) must be 1")
    df = f.derivative()
    if not df.coeffs[0]:
        raise DomainError("f'(0) is not invertible")
    if f.polynomial:
        base = TruncSeries(f.coeffs, f.D, f.ring)
    else:
        base = f.truncate(df.D)
    return -(df.inverse() * ts_pow_param(base, s + 1))


def _as_exact(f, D):
    if f.polynomial:
        return f.extend(D)
    if f.D < D:
        raise DomainError(f"series known to order {f.D} but order {D} is needed")
    return f.truncate(D)


def chi_h_operator(f, s, h, D, fock=None):
    """Normal-ordered ``(1/h!) (a† g(a,s))^h f(a)^(-s h - 1)`` truncated at ``a``-degree ``D``.

    Intermediate products keep every ``a``-power that can still be lowered to at
    most ``D`` by the creators further right, so the truncation is exact.
    """
    if h < 0:
        raise UsageError("h must be non-negative")
    ring = _join(f.ring, _ring_of([s]))
    top = D + h
    base = _as_exact(f, top + 1).in_ring(ring)
    F = fock or FockAlgebra(ring)
    g = g_from_f(base, s).truncate(top).to_fock(F)
    tail = ts_pow_param(base.truncate(top), -s * h - 1).to_fock(F)
    adag = F.adag()
    out = F.one()
    remaining = h
    for _ in range(h):
        out = (out * adag).truncate(D + remaining)
        remaining -= 1
        out = (out * g).truncate(D + remaining)
    out = (out * tail).truncate(D)
    return out.scale(Fraction(1, factorial(h))) if h > 1 else out


def cbh_rhs(f, c, K):
    """Corrected exponent ``sum_k c^k/(k+1)! (d^k f)`` for ``k <= min(K, deg f)``."""
    if not f.polynomial:
        raise DomainError("cbh_rhs needs an exact polynomial f")
    ring = _join(f.ring, _ring_of([c]))
    out = TruncSeries([0], f.D, ring, polynomial=True)
    deriv = f.in_ring(ring)
    cpow = 1
    for k in range(0, min(K, max(f.degree(), 0)) + 1):
        out = out + deriv.scale(cpow * Fraction(1, factorial(k + 1)))
        deriv = deriv.derivative()
        cpow = cpow * c
    return out
