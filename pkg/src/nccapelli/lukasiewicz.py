"""Bracket symbols, their rewriting rule, and weighted Łukasiewicz paths.

A symbol ``<ν_1..ν_t | ν_{t+1}..ν_n>`` has level ``t``; entries left of the bar
are ``>= -1`` and entries right of it are ``>= 0``.  A path is stored by its
jumps ``-ν_i``; heights are always recomputed from the jumps.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import accumulate, product
from math import factorial

from .errors import UsageError
from .fock import CoherentAlgebra, FockAlgebra, bra_ket_product, chi, reduce_all_pairs


@dataclass(frozen=True, order=True)
class LukasSymbol:
    level: int
    nu: tuple

    def __post_init__(self):
        nu = tuple(int(v) for v in self.nu)
        object.__setattr__(self, "nu", nu)
        if not 0 <= self.level <= len(nu):
            raise UsageError(f"level {self.level} outside 0..{len(nu)}")
        if any(v < -1 for v in nu[: self.level]) or any(v < 0 for v in nu[self.level:]):
            raise UsageError(f"entries of {nu} violate the bounds for level {self.level}")

    @property
    def n(self):
        return len(self.nu)

    @property
    def norm(self):
        return sum(self.nu)

    @property
    def height(self):
        return sum(self.nu[self.level:])

    def path(self):
        """The path traced by the barred entries."""
        return LukasPath.from_nu(self.nu[: self.level])

    def __str__(self):
        left = ",".join(map(str, self.nu[: self.level]))
        right = ",".join(map(str, self.nu[self.level:]))
        return f"⟨{left}|{right}⟩"


class SymbolCombo:
    """Integer combination of symbols sharing length and norm."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        terms = {s: int(c) for s, c in terms.items() if c}
        shapes = {(s.n, s.norm) for s in terms}
        if len(shapes) > 1:
            raise UsageError("symbols in a combination must share length and norm")
        self.terms = terms

    @classmethod
    def single(cls, symbol, coeff=1):
        return cls({symbol: coeff})

    def coefficient(self, symbol):
        return self.terms.get(symbol, 0)

    def levels(self):
        return {s.level for s in self.terms}

    def norms(self):
        return {s.norm for s in self.terms}

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __eq__(self, other):
        return isinstance(other, SymbolCombo) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, 0) + c
        return SymbolCombo(out)

    def __repr__(self):
        return " + ".join(f"{c}*{s}" for s, c in self) or "0"


def expand_step(combo):
    """Rewrite every symbol one level deeper.

    ``<..| ν_t, ..>`` becomes ``<.., ν_t | ..>`` plus, for each later slot ``k``,
    ``<.., -1 | .., ν_k + ν_t + 1, ..>``.
    """
    levels = combo.levels()
    if len(levels) > 1:
        raise UsageError("all symbols must share one level")
    if not levels:
        return SymbolCombo({})
    level = levels.pop()
    out = {}
    for sym, c in combo.terms.items():
        nu = sym.nu
        if level >= len(nu):
            raise UsageError("symbols at the top level cannot be expanded")
        v = nu[level]
        head = nu[:level]
        first = LukasSymbol(level + 1, nu)
        out[first] = out.get(first, 0) + c
        for k in range(level + 1, len(nu)):
            new = list(nu)
            new[level] = -1
            new[k] = nu[k] + v + 1
            s = LukasSymbol(level + 1, head + tuple(new[level:]))
            out[s] = out.get(s, 0) + c
    return SymbolCombo(out)


@lru_cache(maxsize=None)
def expansion(n, level):
    """The zero-norm start symbol ``<|0...0>`` rewritten down to ``level``."""
    if not 0 <= level <= n:
        raise UsageError(f"level must lie in 0..{n}")
    combo = SymbolCombo.single(LukasSymbol(0, (0,) * n))
    for _ in range(level):
        combo = expand_step(combo)
    return combo


def recursion_coefficient(nu):
    """Coefficient of ``<ν_1..ν_n |>`` in the full expansion of ``<|0...0>`` (0 if absent)."""
    nu = tuple(nu)
    if any(v < -1 for v in nu):
        return 0
    return expansion(len(nu), len(nu)).coefficient(LukasSymbol(len(nu), nu))


class LukasPath:
    """Lattice path with integer jumps ``<= 1`` starting at height 0."""

    __slots__ = ("jumps",)

    def __init__(self, jumps):
        jumps = tuple(int(j) for j in jumps)
        if any(j > 1 for j in jumps):
            raise UsageError("jumps are bounded above by +1")
        self.jumps = jumps

    @classmethod
    def from_nu(cls, nu):
        return cls(-v for v in nu)

    @property
    def nu(self):
        return tuple(-j for j in self.jumps)

    def heights(self):
        """``(h_0, h_1, ..., h_n)`` with ``h_0 = 0``."""
        return (0,) + tuple(accumulate(self.jumps))

    def __len__(self):
        return len(self.jumps)

    def is_admissible(self):
        return min(self.heights()) >= 0

    def is_excursion(self):
        return self.is_admissible() and self.heights()[-1] == 0

    def __eq__(self, other):
        return isinstance(other, LukasPath) and self.jumps == other.jumps

    def __hash__(self):
        return hash(self.jumps)

    def __repr__(self):
        return f"LukasPath(nu={self.nu})"


def _as_path(gamma):
    return gamma if isinstance(gamma, LukasPath) else LukasPath.from_nu(gamma)


def c_formula(gamma, t=None):
    """Closed-form weight ``h_t! prod_{i<=t, h_i<=h_(i-1)} h_(i-1)!/h_i!``.

    Returns 0 for a path that goes below zero within the first ``t`` steps, and
    for ``t = n`` whenever the path does not end at height 0.
    """
    gamma = _as_path(gamma)
    n = len(gamma)
    t = n if t is None else t
    if not 0 <= t <= n:
        raise UsageError(f"t must lie in 0..{n}")
    h = gamma.heights()[: t + 1]
    if min(h) < 0:
        return 0
    if t == n and h[-1] != 0:
        return 0
    out = factorial(h[t])
    for i in range(1, t + 1):
        if h[i] <= h[i - 1]:
            out *= factorial(h[i - 1]) // factorial(h[i])
    return out


def enumerate_excursions(n):
    """All excursions of length ``n`` (nonnegative, ending at 0), in lexicographic ν order."""
    if n < 0:
        raise UsageError("length must be non-negative")
    out = []

    def walk(prefix, height):
        left = n - len(prefix)
        if left == 0:
            if height == 0:
                out.append(LukasPath(prefix))
            return
        for jump in range(1, -height - 1, -1):
            walk(prefix + (jump,), height + jump)

    walk((), 0)
    return sorted(out, key=lambda p: p.nu)


def count_excursions_brute(n):
    """Count excursions by scanning every ν in ``{-1..n-1}^(n-1)`` with the last entry forced."""
    if n == 0:
        return 1
    total = 0
    for head in product(range(-1, n), repeat=n - 1):
        last = -sum(head)
        if last < -1:
            continue
        h = 0
        for v in head:
            h -= v
            if h < 0:
                break
        else:
            total += 1
    return total


_FOCK = FockAlgebra()


def fock_weight(gamma):
    """``<0| chi(ν_1) ... chi(ν_n) |0>`` computed in the oscillator algebra."""
    nu = _as_path(gamma).nu
    if not nu:
        return 1
    return bra_ket_product([chi(v, _FOCK) for v in nu])


def holomorphic_weight(gamma):
    """Moment-rule evaluation of ``prod_i chi_i(ν_i)`` with ``chi_i = z̄_(i-1)^ν`` or ``z_i``."""
    nu = _as_path(gamma).nu
    n = len(nu)
    if n == 0:
        return 1
    C = CoherentAlgebra(n)
    expr = C.one()
    for i, v in enumerate(nu, start=1):
        expr = expr * (C.z(i) if v == -1 else C.zbar(i - 1) ** v)
        if not expr:
            return 0
    return reduce_all_pairs(expr)
