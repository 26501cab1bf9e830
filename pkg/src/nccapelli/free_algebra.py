"""Free associative algebra on a finite alphabet.

Words are tuples of generator ids; no relations are ever applied, so two
elements are equal exactly when their word expansions agree.
"""
from __future__ import annotations

from ._sparse import Algebra, SparseElement
from .errors import UsageError
from .scalars import QQ


class FreePoly(SparseElement):
    __slots__ = ()

    def degree(self):
        return max((len(w) for w in self.terms), default=-1)


class FreeAlgebra(Algebra):
    """Noncommutative polynomials in named generators.

    >>> F = FreeAlgebra(["u", "v"])
    >>> u, v = F.gens()
    >>> u * v - v * u
    u v + (-1)*v u
    """

    element_class = FreePoly
    unit_key = ()

    def __init__(self, names, coeff=QQ, max_degree=None):
        super().__init__(coeff)
        names = tuple(str(n) for n in names)
        if len(set(names)) != len(names):
            raise UsageError("generator names must be unique")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}
        self.max_degree = max_degree

    def _same(self, other):
        return (self.names, self.coeff, self.max_degree) == (other.names, other.coeff, other.max_degree)

    def __hash__(self):
        return hash(("FreeAlgebra", self.names, self.max_degree))

    def __repr__(self):
        return f"FreeAlgebra({len(self.names)} generators over {self.coeff})"

    def commutative(self):
        return len(self.names) <= 1

    def gen(self, name):
        try:
            return self.monomial((self._index[name],))
        except KeyError:
            raise UsageError(f"{name!r} is not in the alphabet") from None

    def gens(self):
        return tuple(self.monomial((i,)) for i in range(len(self.names)))

    def word(self, letters):
        """The monomial spelled by a sequence of generator names."""
        return self.monomial(tuple(self._index[n] for n in letters))

    def key_str(self, key):
        return " ".join(self.names[i] for i in key) if key else "1"

    def key_sort(self, key):
        return (len(key), key)

    def _mul_keys(self, k1, k2):
        w = k1 + k2
        if self.max_degree is not None and len(w) > self.max_degree:
            return ()
        return ((w, 1),)


def _check_pair(p, q):
    if not isinstance(p, FreePoly) or not isinstance(q, FreePoly):
        raise UsageError("expected free polynomials")
    if p.parent != q.parent:
        raise UsageError("free polynomials over different alphabets")


def fp_mul(p, q):
    """Product of two free polynomials (bilinear word concatenation)."""
    _check_pair(p, q)
    return p * q


def fp_commutator(p, q):
    """The commutator ``p*q - q*p``."""
    _check_pair(p, q)
    return p * q - q * p


def free_matrices(shapes, coeff=QQ):
    """Matrices of distinct free generators sharing one alphabet.

    ``shapes`` maps a prefix to ``(rows, cols)``; generator ``<prefix>_<i><j>``
    sits at 1-based position (i, j).  Returns ``(algebra, {prefix: entries})``.
    """
    names = [
        f"{p}_{i + 1}{j + 1}" for p, (r, c) in shapes.items() for i in range(r) for j in range(c)
    ]
    alg = FreeAlgebra(names, coeff)
    out = {
        p: [[alg.gen(f"{p}_{i + 1}{j + 1}") for j in range(c)] for i in range(r)]
        for p, (r, c) in shapes.items()
    }
    return alg, out
