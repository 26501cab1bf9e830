"""Matrices over an arbitrary ring: ordered determinants, minors and commutation checks.

Indices are 0-based in code; witnesses and rendered messages are 1-based.
Every product inside a determinant is taken in the order ``i = 1..n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from .errors import DomainError, UsageError
from .scalars import QQ, is_scalar, ring_of


def _ring_of_entries(entries):
    for row in entries:
        for x in row:
            if not is_scalar(x):
                return ring_of(x)
    return QQ


class NCMatrix:
    """Rectangular matrix with entries in one ring.

    >>> M = NCMatrix([[1, 2], [3, 4]])
    >>> nc_det("col", M)
    -2
    """

    __slots__ = ("entries", "nrows", "ncols", "ring")

    def __init__(self, entries, ring=None):
        entries = [list(r) for r in entries]
        ncols = len(entries[0]) if entries else 0
        if any(len(r) != ncols for r in entries):
            raise UsageError("matrix rows have different lengths")
        self.ring = ring or _ring_of_entries(entries)
        self.entries = [[self._embed(x) for x in r] for r in entries]
        self.nrows = len(entries)
        self.ncols = ncols

    def _embed(self, x):
        if is_scalar(x) and self.ring is not QQ:
            return self.ring.scalar(x)
        return x

    @classmethod
    def identity(cls, n, ring=QQ):
        return cls([[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)], ring)

    @classmethod
    def diag(cls, values, ring=QQ):
        n = len(values)
        return cls([[values[i] if i == j else ring.zero() for j in range(n)] for i in range(n)], ring)

    @classmethod
    def zeros(cls, rows, cols, ring=QQ):
        return cls([[ring.zero()] * cols for _ in range(rows)], ring)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_square(self):
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, NCMatrix) and self.shape == other.shape and all(
            a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)
        )

    def __repr__(self):
        return "NCMatrix([" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.entries) + "])"

    def map(self, fn, ring=None):
        return NCMatrix([[fn(x) for x in r] for r in self.entries], ring)

    def transpose(self):
        return NCMatrix([list(col) for col in zip(*self.entries)] if self.entries else [], self.ring)

    @property
    def T(self):
        return self.transpose()

    def __add__(self, other):
        if self.shape != other.shape:
            raise UsageError(f"shape mismatch {self.shape} vs {other.shape}")
        return NCMatrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if self.shape != other.shape:
            raise UsageError(f"shape mismatch {self.shape} vs {other.shape}")
        return NCMatrix([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)])

    def scale(self, c):
        """Multiply every entry by ``c`` on the left."""
        return NCMatrix([[c * x for x in r] for r in self.entries])

    def rscale(self, c):
        return NCMatrix([[x * c for x in r] for r in self.entries])

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise UsageError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = None
                for k in range(self.ncols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if not a or not b:
                        continue
                    p = a * b
                    acc = p if acc is None else acc + p
                row.append(acc if acc is not None else _zero_like(self, other))
            out.append(row)
        return NCMatrix(out)

    matmul = __matmul__

    def __pow__(self, e):
        if not self.is_square() or e < 0:
            raise UsageError("powers need a square matrix and a non-negative exponent")
        out = NCMatrix.identity(self.nrows, self.ring)
        for _ in range(e):
            out = out @ self
        return out


def _zero_like(*mats):
    for M in mats:
        if M.ring is not QQ:
            return M.ring.zero()
    return 0


# -- permutations -------------------------------------------------------------

class Permutation:
    """Bijection of ``{0..n-1}`` given by its image sequence."""

    __slots__ = ("image",)

    def __init__(self, image):
        image = tuple(image)
        if sorted(image) != list(range(len(image))):
            raise UsageError(f"{image} is not a permutation")
        self.image = image

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    @classmethod
    def all(cls, n):
        return [cls(p) for p in permutations(range(n))]

    def __len__(self):
        return len(self.image)

    def __call__(self, i):
        return self.image[i]

    def sign(self):
        seen = [False] * len(self.image)
        s = 1
        for i in range(len(self.image)):
            if seen[i]:
                continue
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = self.image[j]
                length += 1
            if length % 2 == 0:
                s = -s
        return s

    def compose(self, other):
        """``(self ∘ other)(i) = self(other(i))``."""
        return Permutation(self.image[i] for i in other.image)

    def inverse(self):
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(inv)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.image == other.image

    def __hash__(self):
        return hash(self.image)

    def __repr__(self):
        return f"Permutation({[i + 1 for i in self.image]})"


# -- determinants -------------------------------------------------------------

def _one(M):
    return 1 if M.ring is QQ else M.ring.one()


def _alternating_sum(n, factor, one, zero):
    """``sum_σ sgn(σ) factor(0, σ(0)) factor(1, σ(1)) ...`` with shared prefixes."""
    total = None

    def walk(pos, used, prefix, sign):
        nonlocal total
        if pos == n:
            term = prefix if sign > 0 else -prefix
            total = term if total is None else total + term
            return
        inversions = 0
        for c in range(n - 1, -1, -1):
            if used >> c & 1:
                inversions += 1
                continue
            x = factor(pos, c)
            if not x:
                continue
            walk(pos + 1, used | 1 << c, prefix * x, -sign if inversions % 2 else sign)

    walk(0, 0, one, 1)
    return zero if total is None else total


def nc_det(variant, M):
    """Column-, row- or symmetric-determinant of a square matrix.

    ``col``: ``sum_σ sgn σ M[σ1,1] M[σ2,2] ...``; ``row``: ``sum_σ sgn σ M[1,σ1] M[2,σ2] ...``;
    ``sym``: ``(1/n!) sum_{σ,τ} sgn σ sgn τ prod_i M[σi,τi]``.
    """
    if not isinstance(M, NCMatrix):
        M = NCMatrix(M)
    if not M.is_square():
        raise UsageError(f"determinant of a non-square {M.shape} matrix")
    n = M.nrows
    one, zero = _one(M), _zero_like(M)
    E = M.entries
    if variant == "col":
        return _alternating_sum(n, lambda pos, r: E[r][pos], one, zero)
    if variant == "row":
        return _alternating_sum(n, lambda pos, c: E[pos][c], one, zero)
    if variant == "sym":
        if not M.ring.has_rationals:
            raise DomainError("the symmetric determinant divides by n!")
        total = zero
        for tau in Permutation.all(n):
            s = tau.sign()
            part = _alternating_sum(n, lambda pos, r, tau=tau: E[r][tau(pos)], one, zero)
            total = total + (part if s > 0 else -part)
        return total * Fraction(1, factorial(n)) if n > 1 else total
    raise UsageError(f"unknown determinant variant {variant!r}")


def _check_indices(idx, bound, what):
    idx = tuple(idx)
    if any(not 0 <= i < bound for i in idx):
        raise UsageError(f"{what} index out of range in {idx}")
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise UsageError(f"{what} indices must be strictly increasing: {idx}")
    return idx


def minor(M, rows, cols):
    """Submatrix on 0-based, strictly increasing row and column index sets."""
    rows = _check_indices(rows, M.nrows, "row")
    cols = _check_indices(cols, M.ncols, "column")
    return NCMatrix([[M.entries[i][j] for j in cols] for i in rows], M.ring)


def cauchy_binet_lhs(variant, X, Y):
    """``sum_{|L|=n} det X[[n], L] det Y[L, [n]]`` with the chosen determinant."""
    n, m = X.shape
    if Y.shape != (m, n):
        raise UsageError(f"shapes {X.shape} and {Y.shape} are not n x m and m x n")
    total = None
    for L in combinations(range(m), n):
        dx = nc_det(variant, minor(X, range(n), L))
        if not dx:
            continue
        dy = nc_det(variant, minor(Y, L, range(n)))
        if not dy:
            continue
        p = dx * dy
        total = p if total is None else total + p
    return total if total is not None else _zero_like(X, Y)


def q_correction(variant, A):
    """``A_ij (n - j)`` (``col``) or ``A_ij (i - 1)`` (``row``), 1-based."""
    if not A.is_square():
        raise UsageError("the correction needs a square matrix")
    n = A.nrows
    if variant == "col":
        w = lambda i, j: n - 1 - j  # noqa: E731
    elif variant == "row":
        w = lambda i, j: i  # noqa: E731
    else:
        raise UsageError(f"unknown variant {variant!r}")
    return NCMatrix([[A.entries[i][j] * w(i, j) for j in range(n)] for i in range(n)], A.ring)


def permute(M, tau, side):
    """``M^τ`` (``side='cols'``: ``M[i, τ(j)]``) or ``^τM`` (``side='rows'``: ``M[τ(i), j]``)."""
    if side == "cols":
        if len(tau) != M.ncols:
            raise UsageError("permutation size does not match the column count")
        return NCMatrix([[r[tau(j)] for j in range(M.ncols)] for r in M.entries], M.ring)
    if side == "rows":
        if len(tau) != M.nrows:
            raise UsageError("permutation size does not match the row count")
        return NCMatrix([list(M.entries[tau(i)]) for i in range(M.nrows)], M.ring)
    raise UsageError(f"side must be 'rows' or 'cols', not {side!r}")


# -- commutation predicates ---------------------------------------------------

def _comm(a, b):
    if is_scalar(a) or is_scalar(b):
        return 0
    return a * b - b * a


@dataclass
class Check:
    """Outcome of one commutation predicate; ``witness`` is 1-based."""

    holds: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.holds


def _first_failure(index_ranges, test):
    from itertools import product

    for idx in product(*index_ranges):
        if not test(*idx):
            return Check(False, tuple(i + 1 for i in idx))
    return Check(True)


def column_pc(M):
    """``[M_ij, M_kl] = [M_il, M_kj]`` and ``[M_ij, M_il] = 0``."""
    E = M.entries
    r, c = range(M.nrows), range(M.ncols)
    first = _first_failure(
        (r, c, r, c), lambda i, j, k, l: _comm(E[i][j], E[k][l]) == _comm(E[i][l], E[k][j])
    )
    if not first:
        return first
    return _first_failure((r, c, c), lambda i, j, l: not _comm(E[i][j], E[i][l]))


def row_pc(M):
    """The transpose is column-pseudo-commutative."""
    return column_pc(M.transpose())


def weak_row_symmetric(M):
    """``[M_ij, M_kl] = [M_kj, M_il]`` for all indices."""
    E = M.entries
    r, c = range(M.nrows), range(M.ncols)
    return _first_failure(
        (r, c, r, c), lambda i, j, k, l: _comm(E[i][j], E[k][l]) == _comm(E[k][j], E[i][l])
    )


def weak_column_symmetric(M):
    """``[M_ij, M_kl] = [M_il, M_kj]`` whenever ``i != k``."""
    E = M.entries
    r, c = range(M.nrows), range(M.ncols)
    return _first_failure(
        (r, c, r, c),
        lambda i, j, k, l: i == k or _comm(E[i][j], E[k][l]) == _comm(E[i][l], E[k][j]),
    )


def is_commutative(M):
    E = M.entries
    r, c = range(M.nrows), range(M.ncols)
    return _first_failure((r, c, r, c), lambda i, j, k, l: not _comm(E[i][j], E[k][l]))


@dataclass
class CommutationReport:
    """Which commutation hypotheses hold for a quadruple ``(X, Y, A, B)``."""

    checks: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.checks[name]

    def holds(self, *names):
        return all(self.checks[n].holds for n in names)

    def failures(self, *names):
        names = names or tuple(self.checks)
        return {n: self.checks[n].witness for n in names if not self.checks[n].holds}

    def as_dict(self):
        return {n: {"holds": c.holds, "witness": list(c.witness) if c.witness else None}
                for n, c in self.checks.items()}


def commutation_report(X, Y, A, B):
    """Evaluate every commutation hypothesis used by the identities.

    ``xy_relation``: ``[X_ij, Y_kl] = -A_il B_kj``; ``xa``: ``[X_ij, A_kl] = [X_kj, A_il]``;
    ``ya``: ``[Y_ij, A_kl] = [Y_il, A_kj]``; ``b_central``: entries of B commute with
    every entry of X, Y, A (and with each other).
    """
    n, m = X.shape
    if Y.shape != (m, n) or A.shape != (n, n) or B.shape != (m, m):
        raise UsageError(f"incompatible shapes X{X.shape} Y{Y.shape} A{A.shape} B{B.shape}")
    Xe, Ye, Ae, Be = X.entries, Y.entries, A.entries, B.entries
    rn, rm = range(n), range(m)
    checks = {
        "X_row_pc": row_pc(X),
        "X_col_pc": column_pc(X),
        "Y_row_pc": row_pc(Y),
        "Y_col_pc": column_pc(Y),
        "X_commutative": is_commutative(X),
        "Y_commutative": is_commutative(Y),
        "X_weak_row_symmetric": weak_row_symmetric(X),
        "Y_weak_column_symmetric": weak_column_symmetric(Y),
        "xy_relation": _first_failure(
            (rn, rm, rm, rn),
            lambda i, j, k, l: _comm(Xe[i][j], Ye[k][l]) == -(Ae[i][l] * Be[k][j]),
        ),
        "xa": _first_failure(
            (rn, rm, rn, rn),
            lambda i, j, k, l: _comm(Xe[i][j], Ae[k][l]) == _comm(Xe[k][j], Ae[i][l]),
        ),
        "ya": _first_failure(
            (rm, rn, rn, rn),
            lambda i, j, k, l: _comm(Ye[i][j], Ae[k][l]) == _comm(Ye[i][l], Ae[k][j]),
        ),
    }
    others = [x for r in Xe + Ye + Ae + Be for x in r]
    checks["b_central"] = _first_failure(
        (rm, rm, range(len(others))), lambda k, j, t: not _comm(Be[k][j], others[t])
    )
    checks["a_central"] = _first_failure(
        (rn, rn, range(len(others))), lambda i, j, t: not _comm(Ae[i][j], others[t])
    )
    checks["b_identity"] = _first_failure(
        (rm, rm), lambda k, j: Be[k][j] == (1 if k == j else 0)
    )
    return CommutationReport(checks)
