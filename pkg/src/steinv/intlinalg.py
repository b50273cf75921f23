"""Exact integer matrices, Hermite and Smith normal forms, and finitely
generated abelian groups presented by them.

Entries are arbitrary precision Python ints.  Pivots are always chosen
as the smallest nonzero absolute value, ties broken by the lowest
(row, column) position, which makes both normal forms deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import ValidationError


class IntMatrix:
    """Immutable integer matrix, row major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        if not rows:
            raise ValidationError("matrix needs at least one row")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValidationError("ragged rows")
        if width == 0:
            raise ValidationError("matrix needs at least one column")
        self.entries = rows
        self.rows = len(rows)
        self.cols = width

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)])

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.entries]})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValidationError("dimension mismatch in product")
        cols = list(zip(*other.entries))
        return IntMatrix(
            [
                [sum(a * b for a, b in zip(row, col)) for col in cols]
                for row in self.entries
            ]
        )

    def transpose(self) -> "IntMatrix":
        return IntMatrix(list(zip(*self.entries)))

    def diagonal(self) -> tuple:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise ValidationError("determinant of a non-square matrix")
        n = self.rows
        m = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k]), None)
                if swap is None:
                    return 0
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# shared row/column primitives on mutable list-of-list workspaces


def _identity_ws(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _swap_rows(m, u, a, b):
    m[a], m[b] = m[b], m[a]
    u[a], u[b] = u[b], u[a]


def _negate_row(m, u, a):
    m[a] = [-x for x in m[a]]
    u[a] = [-x for x in u[a]]


def _row_sub(m, u, i, k, q):
    # row i -= q * row k
    if q == 0:
        return
    m[i] = [x - q * y for x, y in zip(m[i], m[k])]
    u[i] = [x - q * y for x, y in zip(u[i], u[k])]


def _row_add(m, u, i, k):
    m[i] = [x + y for x, y in zip(m[i], m[k])]
    u[i] = [x + y for x, y in zip(u[i], u[k])]


def _swap_cols(m, v, a, b):
    for row in m:
        row[a], row[b] = row[b], row[a]
    for row in v:
        row[a], row[b] = row[b], row[a]


def _col_sub(m, v, j, k, q):
    # column j -= q * column k
    if q == 0:
        return
    for row in m:
        row[j] -= q * row[k]
    for row in v:
        row[j] -= q * row[k]


def hermite_normal_form(A: IntMatrix):
    """Row-style Hermite normal form.

    Returns (H, U) with H = U @ A, U unimodular, H in row echelon form
    with positive pivots and the entries above each pivot reduced into
    [0, pivot).
    """
    rows, cols = A.rows, A.cols
    m = [list(r) for r in A.entries]
    u = _identity_ws(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if m[i][c]]
            if not nz:
                break
            best = min(nz, key=lambda i: (abs(m[i][c]), i))
            if best != r:
                _swap_rows(m, u, r, best)
            if m[r][c] < 0:
                _negate_row(m, u, r)
            clean = True
            for i in range(r + 1, rows):
                if m[i][c]:
                    _row_sub(m, u, i, r, m[i][c] // m[r][c])
                    if m[i][c]:
                        clean = False
            if clean:
                break
        if m[r][c]:
            for i in range(r):
                _row_sub(m, u, i, r, m[i][c] // m[r][c])
            r += 1
    return IntMatrix(m), IntMatrix(u)


def smith_normal_form(A: IntMatrix):
    """Smith normal form.

    Returns (D, U, V) with D = U @ A @ V, U and V unimodular, D diagonal
    with nonnegative entries forming a divisibility chain d1 | d2 | ...
    """
    rows, cols = A.rows, A.cols
    m = [list(r) for r in A.entries]
    u = _identity_ws(rows)
    v = _identity_ws(cols)
    t = 0
    limit = min(rows, cols)
    while t < limit:
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = abs(m[i][j])
                if x and (best is None or x < best):
                    best = x
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        if i != t:
            _swap_rows(m, u, t, i)
        if j != t:
            _swap_cols(m, v, t, j)
        if m[t][t] < 0:
            _negate_row(m, u, t)
        while True:
            while any(m[i][t] for i in range(t + 1, rows)):
                for i in range(t + 1, rows):
                    if m[i][t]:
                        _row_sub(m, u, i, t, m[i][t] // m[t][t])
                        if m[i][t]:
                            _swap_rows(m, u, t, i)
                            if m[t][t] < 0:
                                _negate_row(m, u, t)
            while any(m[t][j] for j in range(t + 1, cols)):
                for j in range(t + 1, cols):
                    if m[t][j]:
                        _col_sub(m, v, j, t, m[t][j] // m[t][t])
                        if m[t][j]:
                            _swap_cols(m, v, t, j)
                            if m[t][t] < 0:
                                _negate_row(m, u, t)
            if not any(m[i][t] for i in range(t + 1, rows)) and not any(
                m[t][j] for j in range(t + 1, cols)
            ):
                break
        # the pivot must divide everything that remains
        p = m[t][t]
        offender = None
        for i in range(t + 1, rows):
            if any(x % p for x in m[i][t + 1 :]):
                offender = i
                break
        if offender is not None:
            _row_add(m, u, t, offender)
            continue
        t += 1
    for k in range(limit):
        if m[k][k] < 0:
            _negate_row(m, u, k)
    return IntMatrix(m), IntMatrix(u), IntMatrix(v)


# ---------------------------------------------------------------------------
# abelian groups presented as cokernels


def _strip_primes(d: int, primes) -> int:
    for p in primes:
        while d % p == 0:
            d //= p
    return d


class AbelianInvariants:
    """A finitely generated abelian group in invariant factor form.

    The group is a quotient of an ambient Z^n; `reduce` sends ambient
    integer (or rational, see class_of in classify) coordinate vectors
    to their residue vector.  Torsion factors are all >= 2 and form a
    divisibility chain; `free_rank` counts infinite cyclic summands.
    """

    __slots__ = ("invariant_factors", "free_rank", "transform", "torsion_rows", "free_rows")

    def __init__(self, invariant_factors, free_rank, transform, torsion_rows, free_rows):
        self.invariant_factors = tuple(int(d) for d in invariant_factors)
        self.free_rank = int(free_rank)
        self.transform = transform
        self.torsion_rows = tuple(torsion_rows)
        self.free_rows = tuple(free_rows)
        if any(d < 2 for d in self.invariant_factors):
            raise ValidationError("invariant factors must be at least 2")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a:
                raise ValidationError("invariant factors must form a chain")

    def same_group(self, other: "AbelianInvariants") -> bool:
        return (
            self.invariant_factors == other.invariant_factors
            and self.free_rank == other.free_rank
        )

    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "trivial"

    def reduce(self, vector):
        """Residues of an ambient coordinate vector.

        Returns (torsion, free): residues modulo each invariant factor and
        the exact values of the free coordinates.  Rational coordinates
        are allowed as long as their denominators are invertible modulo
        the relevant factor.
        """
        vec = [Fraction(x) for x in vector]
        if len(vec) != self.transform.cols:
            raise ValidationError("coordinate vector has the wrong length")
        image = [
            sum(a * x for a, x in zip(row, vec)) for row in self.transform.entries
        ]
        torsion = []
        for row, d in zip(self.torsion_rows, self.invariant_factors):
            y = image[row]
            if gcd(y.denominator, d) != 1:
                raise ValidationError(
                    f"denominator {y.denominator} is not invertible modulo {d}"
                )
            torsion.append(y.numerator * pow(y.denominator, -1, d) % d)
        free = tuple(image[row] for row in self.free_rows)
        return tuple(torsion), free

    def __repr__(self):
        return f"AbelianInvariants({self.describe()!r})"


def cokernel_invariants(A: IntMatrix) -> AbelianInvariants:
    """Invariants of Z^rows / (column span of A)."""
    d_mat, u_mat, _ = smith_normal_form(A)
    diag = list(d_mat.diagonal()) + [0] * (A.rows - min(A.rows, A.cols))
    torsion_rows = [i for i, d in enumerate(diag) if d >= 2]
    free_rows = [i for i, d in enumerate(diag) if d == 0]
    return AbelianInvariants(
        [diag[i] for i in torsion_rows],
        len(free_rows),
        u_mat,
        torsion_rows,
        free_rows,
    )


def localize_factors(inv: AbelianInvariants, primes: Iterable[int]) -> AbelianInvariants:
    """Kill the p-parts of the torsion for each inverted prime p.

    This is the invariant-factor effect of tensoring with Z[1/m]; it is
    idempotent and leaves the free rank alone.
    """
    primes = sorted(set(int(p) for p in primes))
    kept_rows = []
    kept_factors = []
    for row, d in zip(inv.torsion_rows, inv.invariant_factors):
        d2 = _strip_primes(d, primes)
        if d2 >= 2:
            kept_rows.append(row)
            kept_factors.append(d2)
    return AbelianInvariants(
        kept_factors, inv.free_rank, inv.transform, kept_rows, inv.free_rows
    )
