"""Breakpoint modules, slope groups, and the triples that define a group
of piecewise linear bijections.

A breakpoint module is a finitely generated dense subgroup of the reals,
stored as a Q-linearly independent basis inside a real algebraic field
together with a set of inverted primes: the module is the span of the
basis over Z[1/m], m the product of those primes.  A slope group is a
finitely generated multiplicative subgroup of the positive reals, either
generated by positive rationals (stored as an exponent lattice over its
prime support) or by a single irrational algebraic number.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import (
    BoundExceeded,
    DependentBasis,
    FieldMismatch,
    InvalidEndpoint,
    NonDense,
    NotInvariant,
    UnsupportedComparison,
    UnsupportedSlopeGroup,
    ValidationError,
)
from .intlinalg import IntMatrix, hermite_normal_form
from .numbers import FieldElement, RealAlgebraicField, Rational, rational_field

DEFAULT_SEARCH_BOUND = 16

# Safety valve for the exact exponent searches in cyclic slope groups;
# the searches are monotone, so this only guards pathological inputs.
_EXPONENT_CAP = 10_000


# ---------------------------------------------------------------------------
# small exact linear algebra over Q


def _solve_unique(columns, target):
    """Solve sum x_j * columns[j] = target for rational x, or None.

    The columns are assumed linearly independent, so a solution is
    unique when it exists.
    """
    n = len(columns)
    rows = [
        [Fraction(col[i]) for col in columns] + [Fraction(target[i])]
        for i in range(len(target))
    ]
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][n] != 0:
            return None
    if len(pivots) < n:
        return None  # underdetermined; cannot happen with independent columns
    out = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        out[c] = rows[i][n]
    return tuple(out)


def _rational_rank(columns) -> int:
    rows = [[Fraction(col[i]) for col in columns] for i in range(len(columns[0]))]
    rank = 0
    for c in range(len(columns)):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _det_rational(rows) -> Fraction:
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


# ---------------------------------------------------------------------------
# prime support of rationals


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _factor_positive(n: int) -> dict:
    out = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _factor_fraction(q: Fraction) -> dict:
    if q <= 0:
        raise ValidationError("only positive rationals have a prime support")
    out = _factor_positive(q.numerator)
    for p, e in _factor_positive(q.denominator).items():
        out[p] = out.get(p, 0) - e
    return {p: e for p, e in out.items() if e}


def _denominator_supported(q: Fraction, primes) -> bool:
    d = q.denominator
    for p in primes:
        while d % p == 0:
            d //= p
    return d == 1


def _is_unit_ratio(q: Fraction, primes) -> bool:
    """True when the positive rational factors over the given primes."""
    if q <= 0:
        return False
    n, d = q.numerator, q.denominator
    for p in primes:
        while n % p == 0:
            n //= p
        while d % p == 0:
            d //= p
    return n == 1 and d == 1


# ---------------------------------------------------------------------------


class SlopeGroup:
    """Finitely generated subgroup of the multiplicative positive reals.

    kind "rational": generated by positive rationals; canonically stored
    as the Hermite basis of the exponent lattice over the sorted prime
    support.  kind "algebraic": a single irrational algebraic generator,
    canonicalized to be greater than 1.  Mixed or higher rank irrational
    generator sets are rejected.
    """

    __slots__ = ("kind", "primes", "lattice", "generator", "field")

    def __init__(self, generators: Sequence[Union[Rational, FieldElement]],
                 field: Optional[RealAlgebraicField] = None):
        rationals = []
        irrationals = []
        for g in generators:
            if isinstance(g, FieldElement):
                if field is None:
                    field = g.field
                elif not field.compatible(g.field):
                    raise FieldMismatch("slope generators from different fields")
                if g.is_rational:
                    rationals.append(g.as_fraction())
                else:
                    irrationals.append(g)
            else:
                rationals.append(Fraction(g))
        for q in rationals:
            if q <= 0:
                raise UnsupportedSlopeGroup("slope generators must be positive")
            if q == 1:
                raise UnsupportedSlopeGroup("1 is not allowed as a generator")
        if irrationals and rationals:
            raise UnsupportedSlopeGroup(
                "cannot mix rational and irrational slope generators"
            )
        if len(irrationals) > 1:
            raise UnsupportedSlopeGroup(
                "at most one irrational slope generator is supported"
            )
        if irrationals:
            g = irrationals[0]
            if g.sign() <= 0:
                raise UnsupportedSlopeGroup("slope generators must be positive")
            if (g - 1).sign() < 0:
                g = g.inverse()  # canonical generator > 1
            self.kind = "algebraic"
            self.generator = g
            self.field = g.field
            self.primes = ()
            self.lattice = None
            return
        self.kind = "rational"
        self.generator = None
        self.field = field
        support = sorted({p for q in rationals for p in _factor_fraction(q)})
        if rationals and support:
            vectors = [
                [_factor_fraction(q).get(p, 0) for p in support] for q in rationals
            ]
            h, _ = hermite_normal_form(IntMatrix(vectors))
            basis = [row for row in h.entries if any(row)]
            self.lattice = IntMatrix(basis) if basis else None
        else:
            self.lattice = None
        self.primes = tuple(support)

    # -- basic data ---------------------------------------------------------

    def rank(self) -> int:
        if self.kind == "algebraic":
            return 1
        return self.lattice.rows if self.lattice is not None else 0

    def is_trivial(self) -> bool:
        return self.rank() == 0

    def basis_vectors(self):
        """Rows of the canonical exponent lattice basis (rational kind)."""
        if self.kind != "rational":
            raise UnsupportedComparison("no exponent lattice for this kind")
        return self.lattice.entries if self.lattice is not None else ()

    def generator_values(self):
        """A canonical generating set as numbers (Fractions or elements)."""
        if self.kind == "algebraic":
            return (self.generator,)
        out = []
        for row in self.basis_vectors():
            value = Fraction(1)
            for p, e in zip(self.primes, row):
                value *= Fraction(p) ** e
            out.append(value)
        return tuple(out)

    # -- membership and equality --------------------------------------------

    def _lattice_contains(self, vector) -> bool:
        if self.lattice is None:
            return not any(vector)
        v = list(vector)
        for row in self.lattice.entries:
            col = next(i for i, x in enumerate(row) if x)
            if v[col] % row[col]:
                return False
            q = v[col] // row[col]
            v = [x - q * y for x, y in zip(v, row)]
        return not any(v)

    def contains(self, mu, bound: Optional[int] = None) -> bool:
        """Exact membership of a positive number in the group.

        For the cyclic algebraic kind the exponent search is monotone and
        therefore complete; `bound` only caps the exponent magnitude as a
        safety valve (BoundExceeded beyond it).
        """
        if isinstance(mu, FieldElement) and not mu.is_rational:
            if self.kind == "rational":
                return False
            value = mu
        elif self.kind == "rational":
            q = mu.as_fraction() if isinstance(mu, FieldElement) else Fraction(mu)
            if q <= 0:
                return False
            factors = _factor_fraction(q)
            if any(p not in self.primes for p in factors):
                return False
            return self._lattice_contains(
                [factors.get(p, 0) for p in self.primes]
            )
        else:
            value = self.generator.field.from_rational(
                mu.as_fraction() if isinstance(mu, FieldElement) else Fraction(mu)
            )
        if self.kind != "algebraic":
            return False
        g = self.generator
        if not g.field.compatible(value.field):
            return False
        if value.sign() <= 0:
            return False
        if value == 1:
            return True
        if (value - 1).sign() < 0:
            value = value.inverse()
        cap = bound if bound is not None else _EXPONENT_CAP
        power = g.field.one()
        for k in range(1, cap + 1):
            power = power * g
            c = (power - value).sign()
            if c == 0:
                return True
            if c > 0:
                return False
        raise BoundExceeded(f"exponent search exceeded {cap}")

    def equals(self, other: "SlopeGroup", bound: Optional[int] = None) -> bool:
        if self.kind == "rational" and other.kind == "rational":
            return self.primes == other.primes and self.lattice == other.lattice
        if self.kind == "algebraic" and other.kind == "algebraic":
            if not self.field.compatible(other.field):
                raise UnsupportedComparison(
                    "slope groups live in different fields"
                )
            return self.generator == other.generator
        # Mixed kinds can never be equal: an algebraic-kind group always
        # has an irrational generator, a rational-kind group has none.
        return False

    def canonical_key(self):
        if self.kind == "rational":
            entries = self.lattice.entries if self.lattice is not None else ()
            return ("rational", self.primes, entries)
        return (
            "algebraic",
            self.generator.field.minpoly.coefficients,
            tuple(self.generator.coords),
        )

    def __eq__(self, other):
        if not isinstance(other, SlopeGroup):
            return NotImplemented
        try:
            return self.equals(other)
        except UnsupportedComparison:
            return False

    def __hash__(self):
        return hash(self.canonical_key())

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generator_values())
        return f"SlopeGroup(<{gens}>)"


class BreakpointModule:
    """Z[1/m]-span of a Q-independent basis inside a real algebraic field."""

    __slots__ = ("field", "basis", "inverted_primes", "_columns")

    def __init__(self, field: RealAlgebraicField, basis, inverted_primes=()):
        primes = sorted(set(int(p) for p in inverted_primes))
        for p in primes:
            if not _is_prime(p):
                raise ValidationError(f"{p} is not prime")
        elems = []
        for b in basis:
            if isinstance(b, FieldElement):
                if not field.compatible(b.field):
                    raise FieldMismatch("basis element from a different field")
                elems.append(field.element(b.coords))
            else:
                elems.append(field.from_rational(b))
        if not elems:
            raise ValidationError("basis must be nonempty")
        columns = [tuple(b.coords) for b in elems]
        if _rational_rank(columns) < len(columns):
            raise DependentBasis("basis is linearly dependent over Q")
        if len(elems) == 1 and not primes:
            raise NonDense(
                "a rank-one module with no inverted primes is discrete"
            )
        self.field = field
        self.basis = tuple(elems)
        self.inverted_primes = tuple(primes)
        self._columns = columns

    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, t) -> Optional[tuple]:
        """Rational basis coordinates of t, or None when t is outside the
        rational span of the basis."""
        if isinstance(t, FieldElement):
            if not self.field.compatible(t.field):
                raise FieldMismatch("point from a different field")
            target = tuple(self.field.element(t.coords).coords)
        else:
            target = tuple(self.field.from_rational(t).coords)
        return _solve_unique(self._columns, target)

    def contains(self, t) -> bool:
        coords = self.coordinates(t)
        if coords is None:
            return False
        return all(
            _denominator_supported(x, self.inverted_primes) for x in coords
        )

    def multiplication_matrix(self, mu) -> tuple:
        """Matrix of multiplication by mu on the basis, as rows of
        Fractions: mu * basis[j] = sum_i M[i][j] * basis[i].

        Raises NotInvariant when some product leaves the module.
        """
        if not isinstance(mu, FieldElement):
            mu = self.field.from_rational(mu)
        cols = []
        for b in self.basis:
            coords = self.coordinates(mu * b)
            if coords is None or not all(
                _denominator_supported(x, self.inverted_primes) for x in coords
            ):
                raise NotInvariant(
                    f"multiplication by {mu} does not preserve the module"
                )
            cols.append(coords)
        n = len(cols)
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    def scaled(self, s) -> "BreakpointModule":
        if not isinstance(s, FieldElement):
            s = self.field.from_rational(s)
        return BreakpointModule(
            self.field, [s * b for b in self.basis], self.inverted_primes
        )

    def norm(self, s) -> Fraction:
        """Field norm of s: determinant of multiplication on the power basis."""
        if not isinstance(s, FieldElement):
            s = self.field.from_rational(s)
        d = self.field.degree
        if d == 1:
            return s.as_fraction()
        power = self.field.one()
        cols = []
        for _ in range(d):
            cols.append((s * power).coords)
            power = power * self.field.generator()
        rows = [[cols[j][i] for j in range(d)] for i in range(d)]
        return _det_rational(rows)

    def __eq__(self, other):
        if not isinstance(other, BreakpointModule):
            return NotImplemented
        return (
            self.field.compatible(other.field)
            and self.inverted_primes == other.inverted_primes
            and self._columns == other._columns
        )

    def __hash__(self):
        return hash((self.inverted_primes, tuple(self._columns)))

    def same_module(self, other: "BreakpointModule") -> bool:
        """Semantic equality: mutual containment of the bases."""
        if not self.field.compatible(other.field):
            return False
        if self.inverted_primes != other.inverted_primes:
            return False
        return all(self.contains(b) for b in other.basis) and all(
            other.contains(b) for b in self.basis
        )

    def __repr__(self):
        basis = ", ".join(str(b) for b in self.basis)
        return f"BreakpointModule([{basis}], inverted={list(self.inverted_primes)})"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScaleResult:
    """Outcome of a scale equivalence search.

    outcome is one of "found", "distinct", "unknown".  For "found" the
    scalar s satisfies s * G2 = G1 exactly; for "distinct" the
    obstruction names the invariant that rules every scalar out.
    """

    outcome: str
    scalar: Optional[FieldElement] = None
    obstruction: Optional[str] = None

    @property
    def found(self) -> bool:
        return self.outcome == "found"


def scale_equivalence(
    g1: BreakpointModule, g2: BreakpointModule, search_bound: int = DEFAULT_SEARCH_BOUND
) -> ScaleResult:
    """Search for a positive s with s * G2 = G1.

    Candidates are ratios h / g of a module element h of G1 (integer
    basis coefficients bounded by search_bound) against the first basis
    element of G2, filtered by the field-norm/covolume identity and then
    verified by exact two-sided membership.  Complete up to the bound:
    "unknown" only means no candidate inside the box worked.
    """
    if not g1.field.compatible(g2.field):
        return ScaleResult("unknown", obstruction="different fields")
    if g1.rank() != g2.rank():
        return ScaleResult("distinct", obstruction="module ranks differ")
    if g1.inverted_primes != g2.inverted_primes:
        return ScaleResult("distinct", obstruction="inverted primes differ")
    if g1.same_module(g2):
        return ScaleResult("found", scalar=g1.field.one())
    field = g1.field
    n = g1.rank()
    d = field.degree
    ratio = None
    if n == d:
        det1 = _det_rational([[col[i] for col in g1._columns] for i in range(d)])
        det2 = _det_rational([[col[i] for col in g2._columns] for i in range(d)])
        ratio = abs(det1 / det2)
    g = g2.basis[0]
    seen = set()
    vectors = sorted(
        itertools.product(range(-search_bound, search_bound + 1), repeat=n),
        key=lambda v: (max(abs(c) for c in v), v),
    )
    for coeffs in vectors:
        if not any(coeffs):
            continue
        h = field.zero()
        for c, b in zip(coeffs, g1.basis):
            if c:
                h = h + c * b
        if h.is_zero():
            continue
        s = h / g
        key = tuple(s.coords)
        if key in seen:
            continue
        seen.add(key)
        if s.sign() <= 0:
            continue
        if ratio is not None:
            norm_ratio = abs(g1.norm(s))
            if not _is_unit_ratio(norm_ratio / ratio, g1.inverted_primes):
                continue
        if all(g1.contains(s * b) for b in g2.basis) and all(
            g2.contains(b / s) for b in g1.basis
        ):
            return ScaleResult("found", scalar=s)
    return ScaleResult("unknown", obstruction="no scalar within the search box")


# ---------------------------------------------------------------------------


class SteinTriple:
    """A triple (breakpoint module, slope group, endpoint) defining a
    group of piecewise linear bijections of [0, endpoint).

    The endpoint is optional; without it the triple only determines the
    groupoid-level data.  Construction checks that the module is carried
    into itself by every slope generator and its inverse, and that the
    endpoint is a positive element of the module.
    """

    __slots__ = ("module", "slopes", "endpoint")

    def __init__(self, module: BreakpointModule, slopes: SlopeGroup, endpoint=None):
        if slopes.kind == "algebraic" and not module.field.compatible(slopes.field):
            raise FieldMismatch("slope group lives in a different field")
        for mu in slopes.generator_values():
            value = (
                mu
                if isinstance(mu, FieldElement)
                else module.field.from_rational(mu)
            )
            for factor in (value, value.inverse()):
                for b in module.basis:
                    if not module.contains(factor * b):
                        raise NotInvariant(
                            f"module is not closed under multiplication by {factor}"
                        )
        if endpoint is not None:
            if not isinstance(endpoint, FieldElement):
                endpoint = module.field.from_rational(endpoint)
            if not module.contains(endpoint):
                raise InvalidEndpoint("endpoint is not a module point")
            if endpoint.sign() <= 0:
                raise InvalidEndpoint("endpoint must be positive")
        self.module = module
        self.slopes = slopes
        self.endpoint = endpoint

    def require_endpoint(self) -> FieldElement:
        if self.endpoint is None:
            raise InvalidEndpoint("this operation needs an endpoint")
        return self.endpoint

    @property
    def field(self) -> RealAlgebraicField:
        return self.module.field

    def __eq__(self, other):
        if not isinstance(other, SteinTriple):
            return NotImplemented
        if (self.endpoint is None) != (other.endpoint is None):
            return False
        if self.endpoint is not None and self.endpoint != other.endpoint:
            return False
        return self.module == other.module and self.slopes == other.slopes

    def __hash__(self):
        return hash((self.module, self.slopes))

    def __repr__(self):
        return f"SteinTriple({self.module!r}, {self.slopes!r}, {self.endpoint})"


# -- convenience builders ----------------------------------------------------


def stein_triple(
    basis,
    inverted_primes,
    slope_generators,
    endpoint=None,
    field: Optional[RealAlgebraicField] = None,
) -> SteinTriple:
    """General builder; rational data may be given as plain numbers."""
    if field is None:
        field = rational_field()
    module = BreakpointModule(field, basis, inverted_primes)
    gens = [
        g if isinstance(g, FieldElement) else Fraction(g) for g in slope_generators
    ]
    slopes = SlopeGroup(gens, field=field)
    return SteinTriple(module, slopes, endpoint)


def thompson_triple(n: int, endpoint: Rational = 1) -> SteinTriple:
    """(Z[1/n], <n>, endpoint): the Higman-Thompson family for n >= 2."""
    if n < 2:
        raise ValidationError("the base must be at least 2")
    primes = sorted(_factor_positive(n))
    return stein_triple([1], primes, [n], endpoint)


_GOLDEN_FIELD = None


def golden_field() -> RealAlgebraicField:
    """Q(b) for the golden ratio b, the root of x^2 - x - 1 in (3/2, 5/3)."""
    global _GOLDEN_FIELD
    if _GOLDEN_FIELD is None:
        _GOLDEN_FIELD = RealAlgebraicField([-1, -1, 1], (Fraction(3, 2), Fraction(5, 3)))
    return _GOLDEN_FIELD


def golden_triple(endpoint: Union[Rational, FieldElement] = 1) -> SteinTriple:
    """(Z + Z*b, <b>, endpoint) for the golden ratio b."""
    field = golden_field()
    module = BreakpointModule(field, [field.one(), field.generator()])
    slopes = SlopeGroup([field.generator()])
    return SteinTriple(module, slopes, endpoint)


def algebraic_triple(
    minpoly, root_interval, endpoint: Union[Rational, FieldElement, None] = 1
) -> SteinTriple:
    """(Z[a], <a>, endpoint) for the root a of minpoly in the interval."""
    field = RealAlgebraicField(minpoly, root_interval)
    gen = field.generator()
    basis = []
    power = field.one()
    for _ in range(field.degree):
        basis.append(power)
        power = power * gen
    module = BreakpointModule(field, basis)
    slopes = SlopeGroup([gen])
    return SteinTriple(module, slopes, endpoint)
