"""Integer matrix normal forms, checked against naive reference computations.

The reference determinant is a cofactor expansion and the reference
invariant factors come from gcds of k-by-k minors.  Both are slow but
obviously correct, which is the point.
"""

import itertools
import math
import random

import pytest

from steinv import (
    IntMatrix,
    ValidationError,
    cokernel_invariants,
    hermite_normal_form,
    localize_factors,
    smith_normal_form,
)


def laplace_det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        sign = -1 if j % 2 else 1
        total += sign * rows[0][j] * laplace_det(minor)
    return total


def minor_gcd_factors(rows):
    """Invariant factors d_k/d_{k-1} where d_k = gcd of all k-minors."""
    m, n = len(rows), len(rows[0])
    dets = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                sub = [[rows[i][j] for j in ci] for i in ri]
                g = math.gcd(g, abs(laplace_det(sub)))
        if g == 0:
            break
        dets.append(g)
    return tuple(dets[k] // dets[k - 1] for k in range(1, len(dets)))


def random_matrix(rng, max_dim=6, lo=-9, hi=9):
    m = rng.randint(1, max_dim)
    n = rng.randint(1, max_dim)
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]


def test_constructor_rejects_bad_shapes():
    with pytest.raises(ValidationError):
        IntMatrix([])
    with pytest.raises(ValidationError):
        IntMatrix([[1, 2], [3]])
    with pytest.raises(ValidationError):
        IntMatrix([[], []])


def test_matmul_and_transpose():
    a = IntMatrix([[1, 2], [3, 4]])
    b = IntMatrix([[0, 1], [1, 0]])
    assert (a @ b).entries == ((2, 1), (4, 3))
    assert a.transpose().entries == ((1, 3), (2, 4))
    assert IntMatrix.identity(3).diagonal() == (1, 1, 1)


def test_det_matches_laplace():
    rng = random.Random(11)
    for _ in range(120):
        n = rng.randint(1, 5)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert IntMatrix(rows).det() == laplace_det(rows)


def test_det_requires_square():
    with pytest.raises(ValidationError):
        IntMatrix([[1, 2, 3], [4, 5, 6]]).det()


def check_hnf(rows):
    a = IntMatrix(rows)
    h, u = hermite_normal_form(a)
    assert u.rows == u.cols == a.rows
    assert u.det() in (1, -1)
    assert u @ a == h
    # echelon shape: pivot columns strictly increase, zero rows at the bottom
    last_pivot = -1
    seen_zero_row = False
    for r in range(h.rows):
        row = h.entries[r]
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            seen_zero_row = True
            continue
        assert not seen_zero_row
        j = nz[0]
        assert j > last_pivot
        last_pivot = j
        piv = row[j]
        assert piv > 0
        for above in range(r):
            assert 0 <= h.entries[above][j] < piv
    return h


def test_hnf_known_example():
    h = check_hnf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert h.entries == ((2, 4, 4), (0, 6, 0), (0, 0, 12))


def test_hnf_random():
    rng = random.Random(23)
    for _ in range(150):
        check_hnf(random_matrix(rng))


def check_snf(rows):
    a = IntMatrix(rows)
    d, u, v = smith_normal_form(a)
    assert u.det() in (1, -1)
    assert v.det() in (1, -1)
    assert u @ a @ v == d
    diag = list(d.diagonal())
    # off-diagonal zero
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j:
                assert d.entries[i][j] == 0
    for x in diag:
        assert x >= 0
    for x, y in zip(diag, diag[1:]):
        if x == 0:
            assert y == 0
        else:
            assert y % x == 0
    return tuple(x for x in diag if x)


def test_snf_known_example():
    rows = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    got = check_snf(rows)
    assert got == (2, 6, 12)
    assert got == minor_gcd_factors(rows)


def test_snf_matches_minor_gcd_oracle():
    rng = random.Random(37)
    for _ in range(150):
        rows = random_matrix(rng, max_dim=5, lo=-6, hi=6)
        assert check_snf(rows) == minor_gcd_factors(rows)


def test_snf_handles_wide_tall_and_zero():
    assert check_snf([[0, 0], [0, 0]]) == ()
    assert check_snf([[3, 6, 9]]) == (3,)
    assert check_snf([[4], [6]]) == (2,)


def test_cokernel_known_groups():
    # Z^2 / <(2,0),(0,3)> = Z/2 x Z/3, reported in invariant-factor form
    inv = cokernel_invariants(IntMatrix([[2, 0], [0, 3]]))
    assert inv.invariant_factors == (6,)
    assert inv.free_rank == 0
    assert inv.describe() == "Z/6"

    inv = cokernel_invariants(IntMatrix([[2, 0], [0, 2]]))
    assert inv.invariant_factors == (2, 2)
    assert inv.describe() == "Z/2 x Z/2"

    # a single zero column contributes a free summand per row
    inv = cokernel_invariants(IntMatrix([[0], [0]]))
    assert inv.invariant_factors == ()
    assert inv.free_rank == 2
    assert inv.describe() == "Z^2"

    inv = cokernel_invariants(IntMatrix([[1, 0], [0, 1]]))
    assert inv.is_trivial()
    assert inv.describe() == "trivial"


def test_cokernel_mixed_free_and_torsion():
    # Z^3 / column span of [[2,0],[0,0],[0,3]]
    inv = cokernel_invariants(IntMatrix([[2, 0], [0, 0], [0, 3]]))
    assert inv.invariant_factors == (6,)
    assert inv.free_rank == 1
    assert inv.describe() == "Z/6 x Z"


def test_same_group_ignores_presentation():
    a = cokernel_invariants(IntMatrix([[2, 0], [0, 3]]))
    b = cokernel_invariants(IntMatrix([[6, 6], [0, 6]]))
    c = cokernel_invariants(IntMatrix([[6]]))
    assert not a.same_group(b)
    assert a.same_group(c)


def test_reduce_sends_column_span_to_zero():
    rng = random.Random(53)
    for _ in range(60):
        rows = random_matrix(rng, max_dim=4, lo=-5, hi=5)
        a = IntMatrix(rows)
        inv = cokernel_invariants(a)
        # every column of A must normalize to the zero class
        for j in range(a.cols):
            col = [a.entries[i][j] for i in range(a.rows)]
            torsion, free = inv.reduce(col)
            assert all(t == 0 for t in torsion)
            assert all(f == 0 for f in free)


def test_reduce_separates_classes():
    inv = cokernel_invariants(IntMatrix([[2, 0], [0, 3]]))
    assert inv.reduce([1, 0]) != inv.reduce([0, 1])
    assert inv.reduce([1, 1]) == inv.reduce([3, 4])  # differ by (2,3)


def test_reduce_additivity():
    rng = random.Random(67)
    rows = [[2, 0, 4], [0, 6, 2], [0, 0, 10]]
    inv = cokernel_invariants(IntMatrix(rows))
    n = len(rows)
    for _ in range(80):
        x = [rng.randint(-30, 30) for _ in range(n)]
        y = [rng.randint(-30, 30) for _ in range(n)]
        tx, fx = inv.reduce(x)
        ty, fy = inv.reduce(y)
        ts, fs = inv.reduce([a + b for a, b in zip(x, y)])
        mods = inv.invariant_factors
        assert ts == tuple((a + b) % d for a, b, d in zip(tx, ty, mods))
        assert fs == tuple(a + b for a, b in zip(fx, fy))


def test_localize_strips_inverted_primes():
    inv = cokernel_invariants(IntMatrix([[12]]))
    assert inv.describe() == "Z/12"
    assert localize_factors(inv, [2]).describe() == "Z/3"
    assert localize_factors(inv, [2, 3]).describe() == "trivial"
    # free part survives localization
    inv = cokernel_invariants(IntMatrix([[4, 0], [0, 0]]))
    loc = localize_factors(inv, [2])
    assert loc.invariant_factors == ()
    assert loc.free_rank == 1
