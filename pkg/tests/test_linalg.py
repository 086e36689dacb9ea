"""Exact linear algebra: frozen examples plus seeded random properties."""

from __future__ import annotations

import random
from fractions import Fraction

from deloop.fields import QQ, PrimeField
from deloop import linalg
from deloop.linalg import Mat, from_rows, identity, kernel_basis, rank, rref, solve, zeros


def q(rows):
    return from_rows(QQ, [[Fraction(x) for x in r] for r in rows])


def test_rref_identity():
    red, pivots, rk = rref(identity(QQ, 2))
    assert red == identity(QQ, 2)
    assert pivots == (0, 1)
    assert rk == 2


def test_rref_zero():
    red, pivots, rk = rref(zeros(QQ, 3, 3))
    assert red == zeros(QQ, 3, 3)
    assert pivots == ()
    assert rk == 0


def test_rref_rank_one():
    # Hand row-reduction: r2 <- r2 - 2 r1.
    red, pivots, rk = rref(q([[1, 2], [2, 4]]))
    assert red == q([[1, 2], [0, 0]])
    assert rk == 1


def test_kernel_identity_and_zero():
    assert kernel_basis(identity(QQ, 3)).rows == 0
    assert kernel_basis(zeros(QQ, 4, 2)) == identity(QQ, 4)


def test_kernel_rank_one():
    # Solved by hand: v (1,2;2,4) = 0 forces v = t (2, -1); RREF scales to (1, -1/2).
    k = kernel_basis(q([[1, 2], [2, 4]]))
    assert k.rows == 1
    v = k.entries[0]
    assert v[0] * 2 + v[1] * 4 == 0 and v[0] * 1 + v[1] * 2 == 0
    assert v != (0, 0)


def test_solve_identity_and_zero():
    b = q([[3, 4], [5, 6]])
    assert solve(identity(QQ, 2), b) == b
    assert solve(zeros(QQ, 2, 2), q([[1, 0]])) is None


def test_solve_substitution():
    # X (1,2;0,1) = (1,3) gives X = (1,1) by direct substitution.
    x = solve(q([[1, 2], [0, 1]]), q([[1, 3]]))
    assert x == q([[1, 1]])


def _random_mat(rng, rows, cols, field=QQ):
    return from_rows(field, [[field.from_int(rng.randint(-4, 4)) for _ in range(cols)]
                             for _ in range(rows)])


def test_rref_idempotent_and_rank_nullity_seeded():
    rng = random.Random(7)
    for _ in range(40):
        m = _random_mat(rng, rng.randint(0, 5), rng.randint(0, 5))
        red, _, rk = rref(m)
        again, _, rk2 = rref(red)
        assert again == red and rk2 == rk
        assert rk + kernel_basis(m).rows == m.rows
        # kernel rows really annihilate m
        k = kernel_basis(m)
        if k.rows and m.cols:
            assert linalg.mul(k, m).is_zero()


def test_solve_exactness_seeded():
    rng = random.Random(11)
    for _ in range(40):
        a = _random_mat(rng, rng.randint(1, 4), rng.randint(1, 4))
        c = _random_mat(rng, rng.randint(1, 3), a.rows)
        b = linalg.mul(c, a)
        x = solve(a, b)
        assert x is not None
        assert linalg.mul(x, a) == b


def test_prime_field_roundtrip():
    f = PrimeField(5)
    m = from_rows(f, [[1, 2], [3, 4]])
    red, piv, rk = rref(m)
    assert rk == 2
    assert kernel_basis(m).rows == 0
    m2 = from_rows(f, [[1, 2], [2, 4]])
    assert rank(m2) == 1
