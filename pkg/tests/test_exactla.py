import random

import pytest

from chainext.exactla import (
    Rat, RatMatrix, rat, rref, rank, kernel_basis, solve, quotient_dims,
    vec_is_zero,
)


def test_rat_parsing():
    assert rat("2/3") == Rat(2, 3)
    assert rat(-4) == Rat(-4)
    assert rat(Rat(1, 2)) == Rat(1, 2)
    with pytest.raises(TypeError):
        rat(0.5)


def test_rref_rank_one():
    m = RatMatrix([[1, 2], [2, 4]])
    reduced, pivots, rk = rref(m)
    assert reduced == RatMatrix([[1, 2], [0, 0]])
    assert pivots == (0,)
    assert rk == 1


def test_rref_idempotent():
    rng = random.Random(7)
    for _ in range(20):
        nr = rng.randint(1, 5)
        nc = rng.randint(1, 5)
        m = RatMatrix([[rng.randint(-3, 3) for _ in range(nc)] for _ in range(nr)])
        r1, p1, k1 = rref(m)
        r2, p2, k2 = rref(r1)
        assert r1 == r2 and p1 == p2 and k1 == k2


def test_kernel_of_sum_functional():
    m = RatMatrix([[1, 1]])
    basis = kernel_basis(m)
    assert len(basis) == 1
    a, b = basis[0]
    assert a == -b and a != 0


def test_kernel_rank_nullity_random():
    rng = random.Random(20260815)
    for _ in range(40):
        nr = rng.randint(0, 6)
        nc = rng.randint(0, 6)
        m = RatMatrix([[Rat(rng.randint(-4, 4), rng.choice([1, 1, 2]))
                        for _ in range(nc)] for _ in range(nr)], ncols=nc)
        basis = kernel_basis(m)
        assert rank(m) + len(basis) == nc
        for v in basis:
            assert vec_is_zero(m.mat_vec(v))


def test_solve_inconsistent():
    m = RatMatrix([[1], [2]])
    assert solve(m, [1, 3]) is None
    assert solve(m, [1, 2]) == [Rat(1)]


def test_solve_dimension_mismatch():
    m = RatMatrix([[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        solve(m, [1, 2, 3])


def test_solve_exact_random():
    rng = random.Random(99)
    for _ in range(30):
        nr = rng.randint(1, 5)
        nc = rng.randint(1, 5)
        m = RatMatrix([[rng.randint(-3, 3) for _ in range(nc)] for _ in range(nr)])
        x = [Rat(rng.randint(-5, 5), rng.choice([1, 2, 3])) for _ in range(nc)]
        b = m.mat_vec(x)
        y = solve(m, b)
        assert y is not None
        assert m.mat_vec(y) == b


def test_quotient_dims():
    sub = RatMatrix([[1, 1], [0, 0], [1, 1]])  # columns span a line in Q^3
    assert quotient_dims(sub, 3) == 2
    with pytest.raises(ValueError):
        quotient_dims(sub, 4)


def test_matmul_and_identity():
    a = RatMatrix([[1, 2], [3, 4]])
    i2 = RatMatrix.identity(2)
    assert a @ i2 == a
    assert i2 @ a == a
    b = RatMatrix([["1/2", 0], [0, "1/3"]])
    assert a @ b == RatMatrix([["1/2", "2/3"], ["3/2", "4/3"]])


def test_empty_shapes():
    z = RatMatrix.zeros(0, 3)
    assert z.shape == (0, 3)
    assert rank(z) == 0
    assert len(kernel_basis(z)) == 3
    w = RatMatrix.zeros(3, 0)
    assert (w @ z).shape == (3, 3)
    assert (w @ z).is_zero()


def test_immutability():
    a = RatMatrix([[1]])
    with pytest.raises(AttributeError):
        a.nrows = 5
