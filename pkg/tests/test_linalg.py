import random
from itertools import combinations

import pytest

from mdsconv.errors import SingularMatrixError, UsageError
from mdsconv.field import GF
from mdsconv.linalg import (
    FieldMatrix,
    from_rows,
    identity,
    invert,
    matmul,
    matrix_from_text,
    matrix_to_text,
    matvec,
    rank,
    right_kernel_basis,
    solve_linear,
    stack_rows,
    submatrix_cols,
    transpose,
    vandermonde_ext,
    vecmat,
    zeros,
)

GF5 = GF(5)
GF7 = GF(7)

H_EXAMPLE = vandermonde_ext(GF5, 2, 4, (0, 1, 2), (1, 1, 1, 1))


def random_matrix(field, rows, cols, rng):
    return from_rows(field, [[rng.randrange(field.q) for _ in range(cols)] for _ in range(rows)])


def test_vandermonde_examples():
    m = vandermonde_ext(GF7, 2, 3, (0, 1), (1, 1, 1))
    assert m.to_lists() == [[1, 1, 0], [0, 1, 1]]
    m1 = vandermonde_ext(GF7, 1, 2, (3,), (4, 5))
    assert m1.to_lists() == [[4, 5]]
    assert H_EXAMPLE.to_lists() == [[1, 1, 1, 0], [0, 1, 2, 1]]


def test_vandermonde_validation():
    with pytest.raises(UsageError):
        vandermonde_ext(GF7, 3, 3, (0, 1), (1, 1, 1))
    with pytest.raises(UsageError):
        vandermonde_ext(GF7, 2, 4, (0, 1), (1, 1, 1, 1))  # gamma too short
    with pytest.raises(UsageError):
        vandermonde_ext(GF7, 2, 3, (0, 1), (1, 0, 1))  # zero weight


def test_rank_examples():
    assert rank(zeros(GF5, 3, 4)) == 0
    assert rank(identity(GF5, 4)) == 4
    assert rank(H_EXAMPLE) == 2


def test_invert():
    assert invert(identity(GF5, 3)) == identity(GF5, 3)
    assert invert(from_rows(GF7, [[3]])).to_lists() == [[5]]
    block = submatrix_cols(H_EXAMPLE, [2, 3])
    assert matmul(invert(block), block) == identity(GF5, 2)
    with pytest.raises(SingularMatrixError):
        invert(from_rows(GF5, [[1, 2], [2, 4]]))
    with pytest.raises(UsageError):
        invert(zeros(GF5, 2, 3))


def test_kernel_examples():
    assert right_kernel_basis(identity(GF5, 4)).rows == 0
    z = zeros(GF5, 1, 5)
    kz = right_kernel_basis(z)
    assert kz.rows == 5 and rank(kz) == 5
    k = right_kernel_basis(H_EXAMPLE)
    assert k.rows == H_EXAMPLE.cols - rank(H_EXAMPLE) == 2
    for i in range(k.rows):
        assert matvec(H_EXAMPLE, k.row(i)) == (0, 0)


def test_kernel_deterministic():
    a = right_kernel_basis(H_EXAMPLE)
    b = right_kernel_basis(H_EXAMPLE)
    assert a == b


def test_submatrix_cols():
    assert submatrix_cols(H_EXAMPLE, [1, 2, 3, 4]) == H_EXAMPLE
    empty = submatrix_cols(H_EXAMPLE, [])
    assert (empty.rows, empty.cols) == (2, 0)
    assert submatrix_cols(H_EXAMPLE, {1, 2, 4}).to_lists() == [[1, 1, 0], [0, 1, 1]]
    with pytest.raises(UsageError):
        submatrix_cols(H_EXAMPLE, [0])
    with pytest.raises(UsageError):
        submatrix_cols(H_EXAMPLE, [5])


def test_matmul_and_solve():
    rng = random.Random(3)
    a = random_matrix(GF7, 3, 3, rng)
    assert matmul(a, identity(GF7, 3)) == a
    b = (2, 3, 4)
    assert solve_linear(identity(GF7, 3), b) == b
    for _ in range(25):
        m = random_matrix(GF7, 4, 3, rng)
        x = solve_linear(m, matvec(m, [rng.randrange(7) for _ in range(3)]))
        assert x is not None
        # multiply back
        rhs = matvec(m, x)
        assert solve_linear(m, rhs) == x
    inconsistent = from_rows(GF5, [[1, 0], [1, 0]])
    assert solve_linear(inconsistent, (1, 2)) is None
    with pytest.raises(UsageError):
        matmul(a, random_matrix(GF7, 2, 2, rng))
    with pytest.raises(UsageError):
        matmul(a, random_matrix(GF5, 3, 3, rng))


def test_invert_multiply_back_randomized():
    rng = random.Random(11)
    for q in (5, 8, 13):
        f = GF(q)
        for _ in range(20):
            n = rng.randrange(1, 5)
            m = random_matrix(f, n, n, rng)
            if rank(m) < n:
                continue
            assert matmul(invert(m), m) == identity(f, n)


def test_transpose():
    t = transpose(H_EXAMPLE)
    assert (t.rows, t.cols) == (4, 2)
    assert transpose(t) == H_EXAMPLE


def test_vecmat_matvec():
    v = (1, 2)
    assert vecmat(v, H_EXAMPLE) == (1, 3, 0, 2)
    assert matvec(H_EXAMPLE, (1, 1, 1, 1)) == (3, 4)


def test_stack_rows():
    s = stack_rows(H_EXAMPLE, H_EXAMPLE)
    assert s.rows == 4 and rank(s) == 2


def test_vandermonde_columns_independent_exhaustive():
    # every r columns independent whenever gamma is distinct, up to n = 10
    cases = [
        (GF(11), 3, 10),
        (GF(8), 2, 7),
        (GF(13), 4, 8),
        (GF(16), 5, 9),
    ]
    rng = random.Random(5)
    for f, r, n in cases:
        gamma = tuple(rng.sample(range(f.q), n - 1))
        w = tuple(rng.choice(range(1, f.q)) for _ in range(n))
        m = vandermonde_ext(f, r, n, gamma, w)
        assert rank(m) == r
        for cols in combinations(range(1, n + 1), r):
            assert rank(submatrix_cols(m, cols)) == r


def test_entries_validated():
    with pytest.raises(UsageError):
        FieldMatrix(GF5, 1, 2, (1, 7))
    with pytest.raises(UsageError):
        FieldMatrix(GF5, 2, 2, (1, 2, 3))


def test_text_dump_roundtrip():
    text = matrix_to_text(H_EXAMPLE)
    assert text.splitlines()[0] == "2 4 5"
    m = matrix_from_text(text)
    assert m == H_EXAMPLE
    with pytest.raises(UsageError):
        matrix_from_text("")
    with pytest.raises(UsageError):
        matrix_from_text("1 2 5\n1 2 3")
    with pytest.raises(UsageError):
        matrix_from_text("2 2 5\n1 2")
