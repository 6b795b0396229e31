import random
from math import comb

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.polys.matrices import DomainMatrix

from demailly.bounds import Instance, delta_bound
from demailly.interpolation import (
    DEFAULT_PRIME,
    CapExceeded,
    PointSet,
    ProjectivePoint,
    alpha_of,
    build_matrix,
    condition_rows,
    dump_points,
    has_kernel,
    is_prime,
    load_points,
    monomial_basis,
    multi_indices,
    rank_gf,
    sample_points,
    splitmix64,
    waldschmidt_sequence,
)


def sympy_rank(rows, p):
    """Independent rank oracle: sympy's dense elimination over GF(p)."""
    K = sympy.GF(p)
    rows = [[K(int(x)) for x in r] for r in rows]
    if not rows or not rows[0]:
        return 0
    return DomainMatrix(rows, (len(rows), len(rows[0])), K).rank()


def test_splitmix64_reference_values():
    # published reference outputs for seed 1234567
    gen = splitmix64(1234567)
    assert [next(gen) for _ in range(3)] == [
        6457827717110365317, 3203168211198807973, 9817491932198370423,
    ]


def test_is_prime():
    assert is_prime(DEFAULT_PRIME)
    assert is_prime(7) and is_prime(2**61 - 1)
    assert not is_prime(2**31 + 1) and not is_prime(1) and not is_prime(561)


def test_sample_points_basic():
    pts = sample_points(2, 1, seed=5)
    assert pts.s == 1 and pts.points[0].coords[0] == 1
    a = sample_points(2, 5, seed=1)
    assert a == sample_points(2, 5, seed=1)
    assert a != sample_points(2, 5, seed=2)
    assert all(0 <= x < DEFAULT_PRIME for pt in a.points for x in pt.coords)


def test_sample_points_resamples_collisions():
    # GF(3)^1 has exactly 3 affine points; asking for all of them forces collisions
    pts = sample_points(1, 3, prime=3, seed=0)
    assert sorted(pt.affine for pt in pts.points) == [(0,), (1,), (2,)]
    with pytest.raises(ValueError):
        sample_points(1, 4, prime=3, seed=0)


def test_point_set_rejects_duplicates_and_bad_points():
    with pytest.raises(ValueError):
        PointSet.from_affine(2, 7, [[1, 2], [1, 2]])
    with pytest.raises(ValueError):
        PointSet(2, 7, (ProjectivePoint((2, 1, 1)),))
    with pytest.raises(ValueError):
        PointSet(2, 8, (ProjectivePoint((1, 1, 1)),))


def test_monomial_basis():
    assert len(monomial_basis(2, 2)) == 6
    assert monomial_basis(1, 3) == ((3, 0), (2, 1), (1, 2), (0, 3))
    assert monomial_basis(3, 0) == ((0, 0, 0, 0),)
    assert monomial_basis(2, 2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))


@given(st.integers(1, 4), st.integers(0, 8))
def test_monomial_basis_count_and_order(n, d):
    basis = monomial_basis(n, d)
    assert len(basis) == comb(d + n, n)
    assert all(sum(a) == d for a in basis)
    assert list(basis) == sorted(basis, reverse=True)


def test_multi_indices_graded():
    assert multi_indices(2, 1) == ((0, 0), (1, 0), (0, 1))
    assert len(multi_indices(3, 2)) == comb(2 + 3, 3)


def test_condition_rows_coordinate_point():
    rows = condition_rows(ProjectivePoint((1, 0, 0)), 2, 2, p=7)
    assert len(rows) == 3
    assert rows[0] == [1, 0, 0, 0, 0, 0]


def test_condition_rows_hasse_example():
    basis = monomial_basis(2, 3)
    col = basis.index((0, 2, 1))
    rows = condition_rows(ProjectivePoint((1, 2, 3)), 2, 3, basis, p=7)
    beta_row = multi_indices(2, 1).index((1, 0))
    assert rows[beta_row][col] == 12 % 7 == 5


def test_condition_rows_plain_evaluation_for_m1():
    pt = ProjectivePoint((1, 4, 9))
    rows = condition_rows(pt, 1, 3, p=101)
    assert len(rows) == 1
    expected = [pow(4, a[1], 101) * pow(9, a[2], 101) % 101 for a in monomial_basis(2, 3)]
    assert rows[0] == expected


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 5), st.sampled_from([5, 7, 101]), st.data())
def test_condition_rows_match_symbolic_expansion(n, m, d, p, data):
    q = [data.draw(st.integers(0, p - 1)) for _ in range(n)]
    ys = sympy.symbols(f"y1:{n + 1}")
    basis = monomial_basis(n, d)
    rows = condition_rows(ProjectivePoint((1, *q)), m, d, basis, p=p)
    betas = multi_indices(n, m - 1)
    for c, a in enumerate(basis):
        poly = sympy.Poly(sympy.prod([(q[i] + ys[i]) ** a[i + 1] for i in range(n)]), *ys)
        for r, beta in enumerate(betas):
            assert rows[r][c] == int(poly.coeff_monomial(sympy.prod([ys[i] ** beta[i] for i in range(n)]))) % p


@pytest.mark.parametrize("n,s,m,d,shape", [(2, 1, 1, 1, (1, 3)), (2, 5, 2, 4, (15, 15)), (2, 9, 3, 8, (54, 45))])
def test_build_matrix_dimensions(n, s, m, d, shape):
    mat = build_matrix(sample_points(n, s, seed=3), m, d)
    assert mat.shape == shape
    assert (mat.data >= 0).all() and (mat.data < DEFAULT_PRIME).all()


def test_build_matrix_single_point_row():
    pts = sample_points(2, 1, seed=9)
    mat = build_matrix(pts, 1, 1)
    assert mat.data.tolist() == [[1, *pts.points[0].affine]]


def test_rank_trivial():
    assert rank_gf(np.zeros((4, 5), dtype=np.int64), 7) == 0
    for k in (1, 3, 8):
        assert rank_gf(np.eye(k, dtype=np.int64), DEFAULT_PRIME) == k
    assert rank_gf(np.zeros((0, 3), dtype=np.int64), 7) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9), st.sampled_from([3, 5, 7, 10007, DEFAULT_PRIME, 2**61 - 1]), st.data())
def test_rank_matches_sympy(r, c, p, data):
    hi = data.draw(st.sampled_from([1, 2, p - 1]))
    rows = [[data.draw(st.integers(0, hi)) for _ in range(c)] for _ in range(r)]
    assert rank_gf(rows, p) == sympy_rank(rows, p)


def test_rank_of_five_double_points():
    pts = sample_points(2, 5, seed=1)
    mat = build_matrix(pts, 2, 4)
    assert rank_gf(mat) == sympy_rank(mat.data.tolist(), mat.p) == 14


def test_squared_conic_is_in_kernel():
    p = DEFAULT_PRIME
    pts = sample_points(2, 5, seed=1)
    conic_rows = build_matrix(pts, 1, 2).data.tolist()
    # kernel of the 5x6 evaluation matrix via sympy nullspace
    K = sympy.GF(p)
    M = DomainMatrix([[K(int(x)) for x in r] for r in conic_rows], (5, 6), K)
    null = M.nullspace().to_Matrix()
    assert null.shape[0] == 1
    conic = [int(v) % p for v in null.row(0)]
    x0, x1, x2 = sympy.symbols("x0 x1 x2")
    Q = sum(cf * x0**a[0] * x1**a[1] * x2**a[2] for cf, a in zip(conic, monomial_basis(2, 2)))
    Q2 = sympy.Poly(sympy.expand(Q * Q), x0, x1, x2)
    vec = [int(Q2.coeff_monomial(x0**a[0] * x1**a[1] * x2**a[2])) % p for a in monomial_basis(2, 4)]
    prod = (build_matrix(pts, 2, 4).data.astype(object) @ np.array(vec, dtype=object)) % p
    assert not prod.any() and any(vec)


def test_has_kernel_examples():
    assert has_kernel(sample_points(2, 1, seed=1), 1, 1)
    assert not has_kernel(sample_points(2, 2, seed=1), 1, 0)
    pts5 = sample_points(2, 5, seed=1)
    assert not has_kernel(pts5, 2, 3)
    assert sympy_rank(build_matrix(pts5, 2, 3).data.tolist(), DEFAULT_PRIME) == 10


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_alpha_single_point(n, m):
    assert alpha_of(sample_points(n, 1, seed=4), m).alpha == m


def test_alpha_examples_with_rank_trace():
    res = alpha_of(sample_points(2, 2, seed=1), 2)
    assert res.alpha == 2 and res.ranks == [(1, 3), (2, 5)]
    res5 = alpha_of(sample_points(2, 5, seed=1), 2)
    assert res5.alpha == 4 and res5.ranks[-2] == (3, 10) and res5.ranks[-1] == (4, 14)


def test_alpha_cap_exceeded():
    with pytest.raises(CapExceeded):
        alpha_of(sample_points(2, 9, seed=1), 3, cap=8)


def test_alpha_characteristic_three():
    # the binomial expansion stays valid when p <= d; a single triple point needs degree 3
    pts = PointSet.from_affine(2, 3, [[1, 2]])
    assert alpha_of(pts, 3).alpha == 3
    # collinear points over GF(5): the line x2 = 0 through (0,0),(1,0),(2,0)
    col = PointSet.from_affine(2, 5, [[0, 0], [1, 0], [2, 0]])
    assert alpha_of(col, 1).alpha == 1


def test_waldschmidt_sequences():
    assert [r for _, _, r in waldschmidt_sequence(sample_points(2, 1, seed=0), 5)] == [1] * 5
    seq4 = waldschmidt_sequence(sample_points(2, 4, seed=1), 3)
    assert [a for _, a, _ in seq4] == [2, 4, 6] and all(r == 2 for _, _, r in seq4)
    seq9 = waldschmidt_sequence(sample_points(2, 9, seed=1), 3)
    assert [a for _, a, _ in seq9] == [3, 6, 9]


def test_alpha_below_delta_for_special_points():
    # part (a) holds for any points, including collinear ones
    p = 101
    pts = PointSet.from_affine(2, p, [[i, 0] for i in range(6)])
    for m in range(1, 4):
        assert alpha_of(pts, m).alpha <= delta_bound(Instance(2, 6, m))


def test_rank_metamorphic():
    rng = random.Random(7)
    pts = sample_points(3, 6, seed=2)
    mat = build_matrix(pts, 2, 3)
    base = rank_gf(mat)
    p = mat.p
    for _ in range(5):
        perm = list(range(mat.shape[0]))
        rng.shuffle(perm)
        assert rank_gf(mat.data[perm], p) == base
        # each row by its own nonzero constant
        scaled = [[int(x) * c % p for x in row] for row, c in
                  zip(mat.data.tolist(), [rng.randrange(1, p) for _ in range(mat.shape[0])])]
        assert rank_gf(scaled, p) == base


def test_rank_does_not_mutate_input():
    pts = sample_points(2, 3, seed=1)
    mat = build_matrix(pts, 2, 3)
    before = mat.data.copy()
    rank_gf(mat)
    assert (mat.data == before).all()


def test_points_text_roundtrip(tmp_path):
    pts = sample_points(3, 4, seed=11)
    text = dump_points(pts)
    assert text.splitlines()[0] == f"3 4 {DEFAULT_PRIME}"
    f = tmp_path / "pts.txt"
    f.write_text(text)
    assert load_points(str(f)) == pts
    assert load_points(text) == pts


def test_points_text_errors():
    with pytest.raises(ValueError):
        load_points("2 2 7\n1 2\n")
    with pytest.raises(ValueError):
        load_points("2 1 7\n1 2 3\n")
    with pytest.raises(ValueError):
        load_points("2 1 9\n1 2\n")
