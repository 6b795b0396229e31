import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from demailly.exactnum import (
    AlgebraicExpr,
    RadicalOrdering,
    Sign,
    ae_arith,
    ae_sign,
    binomial,
    cmp_radical,
    floor_mul_nth_root,
    int_nth_root,
    perfect_power_reduction,
)


@pytest.mark.parametrize("a,b,expected", [(7, 2, 21), (5, 5, 1), (16, 3, 560), (3, 5, 0), (0, 0, 1)])
def test_binomial(a, b, expected):
    assert binomial(a, b) == expected


def test_binomial_pascal():
    for a in range(2, 61):
        for b in range(1, a):
            assert binomial(a, b) == binomial(a - 1, b - 1) + binomial(a - 1, b)


@pytest.mark.parametrize("s,n,k", [(8, 3, 2), (80, 2, 8), (30, 3, 3), (1, 5, 1), (2**64, 4, 2**16)])
def test_int_nth_root_examples(s, n, k):
    assert int_nth_root(s, n) == k


def test_int_nth_root_rejects_nonpositive():
    with pytest.raises(ValueError):
        int_nth_root(0, 2)
    with pytest.raises(ValueError):
        int_nth_root(5, 0)


@given(st.integers(1, 10**60), st.integers(1, 12))
def test_int_nth_root_bracket(s, n):
    k = int_nth_root(s, n)
    assert k**n <= s < (k + 1) ** n


@pytest.mark.parametrize("t,s,n,d", [(4, 5, 2, 8), (5, 2, 2, 7), (4, 30, 3, 12), (0, 7, 3, 0)])
def test_floor_mul_nth_root_examples(t, s, n, d):
    assert floor_mul_nth_root(t, s, n) == d


def test_floor_mul_nth_root_big_int_oracle():
    # 12**3 = 1728 <= 4**3 * 30 = 1920 < 2197 = 13**3
    assert 12**3 <= 4**3 * 30 < 13**3


@given(st.integers(0, 10**6), st.integers(1, 10**6), st.integers(1, 7))
def test_floor_mul_nth_root_bracket(t, s, n):
    d = floor_mul_nth_root(t, s, n)
    assert d**n <= t**n * s < (d + 1) ** n
    if t == 1:
        assert d == int_nth_root(s, n)


@pytest.mark.parametrize(
    "args,expected",
    [
        ((3, 2, 2, 1, 2), RadicalOrdering.GREATER),
        ((2, 1, 8, 1, 3), RadicalOrdering.EQUAL),
        ((1296, 121, 30, 2, 3), RadicalOrdering.GREATER),
        ((7, 2, 15, 1, 2), RadicalOrdering.LESS),
    ],
)
def test_cmp_radical_examples(args, expected):
    assert cmp_radical(*args) is expected


def test_cmp_radical_frozen_powers():
    assert 1296**3 == 2_176_782_336
    assert 900 * 121**3 == 1_594_404_900


@given(st.integers(0, 500), st.integers(0, 500), st.integers(1, 500), st.integers(0, 5), st.integers(1, 5))
def test_cmp_radical_antisymmetric(a, b, s, j, n):
    forward = cmp_radical(a, b, s, j, n)
    if a == 0 or b == 0:
        return
    # order of b * s**(j/n) against a, computed directly
    lhs, rhs = b**n * s**j, a**n
    backward = RadicalOrdering.LESS if lhs < rhs else RadicalOrdering.GREATER if lhs > rhs else RadicalOrdering.EQUAL
    assert backward is forward.flipped()


def test_cmp_radical_agrees_with_ae_sign():
    rng = random.Random(20240531)
    to_sign = {RadicalOrdering.LESS: Sign.NEGATIVE, RadicalOrdering.EQUAL: Sign.ZERO,
               RadicalOrdering.GREATER: Sign.POSITIVE}
    for _ in range(1000):
        a, b = rng.randint(0, 60), rng.randint(0, 60)
        s, j, n = rng.randint(1, 200), rng.randint(0, 6), rng.randint(1, 5)
        expr = AlgebraicExpr.constant(s, n, a) - b * AlgebraicExpr.theta(s, n) ** j
        assert ae_sign(expr) is to_sign[cmp_radical(a, b, s, j, n)], (a, b, s, j, n)


def test_ae_arith_examples():
    s, n = 5, 2
    eps = AlgebraicExpr.theta(s, n) - 2
    assert ae_arith(eps, eps, "mul").coeffs == (9, -4)
    x = AlgebraicExpr(s, n, (Fraction(3, 7), Fraction(-1)))
    assert ae_arith(x, AlgebraicExpr.constant(s, n, 0), "add") == x
    th = AlgebraicExpr.theta(7, 3)
    assert ae_arith(th, th**2, "mul").coeffs == (7, 0, 0)


def test_ae_arith_rejects_mismatch():
    with pytest.raises(ValueError):
        ae_arith(AlgebraicExpr.theta(5, 2), AlgebraicExpr.theta(6, 2), "add")
    with pytest.raises(ValueError):
        ae_arith(AlgebraicExpr.theta(5, 2), AlgebraicExpr.theta(5, 3), "mul")


def test_ae_requires_exactly_n_coeffs():
    with pytest.raises(ValueError):
        AlgebraicExpr(5, 2, (Fraction(1),))


small_fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def expr_triples(draw):
    n = draw(st.integers(1, 4))
    s = draw(st.integers(1, 50))
    make = lambda: AlgebraicExpr(s, n, tuple(draw(small_fracs) for _ in range(n)))
    return make(), make(), make()


@settings(max_examples=150)
@given(expr_triples())
def test_ae_ring_laws(triple):
    x, y, z = triple
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == AlgebraicExpr.constant(x.s, x.n, 0)


@pytest.mark.parametrize(
    "coeffs,s,n,expected",
    [
        ([-1, 1], 5, 2, Sign.POSITIVE),
        ([0, 0], 5, 2, Sign.ZERO),
        ([0, 0, 0], 30, 3, Sign.ZERO),
        ([7, -2], 15, 2, Sign.NEGATIVE),
        ([-3, 0, 0], 30, 3, Sign.NEGATIVE),
    ],
)
def test_ae_sign_examples(coeffs, s, n, expected):
    assert ae_sign(AlgebraicExpr(s, n, tuple(map(Fraction, coeffs)))) is expected


def test_ae_sign_hidden_zero_in_perfect_power():
    # s = 4, n = 2: theta = 2, so 2 - theta is zero though its vector is not
    assert ae_sign(AlgebraicExpr(4, 2, (Fraction(2), Fraction(-1)))) is Sign.ZERO
    # s = 64, n = 6: theta = 2, theta**2 - 4 = 0 and theta**3 - 8 = 0
    th = AlgebraicExpr.theta(64, 6)
    assert ae_sign(th**2 - 4) is Sign.ZERO
    assert ae_sign(th**3 - 8) is Sign.ZERO
    # 16**(1/4) = 2
    assert ae_sign(AlgebraicExpr.theta(16, 4) - 2) is Sign.ZERO
    # s = 9, n = 4: theta = sqrt(3); theta**2 - 3 = 0
    assert ae_sign(AlgebraicExpr.theta(9, 4) ** 2 - 3) is Sign.ZERO


@pytest.mark.parametrize("s,n,u,n_red", [(30, 3, 30, 3), (64, 6, 2, 1), (9, 4, 3, 2), (8, 2, 8, 2), (1, 5, 1, 1)])
def test_perfect_power_reduction(s, n, u, n_red):
    assert perfect_power_reduction(s, n) == (u, n_red)


def test_ae_sign_precision_cap_gives_indeterminate():
    # |theta - 1.41421356...| is about 1e-9, invisible at 16 bits
    num, den = 141421356, 100000000
    expr = AlgebraicExpr.theta(2, 2) - Fraction(num, den)
    assert ae_sign(expr, max_precision_bits=16) is Sign.INDETERMINATE
    assert ae_sign(expr) is Sign.POSITIVE


@given(st.integers(2, 300), st.integers(2, 5))
def test_inverse_theta_minus(s, n):
    k = int_nth_root(s, n)
    if k**n == s:
        with pytest.raises(ZeroDivisionError):
            AlgebraicExpr.inverse_theta_minus(s, n, k)
        return
    inv = AlgebraicExpr.inverse_theta_minus(s, n, k)
    assert inv * (AlgebraicExpr.theta(s, n) - k) == AlgebraicExpr.constant(s, n, 1)
