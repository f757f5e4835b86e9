import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cqsl2.scalar import (
    complex_embed, invert, mu, q2_int, q_gauss, q_int, rational_q, root_of_unity,
    scalar_from_json, scalar_to_json,
)
from conftest import scalars


def galois(x, k):
    return x.ctx.galois(x, k)


class TestQIntegers:
    def test_q_int_two_is_q_plus_inverse(self, any_ctx):
        assert q_int(any_ctx, 2) == any_ctx.q + any_ctx.q.inverse()

    def test_q_int_three_vanishes_at_r3(self, r3):
        assert q_int(r3, 3) == 0

    def test_q_int_three_at_q2(self):
        # (8 - 1/8)/(2 - 1/2)
        ctx = rational_q(2)
        assert q_int(ctx, 3) == ctx.coerce(Fraction(21, 4))

    def test_q2_int_small(self, any_ctx):
        assert q2_int(any_ctx, 1) == 1
        assert q2_int(any_ctx, 2) == 1 + any_ctx.qpow(2)

    def test_q2_int_three_vanishes_at_r3(self, r3):
        assert q2_int(r3, 3) == 0

    def test_gauss_integer_two(self, any_ctx):
        assert q_gauss(any_ctx, 2) == 1 + any_ctx.q

    @pytest.mark.parametrize("r", [3, 5, 7, 9])
    def test_periodicity(self, r):
        ctx = root_of_unity(r)
        for n in range(-3, 2 * r):
            if (ctx.qpow(n) - ctx.qpow(-n)):
                assert q_int(ctx, n + r) == q_int(ctx, n)

    def test_balanced_against_float(self):
        q = 1.7
        ctx = rational_q("17/10")
        for n in range(1, 7):
            exact = float(q_int(ctx, n).c[0])
            assert math.isclose(exact, (q**n - q**-n) / (q - 1 / q), rel_tol=1e-12)


class TestMu:
    def test_rational(self):
        ctx = rational_q(2)
        assert mu(ctx) == ctx.coerce(Fraction(3, 4))

    def test_r3(self, r3):
        assert mu(r3) == 1 - r3.q

    def test_nonzero(self, any_ctx):
        assert mu(any_ctx) != 0


class TestInverse:
    def test_one(self, any_ctx):
        assert invert(any_ctx.one) == 1

    def test_r5_example(self):
        ctx = root_of_unity(5)
        x = 1 + ctx.qpow(2)
        assert invert(x) * x == 1

    def test_zero_raises(self, any_ctx):
        with pytest.raises(ZeroDivisionError):
            invert(any_ctx.zero)

    def test_rejects_bad_contexts(self):
        for q in ("1", "-1", "0"):
            with pytest.raises(ValueError):
                rational_q(q)
        for r in (1, 2, 4, 6):
            with pytest.raises(ValueError):
                root_of_unity(r)


@pytest.mark.parametrize("r", [3, 5, 7, 9, 15])
def test_cyclotomic_reduction(r):
    ctx = root_of_unity(r)
    assert ctx.qpow(r) == 1
    assert ctx.q ** r == 1
    assert sum((ctx.qpow(i) for i in range(r)), ctx.zero) == 0
    # reducing an already reduced element is a no-op
    x = ctx.from_coeffs(list(range(1, ctx.degree + 1)))
    assert ctx.from_coeffs(x.c) == x


def test_general_odd_r_uses_true_cyclotomic():
    ctx = root_of_unity(9)
    assert ctx.degree == 6
    # q^3 is a cube root of unity, so 1 + q^3 + q^6 = 0
    assert 1 + ctx.qpow(3) + ctx.qpow(6) == 0


def _field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == 1


@pytest.mark.parametrize("r", [3, 5, 7])
def test_field_axioms_roots(r):
    ctx = root_of_unity(r)

    @given(scalars(ctx), scalars(ctx), scalars(ctx))
    def check(a, b, c):
        _field_axioms(a, b, c)

    check()


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_field_axioms_rational(a, b, c):
    ctx = rational_q("3/2")
    _field_axioms(ctx(a), ctx(b), ctx(c))


class TestEmbedding:
    def test_q_at_r3(self, r3):
        z = complex_embed(r3.q, 1)
        assert abs(z - complex(-0.5, math.sqrt(3) / 2)) < 1e-12

    def test_offset_r7(self):
        ctx = root_of_unity(7)
        assert abs(complex_embed(q_int(ctx, 3) / q_int(ctx, 4)) - (-1)) < 1e-10

    def test_offset_r5(self):
        ctx = root_of_unity(5)
        val = complex_embed(q_int(ctx, 3) / q_int(ctx, 4))
        assert abs(val - math.sin(6 * math.pi / 5) / math.sin(8 * math.pi / 5)) < 1e-10
        surd = math.sqrt((math.sqrt(5) - 1) / (math.sqrt(5) + 1))
        assert abs(val - surd) < 1e-10

    def test_bad_index(self, r3):
        with pytest.raises(ValueError):
            complex_embed(r3.q, 3)

    def test_rational_mode_rejected(self):
        with pytest.raises(ValueError):
            complex_embed(rational_q(2).q)

    @pytest.mark.parametrize("r", [5, 7])
    def test_homomorphism(self, r):
        ctx = root_of_unity(r)

        @given(scalars(ctx), scalars(ctx), st.sampled_from([k for k in range(1, r) if math.gcd(k, r) == 1]))
        def check(a, b, k):
            za, zb = complex_embed(a, k), complex_embed(b, k)
            assert abs(complex_embed(a * b, k) - za * zb) < 1e-9
            assert abs(complex_embed(a + b, k) - (za + zb)) < 1e-9

        check()

    def test_embedding_of_q_power(self):
        ctx = root_of_unity(7)
        for e in range(-7, 8):
            assert abs(complex_embed(ctx.qpow(e), 2) - cmath.exp(4j * math.pi * e / 7)) < 1e-12


class TestGalois:
    def test_inverts_q(self, root_ctx):
        assert galois(root_ctx.q, -1) == root_ctx.q.inverse()

    def test_is_ring_map(self):
        ctx = root_of_unity(7)

        @given(scalars(ctx), scalars(ctx))
        def check(a, b):
            assert galois(a * b, 3) == galois(a, 3) * galois(b, 3)
            assert galois(galois(a, -1), -1) == a

        check()

    def test_non_coprime_rejected(self):
        with pytest.raises(ValueError):
            galois(root_of_unity(9).q, 3)


class TestJson:
    def test_round_trip(self, any_ctx):
        x = any_ctx.q * 3 + Fraction(1, 7)
        assert scalar_from_json(scalar_to_json(x)) == x

    def test_shape(self):
        ctx = root_of_unity(5)
        assert scalar_to_json(ctx.q) == {"mode": "cyclotomic", "r": 5, "coeffs": ["0", "1", "0", "0"]}
        assert scalar_to_json(rational_q("3/2").coerce(Fraction(1, 2))) == {
            "mode": "rational", "q": "3/2", "value": "1/2"}

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            scalar_from_json({"mode": "p-adic"})
