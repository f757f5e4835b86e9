import pytest

from cqsl2.calculus import (
    EA, EB, EC, ED, PAIRS, Tensor, ad_constants, basis1, d0, d1, e_z, form1, ker_tilde_pi_basis,
    partials, push_left, push_left_iterated, push_left_monomial, tensor_normalize, theta,
    tilde_pi, wedge11, wedge_table,
)
from cqsl2.closed_forms import genextd
from cqsl2.linalg import ScalarMatrix
from cqsl2.qalgebra import AlgebraElement, algebra, counit
from cqsl2.scalar import mu, q_gauss, rational_q, root_of_unity
from conftest import random_element, rng


def _mono(alg, idx):
    return AlgebraElement(alg, {idx: alg.ctx.one})


class TestPushLeft:
    def test_ea_past_c(self, root_ctx):
        alg = algebra(root_ctx)
        c = alg.generator("c")
        assert push_left(EA, c) == (c.scale(root_ctx.q), alg.zero(), alg.zero(), alg.zero())

    def test_eb_past_a(self, root_ctx):
        alg = algebra(root_ctx)
        a = alg.generator("a")
        assert push_left(EB, a) == (alg.zero(), a, alg.zero(), alg.zero())

    def test_ed_past_b(self, root_ctx):
        alg = algebra(root_ctx)
        a, b = alg.generator("a"), alg.generator("b")
        q, m = root_ctx.q, mu(root_ctx)
        assert push_left(ED, b) == (b.scale(q * m * m), alg.zero(), a.scale(m), b.scale(q))

    @pytest.mark.parametrize("r", [3, 5])
    def test_closed_form_matches_iterated_generator_rules(self, r):
        alg = algebra(root_of_unity(r))
        for idx in range(alg.dim):
            P = push_left_iterated(alg, idx)
            for i in range(4):
                assert list(push_left_monomial(alg, i, idx)) == P[i]

    @pytest.mark.parametrize("r", [3, 5])
    def test_bimodule_consistency(self, r):
        alg = algebra(root_of_unity(r))
        R = rng(f"bimod{r}")
        for _ in range(40):
            f, g = random_element(alg, R, 2), random_element(alg, R, 2)
            i = R.randrange(4)
            direct = push_left(i, f * g)
            first = push_left(i, f)
            composed = [alg.zero()] * 4
            for k in range(4):
                second = push_left(k, g)
                for l in range(4):
                    composed[l] = composed[l] + first[k] * second[l]
            assert list(direct) == composed


class TestWedge:
    def test_ed_squared(self, any_ctx):
        alg = algebra(any_ctx)
        ed = basis1(alg, ED)
        bc = PAIRS.index((EB, EC))
        assert wedge11(ed, ed) == Tensor(alg, (2,), {(bc,): alg.const(-mu(any_ctx))})

    def test_ez_squared(self, any_ctx):
        alg = algebra(any_ctx)
        ez = e_z(alg)
        bc = PAIRS.index((EB, EC))
        expect = Tensor(alg, (2,), {(bc,): alg.const(-(1 - any_ctx.qpow(-4)))})
        assert wedge11(ez, ez) == expect

    def test_grassmann(self, any_ctx):
        alg = algebra(any_ctx)
        for i in (EA, EB, EC):
            assert wedge11(basis1(alg, i), basis1(alg, i)).is_zero()
            for j in (EA, EB, EC):
                assert wedge11(basis1(alg, i), basis1(alg, j)) == -wedge11(basis1(alg, j), basis1(alg, i))

    def test_rewrite_table_entries(self, any_ctx):
        W = wedge_table(any_ctx)
        q2, m = any_ctx.qpow(2), mu(any_ctx)
        ab, ac, bc, ad, bd, cd = range(6)
        assert W[ED][EA] == {ad: -any_ctx.one, bc: m}
        assert W[ED][EB] == {bd: -any_ctx.qpow(-2), ab: any_ctx.qpow(-2) * m}
        assert W[ED][EC] == {cd: -q2, ac: -m}

    def test_products_span_six_with_ten_dimensional_kernel(self, any_ctx):
        W = wedge_table(any_ctx)
        cols = [dict(W[i][j]) for i in range(4) for j in range(4)]
        M = ScalarMatrix.from_columns(any_ctx, 6, cols)
        assert M.rank() == 6
        assert len(M.nullspace()) == 10


class TestExteriorDerivative:
    def test_d0_of_one(self, root_ctx):
        assert d0(algebra(root_ctx).one()).is_zero()

    def test_d0_of_c(self, root_ctx):
        alg = algebra(root_ctx)
        c, d = alg.generator("c"), alg.generator("d")
        q = root_ctx.q
        mi = mu(root_ctx).inverse()
        expect = form1(alg, [c.scale(mi * (q - 1)), d, alg.zero(), c.scale(mi * (q.inverse() - 1))])
        assert d0(c) == expect
        assert partials(c)[EB] == d

    def test_partials_of_one(self, root_ctx):
        assert all(p.is_zero() for p in partials(algebra(root_ctx).one()))

    def test_genextd_exhaustive_r3(self, r3):
        alg = algebra(r3)
        for idx in range(alg.dim):
            assert partials(_mono(alg, idx)) == genextd(alg, *alg.exponents(idx))

    @pytest.mark.parametrize("r", [5, 7])
    def test_genextd_sampled(self, r):
        alg = algebra(root_of_unity(r))
        # r = 5 has only 125 monomials, so the sample becomes the full sweep
        for idx in rng(f"gen{r}").sample(range(alg.dim), min(200, alg.dim)):
            assert partials(_mono(alg, idx)) == genextd(alg, *alg.exponents(idx))

    @pytest.mark.parametrize("r", [3, 5])
    def test_d_squared(self, r):
        alg = algebra(root_of_unity(r))
        for idx in range(alg.dim):
            assert d1(d0(_mono(alg, idx))).is_zero()

    @pytest.mark.parametrize("r", [3, 5, 7])
    def test_leibniz(self, r):
        alg = algebra(root_of_unity(r))
        R = rng(f"leib{r}")
        for _ in range(200 if r == 3 else 60):
            f, g = random_element(alg, R), random_element(alg, R)
            assert d0(f * g) == d0(f).rmul(g) + d0(g).lmul(f)

    def test_d1_ez(self, any_ctx):
        alg = algebra(any_ctx)
        bc = PAIRS.index((EB, EC))
        expect = Tensor(alg, (2,), {(bc,): alg.const(any_ctx.qpow(-2) + 1)})
        assert d1(e_z(alg)) == expect

    def test_d1_theta(self, any_ctx):
        assert d1(theta(algebra(any_ctx))).is_zero()

    def test_de_table_from_theta_anticommutator(self, any_ctx):
        # d e_i = mu^-1 (theta ^ e_i + e_i ^ theta)
        alg = algebra(any_ctx)
        th = theta(alg)
        mi = mu(any_ctx).inverse()
        for i in range(4):
            e = basis1(alg, i)
            assert d1(e) == (wedge11(th, e) + wedge11(e, th)).scale(mi)


class TestTildePi:
    def test_displayed_values(self, root_ctx):
        alg = algebra(root_ctx)
        q = root_ctx.q
        two = q_gauss(root_ctx, 2)

        def vec(f):
            t = tilde_pi(f)
            assert t.is_constant()
            return [t.component(i).constant_term() for i in range(4)]

        z, one = root_ctx.zero, root_ctx.one
        assert vec(alg.generator("c")) == [z, one, z, z]
        assert vec(alg.generator("b")) == [z, z, one, z]
        assert vec(alg.generator("a")) == [q * q / two, z, z, -q / two]
        assert vec(alg.generator("d")) == [(q * q - q.inverse() - 1) / two, z, z, q * q / two]
        assert vec(alg.one()) == [z, z, z, z]

    @pytest.mark.parametrize("r", [3, 5])
    def test_kernel_basis(self, r):
        ctx = root_of_unity(r)
        alg = algebra(ctx)
        ker = ker_tilde_pi_basis(ctx)
        assert len(ker) >= alg.dim - 4
        for f in ker:
            assert tilde_pi(f).is_zero()
        rank = ScalarMatrix.from_columns(ctx, alg.dim, [f.terms for f in ker]).rank()
        assert rank == len(ker)

    def test_c2b_in_kernel(self, root_ctx):
        alg = algebra(root_ctx)
        f = alg.monomial(2, 1, 0)
        assert all(counit(p) == 0 for p in partials(f))
        assert tilde_pi(f).is_zero()


class TestStructureConstants:
    def test_example(self, any_ctx):
        ad = ad_constants(any_ctx)
        assert ad.R(EC, EB, EA) == 1
        assert ad.R(EB, EC, EA) == -1
        assert ad.R(EA, EA, EA) == mu(any_ctx)

    @pytest.mark.parametrize("side", ["L", "R"])
    def test_a_plus_d_vanishes(self, any_ctx, side):
        ad = ad_constants(any_ctx)
        ta, td = ad.table(side, EA), ad.table(side, ED)
        for key in set(ta) | set(td):
            assert ta.get(key, any_ctx.zero) + td.get(key, any_ctx.zero) == 0


class TestTensorNormalize:
    def test_middle_coefficient_moves_left(self, r3):
        alg = algebra(r3)
        f = alg.generator("c") + alg.generator("d")
        t = tensor_normalize(alg, ((alg.one(), EA, f, EB),))
        pl = push_left(EA, f)
        expect = Tensor(alg, (1, 1), {(k, EB): pl[k] for k in range(4) if pl[k]})
        assert t == expect

    def test_already_normal_and_idempotent(self, r3):
        alg = algebra(r3)
        f = alg.generator("b")
        t = tensor_normalize(alg, ((f, EA, alg.one(), EB),))
        assert t == Tensor(alg, (1, 1), {(EA, EB): f})
        again = tensor_normalize(alg, tuple((g, i, alg.one(), j) for (i, j), g in t.terms.items()))
        assert again == t


def test_tensor_json_round_trip(r3):
    alg = algebra(r3)
    t = d1(d0(alg.generator("c"))) + d1(basis1(alg, EC).lmul(alg.generator("b")))
    assert Tensor.from_json(r3, t.to_json()) == t


def test_rational_mode_is_constant_only():
    alg = algebra(rational_q("3/2"))
    assert d0(alg.const(5)).is_zero()
