import pytest

from cqsl2.calculus import EA, EB, EC, ED, PAIRS, Tensor, basis1, basis2, e_z, theta, wedge11
from cqsl2.closed_forms import lift_table, metric_compact_form, ricci_closed, riemann_closed
from cqsl2.connection import canonical
from cqsl2.curvature import (
    InvariantTensor, lift_i, lift_matrix, metric, metric_compact, quantum_trace, ricci, riemann,
    selfdual_split, shifted_metric, wedge_of_lift_is_identity,
)
from cqsl2.linalg import ScalarMatrix
from cqsl2.qalgebra import algebra
from cqsl2.scalar import mu, q2_int, rational_q, root_of_unity
from conftest import random_element, rng

CONTEXTS = [root_of_unity(3), root_of_unity(5), root_of_unity(7), rational_q(2), rational_q("3/2")]
IDS = ["r3", "r5", "r7", "q2", "q3/2"]

AB, AC, BC, AD, BD, CD = range(6)


def _e(alg, i):
    return basis1(alg, i)


class TestMetric:
    def test_components(self, any_ctx):
        eta = metric(any_ctx)
        assert eta[EC, EB] == 1
        assert eta[EB, EC] == any_ctx.qpow(2)

    def test_symmetric(self, any_ctx):
        assert metric(any_ctx).wedge().is_zero()

    @pytest.mark.parametrize("ctx", CONTEXTS, ids=IDS)
    def test_two_displays_agree(self, ctx):
        assert metric(ctx) == metric_compact(ctx)
        assert metric(ctx).to_tensor() == metric_compact_form(ctx)

    def test_lambda_is_a_free_shift(self, any_ctx):
        th = theta(algebra(any_ctx))
        base = metric(any_ctx, lam=0)
        shifted = metric(any_ctx, lam=3)
        assert shifted == base + InvariantTensor.from_tensor(th @ th).scale(3)

    def test_invertible(self, any_ctx):
        assert metric(any_ctx).det() != 0

    def test_quantum_trace(self, any_ctx):
        u = quantum_trace(metric(any_ctx))
        q2 = any_ctx.qpow(2)
        diag = {EA: any_ctx.one, EC: q2, EB: q2.inverse(), ED: any_ctx.one}
        for j in range(4):
            for k in range(4):
                assert u[j][k] == (diag[j] if j == k else 0)

    def test_shifted_metric_degenerate(self, any_ctx):
        assert shifted_metric(any_ctx).det() == 0


class TestRiemann:
    @pytest.mark.parametrize("ctx", CONTEXTS, ids=IDS)
    def test_closed_forms(self, ctx):
        alg = algebra(ctx)
        for i in range(4):
            assert riemann(_e(alg, i)) == riemann_closed(ctx, i)

    def test_eb_display(self, any_ctx):
        alg = algebra(any_ctx)
        q = any_ctx.qpow
        eb, ec, ez = _e(alg, EB), _e(alg, EC), e_z(alg)
        inner = -(wedge11(eb, ez) @ ez) + (wedge11(ec, eb) @ eb).scale(q(-2) * (1 + q(-2)))
        pref = q(6) / ((1 + q(4)) * (1 + q(4)))
        assert riemann(eb) == inner.scale(pref)

    def test_a_plus_d(self, any_ctx):
        alg = algebra(any_ctx)
        assert (riemann(_e(alg, EA)) + riemann(_e(alg, ED))).is_zero()

    @pytest.mark.parametrize("r", [3, 5])
    def test_tensorial(self, r):
        alg = algebra(root_of_unity(r))
        R = rng(f"riem{r}")
        for _ in range(5):
            f = random_element(alg, R, 2)
            i = R.randrange(4)
            assert riemann(_e(alg, i).lmul(f)) == riemann(_e(alg, i)).lmul(f)

    def test_theta_is_flat(self, any_ctx):
        assert riemann(theta(algebra(any_ctx)), canonical(any_ctx)).is_zero()


class TestLift:
    def test_section_of_wedge(self, any_ctx):
        assert wedge_of_lift_is_identity(any_ctx)
        alg = algebra(any_ctx)
        for p in range(6):
            assert lift_i(basis2(alg, p)).wedge12() == basis2(alg, p)

    def test_eab(self, any_ctx):
        alg = algebra(any_ctx)
        ea, eb = _e(alg, EA), _e(alg, EB)
        expect = ((ea @ eb) - (eb @ ea).scale(any_ctx.qpow(2))).scale(q2_int(any_ctx, 2).inverse())
        assert lift_i(basis2(alg, AB)) == expect

    def test_eac(self, any_ctx):
        alg = algebra(any_ctx)
        ea, ec = _e(alg, EA), _e(alg, EC)
        expect = ((ea @ ec).scale(any_ctx.qpow(2)) - (ec @ ea)).scale(q2_int(any_ctx, 2).inverse())
        assert lift_i(basis2(alg, AC)) == expect

    def test_intermediate_lifts(self, any_ctx):
        alg = algebra(any_ctx)
        ea, eb, ec, ed, ez = _e(alg, EA), _e(alg, EB), _e(alg, EC), _e(alg, ED), e_z(alg)
        q2, m = any_ctx.qpow(2), mu(any_ctx)
        inv2 = q2_int(any_ctx, 2).inverse()

        b_z = ((ea @ eb).scale(m - any_ctx.qpow(-2)) + (eb @ ea) + (ed @ eb) - (eb @ ed)).scale(q2 * inv2)
        assert lift_i(wedge11(eb, ez)) == b_z

        # read as [2]^-1 ((q^-2 - mu) e_c(x)e_a - e_a(x)e_c + e_d(x)e_c - e_c(x)e_d)
        c_z = ((ec @ ea).scale(any_ctx.qpow(-2) - m) - (ea @ ec) + (ed @ ec) - (ec @ ed)).scale(inv2)
        assert lift_i(wedge11(ec, ez)) == c_z

        c_b = ((ec @ eb) - (eb @ ec) - ((ea @ ed) + (ed @ ea)).scale(q2 * m / 2) + (ea @ ea).scale(m))
        assert lift_i(wedge11(ec, eb)) == c_b.scale(inv2 * inv2 * q2 * 2)

    def test_images_complement_kernel_of_wedge(self, any_ctx):
        images = [img for _, img in lift_table(any_ctx)]
        cols = [{i * 4 + j: v for (i, j), v in img.items()} for img in images]
        plus, minus = cols[:3], cols[3:]
        assert ScalarMatrix.from_columns(any_ctx, 16, plus).rank() == 3
        assert ScalarMatrix.from_columns(any_ctx, 16, minus).rank() == 3
        assert ScalarMatrix.from_columns(any_ctx, 16, cols).rank() == 6

        alg = algebra(any_ctx)
        wedge_cols = []
        for i in range(4):
            for j in range(4):
                t = wedge11(_e(alg, i), _e(alg, j))
                wedge_cols.append({p: t.component(p).constant_term() for (p,) in t.terms})
        W = ScalarMatrix.from_columns(any_ctx, 6, wedge_cols)
        kernel = [{k: v for k, v in enumerate(vec) if v} for vec in W.nullspace()]
        assert len(kernel) == 10
        assert ScalarMatrix.from_columns(any_ctx, 16, cols + kernel).rank() == 16

    def test_lift_matrix_is_cached(self, r3):
        assert lift_matrix(r3) is lift_matrix(r3)

    def test_rejects_one_form(self, r3):
        with pytest.raises(ValueError):
            lift_i(_e(algebra(r3), EA))


class TestSelfDual:
    def test_eac_is_plus(self, any_ctx):
        alg = algebra(any_ctx)
        plus, minus = selfdual_split(basis2(alg, AC))
        assert plus == basis2(alg, AC) and minus.is_zero()

    def test_eab_is_minus(self, any_ctx):
        alg = algebra(any_ctx)
        plus, minus = selfdual_split(basis2(alg, AB))
        assert plus.is_zero() and minus == basis2(alg, AB)

    def test_ead(self, any_ctx):
        alg = algebra(any_ctx)
        plus, minus = selfdual_split(basis2(alg, AD))
        assert plus + minus == basis2(alg, AD)
        # e_ad - q^-2 e_cb is in the plus space and e_ad + e_cb in the minus one; e_cb = -e_bc
        qm2 = any_ctx.qpow(-2)
        s = (1 + qm2).inverse()
        expect_plus = (basis2(alg, AD) + basis2(alg, BC).scale(qm2)).scale(s)
        expect_minus = (basis2(alg, AD) - basis2(alg, BC)).scale(qm2 * s)
        assert plus == expect_plus and minus == expect_minus


class TestRicci:
    @pytest.mark.parametrize("ctx", CONTEXTS, ids=IDS)
    def test_closed_form(self, ctx):
        assert ricci(ctx) == InvariantTensor.from_tensor(ricci_closed(ctx))

    def test_einstein_up_to_shift(self, any_ctx):
        factor = -2 * any_ctx.qpow(2) / q2_int(any_ctx, 4)
        assert ricci(any_ctx) == shifted_metric(any_ctx).scale(factor)

    def test_scalar_valued(self, root_ctx):
        R = ricci(root_ctx).to_tensor()
        assert R.is_constant()


class TestInvariantTensor:
    def test_round_trip(self, any_ctx):
        eta = metric(any_ctx)
        assert InvariantTensor.from_tensor(eta.to_tensor()) == eta

    def test_inverse(self, any_ctx):
        eta = metric(any_ctx)
        inv = eta.inverse_matrix()
        prod = eta.as_matrix() @ ScalarMatrix.from_dense(any_ctx, inv)
        assert prod == ScalarMatrix.identity(any_ctx, 4)

    def test_json_keys(self, r3):
        js = metric(r3).to_json()
        assert "cb" in js and "bc" in js

    def test_from_tensor_rejects_bad_rank(self, r3):
        with pytest.raises(ValueError):
            InvariantTensor.from_tensor(basis1(algebra(r3), EA))


def test_pairs_order():
    assert PAIRS == ((EA, EB), (EA, EC), (EB, EC), (EA, ED), (EB, ED), (EC, ED))


def test_tensor_type(r3):
    assert isinstance(riemann(basis1(algebra(r3), EB)), Tensor)
