import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import pbdv

from pcfprod import product_reps as pr
from pcfprod.errors import DomainError
from pcfprod.product_reps import RepId
from pcfprod.special_fn import EvalPoint, bessel_k_quarter, pcf

FORMS = {
    RepId.T2_1: pr.dv_dv,
    RepId.T2_2: pr.dv_dvm1_erfc,
    RepId.T2_3: pr.dv_dvm1_exp,
    RepId.T2_4: pr.dv_dvm2_mixed,
    RepId.T2_5: pr.dv_dvm2_x,
    RepId.T2_6: pr.dv_dvm2_y,
    RepId.T2_7: pr.dv_dvm2_compact,
    RepId.T2_8: pr.dv_dvp1,
}
POINTS = [(-0.4, 1.2, 0.3), (-1.0, 0.0, 0.0), (-2.2, 2.5, -1.5), (-0.8, 0.7, -0.7), (-3.3, 0.2, 1.0)]

# D_{-1.7}(2)·D_{-3.7}(-1) and D_{-0.5}(1)·D_{0.5}(0.5), independent high-precision values
PROD_REF = {
    (RepId.T2_7, -1.7, 2.0, -1.0): 0.1949965786217652769,
    (RepId.T2_8, -0.5, 1.0, 0.5): 0.52422207812271749425,
}


def _scipy_product(p, k):
    return pbdv(p.v, p.x)[0] * pbdv(p.v + k, p.y)[0]


class TestIntegralForms:
    @pytest.mark.parametrize("rid", list(FORMS), ids=lambda r: r.value)
    @pytest.mark.parametrize("vxy", POINTS)
    def test_against_oracle(self, rid, vxy):
        p = EvalPoint(*vxy)
        got = FORMS[rid](p).value
        assert got == pytest.approx(pr.oracle_product(p, rid.order_offset), rel=1e-10)

    @pytest.mark.parametrize("rid", list(FORMS), ids=lambda r: r.value)
    def test_against_scipy(self, rid):
        p = EvalPoint(-1.3, 1.1, 0.4)
        assert FORMS[rid](p).value == pytest.approx(_scipy_product(p, rid.order_offset), rel=1e-9)

    @pytest.mark.parametrize("key", sorted(PROD_REF, key=str))
    def test_frozen_reference(self, key):
        rid, v, x, y = key
        assert FORMS[rid](EvalPoint(v, x, y)).value == pytest.approx(PROD_REF[key], rel=1e-11)

    def test_square_of_value_at_zero(self):
        # D_{-1}(0)² = π/2
        assert pr.dv_dv(EvalPoint(-1.0, 0.0, 0.0)).value == pytest.approx(math.pi / 2, rel=1e-13)

    @pytest.mark.parametrize("rid", [RepId.T2_3, RepId.T2_7, RepId.T2_8])
    def test_correction_only_on_boundary(self, rid):
        on = FORMS[rid](EvalPoint(-0.7, 1.0, -1.0))
        off = FORMS[rid](EvalPoint(-0.7, 1.0, -0.9))
        assert on.correction_applied and not off.correction_applied

    @pytest.mark.parametrize("rid", list(FORMS), ids=lambda r: r.value)
    @pytest.mark.parametrize("v", [-0.5, -1.7])
    def test_boundary_continuity(self, rid, v):
        at = FORMS[rid](EvalPoint(v, 1.0, -1.0)).value
        for d in (1e-4, 1e-6, 1e-8):
            near = FORMS[rid](EvalPoint(v, 1.0, -1.0 + d)).value
            assert abs(near - at) <= 10 * d * abs(at)

    @pytest.mark.parametrize("rid", list(FORMS), ids=lambda r: r.value)
    def test_domain(self, rid):
        with pytest.raises(DomainError):
            FORMS[rid](EvalPoint(-1.0, 1.0, -1.5))
        with pytest.raises(DomainError):
            FORMS[rid](EvalPoint(0.5, 1.0, 1.0))


class TestIdentities:
    @given(st.floats(-3.0, -0.1), st.floats(-2.0, 3.0), st.floats(0.0, 3.0))
    @settings(max_examples=20, deadline=None)
    def test_entry1_symmetry(self, v, x, gap):
        y = gap - x
        a = pr.dv_dv(EvalPoint(v, x, y)).value
        b = pr.dv_dv(EvalPoint(v, y, x)).value
        assert a == pytest.approx(b, rel=1e-11)

    @pytest.mark.parametrize("vxy", POINTS)
    def test_mixed_is_weighted_sum(self, vxy):
        p = EvalPoint(*vxy)
        lhs = pr.dv_dvm2_mixed(p).value
        rhs = p.v * pr.dv_dvm2_x(p).value + (1 - p.v) * pr.dv_dvm2_y(p).value
        assert lhs == pytest.approx(rhs, rel=1e-11)

    @pytest.mark.parametrize("beta", [0.25, 0.5, 2.0, 5.0])
    def test_time_form_beta_invariant(self, beta):
        p = EvalPoint(-1.7, 2.0, -1.0)
        assert pr.dv_dv_time_form(p, beta).value == pytest.approx(pr.dv_dv(p).value, rel=1e-11)

    def test_time_form_beta_domain(self):
        with pytest.raises(DomainError):
            pr.dv_dv_time_form(EvalPoint(-1.0, 1.0, 1.0), 0.0)

    @pytest.mark.parametrize("x", [-2.0, -0.5, 0.0, 1.0, 2.0])
    def test_malyshev(self, x):
        v = -1.3
        assert pr.malyshev_same_arg(v, x) == pytest.approx(pr.dv_dv(EvalPoint(v, x, -x)).value, rel=1e-11)

    @pytest.mark.parametrize("vxy", [(-0.5, 1.0, 0.5), (-1.0, 2.0, 1.0), (-2.5, 0.5, -1.0), (-1.2, 0.4, 0.4)])
    def test_glasser(self, vxy):
        v, x, y = vxy
        ref = pcf(v, x) * pcf(v, -y)
        assert pr.glasser_form(-v, x, y) == pytest.approx(ref, rel=1e-11)

    def test_glasser_domain(self):
        with pytest.raises(DomainError):
            pr.glasser_form(1.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            pr.glasser_form(0.0, 1.0, 0.0)


class TestOffsets:
    @pytest.mark.parametrize("k", range(-6, 7))
    def test_all_offsets(self, k):
        p = EvalPoint(-0.3, 1.0, 0.5)
        ref = pbdv(-0.3, 1.0)[0] * pbdv(-0.3 + k, 0.5)[0]
        assert pr.product_by_offset(p, k) == pytest.approx(ref, rel=1e-10)

    def test_matches_dedicated_forms(self):
        p = EvalPoint(-1.7, 2.0, -1.0)
        assert pr.product_by_offset(p, 1) == pytest.approx(pr.dv_dvp1(p).value, rel=1e-11)
        assert pr.product_by_offset(p, -2) == pytest.approx(pr.dv_dvm2_compact(p).value, rel=1e-11)

    @pytest.mark.parametrize("k", [7, -7, 1.5])
    def test_offset_range(self, k):
        with pytest.raises(DomainError):
            pr.product_by_offset(EvalPoint(-1.0, 1.0, 1.0), k)


class TestSpecialCases:
    @pytest.mark.parametrize("xy", [(0.0, 0.0), (1.0, -1.0), (0.3, 2.0), (3.0, -2.5)])
    def test_erfc_product(self, xy):
        x, y = xy
        assert pr.erfc_product(x, y) == pytest.approx(math.erfc(x) * math.erfc(y), rel=1e-12)

    def test_erfc_product_domain(self):
        with pytest.raises(DomainError):
            pr.erfc_product(1.0, -2.0)

    @pytest.mark.parametrize("x", [0.05, 0.25, 1.0, 4.0, 12.0])
    def test_k14(self, x):
        assert pr.k14_rep(x) == pytest.approx(bessel_k_quarter(x), rel=1e-11)

    @pytest.mark.parametrize("xy", [(0.5, 0.0), (1.0, -2.0), (2.0, 1.0), (0.3, 3.0)])
    def test_k14_times_d32(self, xy):
        x, y = xy
        ref = bessel_k_quarter(x) * pcf(-1.5, y)
        assert pr.k14_times_d32(x, y) == pytest.approx(ref, rel=1e-10)

    def test_k14_domain(self):
        with pytest.raises(DomainError):
            pr.k14_rep(0.0)
        with pytest.raises(DomainError):
            pr.k14_times_d32(1.0, -2.5)

    @pytest.mark.parametrize("vx", [(-0.3, 0.0), (-1.0, 2.0), (-2.5, 3.0), (-6.0, 0.7)])
    def test_single(self, vx):
        v, x = vx
        assert pr.single_pcf(v, x) == pytest.approx(pcf(v, x), rel=1e-11)

    def test_single_domain(self):
        with pytest.raises(DomainError):
            pr.single_pcf(-1.0, -0.5)


class TestRegistry:
    def test_offsets(self):
        assert RepId.T2_8.order_offset == 1
        assert RepId.T2_3.order_offset == -1
        assert {r for r in RepId if r.corrected} == {RepId.T2_3, RepId.T2_7, RepId.T2_8}

    @pytest.mark.parametrize("rid", list(RepId), ids=lambda r: r.value)
    def test_evaluate_dispatch(self, rid):
        p = EvalPoint(-1.5, 1.0, 0.5)
        assert pr.REPS[rid].is_valid(p) or rid is RepId.MALYSHEV
        if rid is RepId.MALYSHEV:
            p = EvalPoint(-1.5, 1.0, -1.0)
        got = pr.evaluate(rid, p)
        assert math.isfinite(got) and got > 0

    def test_validity(self):
        assert not pr.REPS[RepId.T2_1].is_valid(EvalPoint(-1.0, 1.0, -2.0))
        assert pr.REPS[RepId.GLASSER].is_valid(EvalPoint(-1.0, 1.0, -2.0))
        assert not pr.REPS[RepId.K14].is_valid(EvalPoint(-1.0, -1.0, 0.0))
