import math

import numpy as np
import pytest
from scipy import stats

from pcfprod import laplace_pairs as lp
from pcfprod.errors import DomainError
from pcfprod.laplace_pairs import PairParams
from pcfprod.quadrature import integrate_interval, integrate_semi_infinite
from pcfprod.special_fn import pcf

# Γ(2)·D_{-2}(1)·D_{-3}(0) and 3·Γ(3)·D_{-3}(0.5)·D_{-5}(0.5), high-precision values
ENTRY2_REF = 0.16804250587447962446
ENTRY5_REF = 0.090213943242474816064
OU_DENS_REF = 0.19884487271167572402


def _entry1_by_hand(t, b, c, x, y):
    e = math.exp(-b * t)
    d = 1 - e * e
    return b * math.exp(-c * t) / math.sqrt(d) * math.exp((y * y - x * x) / 4) * math.exp(-((y + x * e) ** 2) / (2 * d))


class TestTimeSide:
    def test_entry1_dual(self):
        P = PairParams(beta=1.0, c=0.0, x=1.0, y=0.5)
        assert float(lp.table1_time(1, 1.0, P)) == pytest.approx(_entry1_by_hand(1.0, 1, 0, 1, 0.5), rel=1e-14)

    def test_entry1_asymptote(self):
        P = PairParams(beta=1.0, c=0.3, x=1.0, y=0.5)
        t = 40.0
        ref = math.exp(-0.3 * t) * math.exp((0.25 - 1) / 4) * math.exp(-0.125)
        assert float(lp.table1_time(1, t, P)) == pytest.approx(ref, rel=1e-12)

    def test_entry2_at_origin(self):
        P = PairParams(beta=1.0, c=0.0, x=0.0, y=0.0)
        assert float(lp.table1_time(2, 0.5, P)) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-15)

    def test_vectorised(self):
        P = PairParams(beta=2.0, c=0.5, x=2.0, y=1.0)
        t = np.array([0.01, 0.1, 1.0, 10.0])
        for e in lp.ENTRIES:
            assert lp.table1_time(e, t, P).shape == t.shape

    def test_entry4_no_cancellation_loss(self):
        # at small t the bracket of entry 4 cancels to ~1e-30 of its terms
        P = PairParams(beta=1.0, x=3.0, y=2.0)
        val = float(lp.table1_time(4, 0.02, P))
        assert val > 0 and math.isfinite(val)

    def test_domain(self):
        with pytest.raises(DomainError):
            lp.table1_time(1, 1.0, PairParams(x=1.0, y=-2.0))
        with pytest.raises(DomainError):
            lp.table1_time(7, 1.0, PairParams())
        with pytest.raises(DomainError):
            lp.table1_time(1, 0.0, PairParams())
        with pytest.raises(DomainError):
            PairParams(beta=0.0)
        with pytest.raises(DomainError):
            PairParams(c=-1.0)


class TestTransformSide:
    def test_entry1_at_origin(self):
        P = PairParams(beta=1.0, c=0.0, x=0.0, y=0.0)
        assert lp.table1_transform(1, 1.0, P) == pytest.approx(math.pi / 2, rel=1e-13)

    def test_entry2_reference(self):
        P = PairParams(beta=1.0, c=0.0, x=1.0, y=0.0)
        assert lp.table1_transform(2, 2.0, P) == pytest.approx(ENTRY2_REF, rel=1e-12)

    def test_entry5_reference(self):
        P = PairParams(beta=0.5, c=0.5, x=0.5, y=0.5)
        assert lp.table1_transform(5, 1.0, P) == pytest.approx(ENTRY5_REF, rel=1e-12)

    def test_entry3_boundary_term_vanishes_at_origin(self):
        # with x = y = c = 0 the time function is identically zero
        P = PairParams(beta=1.5, c=0.0, x=0.0, y=0.0)
        assert lp.table1_transform(3, 2.0, P) == pytest.approx(0.0, abs=1e-13)

    def test_entry3_boundary_term_only_on_boundary(self):
        off = PairParams(beta=1.0, x=1.0, y=-0.999)
        on = PairParams(beta=1.0, x=1.0, y=-1.0)
        jump = lp.table1_transform(3, 1.0, off) - lp.table1_transform(3, 1.0, on)
        assert jump == pytest.approx(math.sqrt(math.pi / 2), rel=1e-2)

    def test_s_domain(self):
        with pytest.raises(DomainError):
            lp.table1_transform(1, 0.0, PairParams())


class TestForward:
    def test_constant(self):
        assert lp.forward_laplace(lambda t: np.ones_like(t), 2.0).value == pytest.approx(0.5, rel=1e-12)

    def test_exponential(self):
        assert lp.forward_laplace(lambda t: np.exp(-3 * t), 1.0).value == pytest.approx(0.25, rel=1e-12)


class TestPairs:
    def test_entry1(self):
        rep = lp.verify_pair(1, PairParams(beta=1.0, c=0.0, x=1.0, y=0.5))
        assert rep.passed and rep.s_grid == lp.DEFAULT_S_GRID

    def test_entry3_on_boundary(self):
        rep = lp.verify_pair(3, PairParams(beta=1.0, c=0.5, x=1.0, y=-1.0))
        assert rep.passed, rep.residuals

    def test_entry6(self):
        rep = lp.verify_pair(6, PairParams(beta=2.0, c=0.5, x=2.0, y=1.0), [1.0])
        assert rep.max_residual <= 1e-6

    @pytest.mark.parametrize("entry", lp.ENTRIES)
    def test_each_entry_off_grid(self, entry):
        rep = lp.verify_pair(entry, PairParams(beta=0.7, c=0.2, x=-0.4, y=1.3), [0.8, 3.0])
        assert rep.max_residual <= 1e-9

    def test_empty_grid(self):
        with pytest.raises(DomainError):
            lp.verify_pair(1, PairParams(), [])


OU = PairParams(alpha=0.5, beta=1.0, sigma=math.sqrt(2.0))


def _ou_density_scipy(w, t, w0, P):
    m = P.alpha / P.beta + (w0 - P.alpha / P.beta) * math.exp(-P.beta * t)
    sd = P.sigma * math.sqrt((1 - math.exp(-2 * P.beta * t)) / (2 * P.beta))
    return stats.norm(m, sd).pdf(w)


class TestOU:
    def test_time_density_dual(self):
        for t in (0.1, 1.0, 5.0):
            assert float(lp.ou_time_density(0.3, t, -0.2, OU)) == pytest.approx(
                _ou_density_scipy(0.3, t, -0.2, OU), rel=1e-13
            )

    @pytest.mark.parametrize("w,w0", [(1.0, 0.0), (0.0, 1.0)])
    def test_density_both_branches(self, w, w0):
        fwd = lp.forward_laplace(lambda t: lp.ou_time_density(w, t, w0, OU), 1.0).value
        assert lp.ou_density_transform(w, 1.0, w0, OU) == pytest.approx(fwd, rel=1e-9)

    def test_branch_continuity(self):
        P = PairParams(alpha=-0.2, beta=0.7, sigma=1.3)
        w = 0.4
        above = lp.ou_density_transform(w + 1e-9, 1.0, w, P)
        below = lp.ou_density_transform(w - 1e-9, 1.0, w, P)
        assert above == pytest.approx(below, rel=1e-7)

    def test_density_reference(self):
        P = PairParams(alpha=0.0, beta=1.0, sigma=math.sqrt(2.0))
        assert lp.ou_density_transform(1.0, 1.0, 0.0, P) == pytest.approx(OU_DENS_REF, rel=1e-12)
        ref = math.exp(-0.25) / math.sqrt(2 * math.pi) * pcf(-1.0, 1.0) * pcf(-1.0, 0.0)
        assert lp.ou_density_transform(1.0, 1.0, 0.0, P) == pytest.approx(ref, rel=1e-13)

    def test_distribution_reference(self):
        P = PairParams(alpha=0.0, beta=1.0, sigma=math.sqrt(2.0))
        # D_{-1}(0)·D_{-2}(0)/√(2π) = 1/2
        assert lp.ou_distribution_transform(0.0, 1.0, 0.0, P) == pytest.approx(0.5, rel=1e-13)

    def test_distribution_forward(self):
        fwd = lp.forward_laplace(lambda t: lp.ou_time_distribution(1.0, t, 0.0, OU), 1.0).value
        assert lp.ou_distribution_transform(1.0, 1.0, 0.0, OU) == pytest.approx(fwd, rel=1e-9)

    def test_distribution_is_integrated_density(self):
        w0, w1, s = 0.0, 0.8, 1.0
        dens = lambda ws: np.array([lp.ou_density_transform(w, s, w0, OU) for w in ws])
        # ∫_{-∞}^{w1} p̄ dw, split at w0 where the two branches meet
        below = integrate_semi_infinite(lambda d: dens(w0 - d), 1e-9).value
        above = integrate_interval(dens, w0, w1, 1e-10).value
        assert below + above == pytest.approx(lp.ou_distribution_transform(w1, s, w0, OU), rel=1e-7)

    def test_normalisation(self):
        assert lp.ou_distribution_transform(40.0, 2.0, 0.0, OU) == pytest.approx(0.5, rel=1e-12)

    @pytest.mark.parametrize("w1", [0.3, 1.0, 2.0])
    def test_derivative(self, w1):
        h = 1e-4
        d = (lp.ou_distribution_transform(w1 + h, 1.0, 0.0, OU) - lp.ou_distribution_transform(w1 - h, 1.0, 0.0, OU)) / (2 * h)
        assert d == pytest.approx(lp.ou_density_transform(w1, 1.0, 0.0, OU), rel=1e-5)

    def test_distribution_domain(self):
        with pytest.raises(DomainError):
            lp.ou_distribution_transform(-1.0, 1.0, 0.0, OU)


class TestBM:
    def test_at_start_both_branches(self):
        r = math.sqrt(1.0 + 2 * 2.0 * 1.0)
        assert lp.bm_density_transform(0.0, 2.0, 0.0, 1.0, 1.0) == pytest.approx(1 / r, rel=1e-15)

    def test_density_forward(self):
        scipy_pdf = lambda t: stats.norm(0.0 + 1.0 * t, np.sqrt(t)).pdf(0.5)
        assert float(lp.bm_time_density(0.5, 0.7, 0.0, 1.0, 1.0)) == pytest.approx(scipy_pdf(0.7), rel=1e-13)
        fwd = lp.forward_laplace(lambda t: lp.bm_time_density(0.5, t, 0.0, 1.0, 1.0), 2.0).value
        assert lp.bm_density_transform(0.5, 2.0, 0.0, 1.0, 1.0) == pytest.approx(fwd, rel=1e-8)

    def test_density_lower_branch(self):
        fwd = lp.forward_laplace(lambda t: lp.bm_time_density(-0.5, t, 0.0, 1.0, 1.0), 2.0).value
        assert lp.bm_density_transform(-0.5, 2.0, 0.0, 1.0, 1.0) == pytest.approx(fwd, rel=1e-8)

    def test_distribution(self):
        fwd = lp.forward_laplace(lambda t: lp.bm_time_distribution(0.5, t, 0.0, -0.3, 0.7), 1.0).value
        assert lp.bm_distribution_transform(0.5, 1.0, 0.0, -0.3, 0.7) == pytest.approx(fwd, rel=1e-8)

    def test_normalisation(self):
        assert lp.bm_distribution_transform(60.0, 2.0, 0.0, 0.5, 1.0) == pytest.approx(0.5, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            lp.bm_distribution_transform(-1.0, 1.0, 0.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            lp.bm_density_transform(0.0, 1.0, 0.0, 0.0, 0.0)
