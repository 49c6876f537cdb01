"""Large-p leading coefficients, Binet identity, densities, central charges."""

import math
from fractions import Fraction as F

import pytest

from pspin.density import (
    DensityConfig,
    bernoulli_leading,
    binet_check,
    blackhole_density_compare,
    central_charge,
    central_charge_negative_branch,
    conjugation_identity,
    exp_kernel_integrand,
    large_p_check,
    log_sinh_partial_sum,
    log_sinh_series,
    rho_density,
    rho_matrix,
    rho_matrix_fd,
    sinh_log_derivative_identity,
    zeta_identity_exact,
)
from pspin.exact import DomainError, RatP
from pspin.onepoint import one_point_series

P = RatP.var()
C = RatP.const


class TestBernoulliLeading:
    def test_values(self):
        assert bernoulli_leading(1) == F(1, 24)
        assert bernoulli_leading(2) == F(1, 2880)   # (1/30)/(24*4)
        assert bernoulli_leading(3) == F(1, 181440)  # (1/42)/(720*6)

    def test_zeta_identity_symbolic(self):
        for g in (1, 2, 3, 4):
            assert zeta_identity_exact(g)


class TestLargeP:
    def test_one_point_families(self):
        for term in one_point_series(4):
            rep = large_p_check(term.coefficient, term.genus)
            assert rep.matches, term.genus

    def test_two_point_g2_families(self):
        f = (P - C(1)) * (P - C(3)) * (C(2) * P + C(1)) / (P.scale(5760))
        assert large_p_check(f, 2).matches
        g = (P - C(1)) * (P - C(2)) * (P + C(2)) / (P.scale(2880))
        assert large_p_check(g, 2).matches

    def test_subleading_family_negligible(self):
        f = (C(2) * P**3 + C(13) * P**2 - C(158) * P + C(215)) / ((P**2).scale(5760))
        rep = large_p_check(f, 2)
        assert not rep.matches and rep.negligible and rep.degree == 1


class TestLogSinh:
    def test_first_coefficient(self):
        assert log_sinh_series(1)[0] == F(1, 24)

    def test_alternating_magnitudes(self):
        from pspin.numbers import bernoulli_abs

        cs = log_sinh_series(8)
        for n, c in enumerate(cs, 1):
            assert abs(c) == bernoulli_abs(n) / (math.factorial(2 * n) * 2 * n)
            assert (c > 0) == (n % 2 == 1)

    def test_partial_sum_matches_function(self):
        target = math.log(math.sinh(0.25) / 0.25)
        assert abs(log_sinh_partial_sum(0.5, 8) - target) < 1e-10

    def test_zero_limit(self):
        assert log_sinh_partial_sum(0.0, 5) == 0.0


class TestBinet:
    @pytest.mark.parametrize("z", [0.5, 1.0, 2.0, 5.5, 10.0])
    def test_identity(self, z):
        lhs, rhs, diff = binet_check(z)
        assert diff < 1e-8

    def test_known_values(self):
        lhs, _, _ = binet_check(2.0)
        assert abs(lhs - (1 - 0.5772156649015329)) < 1e-10
        lhs1, _, _ = binet_check(1.0)
        assert abs(lhs1 - (-0.5772156649015329)) < 1e-10

    def test_large_z_integral_vanishes(self):
        # lhs - (log z - 1/(2z)) -> 0 as z grows
        z = 500.0
        lhs, _, _ = binet_check(z)
        assert abs(lhs - (math.log(z) - 1 / (2 * z))) < 1e-3

    def test_integrand_series_switch(self):
        # the series branch agrees with the direct expression where both work
        for s in (5e-4, 1.5e-3, 1e-2):
            series = s / 12.0 - s**3 / 720.0 + s**5 / 30240.0
            direct = 0.5 - 1.0 / s + 1.0 / math.expm1(s)
            assert abs(series - direct) < 1e-12
            assert abs(exp_kernel_integrand(s) - direct) < 1e-12

    def test_bridge_identity(self):
        for s in (0.3, 0.7, 1.5, 4.0):
            _, _, diff = sinh_log_derivative_identity(s)
            assert diff < 1e-12


class TestRho:
    def test_two_paths_agree(self):
        for e in (1.0, 5.0, 10.0, 25.0, 50.0):
            assert abs(rho_matrix(e) - rho_matrix_fd(e)) < 1e-7

    def test_log_asymptote(self):
        # rho(E) - log E stays bounded as E grows
        vals = [rho_matrix(10.0**k) - math.log(10.0**k) for k in (1, 2, 3)]
        assert all(abs(v) < 2.0 for v in vals)
        assert abs(vals[2] - vals[1]) < abs(vals[1] - vals[0])

    def test_pole_at_zero(self):
        with pytest.raises(DomainError):
            rho_matrix(0.0)
        with pytest.raises(DomainError):
            DensityConfig((0.0, 1.0))

    def test_grid_evaluation(self):
        cfg = DensityConfig.linspace(5, 10, 6)
        rows = rho_density(cfg)
        assert len(rows) == 6
        assert rows[0][0] == 5.0


class TestBlackholeComparison:
    def test_affine_fit_quality(self):
        cfg = DensityConfig.linspace(5, 50, 100)
        rep = blackhole_density_compare(cfg)
        assert rep.max_residual < 1e-3
        # the conjugation sign and offset come out as -pi/2 each
        assert abs(rep.alpha + math.pi / 2) < 1e-9
        assert abs(rep.beta + math.pi / 2) < 1e-9
        # keeping the dropped pole term is a visible (reported) deviation
        assert rep.max_residual_full > 1e-2

    def test_conjugation_identity(self):
        for e in (5.0, 12.5, 40.0):
            assert conjugation_identity(e) < 1e-10


class TestCentralCharge:
    def test_blackhole_point(self):
        assert central_charge_negative_branch(F(9, 4)) == 26

    def test_compact_branch(self):
        assert central_charge(1) == 0  # p=3 has level k = p-2 = 1
        assert central_charge(10**9) == 2 - F(6, 10**9 + 2)

    def test_poles(self):
        with pytest.raises(DomainError):
            central_charge(-2)
        with pytest.raises(DomainError):
            central_charge_negative_branch(2)
