"""Tests for the closed-form outage probabilities and the access region.

Frozen reference values come from 40-digit arbitrary-precision evaluations
of the same expressions; the series oracle and plain bisection provide
independent routes at test time.
"""

import dataclasses
import math

import pytest

from oracles import bisect_root, erlang_cdf, series_reg_lower
from specshare.analysis import (
    AlphaStatus,
    Branch,
    analyze,
    critical_alpha,
    critical_omega2,
    direct_outage,
    primary_outage,
    prob_direct_half,
    prob_rp_exceeds,
    prob_st_decodes,
    prob_st_fails,
    rayleigh_oracle,
    secondary_outage,
)
from specshare.errors import DomainError
from specshare.model import SystemConfig, derive_thresholds, derive_topology


def make(config: SystemConfig):
    return config, derive_topology(config), derive_thresholds(config)


BASE = SystemConfig()   # 20/30 dB, unit rates, alpha 0.5, N=2, m=0.7, k=4, d2=0.8


def rel_close(a: float, b: float, tol: float) -> bool:
    denom = max(abs(a), abs(b))
    return a == b or abs(a - b) <= tol * denom


class TestProbRpExceeds:
    def test_saturates_at_alpha_hat(self):
        config, topo, th = make(dataclasses.replace(BASE, alpha=0.75))
        assert prob_rp_exceeds(config, topo, th) == 1.0
        config = dataclasses.replace(BASE, alpha=0.9)
        assert prob_rp_exceeds(config, topo, th) == 1.0

    def test_frozen_value_below(self):
        # alpha = 0.2: residual threshold 3 - 0.25 = 2.75, scaled 0.01925
        config, topo, th = make(dataclasses.replace(BASE, alpha=0.2))
        expected = 1.0 - 0.068750373152997616677
        assert prob_rp_exceeds(config, topo, th) == pytest.approx(expected, rel=1e-12)

    def test_matches_series_oracle(self):
        for alpha in (0.0, 0.3, 0.6, 0.74):
            config, topo, th = make(dataclasses.replace(BASE, alpha=alpha))
            residual = th.rho1 - alpha / (1.0 - alpha)
            x = config.m * residual / (topo.omega1 * config.pp_over_sigma2)
            expected = 1.0 - series_reg_lower(config.m, x)
            assert prob_rp_exceeds(config, topo, th) == pytest.approx(expected, rel=1e-11)

    def test_continuous_at_alpha_hat(self):
        config, topo, th = make(dataclasses.replace(BASE, alpha=0.75 - 1e-12))
        assert prob_rp_exceeds(config, topo, th) == pytest.approx(1.0, abs=1e-9)


class TestDecodeProbabilities:
    def test_frozen_value(self):
        config, topo, th = make(BASE)
        # N*m = 1.4, scaled threshold 2.1 / 244.140625
        assert prob_st_fails(config, topo, th) == pytest.approx(
            0.001028139786171886268, rel=1e-12
        )

    def test_complement_is_exact(self):
        for d2 in (0.3, 0.8, 1.5, 2.5):
            for n in (1, 2, 4):
                for m in (0.5, 0.7, 1.0, 2.0):
                    config, topo, th = make(
                        dataclasses.replace(BASE, d2=d2, n_antennas=n, m=m)
                    )
                    fails = prob_st_fails(config, topo, th)
                    decodes = prob_st_decodes(config, topo, th)
                    assert fails + decodes == 1.0

    def test_antennas_help(self):
        probs = []
        for n in (1, 2, 4, 8):
            config, topo, th = make(dataclasses.replace(BASE, n_antennas=n))
            probs.append(prob_st_fails(config, topo, th))
        assert all(b < a for a, b in zip(probs, probs[1:]))

    def test_close_placement_decodes(self):
        config, topo, th = make(dataclasses.replace(BASE, d2=1e-3))
        assert prob_st_decodes(config, topo, th) > 1.0 - 1e-12


class TestSingleLinkTails:
    def test_direct_half_frozen(self):
        config, topo, th = make(BASE)
        assert prob_direct_half(config, topo, th) == pytest.approx(
            1.0 - 0.073015569282808738119, rel=1e-12
        )

    def test_direct_outage_frozen(self):
        config, topo, th = make(BASE)
        assert direct_outage(config, topo, th) == pytest.approx(
            0.034035062045242960566, rel=1e-12
        )

    def test_exponential_forms_at_m_one(self):
        config, topo, th = make(dataclasses.replace(BASE, m=1.0))
        assert direct_outage(config, topo, th) == pytest.approx(
            -math.expm1(-0.01), rel=1e-13
        )
        assert prob_direct_half(config, topo, th) == pytest.approx(
            math.exp(-0.03), rel=1e-13
        )


class TestPrimaryOutage:
    def test_flat_at_or_above_alpha_hat(self):
        values = set()
        for alpha in (0.75, 0.8, 0.9, 0.99):
            config, topo, th = make(dataclasses.replace(BASE, alpha=alpha))
            values.add(primary_outage(config, topo, th))
        assert len(values) == 1

    def test_continuous_at_alpha_hat(self):
        config, topo, th = make(dataclasses.replace(BASE, alpha=0.75 - 1e-12))
        below = primary_outage(config, topo, th)
        config_at = dataclasses.replace(BASE, alpha=0.75)
        at = primary_outage(config_at, topo, th)
        assert abs(below - at) <= 1e-9

    def test_non_increasing_in_alpha(self):
        values = []
        for i in range(99):
            config, topo, th = make(dataclasses.replace(BASE, alpha=0.75 * i / 99))
            values.append(primary_outage(config, topo, th))
        assert all(b <= a for a, b in zip(values, values[1:]))

    def test_structure_at_saturation(self):
        # above alpha_hat only the no-decode branch contributes
        config, topo, th = make(dataclasses.replace(BASE, alpha=0.8))
        expected = prob_st_fails(config, topo, th) * (
            1.0 - prob_direct_half(config, topo, th)
        )
        assert primary_outage(config, topo, th) == pytest.approx(expected, rel=1e-12)

    def test_matches_decomposition_below(self):
        config, topo, th = make(dataclasses.replace(BASE, alpha=0.4))
        fails = prob_st_fails(config, topo, th)
        outage = (
            (1.0 - fails) * (1.0 - prob_rp_exceeds(config, topo, th))
            + fails * (1.0 - prob_direct_half(config, topo, th))
        )
        assert primary_outage(config, topo, th) == pytest.approx(outage, rel=1e-12)

    def test_better_station_placement_helps(self):
        values = []
        for d2 in (2.0, 1.5, 0.8, 0.4):
            config, topo, th = make(dataclasses.replace(BASE, d2=d2, alpha=0.8))
            values.append(primary_outage(config, topo, th))
        assert all(b <= a for a, b in zip(values, values[1:]))


class TestSecondaryOutage:
    def test_product_decomposition(self):
        config, topo, th = make(BASE)
        fails = prob_st_fails(config, topo, th)
        p5 = series_reg_lower(
            config.m, config.m * th.rho1 / (topo.omega5 * config.pp_over_sigma2)
        )
        residual_power = (1.0 - config.alpha) * config.ps_over_sigma2
        p4 = series_reg_lower(
            config.m, config.m * th.rho3 / (topo.omega4 * residual_power)
        )
        expected = 1.0 - (1.0 - fails) * (1.0 - p5) * (1.0 - p4)
        assert secondary_outage(config, topo, th) == pytest.approx(expected, rel=1e-11)

    def test_monotone_in_alpha(self):
        values = []
        for alpha in (0.0, 0.2, 0.5, 0.8, 0.95, 0.99):
            config, topo, th = make(dataclasses.replace(BASE, alpha=alpha))
            values.append(secondary_outage(config, topo, th))
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_tends_to_one_as_split_exhausts_power(self):
        config, topo, th = make(dataclasses.replace(BASE, alpha=1.0 - 1e-9))
        assert secondary_outage(config, topo, th) > 1.0 - 1e-6

    def test_high_secondary_snr_is_decode_limited(self):
        # with ps huge the residual-power link never fails
        config, topo, th = make(dataclasses.replace(BASE, ps_over_sigma2=1e18))
        fails = prob_st_fails(config, topo, th)
        p5 = series_reg_lower(
            config.m, config.m * th.rho1 / (topo.omega5 * config.pp_over_sigma2)
        )
        expected = 1.0 - (1.0 - fails) * (1.0 - p5)
        assert secondary_outage(config, topo, th) == pytest.approx(expected, rel=1e-9)


class TestAnalyze:
    def test_branch_labels(self):
        assert analyze(dataclasses.replace(BASE, alpha=0.4)).branch is Branch.BELOW_ALPHA_HAT
        assert (
            analyze(dataclasses.replace(BASE, alpha=0.75)).branch
            is Branch.AT_OR_ABOVE_ALPHA_HAT
        )

    def test_matches_components(self):
        config, topo, th = make(BASE)
        point = analyze(config)
        assert point.f_op == primary_outage(config, topo, th)
        assert point.f_os == secondary_outage(config, topo, th)
        assert point.p_d == direct_outage(config, topo, th)


class TestCriticalRegion:
    def test_boundary_against_bisection(self):
        # the reported omega2 boundary must solve
        # fails(omega2) * v = w, found independently by bisection
        for n in (2, 4):
            config, topo, th = make(dataclasses.replace(BASE, n_antennas=n))
            region = critical_omega2(config, topo, th)
            v = series_reg_lower(
                config.m, config.m * th.rho1 / (topo.omega1 * config.pp_over_sigma2)
            )
            w = series_reg_lower(
                config.m, config.m * th.rho2 / (topo.omega1 * config.pp_over_sigma2)
            )
            shape = n * config.m

            def gap(omega2):
                scaled = config.m * th.rho1 / (omega2 * config.pp_over_sigma2)
                return series_reg_lower(shape, scaled) * v - w

            # the lower bracket edge keeps the oracle series in its
            # well-conditioned range (scaled threshold ~ 10)
            root = bisect_root(gap, 0.002, 1.0)
            assert region.omega2_tilde == pytest.approx(root, rel=1e-9)
            assert region.d2_tilde == pytest.approx(
                root ** (-1.0 / config.k), rel=1e-9
            )

    def test_reference_distances(self):
        # four antennas reach 3.25 link distances, two reach 2.625
        config, topo, th = make(dataclasses.replace(BASE, n_antennas=4))
        assert critical_omega2(config, topo, th).d2_tilde == pytest.approx(3.25, abs=0.05)
        config, topo, th = make(dataclasses.replace(BASE, n_antennas=2))
        assert critical_omega2(config, topo, th).d2_tilde == pytest.approx(2.625, abs=0.05)

    def test_rayleigh_single_antenna_closed_form(self):
        # at m = 1, N = 1 everything collapses to exponentials
        config, topo, th = make(dataclasses.replace(BASE, m=1.0, n_antennas=1))
        region = critical_omega2(config, topo, th)
        pp = config.pp_over_sigma2
        ratio = math.expm1(-th.rho2 / pp) / math.expm1(-th.rho1 / pp)
        expected = -th.rho1 / (pp * math.log1p(-ratio))
        assert region.omega2_tilde == pytest.approx(expected, rel=1e-12)

    def test_independent_of_d2(self):
        a = critical_omega2(*make(dataclasses.replace(BASE, d2=0.8)))
        b = critical_omega2(*make(dataclasses.replace(BASE, d2=2.5)))
        assert a.omega2_tilde == b.omega2_tilde

    def test_alpha_side_left_empty(self):
        region = critical_omega2(*make(BASE))
        assert region.alpha_status is None
        assert region.alpha_tilde is None


class TestCriticalAlpha:
    def test_fixed_point(self):
        # at the reported split, sharing matches direct transmission
        for n in (2, 4):
            for d2 in (0.8, 1.5):
                config, topo, th = make(dataclasses.replace(BASE, n_antennas=n, d2=d2))
                region = critical_alpha(config, topo, th)
                assert region.alpha_status is AlphaStatus.REQUIRED
                assert 0.0 < region.alpha_tilde < th.alpha_hat
                at = dataclasses.replace(config, alpha=region.alpha_tilde)
                assert primary_outage(at, topo, th) == pytest.approx(
                    direct_outage(at, topo, th), abs=1e-9
                )

    def test_against_bisection_in_alpha(self):
        config, topo, th = make(BASE)
        region = critical_alpha(config, topo, th)
        target = direct_outage(config, topo, th)

        def gap(alpha):
            moved = dataclasses.replace(config, alpha=alpha)
            return primary_outage(moved, topo, th) - target

        root = bisect_root(gap, 0.0, th.alpha_hat)
        assert region.alpha_tilde == pytest.approx(root, abs=1e-6)

    def test_far_placement_is_infeasible(self):
        config, topo, th = make(dataclasses.replace(BASE, d2=5.0))
        region = critical_alpha(config, topo, th)
        assert region.alpha_status is AlphaStatus.INFEASIBLE
        assert region.alpha_tilde is None
        # the distance boundary is still reported
        assert region.d2_tilde > 0.0

    def test_includes_distance_boundary(self):
        config, topo, th = make(BASE)
        region = critical_alpha(config, topo, th)
        base = critical_omega2(config, topo, th)
        assert region.omega2_tilde == base.omega2_tilde
        assert 0.0 < region.phi < 1.0
        assert region.chi > 0.0

    def test_zero_split_branch(self):
        from specshare.analysis import _split_from_chi

        status, alpha = _split_from_chi(3.5, 3.0)
        assert status is AlphaStatus.NONE_NEEDED
        assert alpha == 0.0
        status, alpha = _split_from_chi(1.0, 3.0)
        assert status is AlphaStatus.REQUIRED
        assert alpha == pytest.approx(2.0 / 3.0, rel=1e-15)


class TestRayleighOracle:
    def test_rejects_other_fading(self):
        config, topo, th = make(BASE)
        with pytest.raises(DomainError):
            rayleigh_oracle(config, topo, th)

    def test_erlang_decode_form(self):
        config, topo, th = make(dataclasses.replace(BASE, m=1.0, n_antennas=3))
        point = rayleigh_oracle(config, topo, th)
        t = th.rho1 / (topo.omega2 * config.pp_over_sigma2)
        fails = erlang_cdf(3, t)
        v = -math.expm1(-th.rho1 / config.pp_over_sigma2)
        u = -math.expm1(-(th.rho1 - 1.0) / config.pp_over_sigma2)
        expected = (1.0 - fails) * u + fails * v
        assert point.f_op == pytest.approx(expected, rel=1e-12)

    def test_agreement_with_analysis(self):
        import random

        rng = random.Random(20260826)
        for _ in range(50):
            d2 = rng.uniform(0.3, 3.5)
            if abs(d2 - 1.0) < 1e-6:
                continue
            config = SystemConfig(
                pp_over_sigma2=10 ** rng.uniform(0.0, 3.0),
                ps_over_sigma2=10 ** rng.uniform(1.0, 4.0),
                r_pt=rng.uniform(0.25, 2.0),
                r_st=rng.uniform(0.25, 2.0),
                alpha=rng.uniform(0.0, 0.99),
                n_antennas=rng.randint(1, 6),
                m=1.0,
                k=rng.uniform(2.0, 5.0),
                d2=d2,
            )
            topo, th = derive_topology(config), derive_thresholds(config)
            a = analyze(config, topo, th)
            o = rayleigh_oracle(config, topo, th)
            assert rel_close(a.f_op, o.f_op, 1e-12)
            assert rel_close(a.f_os, o.f_os, 1e-12)
            assert rel_close(a.p_d, o.p_d, 1e-12)
            assert a.branch is o.branch
