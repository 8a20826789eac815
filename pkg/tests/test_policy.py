import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special
from scipy.optimize import brentq

from cbmsim.degradation import SystemState
from cbmsim.errors import ConfigError
from cbmsim.inventory import InventoryState, Order, SpareRequirements
from cbmsim.policy import (
    ActionKind,
    classify_action,
    expected_preventive_requirement,
    rul_delay,
    schedule_next_inspection,
)

from conftest import make_degradation, make_policy


def oracle_delay(gap, v, beta, Q):
    """Independent inversion: scipy incomplete gamma plus brentq."""
    target = 1.0 - Q
    f = lambda dt: special.gammainc(v * beta * dt, beta * gap) - target
    return brentq(f, 1e-12, 1e6, xtol=1e-12)


class TestPolicyParams:
    @pytest.mark.parametrize("kw", [
        dict(M=0.0), dict(K=-1), dict(T_reorder=0.0), dict(S=0),
        dict(Q=0.0), dict(Q=1.0), dict(A_star=1.5),
    ])
    def test_invalid_rejected(self, kw):
        with pytest.raises(ConfigError):
            make_policy(**kw)


class TestClassifyAction:
    def test_at_failure_threshold(self):
        assert classify_action(30.0, 0, make_policy(), 30.0) is ActionKind.CORRECTIVE

    def test_at_preventive_threshold_below_k(self):
        assert classify_action(20.0, 0, make_policy(K=3), 30.0) is ActionKind.IMPERFECT

    def test_at_preventive_threshold_k_reached(self):
        assert classify_action(20.0, 3, make_policy(K=3), 30.0) is ActionKind.PERFECT

    def test_below_threshold(self):
        assert classify_action(5.0, 0, make_policy(), 30.0) is ActionKind.NO_ACTION

    def test_k_zero_always_perfect(self):
        assert classify_action(20.0, 0, make_policy(K=0), 30.0) is ActionKind.PERFECT

    @given(x=st.floats(0.0, 40.0), k=st.integers(0, 10))
    @settings(max_examples=300, deadline=None)
    def test_total_function(self, x, k):
        kind = classify_action(x, k, make_policy(), 30.0)
        assert kind in ActionKind


class TestRulDelay:
    def test_tiny_q_floors_at_grid_step(self):
        params = make_degradation()
        dt = rul_delay(0.0, params.nu0, 1e-12, params.L, params)
        assert dt == params.path_step

    def test_matches_independent_oracle(self):
        params = make_degradation(alpha0=1.0, beta=1.0, L=1.0, path_step=1e-4)
        # v*beta = 1, beta = 1, gap = 1; frozen from brentq over scipy gammainc
        dt = rul_delay(0.0, 1.0, 0.5, 1.0, params)
        assert dt == pytest.approx(1.3142500103454375, abs=1e-6)
        dt2 = rul_delay(0.0, 1.0, 0.2, 1.0, params)
        assert dt2 == pytest.approx(0.606700558077133, abs=1e-6)
        assert dt2 < dt

    def test_random_configurations_against_oracle(self):
        params_rng = np.random.default_rng(123)
        for _ in range(30):
            beta = params_rng.uniform(0.5, 5.0)
            L = params_rng.uniform(5.0, 40.0)
            x = params_rng.uniform(0.0, 0.8) * L
            v = params_rng.uniform(0.2, 3.0)
            Q = params_rng.uniform(0.02, 0.6)
            params = make_degradation(alpha0=v * beta, beta=beta, L=L, path_step=1e-5 * L / v)
            dt = rul_delay(x, v, Q, L, params)
            assert dt == pytest.approx(oracle_delay(L - x, v, beta, Q), rel=1e-4)

    @given(
        q1=st.floats(0.02, 0.9), q2=st.floats(0.02, 0.9),
        x1=st.floats(0.0, 25.0), x2=st.floats(0.0, 25.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_monotone_in_q_and_gap(self, q1, q2, x1, x2):
        params = make_degradation(path_step=1e-4)
        q_lo, q_hi = sorted((q1, q2))
        dt_lo = rul_delay(10.0, 1.0, q_lo, params.L, params)
        dt_hi = rul_delay(10.0, 1.0, q_hi, params.L, params)
        assert dt_lo <= dt_hi + 1e-6
        x_lo, x_hi = sorted((x1, x2))
        d_big_gap = rul_delay(x_lo, 1.0, 0.3, params.L, params)
        d_small_gap = rul_delay(x_hi, 1.0, 0.3, params.L, params)
        assert d_small_gap <= d_big_gap + 1e-6

    def test_x_at_threshold_rejected(self):
        params = make_degradation()
        with pytest.raises(ValueError):
            rul_delay(params.L, 1.0, 0.1, params.L, params)


class TestExpectedRequirement:
    def test_imperfect_expected(self):
        req = SpareRequirements(ipms_prob=0.5)
        assert expected_preventive_requirement(0, make_policy(K=3), req) == 1

    def test_imperfect_never_consumes(self):
        req = SpareRequirements(ipms_prob=0.0)
        assert expected_preventive_requirement(0, make_policy(K=3), req) == 0

    def test_perfect_expected(self):
        req = SpareRequirements(pms=2)
        assert expected_preventive_requirement(3, make_policy(K=3), req) == 2


class TestScheduleNextInspection:
    def setup_method(self):
        self.params = make_degradation()
        self.policy = make_policy()
        self.req = SpareRequirements()
        self.state = SystemState(x=10.0, v=1.0, k=0, t=100.0)

    def candidate(self):
        return self.state.t + rul_delay(self.state.x, self.state.v, self.policy.Q,
                                        self.params.L, self.params)

    def test_spares_on_hand_no_deferral(self):
        inv = InventoryState(on_hand=2)
        t_next, shortfall = schedule_next_inspection(self.state, inv, self.policy,
                                                     self.params, self.req)
        assert t_next == pytest.approx(self.candidate())
        assert not shortfall

    def test_deferred_to_late_delivery(self):
        t_cand = self.candidate()
        late = Order(quantity=1, placed_at=100.0, delivery_at=t_cand + 5.0, supplier_id="local_1")
        inv = InventoryState(on_hand=0, pipeline=[late])
        t_next, shortfall = schedule_next_inspection(self.state, inv, self.policy,
                                                     self.params, self.req)
        assert t_next == late.delivery_at
        assert not shortfall

    def test_early_delivery_keeps_candidate(self):
        early = Order(quantity=1, placed_at=100.0, delivery_at=101.0, supplier_id="local_1")
        inv = InventoryState(on_hand=0, pipeline=[early])
        t_next, shortfall = schedule_next_inspection(self.state, inv, self.policy,
                                                     self.params, self.req)
        assert t_next == pytest.approx(self.candidate())
        assert not shortfall

    def test_shortfall_flagged_when_uncoverable(self):
        inv = InventoryState(on_hand=0)
        t_next, shortfall = schedule_next_inspection(self.state, inv, self.policy,
                                                     self.params, self.req)
        assert t_next == pytest.approx(self.candidate())
        assert shortfall
