import numpy as np
import pytest

from psg import (
    ClassicPolicy,
    ConstantPolicy,
    FamilyPolicy,
    InvalidParameterError,
    NesterovPolicy,
    ZeroSubgradientError,
    classic_step,
    constant_step,
    family_step,
    family_update_G,
    nesterov_step,
)
from psg.averaging import weight


class TestConstantStep:
    def test_values(self):
        assert constant_step(1, 1, 1) == 1.0
        assert constant_step(2, 4, 4) == 0.25
        assert constant_step(50, 10, 100) == 0.5

    @pytest.mark.parametrize("args", [(0, 1, 1), (1, -1, 1), (1, 1, 0)])
    def test_rejects_nonpositive(self, args):
        with pytest.raises(InvalidParameterError):
            constant_step(*args)


class TestClassicStep:
    def test_values(self):
        assert classic_step(1, 1, 1) == 1.0
        assert classic_step(1, 1, 4) == 0.5
        assert classic_step(3, 2, 9) == 0.5

    def test_strictly_decreasing(self):
        etas = [classic_step(2.0, 3.0, s) for s in range(1, 200)]
        assert all(a > b for a, b in zip(etas, etas[1:]))

    def test_rejects_nonpositive(self):
        with pytest.raises(InvalidParameterError):
            classic_step(1, 0, 1)


class TestNesterovStep:
    def test_values(self):
        assert nesterov_step(1, 1.0, 1) == 1.0
        assert nesterov_step(1, 2.0, 4) == 0.25
        assert nesterov_step(50, 5.0, 25) == 2.0

    def test_zero_subgradient_is_an_error(self):
        with pytest.raises(ZeroSubgradientError):
            nesterov_step(1, 0.0, 3)


class TestFamilyUpdateG:
    def test_first_call_from_sentinel(self):
        assert family_update_G(None, 3.0, 1, a=1.0) == 3.0

    def test_a_one_is_running_norm_max(self):
        assert family_update_G(2.0, 3.0, 5, a=1.0) == 3.0
        assert family_update_G(3.0, 1.0, 6, a=1.0) == 3.0

    def test_a_zero_scales_by_sqrt_s(self):
        # 1 * 9^0.5 = 3 beats the held 2
        assert family_update_G(2.0, 1.0, 9, a=0.0) == 3.0

    def test_rejects_bad_a(self):
        for a in (-0.1, 1.1):
            with pytest.raises(InvalidParameterError):
                family_update_G(None, 1.0, 1, a=a)

    def test_zero_norm_keeps_state(self):
        assert family_update_G(2.0, 0.0, 7, a=0.5) == 2.0


class TestFamilyStep:
    def test_values(self):
        assert family_step(1, 1.0, 1, a=0.5) == 1.0
        assert family_step(1, 2.0, 4, a=1.0) == 0.25
        assert family_step(1, 2.0, 4, a=0.0) == 0.5

    def test_zero_G_is_an_error(self):
        with pytest.raises(ZeroSubgradientError):
            family_step(1, 0.0, 1, a=1.0)

    def test_rejects_bad_a(self):
        with pytest.raises(InvalidParameterError):
            family_step(1, 1.0, 1, a=2.0)


def iterate_G(g_norms, a):
    state = None
    out = []
    for s, g in enumerate(g_norms, start=1):
        state = family_update_G(state, g, s, a)
        out.append(state)
    return np.array(out)


@pytest.mark.parametrize("a", [0.0, 0.3, 0.5, 1.0])
def test_recursion_matches_closed_form(a, rng):
    # closed form: G_s = max over j <= s of ||g_j|| * j^((1-a)/2)
    for _ in range(50):
        length = int(rng.integers(1, 300))
        g_norms = rng.uniform(0, 10, size=length)
        recursive = iterate_G(g_norms, a)
        idx = np.arange(1, length + 1, dtype=float)
        closed = np.maximum.accumulate(g_norms * idx ** (0.5 * (1 - a)))
        np.testing.assert_allclose(recursive, closed, rtol=1e-12, atol=0)


def test_family_reduces_to_classic_when_norms_constant():
    # ||g_s|| = L and a = 1 make G_s = L, so the two step rules coincide
    # bit for bit.
    L = 1.0
    state = None
    for s in range(1, 1001):
        state = family_update_G(state, L, s, a=1.0)
        assert family_step(1.0, state, s, a=1.0) == classic_step(1.0, L, s)


@pytest.mark.parametrize("a", [0.0, 0.5, 1.0])
@pytest.mark.parametrize("k", [-1.0, -0.5, 0.0, 1.0, 2.0])
def test_weight_step_ratio_nondecreasing(a, k, rng):
    for _ in range(20):
        g_norms = rng.uniform(0.01, 10, size=400)
        state = None
        ratios = []
        for s, g in enumerate(g_norms, start=1):
            state = family_update_G(state, g, s, a)
            eta = family_step(1.0, state, s, a)
            assert eta > 0
            ratios.append(weight(k, s, eta) / eta)
        ratios = np.array(ratios)
        assert np.all(ratios[1:] >= ratios[:-1] * (1 - 1e-9) - 1e-12)


class TestPolicies:
    def test_constant_policy_is_constant(self):
        policy = ConstantPolicy(R=2.0, L=4.0, horizon_t=4)
        assert policy.step_size(1, 7.0) == 0.25
        assert policy.step_size(3, 0.1) == 0.25
        assert policy.label == "constant"

    def test_classic_policy(self):
        policy = ClassicPolicy(R=1.0, L=1.0)
        assert policy.step_size(4, 99.0) == 0.5
        assert policy.G is None

    def test_nesterov_policy(self):
        policy = NesterovPolicy(R=50.0)
        assert policy.step_size(25, 5.0) == 2.0

    def test_family_policy_tracks_and_resets_state(self):
        policy = FamilyPolicy(R=1.0, a=1.0)
        assert policy.G is None
        policy.step_size(1, 2.0)
        assert policy.G == 2.0
        policy.step_size(2, 1.0)
        assert policy.G == 2.0
        policy.reset()
        assert policy.G is None
        assert policy.label == "family_a1"

    def test_family_rejects_bad_a(self):
        with pytest.raises(InvalidParameterError):
            FamilyPolicy(R=1.0, a=1.5)

    def test_policies_reject_bad_R(self):
        for ctor in (lambda: ClassicPolicy(R=0.0, L=1.0),
                     lambda: NesterovPolicy(R=-1.0),
                     lambda: FamilyPolicy(R=0.0),
                     lambda: ConstantPolicy(R=1.0, L=1.0, horizon_t=0)):
            with pytest.raises(InvalidParameterError):
                ctor()
