import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relfuzz.failure import StateModeRates
from relfuzz.fuzzy import TFN, alpha_cut, crisp
from relfuzz.mission import MissionProfile, MissionState
from relfuzz.redundancy import (RedundancyConfig, equivalent_rate_parallel, equivalent_rate_standby,
                                mode_totals, normalize_method, normalize_variant)

from conftest import tfns

PUB_L2 = TFN(1.0335, 1.8564, 3.2574)
SWEEP = np.linspace(0.0, 1.0, 100)


def par(h, f, pc, variant="consistent", method="alpha-cut"):
    return equivalent_rate_parallel(crisp(h), crisp(f), crisp(pc), variant, method).b


class TestParallel:
    def test_full_coverage_equal_rates(self):
        assert par(1.0, 1.0, 1.0) == 2.0 / 3.0

    @pytest.mark.parametrize("lam", [0.1, 1.0, 7.5])
    def test_no_coverage(self, lam):
        assert par(lam, lam, 0.0) == 2.0 * lam

    def test_as_printed(self):
        assert par(1.0, 1.0, 1.0, "as-printed") == pytest.approx(2.0 / 3.0, rel=1e-15)
        # the variants part ways once the faulty-path rate moves off 1
        assert par(1.0, 2.0, 1.0, "as-printed") != pytest.approx(par(1.0, 2.0, 1.0))

    def test_consistent_closed_forms(self):
        h, f = 0.7, 1.9
        assert par(h, f, 1.0) == pytest.approx(2 * h * f / (f + 2 * h), rel=1e-15)
        assert par(h, f, 0.0) == pytest.approx(2 * h, rel=1e-15)

    def test_vertex_matches_alpha_cut_for_crisp(self):
        for variant in ("consistent", "as-printed"):
            assert par(0.7, 1.9, 0.6, variant, "vertex") == pytest.approx(par(0.7, 1.9, 0.6, variant), rel=1e-12)

    def test_unit_kept(self):
        out = equivalent_rate_parallel(TFN(1, 2, 3, "1/yr"), TFN(2, 3, 4, "1/yr"), crisp(0.9))
        assert out.unit == "1/yr"

    def test_nonpositive_rate(self):
        with pytest.raises(ZeroDivisionError):
            equivalent_rate_parallel(TFN(0, 1, 2), TFN(1, 2, 3), crisp(1.0))


class TestStandby:
    def test_examples(self):
        assert equivalent_rate_standby(crisp(1.0), crisp(1.0)).b == 0.5
        assert equivalent_rate_standby(crisp(1.0), crisp(0.0)).b == 1.0

    def test_vertex_rule_bracketed(self):
        f, pc = TFN(2, 3, 4), TFN(0.8, 0.9, 1.0)
        v = equivalent_rate_standby(f, pc, "vertex")
        assert v.as_tuple() == pytest.approx((1.0, 3 / 1.9, 4 / 1.8), abs=1e-12)
        assert v.as_tuple() == pytest.approx((1.0, 1.5789, 2.2222), abs=1e-4)
        ac = equivalent_rate_standby(f, pc, "alpha-cut")
        # interval oracle: each alpha box maps onto [lo_f / (1 + hi_pc), hi_f / (1 + lo_pc)]
        for alpha in np.linspace(0, 1, 11):
            cf, cp = alpha_cut(f, alpha), alpha_cut(pc, alpha)
            assert cf.lo / (1 + cp.hi) >= ac.a - 1e-12
            assert cf.hi / (1 + cp.lo) <= ac.c + 1e-12
        assert ac.a <= v.a and v.b == pytest.approx(ac.b) and v.c <= ac.c


class TestModeTotals:
    def _records(self, n, h, f):
        return [StateModeRates(i, k, h, f, 25.0, 25.0) for i in range(n) for k in (1, 2)]

    def test_single_state(self):
        profile = MissionProfile((MissionState(25, 500, 1.0),))
        cfg = RedundancyConfig("parallel", crisp(0.9))
        h, f = TFN(0.5, 1.0, 1.5), TFN(1.0, 2.0, 3.0)
        tot = mode_totals(profile, self._records(1, h, f), cfg)
        direct = equivalent_rate_parallel(h, f, crisp(0.9))
        assert tot.lambda_mode2 == direct and tot.lambda_mode1 == direct

    def test_identical_states(self):
        profile = MissionProfile(tuple(MissionState(20 + i, 500, 0.25) for i in range(4)))
        cfg = RedundancyConfig("standby", TFN(0.8, 0.9, 1.0))
        f = TFN(2, 3, 4)
        tot = mode_totals(profile, self._records(4, f, f), cfg)
        direct = equivalent_rate_standby(f, cfg.coverage)
        assert tot.lambda_mode2.as_tuple() == pytest.approx(direct.as_tuple(), rel=1e-15)

    def test_reproduces_published_total(self):
        # standby at zero coverage passes the faulty-path rate through unchanged
        profile = MissionProfile((MissionState(25, 500, 1.0),))
        cfg = RedundancyConfig("standby", crisp(0.0))
        tot = mode_totals(profile, self._records(1, PUB_L2, PUB_L2), cfg)
        assert tot.lambda_mode2.as_tuple() == pytest.approx(PUB_L2.as_tuple(), abs=1e-12)

    def test_missing_and_duplicate_records(self):
        profile = MissionProfile((MissionState(25, 500, 0.5), MissionState(30, 500, 0.5)))
        cfg = RedundancyConfig("standby", crisp(0.5))
        recs = self._records(2, crisp(1.0), crisp(1.0))
        with pytest.raises(ValueError, match="missing"):
            mode_totals(profile, recs[:-1], cfg)
        with pytest.raises(ValueError, match="duplicate"):
            mode_totals(profile, recs + recs[:1], cfg)


class TestConfig:
    def test_normalizers(self):
        assert normalize_variant("AS_PRINTED") == "as-printed"
        assert normalize_method("alpha") == "alpha-cut"
        with pytest.raises(ValueError):
            normalize_variant("hybrid")

    def test_coverage_bounds(self):
        with pytest.raises(ValueError):
            RedundancyConfig("parallel", TFN(0.5, 1.0, 1.2))


class TestProperties:
    @given(st.floats(0.01, 10), st.floats(0.01, 10), st.sampled_from(["consistent", "as-printed"]))
    def test_parallel_decreasing_in_coverage(self, h, f, variant):
        vals = [par(h, f, pc, variant) for pc in SWEEP]
        assert all(x >= y for x, y in zip(vals, vals[1:]))

    @given(st.floats(0.01, 10))
    def test_standby_decreasing_in_coverage(self, f):
        vals = [equivalent_rate_standby(crisp(f), crisp(pc)).b for pc in SWEEP]
        assert all(x >= y for x, y in zip(vals, vals[1:]))

    @given(st.floats(0.01, 10), st.floats(0, 1))
    def test_standby_range(self, f, pc):
        v = equivalent_rate_standby(crisp(f), crisp(pc)).b
        assert f / 2 - 1e-12 <= v <= f + 1e-12

    @given(tfns(0.01, 10), tfns(0.01, 10), tfns(0, 1), st.sampled_from(["consistent", "as-printed"]),
           st.sampled_from(["alpha-cut", "vertex"]))
    @settings(max_examples=80)
    def test_outputs_valid(self, h, f, pc, variant, method):
        for out in (equivalent_rate_parallel(h, f, pc, variant, method), equivalent_rate_standby(f, pc, method)):
            assert 0 < out.a <= out.b <= out.c
