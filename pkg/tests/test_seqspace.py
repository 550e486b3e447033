import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from grslab.batteries import grs_battery, sequence_test_set
from grslab.seqspace import (DIVERGENT, SUMMABLE, LatticeSeq, agreement_rate, identity_experiment,
                             load_seq_csv, save_seq_csv, tail_growth_probe, weighted_lp_norm)
from grslab.weightlab import FAIL, PASS, Weight

geo = LatticeSeq.from_function(lambda k: 2.0 ** -np.abs(k[..., 0]), 60)


def geometric_oracle(ratio, K):
    # 1 + 2 sum_{k=1}^K ratio^k
    return 1 + 2 * ratio * (1 - ratio ** K) / (1 - ratio)


class TestNorms:
    def test_delta(self):
        w = Weight.polynomial(3)
        assert weighted_lp_norm(LatticeSeq.delta(10), w, 1) == 1.0

    def test_geometric(self):
        assert weighted_lp_norm(geo, Weight.constant(), 1) == pytest.approx(3.0, abs=1e-12)

    def test_weighted_geometric(self):
        r = math.exp(0.5) / 2
        val = weighted_lp_norm(geo, Weight.subexp(0.5, 1), 1)
        assert val == pytest.approx(geometric_oracle(r, 60), rel=1e-12)
        series = 1 + 2 * r / (1 - r)
        assert 0 <= series - val <= 2 * r ** 61 / (1 - r)
        assert series == pytest.approx(10.387, abs=1e-3)

    def test_sup_norm(self):
        assert weighted_lp_norm(geo, Weight.polynomial(1), math.inf) == pytest.approx(1.0)

    def test_zero(self):
        assert weighted_lp_norm(LatticeSeq(1, 3, np.zeros(7)), Weight.constant(), 2) == 0.0

    @pytest.mark.parametrize("p", [0, -1])
    def test_bad_p(self, p):
        with pytest.raises(ValueError):
            weighted_lp_norm(geo, Weight.constant(), p)

    def test_shape_and_cap_checks(self):
        with pytest.raises(ValueError):
            LatticeSeq(1, 2, np.zeros(4))
        with pytest.raises(ValueError):
            LatticeSeq(2, 65, np.zeros((131, 131)))

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            weighted_lp_norm(geo, Weight.constant(2), 1)


finite_vals = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
p_vals = st.sampled_from([0.5, 1.0, 2.0, 3.0, math.inf])


@given(arrays(float, 21, elements=finite_vals))
def test_constant_weight_p2_is_euclidean(v):
    a = LatticeSeq(1, 10, v)
    assert weighted_lp_norm(a, Weight.constant(), 2) == pytest.approx(math.hypot(*v), rel=1e-12, abs=1e-300)


@given(arrays(float, 21, elements=finite_vals), st.floats(-50, 50), p_vals)
def test_homogeneity(v, lam, p):
    a = LatticeSeq(1, 10, v)
    w = Weight.subexp(0.3, 0.5)
    lhs = weighted_lp_norm(a.scaled(lam), w, p)
    assert lhs == pytest.approx(abs(lam) * weighted_lp_norm(a, w, p), rel=1e-12, abs=1e-300)


@given(arrays(float, 21, elements=finite_vals), st.floats(0, 3), st.floats(0, 2), p_vals)
def test_monotone_in_weight(v, r1, dr, p):
    a = LatticeSeq(1, 10, v)
    lo = weighted_lp_norm(a, Weight.polynomial(r1), p)
    hi = weighted_lp_norm(a, Weight.polynomial(r1 + dr), p)
    assert lo <= hi * (1 + 1e-12)


class TestTailProbe:
    def test_geometric_summable(self):
        assert tail_growth_probe(geo, Weight.constant(), 1) == SUMMABLE

    def test_geometric_against_exponential_diverges(self):
        assert tail_growth_probe(geo, Weight.subexp(1, 1), 1) == DIVERGENT

    def test_poly_decay_against_cubic_diverges(self):
        a = LatticeSeq.from_function(lambda k: (1 + np.abs(k[..., 0])) ** -2.0, 512)
        assert tail_growth_probe(a, Weight.polynomial(3), 1) == DIVERGENT

    def test_finite_support(self):
        assert tail_growth_probe(LatticeSeq.delta(64), Weight.subexp(2, 1), 1) == SUMMABLE

    def test_two_dimensional(self):
        a = LatticeSeq.from_function(lambda k: np.exp(-np.abs(k).sum(axis=-1)), 32, dim=2)
        assert tail_growth_probe(a, Weight.polynomial(2, 2), 1) == SUMMABLE
        assert tail_growth_probe(a, Weight.subexp(2, 1, 2), 1) == DIVERGENT


class TestIdentity:
    def test_rows(self):
        rows = {r["sequence_id"]: r for r in identity_experiment(sequence_test_set(), grs_battery())}
        assert (rows["exp_decay_2"]["verdict_left"], rows["exp_decay_2"]["verdict_right"]) == (PASS, PASS)
        assert (rows["poly_decay_2"]["verdict_left"], rows["poly_decay_2"]["verdict_right"]) == (FAIL, FAIL)
        assert (rows["delta0"]["verdict_left"], rows["delta0"]["verdict_right"]) == (PASS, PASS)
        assert agreement_rate(rows.values()) == 1.0

    def test_rejects_non_grs_battery(self):
        with pytest.raises(ValueError):
            identity_experiment([("d", LatticeSeq.delta(8))], [("exp", Weight.subexp(1, 1))])

    def test_agreement_rate_ignores_undecided(self):
        rows = [{"agree": True}, {"agree": None}, {"agree": False}]
        assert agreement_rate(rows) == 0.5
        assert math.isnan(agreement_rate([{"agree": None}]))


def test_csv_round_trip(tmp_path):
    a = LatticeSeq.from_function(lambda k: np.exp(-np.abs(k).sum(axis=-1)) * (1 + k[..., 0]), 4, dim=2)
    save_seq_csv(a, tmp_path / "a.csv")
    b = load_seq_csv(tmp_path / "a.csv")
    assert b.dim == 2 and b.K == 4
    np.testing.assert_array_equal(a.values, b.values)


def test_csv_incomplete_cube(tmp_path):
    (tmp_path / "bad.csv").write_text("k_1,value\n-1,1\n1,2\n")
    with pytest.raises(ValueError):
        load_seq_csv(tmp_path / "bad.csv")
