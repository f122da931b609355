"""Permutation calibration: joint exceedance control and plumbing."""

import numpy as np
import pytest

from cherrypick import (IndexSet, InputError, make_hypotheses, run_closure,
                        simes_curve, t_alpha)
from cherrypick.localtests import SimesFamilyTest
from cherrypick.permutation import (PermutationPValues, calibrate_critvals,
                                    hypotheses_from_perms, joint_exceedance,
                                    parse_name_list)


def uniform_perms(seed, b, n):
    return PermutationPValues(np.random.default_rng(seed).random((b, n)))


class TestCalibration:
    def test_uniform_matrix_respects_alpha(self):
        perms = uniform_perms(1, 100, 20)
        family = calibrate_critvals(perms, 0.05)
        assert family.variant == "constant"
        assert family.level_monotone and family.diagonal_monotone
        assert joint_exceedance(perms, family) <= 0.05

    def test_calibration_matches_linear_scan_oracle(self):
        perms = uniform_perms(2, 80, 10)
        alpha = 0.2
        family = calibrate_critvals(perms, alpha)
        order_stats = np.sort(perms.matrix, axis=1)
        sorted_cols = np.sort(order_stats, axis=0)

        def exceedance_at(thr):
            return float(np.any(order_stats <= thr, axis=1).mean())

        best = np.clip(np.nextafter(sorted_cols[0], -np.inf), 0.0, 1.0)
        for j in range(1, perms.rows + 1):  # exhaustive oracle scan
            if exceedance_at(sorted_cols[j - 1]) <= alpha:
                best = sorted_cols[j - 1]
        assert np.allclose(np.asarray(family.constants), best)
        assert exceedance_at(np.asarray(family.constants)) <= alpha

    def test_single_hypothesis_marginal_quantile(self):
        perms = uniform_perms(3, 200, 1)
        alpha = 0.05
        family = calibrate_critvals(perms, alpha)
        col = np.sort(perms.matrix[:, 0])
        # the joint event degenerates to the marginal one: k_1 is the largest
        # empirical quantile with at most an alpha fraction of rows below it
        j = int(np.floor(alpha * perms.rows))
        assert family.constants[0] == pytest.approx(col[j - 1])

    def test_zero_row_still_calibrates(self):
        rng = np.random.default_rng(4)
        m = rng.random((60, 8))
        m[7] = 0.0  # a pathological all-zero row among the nulls
        perms = PermutationPValues(m)
        family = calibrate_critvals(perms, 0.1)
        assert joint_exceedance(perms, family) <= 0.1

    def test_thresholds_nondecreasing(self):
        family = calibrate_critvals(uniform_perms(5, 150, 12), 0.05)
        ks = list(family.constants)
        assert ks == sorted(ks)

    def test_too_few_rows_for_alpha(self):
        full = uniform_perms(6, 40, 4)
        with pytest.raises(InputError):
            PermutationPValues(full.matrix[:10])  # below the row floor
        with pytest.raises(InputError):
            calibrate_critvals(uniform_perms(7, 30, 4), 0.01)  # B*alpha < 1

    def test_wide_problem_falls_back_below_minima(self):
        # joint event over many columns: even the column minima are hit too
        # often, so thresholds drop below them and exceedance becomes zero
        perms = uniform_perms(12, 100, 20)
        family = calibrate_critvals(perms, 0.05)
        assert joint_exceedance(perms, family) == 0.0
        mins = np.sort(np.sort(perms.matrix, axis=1), axis=0)[0]
        assert np.all(np.asarray(family.constants) < mins)

    def test_degenerate_identical_rows(self):
        m = np.tile(np.linspace(0.1, 0.9, 5), (40, 1))
        with pytest.raises(InputError):
            calibrate_critvals(PermutationPValues(m), 0.05)

    def test_entry_validation(self):
        with pytest.raises(InputError):
            PermutationPValues(np.full((30, 3), 1.5))
        with pytest.raises(InputError):
            PermutationPValues(np.zeros(30))


class TestCurveConsistency:
    def test_calibrated_family_curve_matches_closure(self):
        # threshold-set confidence bands from the constant family shortcut
        # coincide with full closed testing over the same local test
        rng = np.random.default_rng(8)
        n, b, alpha = 8, 60, 0.2
        perms = PermutationPValues(rng.random((b, n)))
        family = calibrate_critvals(perms, alpha)
        pv = np.clip(np.where(rng.random(n) < 0.5,
                              rng.beta(0.2, 1.0, n), rng.random(n)), 1e-9, 1)
        hyps = make_hypotheses([f"H{i}" for i in range(n)], pvalues=pv)
        test = SimesFamilyTest(family)
        result = run_closure(hyps, test, alpha)
        curve = simes_curve(hyps, family, alpha)
        order = hyps.p_order()
        for r, f_short in curve.points:
            R = IndexSet.from_indices(order[:r], n)
            assert f_short == r - t_alpha(result, R)


class TestPlumbing:
    def test_csv_round_trip(self):
        text = "0.5,0.25\n0.75,1.0\n" * 10
        perms = PermutationPValues.from_csv(text)
        assert perms.rows == 20 and perms.n == 2
        assert perms.observed()[1] == 0.25

    def test_csv_ragged(self):
        with pytest.raises(Exception):
            PermutationPValues.from_csv("0.5,0.2\n0.1\n" * 10)

    def test_hypotheses_from_observed_row(self):
        perms = uniform_perms(9, 30, 3)
        hyps = hypotheses_from_perms(perms, ["a", "b", "c"])
        assert hyps.pvalues == tuple(perms.observed())
        with pytest.raises(InputError):
            hypotheses_from_perms(perms, ["a", "b"])

    def test_name_list(self):
        assert parse_name_list("a\nb\n\nc\n") == ["a", "b", "c"]
