import math

import numpy as np
import pytest

from qtransfer import compare, entpur, qubitpur
from qtransfer.compare import AmbiguousCrossingError, CrossingResult


class TestEffectiveFidelity:
    def test_even_supplies_drop_one_pair(self):
        for lam0 in (0.6, 0.8):
            assert compare.effective_entpur_fidelity(2, lam0) == pytest.approx(
                (1 + 2 * lam0) / 3, abs=1e-14)
            assert compare.effective_entpur_fidelity(10, lam0) == pytest.approx(
                entpur.expected_fidelity_dp(9, lam0).expected_fidelity, abs=1e-15)

    def test_odd_supplies_pass_through(self):
        assert compare.effective_entpur_fidelity(9, 0.8) == pytest.approx(
            entpur.expected_fidelity_dp(9, 0.8).expected_fidelity, abs=1e-15)


class TestSweep:
    def test_row_count_and_ordering(self):
        grid = [0.4, 0.3, 0.6]
        rows = compare.sweep({"qubit_pur", "estimation", "ent_pur"}, [3, 1], grid)
        assert len(rows) == 3 * 2 * 3
        keys = [(r.method, r.n, r.lambda0) for r in rows]
        assert keys == sorted(keys)

    def test_order_is_input_order_independent(self):
        a = compare.sweep(["ent_pur", "qubit_pur"], [5, 3], [0.5, 0.7])
        b = compare.sweep(["qubit_pur", "ent_pur"], [3, 5], [0.7, 0.5])
        assert a == b

    def test_estimation_rows_are_constant(self):
        rows = compare.sweep(["estimation"], [9], list(np.linspace(0.3, 0.9, 10)))
        for row in rows:
            assert row.fidelity == 10 / 11

    def test_small_supply_identity_rows(self):
        rows = compare.sweep(["qubit_pur"], [2], [0.3, 0.5, 0.8])
        for row in rows:
            assert row.fidelity == pytest.approx((1 + 2 * row.lambda0) / 3, abs=1e-12)

    def test_purification_dominance_at_n9(self):
        grid = list(np.linspace(0.26, 0.99, 50))
        by_method = {m: compare.sweep([m], [9], grid) for m in ("ent_pur", "qubit_pur")}
        for ent_row, qubit_row in zip(by_method["ent_pur"], by_method["qubit_pur"]):
            assert qubit_row.fidelity >= ent_row.fidelity - 1e-12

    def test_collective_purification_dominates_for_odd_supplies(self):
        grid = np.linspace(0.26, 0.99, 50)
        for n in (3, 5, 7, 9, 15, 31):
            for lam0 in grid:
                lam0 = float(lam0)
                assert (qubitpur.average_fidelity(n, lam0).expected_fidelity
                        >= compare.effective_entpur_fidelity(n, lam0) - 1e-12)

    def test_strictly_increasing_in_channel_quality(self):
        grid = list(np.linspace(0.52, 0.98, 30))
        for method in ("ent_pur", "qubit_pur"):
            rows = compare.sweep([method], [9], grid)
            values = [r.fidelity for r in rows]
            assert all(b > a for a, b in zip(values, values[1:]))

    def test_input_validation(self):
        with pytest.raises(ValueError):
            compare.sweep([], [9], [0.5])
        with pytest.raises(ValueError):
            compare.sweep(["qubit_pur"], [], [0.5])
        with pytest.raises(ValueError):
            compare.sweep(["qubit_pur"], [9], [])
        with pytest.raises(ValueError):
            compare.sweep(["teleport_twice"], [9], [0.5])
        with pytest.raises(ValueError):
            compare.sweep(["qubit_pur"], [9], [0.25])
        with pytest.raises(ValueError):
            compare.sweep(["qubit_pur"], [9], [1.0])


class TestCrossingPoints:
    def test_single_resource_anchor(self):
        result = compare.crossing_points(1, tol=1e-10)
        assert result.lambda_1 == pytest.approx(0.5, abs=1e-9)
        assert result.lambda_2 == pytest.approx(0.5, abs=1e-9)

    def test_two_resources_coincide(self):
        result = compare.crossing_points(2, tol=1e-10)
        assert result.lambda_1 == pytest.approx(result.lambda_2, abs=1e-9)
        assert result.lambda_1 == pytest.approx(0.625, abs=1e-9)

    def test_ordering_for_larger_supplies(self):
        for n in (3, 9, 15):
            result = compare.crossing_points(n)
            assert result.lambda_2 <= result.lambda_1
            assert 0.25 < result.lambda_2 < result.lambda_1 < 1.0

    def test_collective_crossing_band_for_larger_supplies(self):
        for n in (7, 12, 21, 31):
            result = compare.crossing_points(n)
            assert 0.6 <= result.lambda_2 <= 0.65

    def test_tolerance_validation(self):
        with pytest.raises(ValueError):
            compare.crossing_points(3, tol=1e-13)
        with pytest.raises(ValueError):
            compare.crossing_points(0)

    def test_result_invariant_enforced(self):
        with pytest.raises(ValueError):
            CrossingResult(n=5, lambda_1=0.5, lambda_2=0.8, tolerance=1e-10)
        with pytest.raises(ValueError):
            CrossingResult(n=5, lambda_1=1.2, lambda_2=None, tolerance=1e-10)

    def test_multiple_sign_changes_are_reported(self, monkeypatch):
        class FakeResult:
            def __init__(self, value):
                self.expected_fidelity = value

        def oscillating(n, lam0):
            return FakeResult(0.75 + 0.2 * math.sin(40.0 * lam0))

        monkeypatch.setattr(qubitpur, "average_fidelity", oscillating)
        with pytest.raises(AmbiguousCrossingError) as err:
            compare.crossing_points(3)
        assert err.value.n == 3
        assert err.value.method == "qubit_pur"


class TestRecommend:
    def test_good_channel_prefers_collective_purification(self):
        assert compare.recommend(9, 0.9) == "qubit_pur"
        assert qubitpur.average_fidelity(9, 0.9).expected_fidelity > 10 / 11

    def test_bad_channel_prefers_estimation(self):
        assert compare.recommend(9, 0.3) == "estimation"
        assert qubitpur.average_fidelity(9, 0.3).expected_fidelity < 10 / 11

    def test_tie_goes_to_estimation(self):
        # both strategies give exactly 2/3 here
        assert compare.recommend(1, 0.5) == "estimation"

    def test_matches_crossing_point(self):
        result = compare.crossing_points(9)
        assert compare.recommend(9, result.lambda_2 + 0.01) == "qubit_pur"
        assert compare.recommend(9, result.lambda_2 - 0.01) == "estimation"

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            compare.recommend(9, 0.25)
