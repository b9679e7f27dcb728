import dataclasses

import numpy as np
import pytest

from etamix import (
    HorizonTooSmall,
    RateFunction,
    build_process,
    check_checkpoints,
    delta_matrix,
    find_nk,
    mixing_matrix,
    rate_R,
    series_product,
    uniform,
    validate_rate,
)


class TestRateFunction:
    def test_sqrt_table(self):
        assert RateFunction.sqrt(10).values == (1, 2, 2, 2, 3, 3, 3, 3, 3, 4)

    def test_linear_table(self):
        assert RateFunction.linear(5).values == (1, 2, 3, 4, 5)

    def test_constant_table(self):
        assert RateFunction.constant(3, 6).values == (1, 2, 3, 3, 3, 3)

    def test_call_bounds(self):
        r = RateFunction.sqrt(5)
        assert r(1) == 1 and r(5) == 3
        with pytest.raises(ValueError):
            r(0)
        with pytest.raises(ValueError):
            r(6)

    def test_empty_table_rejected(self):
        with pytest.raises(ValueError):
            RateFunction(())

    def test_builtins_are_valid(self):
        for r in (RateFunction.sqrt(30), RateFunction.linear(30),
                  RateFunction.constant(4, 30)):
            assert validate_rate(r) == []

    def test_validate_flags_out_of_range(self):
        assert validate_rate(RateFunction((1, 3)))  # r(2) > 2
        assert validate_rate(RateFunction((0, 1)))  # r(1) < 1

    def test_validate_flags_decrease(self):
        msgs = validate_rate(RateFunction((1, 2, 1)))
        assert any("r(3)" in m for m in msgs)


class TestFindNk:
    def test_constant_one_rate(self):
        assert find_nk(RateFunction.constant(1, 12), 1, 0.5) == (2, 1.0)

    def test_linear_rate_boundary_ratio(self):
        # At n = 2 the ratio is exactly 1 - eps, which is admissible.
        assert find_nk(RateFunction.linear(12), 1, 0.5) == (2, 1.0)

    def test_sqrt_rate_skips_tight_horizon(self):
        assert find_nk(RateFunction.sqrt(12), 2, 0.25) == (4, 1.0)

    def test_horizon_too_small_reports_fix(self):
        with pytest.raises(HorizonTooSmall) as exc:
            find_nk(RateFunction.linear(6), 2, 0.25)
        assert exc.value.required_n_max == 8
        n, h = find_nk(RateFunction.linear(8), 2, 0.25)
        assert (n, h) == (8, 1.0)

    def test_input_validation(self):
        r = RateFunction.sqrt(10)
        with pytest.raises(ValueError):
            find_nk(r, 0, 0.5)
        with pytest.raises(ValueError):
            find_nk(r, 1, 0.0)
        with pytest.raises(ValueError):
            find_nk(r, 1, 1.0)


class TestBuildProcess:
    def test_sqrt_instance_checkpoints(self):
        p = build_process(RateFunction.sqrt(12), k_max=5, n_max=12)
        assert tuple(cp.n for cp in p.checkpoints) == (2, 4, 6, 7, 8)
        assert all(cp.h == 1.0 for cp in p.checkpoints)
        assert p.k_max == 5

    def test_components_live_at_natural_length(self):
        p = build_process(RateFunction.sqrt(12), k_max=3, n_max=12)
        assert tuple(c.n for c in p.components) == (2, 4, 6)

    def test_default_eps_sequence(self):
        p = build_process(RateFunction.sqrt(12), k_max=3, n_max=12)
        assert tuple(cp.eps for cp in p.checkpoints) == (1 / 2, 1 / 3, 1 / 4)

    def test_explicit_eps(self):
        p = build_process(RateFunction.sqrt(12), k_max=2, n_max=12, eps=(0.5, 0.25))
        assert tuple(cp.eps for cp in p.checkpoints) == (0.5, 0.25)

    def test_parameter_validation(self):
        r = RateFunction.sqrt(12)
        with pytest.raises(ValueError):
            build_process(r, k_max=0, n_max=12)
        with pytest.raises(ValueError):
            build_process(r, k_max=1, n_max=1)
        with pytest.raises(ValueError):
            build_process(r, k_max=1, n_max=20)  # table too short
        with pytest.raises(ValueError):
            build_process(RateFunction((1, 3, 3)), k_max=1, n_max=3)

    def test_eps_validation(self):
        r = RateFunction.sqrt(12)
        with pytest.raises(ValueError):
            build_process(r, k_max=2, n_max=12, eps=(0.5,))
        with pytest.raises(ValueError):
            build_process(r, k_max=2, n_max=12, eps=(0.5, 0.5))
        with pytest.raises(ValueError):
            build_process(r, k_max=2, n_max=12, eps=(0.5, 1.5))

    def test_horizon_error_propagates(self):
        with pytest.raises(HorizonTooSmall):
            build_process(RateFunction.linear(6), k_max=3, n_max=6, eps=(0.5, 0.4, 0.1))


@pytest.fixture(scope="module")
def process():
    return build_process(RateFunction.sqrt(12), k_max=5, n_max=12)


class TestDeltaMatrix:
    def test_cells_at_horizon_four(self, process):
        # Components 1 and 2 fit inside the horizon and contribute their
        # rows.  Component 3 lives at natural length 6; its single coupling
        # ties position 3 to position 6, so the length-4 marginal is
        # uniform and row 3 stays empty here.
        expected = np.eye(4)
        expected[0, 1] = 1.0
        expected[1, 2] = expected[1, 3] = 1.0
        assert np.allclose(delta_matrix(process, 4), expected, atol=1e-9)

    def test_row_appears_once_horizon_reaches_natural_length(self, process):
        d6 = delta_matrix(process, 6)
        assert np.allclose(d6[2, 3:6], [1.0, 1.0, 1.0], atol=1e-9)

    def test_rate_values_frozen(self, process):
        got = [rate_R(process, n) for n in range(1, 13)]
        assert np.allclose(got, [1, 2, 2, 3, 3, 4, 4, 4, 4, 4, 4, 4], atol=1e-9)

    def test_rate_monotone_and_bounded(self, process):
        rs = [rate_R(process, n) for n in range(1, 13)]
        assert all(a <= b + 1e-12 for a, b in zip(rs, rs[1:]))
        assert all(1.0 - 1e-12 <= r <= n + 1e-12 for n, r in enumerate(rs, start=1))

    def test_horizon_bounds(self, process):
        with pytest.raises(ValueError):
            delta_matrix(process, 0)
        with pytest.raises(ValueError):
            delta_matrix(process, 13)

    def test_padding_matches_series_with_fair_bit(self, process):
        comp = process.components[0]  # natural length 2
        padded = series_product(comp, uniform(2, 1))
        expected = np.zeros((3, 3))
        expected[:2, :2] = mixing_matrix(comp).entries
        assert np.allclose(mixing_matrix(padded).entries, expected, atol=1e-12)


class TestCheckCheckpoints:
    def test_sqrt_instance_passes(self):
        p = build_process(RateFunction.sqrt(12), k_max=5, n_max=12)
        reports = check_checkpoints(p)
        assert [r.passed for r in reports] == [True] * 5
        assert np.allclose(
            [r.ratio for r in reports], [0.5, 1.0, 1.0, 1.0, 1.0], atol=1e-12
        )
        assert np.allclose(
            [r.norm_ratio for r in reports],
            [1.0, 1.5, 4 / 3, 4 / 3, 4 / 3],
            atol=1e-12,
        )

    def test_corrupted_component_is_caught(self):
        p = build_process(RateFunction.sqrt(12), k_max=5, n_max=12)
        comps = list(p.components)
        mats = list(p.component_matrices)
        comps[1] = uniform(2, comps[1].n)
        mats[1] = np.zeros_like(mats[1])
        broken = dataclasses.replace(
            p, components=tuple(comps), component_matrices=tuple(mats)
        )
        reports = check_checkpoints(broken)
        assert not reports[1].passed
        assert reports[0].passed  # the untouched checkpoint still audits clean
