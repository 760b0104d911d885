import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from fpscore.naturalness import (
    calibrate_dual,
    calibrate_single,
    classify_dual,
    classify_single,
    evaluate_system,
    h_score_three_class,
    h_score_two_class,
    load_thresholds,
    save_thresholds,
)
from fpscore.types import ClassLabel, ThresholdConfig

H, M, U = ClassLabel.H, ClassLabel.M, ClassLabel.U


def test_classify_single_examples():
    assert classify_single(0.3, 0.5) is H
    assert classify_single(0.5, 0.5) is M  # boundary goes to the "otherwise" branch
    assert classify_single(0.9, 0.5) is M


def test_classify_single_rejects_bad_inputs():
    with pytest.raises(ValueError):
        classify_single(0.0, 0.5)
    with pytest.raises(ValueError):
        classify_single(0.5, 1.0)


def test_classify_dual_examples():
    assert classify_dual(0.45, 0.3, 0.6) is U
    assert classify_dual(0.2, 0.3, 0.6) is H
    assert classify_dual(0.7, 0.3, 0.6) is M
    # boundaries are assigned to the undefined class
    assert classify_dual(0.3, 0.3, 0.6) is U
    assert classify_dual(0.6, 0.3, 0.6) is U


def test_classify_dual_rejects_crossed_boundaries():
    with pytest.raises(ValueError):
        classify_dual(0.5, 0.6, 0.3)


def test_h_score_two_class_examples():
    assert h_score_two_class(3, 1) == (0.75, 0.25)
    assert h_score_two_class(0, 5) == (0.0, 1.0)
    assert h_score_two_class(4, 4) == (0.5, 0.5)
    with pytest.raises(ValueError):
        h_score_two_class(0, 0)


def test_h_score_three_class_examples():
    assert h_score_three_class(2, 1, 1) == (0.5, 0.25)
    assert h_score_three_class(0, 0, 4) == (0.0, 0.0)
    assert h_score_three_class(1, 1, 0) == (0.5, 0.5)
    with pytest.raises(ValueError):
        h_score_three_class(0, 0, 0)


@given(st.integers(0, 50), st.integers(0, 50))
def test_three_class_reduces_to_two_class_without_undefined(n_h, n_m):
    if n_h + n_m == 0:
        return
    three = h_score_three_class(n_h, n_m, 0)
    two = h_score_two_class(n_h, n_m)
    assert three[0] == two[0]
    assert three[1] == pytest.approx(two[1], abs=1e-15)


def test_calibrate_single_separable():
    config = calibrate_single([0.1, 0.2], [0.8, 0.9])
    assert config.fp_t == pytest.approx(0.5)
    assert config.calibration_meta["calibration_errors"] == 0
    assert config.calibration_meta["calibration_accuracy"] == 1.0


def test_calibrate_single_identical_values():
    config = calibrate_single([0.4], [0.4])
    oracle_t, oracle_err = oracles.best_single_threshold([0.4], [0.4])
    assert config.fp_t == pytest.approx(oracle_t)
    assert config.calibration_meta["calibration_errors"] == oracle_err == 1


@given(
    st.lists(st.floats(0.01, 0.99), min_size=1, max_size=30),
    st.lists(st.floats(0.01, 0.99), min_size=1, max_size=30),
)
def test_calibrate_single_matches_exhaustive_oracle(natural, synthetic):
    config = calibrate_single(natural, synthetic)
    _oracle_t, oracle_err = oracles.best_single_threshold(natural, synthetic)
    assert config.calibration_meta["calibration_errors"] == oracle_err


def test_calibrate_single_empty_rejected():
    with pytest.raises(ValueError):
        calibrate_single([], [0.5])


def test_calibrate_dual_zero_variance():
    config = calibrate_dual([0.1, 0.1, 0.1], [0.9, 0.9, 0.9], c=1.0)
    assert config.mode == "dual"
    assert config.fp_l == pytest.approx(0.1)
    assert config.fp_r == pytest.approx(0.9)


def test_calibrate_dual_overlap_collapses():
    config = calibrate_dual([0.4, 0.6], [0.5, 0.7], c=1.0)
    assert config.mode == "single"
    assert config.calibration_meta["degenerate_overlap"] is True


def test_calibrate_dual_interval_monotone_in_c():
    # Boundaries move toward each other as c grows: each population claims
    # a wider band, so the undefined interval never grows with c.
    natural = [0.1, 0.15, 0.2]
    synthetic = [0.7, 0.8, 0.9]
    small = calibrate_dual(natural, synthetic, c=0.5)
    large = calibrate_dual(natural, synthetic, c=1.5)
    assert large.fp_l >= small.fp_l
    assert large.fp_r <= small.fp_r
    assert large.fp_r - large.fp_l <= small.fp_r - small.fp_l


def test_calibrate_dual_needs_two_values():
    with pytest.raises(ValueError):
        calibrate_dual([0.3], [0.5, 0.6])


def test_evaluate_system_single():
    result = evaluate_system([0.2, 0.9], ThresholdConfig(mode="single", fp_t=0.5))
    assert (result.n_h, result.n_m, result.h_score) == (1, 1, 0.5)


def test_evaluate_system_dual_all_h():
    cfg = ThresholdConfig(mode="dual", fp_l=0.5, fp_r=0.7)
    result = evaluate_system([0.1, 0.2, 0.3], cfg)
    assert result.h_score == 1.0
    assert result.m_score == 0.0


def test_evaluate_system_order_invariant():
    cfg = ThresholdConfig(mode="dual", fp_l=0.3, fp_r=0.6)
    fps = [0.2, 0.45, 0.7, 0.9, 0.1]
    assert evaluate_system(fps, cfg) == evaluate_system(list(reversed(fps)), cfg)


@given(
    st.floats(0.001, 1.0), st.floats(0.001, 1.0),
    st.floats(0.01, 0.99),
)
def test_single_classification_monotone(fp_a, fp_b, fp_t):
    lo, hi = sorted((fp_a, fp_b))
    if classify_single(hi, fp_t) is H:
        assert classify_single(lo, fp_t) is H
    if classify_single(lo, fp_t) is M:
        assert classify_single(hi, fp_t) is M


@given(st.floats(0.001, 1.0), st.floats(0.01, 0.99))
def test_single_equals_dual_with_equal_boundaries_off_boundary(fp_s, t):
    if fp_s == t:
        return
    single = classify_single(fp_s, t)
    dual = classify_dual(fp_s, t, t)
    assert single is dual


def test_boundary_behavior_single_vs_dual():
    assert classify_single(0.5, 0.5) is M
    assert classify_dual(0.5, 0.5, 0.5) is U


@given(
    st.floats(0.01, 1.0), st.floats(0.05, 0.95), st.floats(0.1, 1.0),
)
def test_common_rescaling_preserves_labels(fp_s, fp_t, scale):
    scaled_fp = fp_s * scale
    scaled_t = fp_t * scale
    if not (0 < scaled_fp <= 1 and 0 < scaled_t < 1):
        return
    assert classify_single(fp_s, fp_t) is classify_single(scaled_fp, scaled_t)


def test_threshold_file_roundtrip(tmp_path):
    config = calibrate_single([0.1, 0.2], [0.8, 0.9])
    config.calibration_meta["backend_fingerprint"] = "abc"
    path = tmp_path / "thresholds.json"
    save_thresholds(config, path)
    loaded = load_thresholds(path)
    assert loaded.mode == "single"
    assert loaded.fp_t == config.fp_t
    assert loaded.calibration_meta["backend_fingerprint"] == "abc"
