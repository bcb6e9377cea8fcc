# -*- coding: utf-8 -*-
"""
PluralWV - Landmark Report Tests
"""
import pytest
from rich.console import Console

from analytics.landmarks import report
from analytics.landmarks.report import collect_landmarks, display_landmarks, save_report


@pytest.fixture(scope="module")
def landmarks():
    return collect_landmarks()


def _value(df, name):
    return float(df.loc[df["name"] == name, "value"].iloc[0])


def test_landmark_columns(landmarks):
    """Landmark table layout and groups"""
    assert list(landmarks.columns) == ["group", "name", "value", "reference"]
    assert set(landmarks["group"]) == {"weak_value", "sensitivity_peak", "systematic_error", "sensitivity"}


def test_landmark_weak_values(landmarks):
    """Weak values of the three schemes at 0.002 rad"""
    assert _value(landmarks, "scheme_a_real.re") == pytest.approx(499.9993, rel=1e-7)
    assert _value(landmarks, "scheme_b_imaginary.im") == pytest.approx(-499.9993, rel=1e-7)
    assert _value(landmarks, "scheme_c_plural.ab") == pytest.approx(353.55292, rel=1e-7)


def test_landmark_peaks_match_reference(landmarks):
    """Sensitivity peaks sit at their reference alpha"""
    peaks = landmarks[landmarks["group"] == "sensitivity_peak"]
    assert len(peaks) == 3
    for _, row in peaks.iterrows():
        assert row["value"] == pytest.approx(row["reference"], rel=1e-3)


def test_landmark_systematic_errors(landmarks):
    """Im-based reading doubles beta, Ab and Prob agree"""
    assert _value(landmarks, "beta_hat.im_based") == pytest.approx(0.004, rel=1e-6)
    assert _value(landmarks, "err.ab_based") == pytest.approx(_value(landmarks, "err.prob_based"), abs=1e-12)
    assert _value(landmarks, "im_gap") > _value(landmarks, "ab_gap") > 0


def test_save_report(tmp_path, landmarks):
    """Markdown report written under a new directory"""
    path = save_report(landmarks, tmp_path / "reports" / "landmarks.md")
    text = path.read_text(encoding="utf-8")
    assert text.startswith("# Plural Weak Value Landmarks")
    assert "| group" in text
    assert "scheme_c_plural.re" in text


def test_display_landmarks(landmarks, monkeypatch):
    """Every landmark appears in the rendered table"""
    recorder = Console(record=True, width=160)
    monkeypatch.setattr(report, "console", recorder)
    display_landmarks(landmarks)
    text = recorder.export_text()
    assert "Plural Weak Value Landmarks" in text
    for name in landmarks["name"]:
        assert name in text
