"""Acceptance gate: one test per verification criterion, each printing a
single PASS/FAIL line with its measured margin."""

import pytest

from r2csim import selftest


def _run(check):
    result = check()
    status = "PASS" if result.passed else "FAIL"
    print(f"[{status}] criterion {result.number}: {result.name} - {result.detail}")
    assert result.passed, f"criterion {result.number} failed: {result.detail}"


def test_criterion_01_erf_approximant():
    _run(selftest.check_erf_approximant)


def test_criterion_02_resiliency_exact_vs_enumeration():
    _run(selftest.check_resiliency_exact)


def test_criterion_03_resiliency_curves():
    _run(selftest.check_resiliency_curves)


def test_criterion_04_psi_closed_forms():
    _run(selftest.check_psi_closed_forms)


def test_criterion_05_distortion_variance_sign():
    _run(selftest.check_distortion_variance)


def test_criterion_06_latency_bounds():
    _run(selftest.check_latency_bounds)


def test_criterion_07_broadcast_window_guarantee():
    _run(selftest.check_broadcast_window_guarantee)


def test_criterion_08_latency_trends():
    _run(selftest.check_latency_trends)


def test_criterion_09_scalability_trend():
    _run(selftest.check_scalability_trend)


def test_criterion_10_determinism():
    _run(selftest.check_determinism)
