"""Statistical randomness battery (stream-level tests plus driver)."""

from spintrng.nist.suite import (
    MODULE_NAMES,
    TestResult,
    all_pass,
    composite_p_value,
    format_report,
    results_to_json,
    run_nist_suite,
)

__all__ = [
    "MODULE_NAMES",
    "TestResult",
    "all_pass",
    "composite_p_value",
    "format_report",
    "results_to_json",
    "run_nist_suite",
]
