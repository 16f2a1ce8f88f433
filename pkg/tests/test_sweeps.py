"""Sweep harness: determinism, CSV contract, model/empirical agreement."""

import numpy as np
import pytest

from spintrng.device import DeviceParams
from spintrng.sweeps import (
    SWEEP_VARIANTS,
    Axis,
    SweepSpec,
    process_variation_study,
    run_sweep,
    spec_for_axis,
    temperature_sweep,
    voltage_sweep,
)

FAST = dict(bits_per_point=20_000, n_samples=40)


def fast_spec(axis, **overrides):
    merged = {**FAST, **overrides}
    return spec_for_axis(axis, **merged)


class TestGrids:
    def test_voltage_points(self):
        points = spec_for_axis(Axis.VOLTAGE).points()
        assert points[0] == pytest.approx(-0.10)
        assert points[-1] == pytest.approx(0.10)
        assert len(points) == 11
        assert 0.0 in points

    def test_temperature_points(self):
        points = spec_for_axis(Axis.TEMPERATURE).points()
        assert points[0] == pytest.approx(280.15)
        assert points[-1] == pytest.approx(320.15)
        assert len(points) == 9

    def test_process_uses_sample_count(self):
        report = process_variation_study(fast_spec(Axis.PROCESS, seed=0))
        assert all(row.value == 40 for row in report.rows)


class TestDeterminism:
    def test_identical_seeds_identical_csv(self):
        a = voltage_sweep(fast_spec(Axis.VOLTAGE, seed=5)).to_csv()
        b = voltage_sweep(fast_spec(Axis.VOLTAGE, seed=5)).to_csv()
        assert a == b

    def test_different_seeds_differ(self):
        a = voltage_sweep(fast_spec(Axis.VOLTAGE, seed=5)).to_csv()
        b = voltage_sweep(fast_spec(Axis.VOLTAGE, seed=6)).to_csv()
        assert a != b

    def test_parallel_jobs_change_nothing(self):
        spec = fast_spec(Axis.TEMPERATURE, seed=3)
        serial = temperature_sweep(spec, jobs=1).to_csv()
        parallel = temperature_sweep(spec, jobs=4).to_csv()
        assert serial == parallel

    def test_process_study_deterministic(self):
        spec = fast_spec(Axis.PROCESS, seed=9)
        a = process_variation_study(spec).to_csv()
        b = process_variation_study(spec, jobs=3).to_csv()
        assert a == b


class TestCsvContract:
    def test_header_and_shape(self):
        report = voltage_sweep(fast_spec(Axis.VOLTAGE, seed=1))
        lines = report.to_csv().strip().split("\n")
        assert lines[0] == (
            "variant,axis,value,p_one,shannon,min_entropy,p1_model,p2_model"
        )
        assert len(lines) == 1 + 11 * len(SWEEP_VARIANTS)
        first = lines[1].split(",")
        assert first[0] in {v.value for v in SWEEP_VARIANTS}
        assert first[1] == "voltage"
        float(first[2])
        for cell in first[3:]:
            float(cell)

    def test_rows_sorted_by_variant_then_value(self):
        report = voltage_sweep(fast_spec(Axis.VOLTAGE, seed=1))
        keys = [(row.variant, row.value) for row in report.rows]
        assert keys == sorted(keys)


class TestModelAgreement:
    def test_empirical_tracks_model_probabilities(self):
        # per-point chain statistics against the device-model
        # predictions, with correlation-corrected tolerances
        spec = spec_for_axis(Axis.VOLTAGE, bits_per_point=50_000, seed=2)
        report = voltage_sweep(spec)
        for row in report.rows:
            p1, p2 = row.p1_model, row.p2_model
            if row.variant.value == "conv-p2ap":
                expected, lam = p1, 0.0
            elif row.variant.value == "conv-ap2p":
                expected, lam = 1.0 - p2, 0.0
            elif row.variant.value == "rhs-single":
                expected, lam = p1 / (p1 + p2), 1.0 - p1 - p2
            else:
                m = p1 / (p1 + p2)
                expected, lam = 2.0 * m * (1.0 - m), (1.0 - p1 - p2) ** 2
            sigma = np.sqrt(
                expected * (1 - expected) / spec.bits_per_point
                * (1 + lam) / (1 - lam)
            )
            assert row.p_one == pytest.approx(expected, abs=5 * sigma + 1e-9), (
                row.variant,
                row.value,
            )

    def test_conventional_degrades_away_from_nominal(self):
        report = voltage_sweep(fast_spec(Axis.VOLTAGE, seed=0))
        rows = [r for r in report.rows if r.variant.value == "conv-p2ap"]
        rows.sort(key=lambda r: r.value)
        p1_values = [r.p1_model for r in rows]
        # effective write current rises with the rail, so the flip
        # probability is monotone in the deviation
        assert p1_values == sorted(p1_values)
        biases = {r.value: abs(r.p1_model - 0.5) for r in rows}
        assert biases[0.0] == min(biases.values())
        assert biases[0.0] < 1e-6

    def test_temperature_keeps_polarities_balanced(self):
        # both polarities share the calibrated operating exponent, so
        # thermal rescaling moves them in lockstep
        report = temperature_sweep(fast_spec(Axis.TEMPERATURE, seed=0))
        for row in report.rows:
            assert row.p1_model == pytest.approx(row.p2_model, abs=1e-6)

    def test_trng_entropy_dominates_at_every_point(self):
        report = voltage_sweep(fast_spec(Axis.VOLTAGE, bits_per_point=50_000, seed=4))
        by_point: dict = {}
        for row in report.rows:
            by_point.setdefault(row.value, {})[row.variant.value] = row.shannon
        for value, entry in by_point.items():
            assert entry["rhs-trng"] >= entry["conv-p2ap"] - 1e-4
            assert entry["rhs-trng"] >= entry["conv-ap2p"] - 1e-4


class TestProcessStudy:
    def test_variant_population_is_shared(self):
        report = process_variation_study(fast_spec(Axis.PROCESS, seed=7))
        p1_models = {row.p1_model for row in report.rows}
        p2_models = {row.p2_model for row in report.rows}
        assert len(p1_models) == 1  # same device draw for every variant
        assert len(p2_models) == 1

    def test_all_variants_reported(self):
        report = process_variation_study(fast_spec(Axis.PROCESS, seed=7))
        assert {row.variant for row in report.rows} == set(SWEEP_VARIANTS)

    def test_xor_recovers_most_entropy(self):
        report = process_variation_study(
        spec_for_axis(Axis.PROCESS, bits_per_point=200_000, n_samples=40, seed=7)
        )
        by = {row.variant.value: row for row in report.rows}
        assert by["rhs-trng"].min_entropy > by["rhs-single"].min_entropy
        assert by["rhs-trng"].min_entropy > 0.99


class TestValidation:
    def test_minimum_bits_enforced(self):
        with pytest.raises(ValueError):
            SweepSpec(axis=Axis.VOLTAGE, bits_per_point=5000)

    def test_parallel_variant_rejected(self):
        from spintrng.generator import Variant

        with pytest.raises(ValueError):
            SweepSpec(axis=Axis.VOLTAGE, variants=(Variant.RHS_PARALLEL,))

    def test_spec_for_axis_passes_overrides(self):
        spec = spec_for_axis(Axis.PROCESS, n_samples=123, seed=9)
        assert spec.axis is Axis.PROCESS
        assert spec.n_samples == 123
        assert spec.seed == 9

    def test_custom_device_params_accepted(self):
        params = DeviceParams(delta_300=2.0)
        spec = fast_spec(Axis.VOLTAGE, params=params, seed=0)
        report = voltage_sweep(spec)
        assert len(report.rows) == 11 * 4
