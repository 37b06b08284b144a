"""Тесты планов, отчётов и сервиса экспериментов."""

import json
import logging
import math
from dataclasses import replace

import pytest
from pydantic import ValidationError

from app.constants import (
    ACCEPTANCE_DIFF_N,
    ACCEPTANCE_S,
    ACCEPTANCE_SIGMAS,
    ACCEPTANCE_SYSTEMS,
    DEFAULT_N_LIST,
    INTERPOLATION_COUNT,
    INTERPOLATION_MODES,
    INTERPOLATION_TRIPLES,
)
from app.services.errors import ConfigError, FrequencyError
from app.services.experiments import (
    ExperimentPlan,
    ExperimentService,
    artifacts_folder,
    fit_slope,
    write_csv,
    write_json,
)
from app.services.experiments.acceptance import run_acceptance, sobolev_closed_form_check
from app.services.model import SystemParams


@pytest.fixture
def service() -> ExperimentService:
    return ExperimentService(jobs=2)


def small_plan(params: SystemParams, **overrides) -> ExperimentPlan:
    fields = {
        "params": params,
        "s": 3.0,
        "sigma": 1.75,
        "n_list": (8, 16),
        "T": 0.3,
        "sample_times": (0.1, 0.3),
        "probe_time": 0.3,
        "record_count": 6,
    }
    fields.update(overrides)
    return ExperimentPlan(**fields)


class TestFitSlope:
    """МНК-наклон в логарифмическом масштабе."""

    def test_exact_power_law(self):
        pairs = [(n, 5.0 * n**-3) for n in (4, 8, 16, 32)]
        assert fit_slope(pairs) == pytest.approx(-3.0)

    def test_two_points(self):
        assert fit_slope([(1, 2.0), (4, 8.0)]) == pytest.approx(1.0)

    @pytest.mark.parametrize(
        "pairs",
        [[(1, 1.0)], [], [(1, 1.0), (2, 0.0)], [(0, 1.0), (2, 1.0)], [(1, 1.0), (2, math.inf)]],
    )
    def test_rejects_bad_points(self, pairs):
        with pytest.raises(ConfigError):
            fit_slope(pairs)


class TestExperimentPlan:
    """Правила плана, сетки и моментов записи."""

    @pytest.mark.parametrize(
        "overrides",
        [
            {"s": 2.5},
            {"sigma": 3.0},
            {"n_list": ()},
            {"n_list": (16, 8)},
            {"n_list": (0, 8)},
            {"probe_time": 0.5},
            {"omega": 2},
            {"grid_factor": 2},
        ],
    )
    def test_rejects_invalid_plans(self, ccch, overrides):
        with pytest.raises(ValidationError):
            small_plan(ccch, **overrides)

    def test_warns_when_time_leaves_window(self, ccch, caplog):
        with caplog.at_level(logging.WARNING):
            small_plan(ccch, T=1.2)
        assert "outside the window" in caplog.text

    def test_grid_size(self, ccch, mixed):
        assert small_plan(ccch).grid_size(64) == 2048
        assert small_plan(mixed).grid_size(100) == 4096
        assert small_plan(SystemParams(p=3, q=1, a=1, b=1)).grid_size(64) == 4096

    def test_grid_must_resolve_products(self):
        plan = small_plan(SystemParams.preset("novikov2"), grid_factor=4)
        with pytest.raises(FrequencyError):
            plan.grid(64)

    def test_sample_times_are_clipped_to_horizon(self, ccch):
        plan = small_plan(ccch, T=0.6, sample_times=(0.25, 0.5, 0.75, 0.95), probe_time=0.5)
        assert plan.effective_sample_times == (0.25, 0.5)

    def test_record_times(self, ccch):
        plan = small_plan(ccch, T=0.6, sample_times=(0.25, 0.5), probe_time=0.5, record_count=5)
        times = plan.record_times

        assert times[-1] == 0.6
        assert {0.25, 0.5} <= set(times)
        assert all(b > a for a, b in zip(times, times[1:]))
        assert all(0 < t <= 0.6 for t in times)

    def test_to_dict_documents_grid_and_step(self, ccch):
        data = small_plan(ccch).to_dict()
        assert data["grid_sizes"] == {"8": 256, "16": 512}
        assert data["dt_rule"].startswith("dt = 0.5 /")
        assert data["params"] == {"p": 1, "q": 1, "a": 2.0, "b": 2.0}


class TestReportWriter:
    """CSV и JSON артефакты."""

    def test_csv_format(self, tmp_path):
        path = write_csv(tmp_path / "nested" / "table.csv", ["n", "x", "ok"], [[8, 0.1, True]])
        assert path.read_bytes() == b"n,x,ok\n8,0.10000000000000001,true\n"

    def test_json_summary(self, tmp_path):
        path = write_json(tmp_path / "summary.json", {"passed": False, "σ": 1.75})
        assert json.loads(path.read_text(encoding="utf-8")) == {"passed": False, "σ": 1.75}

    def test_artifacts_folder(self, tmp_path):
        folder = artifacts_folder(tmp_path, "residual-scan")
        assert folder.is_dir()
        assert folder.name.endswith(".residual-scan")


class TestExecutor:
    """Параллельные прогоны по n."""

    def test_results_follow_frequency_order(self, service):
        assert service._run_per_n(lambda n: n * n, (3, 1, 2), "Test") == [1, 4, 9]

    def test_rejects_non_positive_jobs(self):
        with pytest.raises(ConfigError):
            ExperimentService(jobs=0)


class TestClosedForms:
    """Нормы одиночных мод по выборке с сетки."""

    def test_small_grid(self):
        result = sobolev_closed_form_check(max_mode=64, phases=3)
        assert result["passed"]
        assert result["max_relative_error"] <= 1e-12

    def test_full_range(self):
        assert sobolev_closed_form_check()["passed"]


class TestResidualScan:
    """Скан убывания невязок."""

    def test_report_structure(self, service, ccch):
        plan = ExperimentPlan(params=ccch, s=3.0, sigma=1.75, n_list=(8, 16, 32))
        report = service.residual_decay_scan(plan)

        assert [row.n for row in report.rows] == [8, 16, 32]
        assert report.exponents.r == -3.0
        assert [v.component for v in report.verdicts] == ["E", "F"]
        assert all(v.roundoff_limited for v in report.verdicts)
        assert report.passed

        header, rows = report.table()
        assert header[:3] == ["n", "norm_E", "norm_F"]
        assert len(rows) == 3
        assert report.spot_check["t"] == plan.probe_time
        assert report.to_dict()["passed"] is True

    def test_needs_two_frequencies(self, service, ccch):
        with pytest.raises(ConfigError):
            service.residual_decay_scan(ExperimentPlan(params=ccch, s=3.0, n_list=(16,)))

    @pytest.mark.parametrize("sigma", ACCEPTANCE_SIGMAS)
    @pytest.mark.parametrize("s", ACCEPTANCE_S)
    @pytest.mark.parametrize("system", ACCEPTANCE_SYSTEMS)
    def test_acceptance_grid(self, service, system, s, sigma):
        p, q, a, b = system
        plan = ExperimentPlan(
            params=SystemParams(p=p, q=q, a=a, b=b), s=s, sigma=sigma, n_list=DEFAULT_N_LIST
        )
        report = service.residual_decay_scan(plan)

        for verdict in report.verdicts:
            assert verdict.bound_ok, verdict
            assert verdict.sharp_ok, verdict
            assert verdict.fidelity_ok, verdict


class TestInterpolationCheck:
    """Интерполяционное неравенство на случайных многочленах."""

    def test_default_triples(self, service):
        report = service.interpolation_check(
            INTERPOLATION_TRIPLES, INTERPOLATION_COUNT, 0, INTERPOLATION_MODES
        )
        assert report.passed
        for result in report.results:
            assert result.violations == 0
            assert result.max_ratio <= 1.0 + 1e-12
            assert result.single_mode_deviation <= 1e-12

    def test_is_reproducible(self, service):
        first = service.interpolation_check(((1.0, 3.0, 5.0),), 20, 7, 8)
        second = service.interpolation_check(((1.0, 3.0, 5.0),), 20, 7, 8)
        assert first.results[0].max_ratio == second.results[0].max_ratio

    def test_rejects_empty_sample(self, service):
        with pytest.raises(ConfigError):
            service.interpolation_check(((1.0, 3.0, 5.0),), 0, 0, 8)


class TestSolverExperiments:
    """Короткие прогоны решателя."""

    def test_difference_growth_structure(self, service, ccch):
        plan = small_plan(ccch)
        report = service.difference_growth(plan)

        assert [run.n for run in report.runs] == [8, 16]
        for run in report.runs:
            assert run.series.times[0] == 0.0
            assert run.series.values[0] == 0.0
            assert run.series.times[-1] == plan.T
            assert run.size_check.passed
        assert report.size_checks_passed

        header, rows = report.table()
        assert header == ["n", "t", "diff_norm_sigma"]
        assert len(rows) == sum(len(run.series.times) for run in report.runs)

    def test_nonuniform_dependence_structure(self, service, ccch):
        plan = small_plan(ccch)
        report = service.nonuniform_dependence(plan)

        assert report.omegas == (1, -1)
        assert report.expected_data_slope == -1.0
        assert report.data_slope == pytest.approx(-1.0, abs=1e-9)
        assert report.data_slope_ok
        assert report.interpolation_ok
        assert report.chain_ok
        assert report.size_checks_passed

        for run in report.runs:
            assert run.data_difference == pytest.approx(run.data_reference, rel=1e-10)
            assert [sample.t for sample in run.samples] == [0.1, 0.3]
            assert all(sample.chain_holds for sample in run.samples)
            assert run.size_check_first.passed
            assert run.size_check_second.passed

    def test_verdict_requires_chain_and_size(self, service, ccch):
        report = service.nonuniform_dependence(small_plan(ccch))

        assert not replace(report, chain_ok=False).passed
        assert not replace(report, size_checks_passed=False).passed
        assert replace(report, chain_ok=False).to_dict()["passed"] is False

    def test_needs_two_frequencies(self, service, ccch):
        with pytest.raises(ConfigError):
            service.nonuniform_dependence(small_plan(ccch, n_list=(8,)))

    def test_even_powers_use_zero_carrier(self, service):
        plan = small_plan(SystemParams.preset("novikov2"))
        report = service.nonuniform_dependence(plan)
        assert report.omegas == (1, 0)
        assert report.expected_data_slope == -0.5
        assert report.data_slope == pytest.approx(-0.5, abs=1e-9)

    @pytest.mark.slow
    def test_separation_for_first_powers(self, service, ccch):
        plan = ExperimentPlan(params=ccch, s=3.0, sigma=1.75, n_list=DEFAULT_N_LIST)
        report = service.nonuniform_dependence(plan)

        assert report.data_slope_ok
        assert report.separation_ok
        assert report.stability_ok
        assert report.interpolation_ok
        assert report.chain_ok
        assert report.size_checks_passed

    @pytest.mark.slow
    def test_separation_for_even_powers(self, service):
        plan = ExperimentPlan(
            params=SystemParams.preset("novikov2"), s=3.0, sigma=1.75, n_list=(64, 128)
        )
        report = service.nonuniform_dependence(plan)

        assert report.omegas == (1, 0)
        assert report.data_slope_ok
        assert report.separation_ok
        assert report.stability_ok
        assert report.interpolation_ok
        assert report.size_checks_passed

    @pytest.mark.slow
    def test_difference_growth_at_acceptance_frequencies(self, service, ccch):
        plan = ExperimentPlan(params=ccch, s=3.0, sigma=1.75, n_list=ACCEPTANCE_DIFF_N)
        report = service.difference_growth(plan)

        assert report.ratios_non_increasing
        assert report.size_checks_passed
        assert report.passed


@pytest.mark.slow
def test_fast_acceptance(service):
    criteria = run_acceptance(service, fast=True)
    assert set(criteria) == {"closed_forms", "residual_decay", "leading_fidelity", "interpolation"}
    assert all(criterion["passed"] for criterion in criteria.values())
