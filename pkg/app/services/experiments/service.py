"""Сервис экспериментов (фасад)."""

import asyncio
import logging
import math
from typing import Callable, TypeVar

import numpy as np

from app.constants import (
    DATA_SLOPE_TOLERANCE,
    GROWTH_SLACK,
    INTERPOLATION_RTOL,
    LEADING_GAP_THRESHOLD,
    SEPARATION_FRACTION,
    SEPARATION_STABILITY,
)
from app.services.approx import (
    ApproxConfig,
    approximate_solution,
    data_difference_reference,
    exponent_report,
    initial_data,
    interpolation_bound,
    leading_error_expansion,
    random_trig_polynomial,
    residual,
    roundoff_floor,
    separation_omegas,
    separation_reference,
)
from app.services.errors import ConfigError
from app.services.integrator import (
    IntegratorConfig,
    NormSeries,
    Trajectory,
    cfl_time_step,
    integrate,
    size_check,
)
from app.services.model import StatePair
from app.services.spectral import PeriodicGrid, SpectralField, pair_norm, sobolev_norm

from .config import ExperimentPlan
from .fitting import fit_slope
from .models import (
    ComponentVerdict,
    DifferenceGrowthReport,
    DifferenceRun,
    InterpolationReport,
    InterpolationRow,
    InterpolationTripleResult,
    NudReport,
    NudRun,
    NudSample,
    ResidualRow,
    ResidualScanReport,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")


class ExperimentService:
    """Сервис для запуска экспериментов над семейством приближённых решений."""

    def __init__(self, jobs: int = 1):
        if jobs < 1:
            raise ConfigError(f"jobs must be positive, got {jobs}")
        self.jobs = jobs

    def residual_decay_scan(self, plan: ExperimentPlan) -> ResidualScanReport:
        """
        Скан убывания невязок ‖E(0)‖_{H^σ}, ‖F(0)‖_{H^σ} по n.

        Args:
            plan: план эксперимента (нужно не меньше двух частот)

        Returns:
            ResidualScanReport с наклонами, предсказаниями и вердиктами
        """
        if len(plan.n_list) < 2:
            raise ConfigError("Residual scan needs at least two frequencies")

        params = plan.params
        exponents = exponent_report(plan.s, plan.sigma, params)
        logger.info(
            f"[Residual] s={plan.s:g} sigma={plan.sigma:g}: "
            f"predicted r={exponents.r:g} ({exponents.r_branch}), "
            f"j={exponents.j:g} ({exponents.j_branch})"
        )

        def evaluate(n: int) -> ResidualRow:
            grid = plan.grid(n)
            cfg = ApproxConfig(omega=plan.omega, n=n, s=plan.s)
            full = residual(cfg, params, 0.0, grid)
            gap = full - leading_error_expansion(cfg, params, 0.0, grid)

            return ResidualRow(
                n=n,
                grid_size=grid.size,
                norm_E=sobolev_norm(full.u, plan.sigma),
                norm_F=sobolev_norm(full.v, plan.sigma),
                lead_gap_E=sobolev_norm(gap.u, plan.sigma),
                lead_gap_F=sobolev_norm(gap.v, plan.sigma),
                roundoff_floor=roundoff_floor(n, plan.s, plan.sigma),
            )

        rows = self._run_per_n(evaluate, plan.n_list, "Residual")

        verdicts = [
            self._residual_verdict(
                "E",
                [(row.n, row.norm_E, row.lead_gap_E, row.roundoff_floor) for row in rows],
                exponents.r,
                exponents.sharp_r,
                exponents.r_branch,
                plan.tolerance,
            ),
            self._residual_verdict(
                "F",
                [(row.n, row.norm_F, row.lead_gap_F, row.roundoff_floor) for row in rows],
                exponents.j,
                exponents.sharp_j,
                exponents.j_branch,
                plan.tolerance,
            ),
        ]
        for verdict in verdicts:
            status = "✓" if verdict.passed else "✗"
            logger.info(
                f"[Residual] {verdict.component}: fitted {verdict.fitted:.3f}, "
                f"bound {verdict.predicted:g}, sharp {verdict.sharp:g}, "
                f"rel gap {verdict.rel_gap:.2e} {status}"
            )

        return ResidualScanReport(
            plan=plan.to_dict(),
            exponents=exponents,
            rows=rows,
            verdicts=verdicts,
            spot_check=self._residual_spot_check(plan, rows[-1]),
        )

    @staticmethod
    def _residual_verdict(
        component: str,
        points: list[tuple[int, float, float, float]],
        predicted: float,
        sharp: float,
        branch: str,
        tolerance: float,
    ) -> ComponentVerdict:
        fitted = fit_slope([(n, norm) for n, norm, _, _ in points])

        # Ниже уровня округления наклон зазора не информативен
        roundoff_limited = any(gap <= floor for _, _, gap, floor in points)
        gap_slope = None if roundoff_limited else fit_slope([(n, gap) for n, _, gap, _ in points])

        _, top_norm, top_gap, _ = points[-1]
        rel_gap = top_gap / top_norm
        fidelity_ok = rel_gap < LEADING_GAP_THRESHOLD and (
            gap_slope is None or gap_slope < fitted
        )

        return ComponentVerdict(
            component=component,
            fitted=fitted,
            predicted=predicted,
            sharp=sharp,
            branch=branch,
            bound_ok=fitted <= predicted + tolerance,
            sharp_ok=abs(fitted - sharp) <= tolerance,
            rel_gap=rel_gap,
            gap_slope=gap_slope,
            roundoff_limited=roundoff_limited,
            fidelity_ok=fidelity_ok,
        )

    @staticmethod
    def _residual_spot_check(plan: ExperimentPlan, top: ResidualRow) -> dict:
        """Нормы невязок при t = probe_time для наибольшего n."""
        grid = plan.grid(top.n)
        cfg = ApproxConfig(omega=plan.omega, n=top.n, s=plan.s)
        later = residual(cfg, plan.params, plan.probe_time, grid)
        norm_E = sobolev_norm(later.u, plan.sigma)
        norm_F = sobolev_norm(later.v, plan.sigma)
        return {
            "n": top.n,
            "t": plan.probe_time,
            "norm_E": norm_E,
            "norm_F": norm_F,
            "ratio_E": norm_E / top.norm_E,
            "ratio_F": norm_F / top.norm_F,
        }

    def difference_growth(self, plan: ExperimentPlan, omega: int = 1) -> DifferenceGrowthReport:
        """
        Рост разности (w, y) приближённого и точного решений.

        Args:
            plan: план эксперимента
            omega: знак несущей

        Returns:
            DifferenceGrowthReport с рядами ‖(w,y)(t)‖_σ и проверкой размера
        """
        params = plan.params
        exponents = exponent_report(plan.s, plan.sigma, params)
        k = exponents.k
        logger.info(
            f"[Diff] beta={exponents.beta:g}, k={k}, T={plan.T:g}, n={list(plan.n_list)}"
        )

        def run(n: int) -> DifferenceRun:
            grid = plan.grid(n)
            cfg = ApproxConfig(omega=omega, n=n, s=plan.s)
            trajectory, dt = self._solve(plan, cfg, grid, plan.record_times)

            sigma_values, k_values = [], []
            for t, actual in zip(trajectory.times, trajectory.states):
                diff = approximate_solution(cfg, params, t, grid) - actual
                sigma_values.append(pair_norm(diff.u, diff.v, plan.sigma))
                k_values.append(pair_norm(diff.u, diff.v, k))

            series = NormSeries(
                label=f"diff_H{plan.sigma:g}", times=list(trajectory.times), values=sigma_values
            )
            size = size_check(trajectory, plan.s)
            sup_k = max(k_values)

            return DifferenceRun(
                n=n,
                grid_size=grid.size,
                dt=dt,
                series=series,
                sup_sigma=series.sup,
                ratio_beta=series.sup / n**exponents.beta,
                sup_k=sup_k,
                ratio_k=sup_k / n ** (k - plan.s),
                max_pair_norm_s=size.max_norm,
                size_check=size,
            )

        runs = self._run_per_n(run, plan.n_list, "Diff")

        ratios = [run.ratio_beta for run in runs]
        non_increasing = all(b <= (1 + GROWTH_SLACK) * a for a, b in zip(ratios, ratios[1:]))
        size_ok = all(run.size_check.passed for run in runs)
        logger.info(
            f"[Diff] ratios sup|(w,y)|_sigma / n^beta: {', '.join(f'{r:.3e}' for r in ratios)}"
        )

        return DifferenceGrowthReport(
            plan=plan.to_dict(),
            exponents=exponents,
            omega=omega,
            runs=runs,
            ratios_non_increasing=non_increasing,
            size_checks_passed=size_ok,
        )

    def nonuniform_dependence(self, plan: ExperimentPlan) -> NudReport:
        """
        Неравномерная зависимость: разность данных -> 0, разность решений ≳ |sin t|.

        Для чётных p и q используется пара ω ∈ {1, 0} и опорная кривая |sin(t/2)|.

        Returns:
            NudReport с рядами, наклоном разности данных и вердиктами
        """
        if len(plan.n_list) < 2:
            raise ConfigError("Nonuniform dependence needs at least two frequencies")

        params = plan.params
        omegas = separation_omegas(params)
        exponents = exponent_report(plan.s, plan.sigma, params)
        k = exponents.k
        logger.info(f"[NUD] omegas={omegas}, alpha={exponents.alpha:.4f}, k={k}")

        def run(n: int) -> NudRun:
            grid = plan.grid(n)
            configs = [ApproxConfig(omega=omega, n=n, s=plan.s) for omega in omegas]
            trajectories = [
                self._solve(plan, cfg, grid, plan.record_times)[0] for cfg in configs
            ]

            initial = trajectories[0].states[0] - trajectories[1].states[0]
            samples, interpolation = [], []

            for t in plan.effective_sample_times:
                actual = [trajectory.at(t) for trajectory in trajectories]
                approx = [approximate_solution(cfg, params, t, grid) for cfg in configs]

                solution_diff = _pair_norm(actual[0] - actual[1], plan.s)
                approx_diff = _pair_norm(approx[0] - approx[1], plan.s)
                errors = [_pair_norm(a - b, plan.s) for a, b in zip(approx, actual)]
                reference = separation_reference(params, t)

                # ‖U1-U2‖ >= ‖A1-A2‖ - ‖A1-U1‖ - ‖A2-U2‖
                lower = approx_diff - errors[0] - errors[1]
                samples.append(
                    NudSample(
                        n=n,
                        t=t,
                        solution_difference=solution_diff,
                        approximate_difference=approx_diff,
                        reference=reference,
                        lower_constant=solution_diff / reference if reference > 0 else math.inf,
                        approx_error_first=errors[0],
                        approx_error_second=errors[1],
                        chain_holds=solution_diff >= lower - 1e-12 * max(1.0, approx_diff),
                    )
                )

                for cfg, a, b in zip(configs, approx, actual):
                    row = _interpolation_row(
                        n, cfg.omega, t, a - b, plan.sigma, plan.s, k, exponents.alpha
                    )
                    interpolation.append(row)

            return NudRun(
                n=n,
                grid_size=grid.size,
                data_difference=_pair_norm(initial, plan.s),
                data_reference=data_difference_reference(params, n),
                max_norm_first=trajectories[0].norm_series(plan.s).sup,
                max_norm_second=trajectories[1].norm_series(plan.s).sup,
                samples=samples,
                interpolation=interpolation,
                size_check_first=size_check(trajectories[0], plan.s),
                size_check_second=size_check(trajectories[1], plan.s),
            )

        runs = self._run_per_n(run, plan.n_list, "NUD")

        expected_slope = -min(1 / params.p, 1 / params.q)
        data_slope = fit_slope([(r.n, r.data_difference) for r in runs])
        data_slope_ok = abs(data_slope - expected_slope) <= DATA_SLOPE_TOLERANCE

        probe_reference = separation_reference(params, plan.probe_time)
        probes = [
            next(sample.solution_difference for sample in r.samples if sample.t == plan.probe_time)
            for r in runs
        ]
        separation_ok = probes[-1] > SEPARATION_FRACTION * probe_reference
        stability_ok = abs(probes[-1] - probes[-2]) < SEPARATION_STABILITY * probes[-2]
        interpolation_ok = all(row.holds for r in runs for row in r.interpolation)
        chain_ok = all(sample.chain_holds for r in runs for sample in r.samples)
        size_ok = all(r.size_checks_passed for r in runs)

        logger.info(
            f"[NUD] data slope {data_slope:.3f} "
            f"(expected {expected_slope:g}), separation at t={plan.probe_time:g}: "
            f"{', '.join(f'{p:.4f}' for p in probes)} vs reference {probe_reference:.4f}"
        )
        if not size_ok:
            logger.warning(f"[NUD] size estimate violated for s={plan.s:g}")

        return NudReport(
            plan=plan.to_dict(),
            exponents=exponents,
            omegas=omegas,
            runs=runs,
            data_slope=data_slope,
            expected_data_slope=expected_slope,
            data_slope_ok=data_slope_ok,
            probe_time=plan.probe_time,
            probe_reference=probe_reference,
            separation_ok=separation_ok,
            stability_ok=stability_ok,
            interpolation_ok=interpolation_ok,
            chain_ok=chain_ok,
            size_checks_passed=size_ok,
        )

    def interpolation_check(
        self,
        triples: tuple[tuple[float, float, float], ...],
        count: int,
        seed: int,
        modes: int,
    ) -> InterpolationReport:
        """
        Интерполяционное неравенство на случайных тригонометрических многочленах.

        Args:
            triples: тройки (s1, s, s2)
            count: число случайных полей на тройку
            seed: зерно генератора
            modes: степень многочленов

        Returns:
            InterpolationReport
        """
        if count < 1 or modes < 1:
            raise ConfigError(f"count and modes must be positive, got {count}, {modes}")

        size = 8
        while size < 4 * (modes + 1):
            size *= 2
        grid = PeriodicGrid(size)
        rng = np.random.default_rng(seed)

        results = []
        for s1, s, s2 in triples:
            violations = 0
            max_ratio = 0.0
            for _ in range(count):
                lhs, rhs = interpolation_bound(random_trig_polynomial(grid, modes, rng), s1, s, s2)
                max_ratio = max(max_ratio, lhs / rhs)
                if lhs > rhs * (1 + INTERPOLATION_RTOL):
                    violations += 1

            deviation = 0.0
            for mode in range(1, modes + 1):
                lhs, rhs = interpolation_bound(SpectralField.cosine(grid, mode), s1, s, s2)
                deviation = max(deviation, abs(lhs / rhs - 1))

            logger.info(
                f"[Interp] ({s1:g}, {s:g}, {s2:g}): {violations} violations, "
                f"max ratio {max_ratio:.6f}, single-mode deviation {deviation:.1e}"
            )
            results.append(
                InterpolationTripleResult(
                    s1=s1,
                    s=s,
                    s2=s2,
                    count=count,
                    violations=violations,
                    max_ratio=max_ratio,
                    single_mode_deviation=deviation,
                )
            )

        return InterpolationReport(seed=seed, modes=modes, results=results)

    def _solve(
        self,
        plan: ExperimentPlan,
        cfg: ApproxConfig,
        grid: PeriodicGrid,
        record_times: tuple[float, ...],
    ) -> tuple[Trajectory, float]:
        """Проинтегрировать точное решение из начальных данных семейства."""
        start = initial_data(cfg, plan.params, grid)
        frequency = max(start.u.max_active_frequency(), start.v.max_active_frequency(), 1)
        dt = cfl_time_step(start, plan.params, plan.cfl, frequency)

        integrator_cfg = IntegratorConfig(
            dt=dt,
            t_end=plan.T,
            blowup_threshold=plan.blowup_threshold,
            record_times=record_times,
        )
        return integrate(start.u, start.v, plan.params, integrator_cfg), dt

    def _run_per_n(self, func: Callable[[int], T], n_list: tuple[int, ...], tag: str) -> list[T]:
        """Запустить func для каждого n и вернуть результаты в порядке n."""
        return asyncio.run(self._gather_per_n(func, n_list, tag))

    async def _gather_per_n(
        self, func: Callable[[int], T], n_list: tuple[int, ...], tag: str
    ) -> list[T]:
        semaphore = asyncio.Semaphore(self.jobs)

        async def run_one(i: int, n: int) -> tuple[int, T]:
            async with semaphore:
                result = await asyncio.to_thread(func, n)
            logger.info(f"[{tag}] [{i}/{len(n_list)}] n={n}: ✓")
            return n, result

        tasks = [run_one(i, n) for i, n in enumerate(n_list, 1)]
        results = await asyncio.gather(*tasks)

        # Сортируем по n, чтобы порядок не зависел от завершения задач
        return [result for _, result in sorted(results, key=lambda item: item[0])]


def _pair_norm(state: StatePair, s: float) -> float:
    return pair_norm(state.u, state.v, s)


def _interpolation_row(
    n: int, omega: int, t: float, diff: StatePair, sigma: float, s: float, k: int, alpha: float
) -> InterpolationRow:
    norm_s = _pair_norm(diff, s)
    holds = True
    for component in (diff.u, diff.v):
        lhs, rhs = interpolation_bound(component, sigma, s, k)
        holds = holds and lhs <= rhs * (1 + INTERPOLATION_RTOL)

    theta = (k - s) / (k - sigma)
    norm_sigma = _pair_norm(diff, sigma)
    norm_k = _pair_norm(diff, k)
    return InterpolationRow(
        n=n,
        omega=omega,
        t=t,
        norm_s=norm_s,
        norm_sigma=norm_sigma,
        norm_k=norm_k,
        bound=norm_sigma**theta * norm_k ** (1 - theta),
        ratio_alpha=norm_s / n**alpha,
        holds=holds,
    )
