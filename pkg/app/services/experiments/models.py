"""Модели отчётов экспериментов."""

from dataclasses import asdict, dataclass, field

from app.services.approx import ExponentReport
from app.services.integrator import NormSeries, SizeCheckReport


@dataclass
class ResidualRow:
    """Нормы невязок для одной частоты n."""

    n: int
    grid_size: int
    norm_E: float
    norm_F: float
    lead_gap_E: float
    lead_gap_F: float
    roundoff_floor: float


@dataclass
class ComponentVerdict:
    """Вердикт скана невязок по одной компоненте (E или F)."""

    component: str
    fitted: float
    predicted: float
    sharp: float
    branch: str
    bound_ok: bool
    sharp_ok: bool

    # Точность ведущих членов
    rel_gap: float
    gap_slope: float | None
    roundoff_limited: bool
    fidelity_ok: bool

    @property
    def passed(self) -> bool:
        return self.bound_ok and self.sharp_ok and self.fidelity_ok


@dataclass
class ResidualScanReport:
    """Результат скана убывания невязок."""

    plan: dict
    exponents: ExponentReport
    rows: list[ResidualRow]
    verdicts: list[ComponentVerdict]
    spot_check: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(verdict.passed for verdict in self.verdicts)

    def table(self) -> tuple[list[str], list[list]]:
        header = [
            "n", "norm_E", "norm_F", "grid_size", "lead_gap_E", "lead_gap_F", "roundoff_floor"
        ]
        rows = [
            [r.n, r.norm_E, r.norm_F, r.grid_size, r.lead_gap_E, r.lead_gap_F, r.roundoff_floor]
            for r in self.rows
        ]
        return header, rows

    def to_dict(self) -> dict:
        data = asdict(self)
        data["verdicts"] = [{**asdict(v), "passed": v.passed} for v in self.verdicts]
        data["passed"] = self.passed
        return data


@dataclass
class DifferenceRun:
    """Разность приближённого и точного решений для одной частоты n."""

    n: int
    grid_size: int
    dt: float
    series: NormSeries
    sup_sigma: float
    ratio_beta: float
    sup_k: float
    ratio_k: float
    max_pair_norm_s: float
    size_check: SizeCheckReport


@dataclass
class DifferenceGrowthReport:
    """Результат эксперимента роста разности."""

    plan: dict
    exponents: ExponentReport
    omega: int
    runs: list[DifferenceRun]
    ratios_non_increasing: bool
    size_checks_passed: bool

    @property
    def passed(self) -> bool:
        return self.ratios_non_increasing and self.size_checks_passed

    def table(self) -> tuple[list[str], list[list]]:
        header = ["n", "t", "diff_norm_sigma"]
        rows = [
            [run.n, t, value]
            for run in self.runs
            for t, value in zip(run.series.times, run.series.values)
        ]
        return header, rows

    def to_dict(self) -> dict:
        data = asdict(self)
        data["passed"] = self.passed
        return data


@dataclass
class NudSample:
    """Разности двух последовательностей решений в момент t."""

    n: int
    t: float
    solution_difference: float
    approximate_difference: float
    reference: float
    lower_constant: float

    # Цепочка неравенства треугольника
    approx_error_first: float
    approx_error_second: float
    chain_holds: bool


@dataclass
class InterpolationRow:
    """Интерполяционная оценка ‖w‖_{H^s} через H^σ и H^k."""

    n: int
    omega: int
    t: float
    norm_s: float
    norm_sigma: float
    norm_k: float
    bound: float
    ratio_alpha: float
    holds: bool


@dataclass
class NudRun:
    """Эксперимент неравномерной зависимости для одной частоты n."""

    n: int
    grid_size: int
    data_difference: float
    data_reference: float
    max_norm_first: float
    max_norm_second: float
    samples: list[NudSample]
    interpolation: list[InterpolationRow]

    # Оценка размера для обеих траекторий
    size_check_first: SizeCheckReport
    size_check_second: SizeCheckReport

    @property
    def size_checks_passed(self) -> bool:
        return self.size_check_first.passed and self.size_check_second.passed


@dataclass
class NudReport:
    """Результат эксперимента неравномерной зависимости."""

    plan: dict
    exponents: ExponentReport
    omegas: tuple[int, int]
    runs: list[NudRun]
    data_slope: float
    expected_data_slope: float
    data_slope_ok: bool
    probe_time: float
    probe_reference: float
    separation_ok: bool
    stability_ok: bool
    interpolation_ok: bool
    chain_ok: bool
    size_checks_passed: bool

    @property
    def passed(self) -> bool:
        return (
            self.data_slope_ok
            and self.separation_ok
            and self.stability_ok
            and self.interpolation_ok
            and self.chain_ok
            and self.size_checks_passed
        )

    def table(self) -> tuple[list[str], list[list]]:
        header = [
            "n",
            "t",
            "data_difference",
            "solution_difference",
            "approximate_difference",
            "reference",
            "lower_constant",
        ]
        rows = [
            [
                run.n,
                sample.t,
                run.data_difference,
                sample.solution_difference,
                sample.approximate_difference,
                sample.reference,
                sample.lower_constant,
            ]
            for run in self.runs
            for sample in run.samples
        ]
        return header, rows

    def to_dict(self) -> dict:
        data = asdict(self)
        data["passed"] = self.passed
        return data


@dataclass
class InterpolationTripleResult:
    """Интерполяционное неравенство для одной тройки (s1, s, s2)."""

    s1: float
    s: float
    s2: float
    count: int
    violations: int
    max_ratio: float
    single_mode_deviation: float

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.single_mode_deviation <= 1e-12


@dataclass
class InterpolationReport:
    """Результат проверки интерполяционного неравенства."""

    seed: int
    modes: int
    results: list[InterpolationTripleResult]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def table(self) -> tuple[list[str], list[list]]:
        header = ["s1", "s", "s2", "count", "violations", "max_ratio", "single_mode_deviation"]
        rows = [
            [r.s1, r.s, r.s2, r.count, r.violations, r.max_ratio, r.single_mode_deviation]
            for r in self.results
        ]
        return header, rows

    def to_dict(self) -> dict:
        data = asdict(self)
        data["passed"] = self.passed
        return data
