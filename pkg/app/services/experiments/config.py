"""Конфигурация экспериментов."""

import logging

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.constants import (
    DEFAULT_BLOWUP_THRESHOLD,
    DEFAULT_CFL,
    DEFAULT_N_LIST,
    DEFAULT_SIGMA,
    DEFAULT_T,
    GRID_FACTOR,
    PROBE_TIME,
    RECORD_COUNT,
    SAMPLE_TIMES,
    SLOPE_TOLERANCE,
)
from app.services.errors import FrequencyError
from app.services.model import SystemParams
from app.services.spectral import PeriodicGrid

logger = logging.getLogger(__name__)


class ExperimentPlan(BaseModel):
    """План эксперимента: система, гладкости, набор частот и правила сетки/шага."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    params: SystemParams
    s: float = Field(gt=2.5)
    sigma: float = DEFAULT_SIGMA
    n_list: tuple[int, ...] = DEFAULT_N_LIST
    T: float = Field(default=DEFAULT_T, gt=0)
    cfl: float = Field(default=DEFAULT_CFL, gt=0)

    # Знак несущей для скана невязок
    omega: int = 1

    sample_times: tuple[float, ...] = SAMPLE_TIMES
    probe_time: float = Field(default=PROBE_TIME, gt=0)
    record_count: int = Field(default=RECORD_COUNT, ge=1)
    blowup_threshold: float = Field(default=DEFAULT_BLOWUP_THRESHOLD, gt=0)
    grid_factor: int = Field(default=GRID_FACTOR, ge=4)
    tolerance: float = Field(default=SLOPE_TOLERANCE, gt=0)

    @field_validator("n_list")
    @classmethod
    def _check_n_list(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if not value:
            raise ValueError("n_list must not be empty")
        if any(n < 1 for n in value):
            raise ValueError(f"n_list must contain positive integers, got {value}")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError(f"n_list must be strictly increasing, got {value}")
        return value

    @field_validator("omega")
    @classmethod
    def _check_omega(cls, value: int) -> int:
        if value not in (-1, 0, 1):
            raise ValueError(f"omega must be one of -1, 0, 1, got {value}")
        return value

    @model_validator(mode="after")
    def _check_times(self) -> "ExperimentPlan":
        if self.sigma >= self.s:
            raise ValueError(f"sigma must be below s, got sigma={self.sigma}, s={self.s}")
        if self.probe_time > self.T:
            raise ValueError(f"probe_time {self.probe_time} exceeds T={self.T}")
        if self.T >= 1:
            logger.warning(f"[Plan] T={self.T:g} is outside the window 0 <= t <= T < 1")
        return self

    @property
    def effective_sample_times(self) -> tuple[float, ...]:
        """Моменты выборки внутри (0, T] вместе с probe_time."""
        times = {t for t in self.sample_times if 0 < t <= self.T}
        times.add(self.probe_time)
        return tuple(sorted(times))

    @property
    def record_times(self) -> tuple[float, ...]:
        """Равномерная сетка record_count моментов плюс моменты выборки."""
        times = {*self.effective_sample_times, self.T}
        for i in range(self.record_count - 1):
            t = self.T * (i + 1) / self.record_count
            # Моменты выборки точные, близкие к ним равномерные точки пропускаются
            if all(abs(t - existing) > 1e-9 for existing in times):
                times.add(t)
        return tuple(sorted(times))

    def grid_size(self, n: int) -> int:
        """N(n): наименьшая степень двойки >= grid_factor·max(p, q, 2)·n."""
        target = self.grid_factor * max(self.params.p, self.params.q, 2) * n
        size = 8
        while size < target:
            size *= 2
        return size

    def grid(self, n: int) -> PeriodicGrid:
        """Сетка для частоты n с проверкой запаса по деалиасингу."""
        grid = PeriodicGrid(self.grid_size(n))
        if n > grid.size // 8 or (self.params.max_power + 1) * n > grid.cutoff:
            raise FrequencyError(f"Grid N={grid.size} cannot resolve products of mode n={n}")
        return grid

    def to_dict(self) -> dict:
        """План вместе с правилами сетки и шага для воспроизводимости."""
        data = self.model_dump()
        data["grid_sizes"] = {str(n): self.grid_size(n) for n in self.n_list}
        data["dt_rule"] = f"dt = {self.cfl:g} / (n_max_freq * max(1, sup|v|^p, sup|u|^q))"
        return data
