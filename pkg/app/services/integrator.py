"""Интегрирование по времени методом Рунге–Кутты 4-го порядка."""

import logging
import math
from dataclasses import asdict, dataclass, field

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.constants import DEFAULT_BLOWUP_THRESHOLD, SIZE_CHECK_SLACK
from app.services.errors import BlowUpError, ConfigError
from app.services.model import StatePair, SystemParams, rhs
from app.services.spectral import SpectralField, pair_norm

logger = logging.getLogger(__name__)


class IntegratorConfig(BaseModel):
    """Параметры интегрирования."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    dt: float = Field(gt=0)
    t_end: float = Field(gt=0)
    blowup_threshold: float = Field(default=DEFAULT_BLOWUP_THRESHOLD, gt=0)
    record_every: int = Field(default=1, ge=1)

    # Явные моменты записи; если заданы, record_every не используется
    record_times: tuple[float, ...] | None = None

    @model_validator(mode="after")
    def _check_record_times(self) -> "IntegratorConfig":
        if self.record_times is None:
            return self
        previous = 0.0
        for time in self.record_times:
            if time <= previous or time > self.t_end:
                raise ValueError(
                    "record_times must increase strictly within (0, t_end], "
                    f"got {self.record_times}"
                )
            previous = time
        return self


@dataclass
class NormSeries:
    """Временной ряд нормы."""

    label: str
    times: list[float]
    values: list[float]

    def __post_init__(self) -> None:
        if len(self.times) != len(self.values):
            raise ConfigError(f"Series '{self.label}': times and values differ in length")

    @property
    def sup(self) -> float:
        return max(self.values) if self.values else 0.0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Trajectory:
    """Записанные состояния решения."""

    times: list[float] = field(default_factory=list)
    states: list[StatePair] = field(default_factory=list)

    @property
    def final(self) -> StatePair:
        return self.states[-1]

    def norm_series(self, s: float, label: str | None = None) -> NormSeries:
        """Ряд ‖(u,v)(t)‖_s по записанным моментам."""
        values = [pair_norm(state.u, state.v, s) for state in self.states]
        return NormSeries(label=label or f"pair_norm_H{s:g}", times=list(self.times), values=values)

    def at(self, time: float, tol: float = 1e-12) -> StatePair:
        """Состояние в записанный момент времени."""
        for recorded, state in zip(self.times, self.states):
            if abs(recorded - time) <= tol:
                return state
        raise ConfigError(f"Time {time} was not recorded")


@dataclass
class SizeCheckReport:
    """Результат проверки ‖(u,v)(t)‖_s <= 2‖(u0,v0)‖_s."""

    passed: bool
    s: float
    initial_norm: float
    max_norm: float
    bound: float
    violations: list[float]

    def to_dict(self) -> dict:
        return asdict(self)


def step_rk4(state: StatePair, params: SystemParams, dt: float, *, t: float = 0.0) -> StatePair:
    """
    Один шаг классического RK4.

    Args:
        state: состояние в момент t
        params: параметры системы
        dt: шаг по времени
        t: текущее время (только для диагностики взрыва)

    Returns:
        состояние в момент t + dt
    """
    if dt <= 0:
        raise ConfigError(f"Time step must be positive, got {dt}")

    k1 = rhs(state, params)
    k2 = rhs(state + (dt / 2) * k1, params)
    k3 = rhs(state + (dt / 2) * k2, params)
    k4 = rhs(state + dt * k3, params)
    result = state + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)

    if not result.is_finite():
        raise BlowUpError(time=t + dt, sup_value=math.inf)
    return result


def integrate(
    u0: SpectralField, v0: SpectralField, params: SystemParams, cfg: IntegratorConfig
) -> Trajectory:
    """
    Проинтегрировать систему от t=0 до cfg.t_end.

    Каждый отрезок между моментами записи делится на ⌈Δ/dt⌉ равных шагов,
    поэтому все запрошенные моменты и t_end достигаются точно.

    Args:
        u0: начальное поле u
        v0: начальное поле v
        params: параметры системы
        cfg: параметры интегрирования

    Returns:
        Trajectory от 0 до t_end

    Raises:
        BlowUpError: sup-норма превысила порог или появились не-конечные значения;
            в исключении лежит траектория до момента взрыва
    """
    state = StatePair(u0, v0)
    trajectory = Trajectory(times=[0.0], states=[state])

    targets = list(cfg.record_times) if cfg.record_times else []
    if not targets or targets[-1] < cfg.t_end:
        targets.append(cfg.t_end)

    logger.debug(
        f"[Solver] N={state.grid.size} dt={cfg.dt:.3e} t_end={cfg.t_end:g} targets={len(targets)}"
    )

    t = 0.0
    step_count = 0
    for target in targets:
        start = t
        span = target - start
        steps = max(1, math.ceil(span / cfg.dt * (1 - 1e-12)))
        h = span / steps

        for i in range(steps):
            try:
                state = step_rk4(state, params, h, t=t)
            except BlowUpError as e:
                raise BlowUpError(e.time, e.sup_value, trajectory) from e

            t = target if i == steps - 1 else start + (i + 1) * h
            step_count += 1

            sup_value = state.max_abs()
            if sup_value > cfg.blowup_threshold:
                raise BlowUpError(t, sup_value, trajectory)

            is_target = i == steps - 1
            if is_target or (cfg.record_times is None and step_count % cfg.record_every == 0):
                trajectory.times.append(t)
                trajectory.states.append(state)

    return trajectory


def size_check(
    trajectory: Trajectory, s: float, slack: float = SIZE_CHECK_SLACK
) -> SizeCheckReport:
    """
    Проверить оценку размера ‖(u,v)(t)‖_s <= 2‖(u0,v0)‖_s с допуском slack.

    Returns:
        SizeCheckReport с флагом passed и моментами нарушений
    """
    if not trajectory.states:
        raise ConfigError("Trajectory is empty")

    series = trajectory.norm_series(s)
    initial = series.values[0]
    bound = 2 * (1 + slack) * initial
    violations = [t for t, value in zip(series.times, series.values) if value > bound]

    return SizeCheckReport(
        passed=not violations,
        s=s,
        initial_norm=initial,
        max_norm=series.sup,
        bound=bound,
        violations=violations,
    )


def cfl_time_step(state: StatePair, params: SystemParams, cfl: float, frequency: int) -> float:
    """dt = cfl / (frequency · max(1, sup|v|^p, sup|u|^q))."""
    if cfl <= 0 or frequency < 1:
        raise ConfigError(f"Invalid CFL inputs: cfl={cfl}, frequency={frequency}")

    speed = max(1.0, state.v.max_abs() ** params.p, state.u.max_abs() ** params.q)
    return cfl / (frequency * speed)
