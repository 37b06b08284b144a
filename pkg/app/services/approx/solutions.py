"""Явное семейство приближённых решений и их разности."""

import logging
import math

from app.services.errors import ConfigError, FrequencyError
from app.services.model import StatePair, SystemParams
from app.services.spectral import PeriodicGrid, SpectralField

from .models import ApproxConfig

logger = logging.getLogger(__name__)


def check_frequency(n: int, grid: PeriodicGrid) -> None:
    """Частота n должна укладываться в четверть полосы сетки."""
    if n < 1 or n > grid.bandwidth // 4:
        raise FrequencyError(
            f"Frequency n={n} exceeds grid capability "
            f"(N={grid.size}, n must be <= {grid.bandwidth // 4})"
        )


def _component(
    grid: PeriodicGrid, cfg: ApproxConfig, carrier_exp: float, phase_power: int, t: float
) -> SpectralField:
    # ω n^{-1/r} + n^{-s} cos(nx - ω^power t)
    carrier = SpectralField.constant(grid, cfg.omega * cfg.n ** (-carrier_exp))
    wave = SpectralField.cosine(
        grid, cfg.n, amplitude=cfg.n ** (-cfg.s), phase=cfg.omega**phase_power * t
    )
    return carrier + wave


def _check_omega(cfg: ApproxConfig, params: SystemParams) -> None:
    if cfg.omega == 0 and not params.both_even:
        raise ConfigError("omega = 0 is only used when both p and q are even")


def approximate_solution(
    cfg: ApproxConfig, params: SystemParams, t: float, grid: PeriodicGrid
) -> StatePair:
    """
    Приближённое решение в момент t.

    u = ω n^{-1/q} + n^{-s} cos(nx - ω^p t),
    v = ω n^{-1/p} + n^{-s} cos(nx - ω^q t).

    Args:
        cfg: ω, n, s
        params: параметры системы
        t: время
        grid: сетка (n <= N/8)

    Returns:
        StatePair (u, v)
    """
    _check_omega(cfg, params)
    check_frequency(cfg.n, grid)

    u = _component(grid, cfg, 1 / params.q, params.p, t)
    v = _component(grid, cfg, 1 / params.p, params.q, t)
    return StatePair(u, v)


def initial_data(cfg: ApproxConfig, params: SystemParams, grid: PeriodicGrid) -> StatePair:
    """Начальные данные точного решения: приближённое решение при t = 0."""
    return approximate_solution(cfg, params, 0.0, grid)


def time_derivative(
    cfg: ApproxConfig, params: SystemParams, t: float, grid: PeriodicGrid
) -> StatePair:
    """Аналитическая ∂t: (ω^p n^{-s} sin(nx - ω^p t), ω^q n^{-s} sin(nx - ω^q t))."""
    _check_omega(cfg, params)
    check_frequency(cfg.n, grid)

    amplitude = cfg.n ** (-cfg.s)
    u_speed = cfg.omega**params.p
    v_speed = cfg.omega**params.q

    u_t = SpectralField.sine(grid, cfg.n, amplitude=u_speed * amplitude, phase=u_speed * t)
    v_t = SpectralField.sine(grid, cfg.n, amplitude=v_speed * amplitude, phase=v_speed * t)
    return StatePair(u_t, v_t)


def _explicit_component(
    grid: PeriodicGrid, n: int, s: float, carrier_exp: float, power: int, t: float
) -> SpectralField:
    # 2n^{-1/r} - 2n^{-s} sin(nx - t(1+(-1)^power)/2) sin(((-1)^power - 1)t/2)
    sign = (-1) ** power
    amplitude = -2 * n ** (-s) * math.sin((sign - 1) * t / 2)
    carrier = SpectralField.constant(grid, 2 * n ** (-carrier_exp))
    return carrier + SpectralField.sine(grid, n, amplitude=amplitude, phase=t * (1 + sign) / 2)


def explicit_difference(
    n: int, params: SystemParams, s: float, t: float, grid: PeriodicGrid
) -> StatePair:
    """
    Разность приближённых решений ω=1 и ω=-1 в замкнутой форме.

    Raises:
        ConfigError: p и q оба чётные (там используется пара ω ∈ {1, 0})
    """
    if params.both_even:
        raise ConfigError("Closed-form difference needs p or q odd; use omegas (1, 0) instead")
    check_frequency(n, grid)

    u = _explicit_component(grid, n, s, 1 / params.q, params.p, t)
    v = _explicit_component(grid, n, s, 1 / params.p, params.q, t)
    return StatePair(u, v)


def separation_omegas(params: SystemParams) -> tuple[int, int]:
    """Пара ω, разделяющая решения: (1, -1), для чётных p и q - (1, 0)."""
    return (1, 0) if params.both_even else (1, -1)


def approximate_difference(
    n: int,
    params: SystemParams,
    s: float,
    t: float,
    grid: PeriodicGrid,
    omegas: tuple[int, int] | None = None,
) -> StatePair:
    """Разность приближённых решений для пары ω."""
    first, second = omegas or separation_omegas(params)
    return approximate_solution(
        ApproxConfig(omega=first, n=n, s=s), params, t, grid
    ) - approximate_solution(ApproxConfig(omega=second, n=n, s=s), params, t, grid)


def separation_reference(params: SystemParams, t: float) -> float:
    """
    Предел ‖разности приближённых решений‖_s при n -> ∞.

    Каждая нечётная степень даёт 2√π|sin t|; для чётных p и q с ω ∈ {1, 0}
    обе компоненты дают по 2√π|sin(t/2)|.
    """
    if params.both_even:
        return 4 * math.sqrt(math.pi) * abs(math.sin(t / 2))

    odd_count = sum(power % 2 for power in (params.p, params.q))
    return 2 * math.sqrt(math.pi) * odd_count * abs(math.sin(t))


def data_difference_reference(params: SystemParams, n: int) -> float:
    """‖разности начальных данных‖_s: |ω1-ω2|·√(2π)(n^{-1/q} + n^{-1/p})."""
    first, second = separation_omegas(params)
    carriers = n ** (-1 / params.q) + n ** (-1 / params.p)
    return abs(first - second) * math.sqrt(2 * math.pi) * carriers
