"""Невязки E, F приближённых решений и их ведущие члены."""

import logging
import math

import numpy as np

from app.services.model import StatePair, SystemParams, rhs
from app.services.spectral import (
    PeriodicGrid,
    SpectralField,
    derivative,
    helmholtz_inverse,
)

from .models import ApproxConfig
from .solutions import approximate_solution, check_frequency, time_derivative

logger = logging.getLogger(__name__)


def residual(cfg: ApproxConfig, params: SystemParams, t: float, grid: PeriodicGrid) -> StatePair:
    """
    Невязка (E, F) приближённого решения.

    E = ∂t u + v^p u_x + I₁, F = ∂t v + u^q v_x + I₂; производные по времени
    аналитические, пространственные члены спектральные.
    """
    state = approximate_solution(cfg, params, t, grid)
    return time_derivative(cfg, params, t, grid) - rhs(state, params)


def burgers_cancellation(
    cfg: ApproxConfig, params: SystemParams, t: float, grid: PeriodicGrid
) -> StatePair:
    """∂t u + (постоянная часть v^p)·u_x и зеркально для v; тождественно ноль."""
    state = approximate_solution(cfg, params, t, grid)
    state_t = time_derivative(cfg, params, t, grid)

    u_term = state_t.u + state.v.mean**params.p * derivative(state.u)
    v_term = state_t.v + state.u.mean**params.q * derivative(state.v)
    return StatePair(u_term, v_term)


def _cos_sin(
    grid: PeriodicGrid, n: int, amplitude: float, alpha: float, beta: float
) -> SpectralField:
    # amplitude·cos(nx-α)·sin(nx-β) = (A/2)·sin(2nx-α-β) + (A/2)·sin(α-β)
    constant = SpectralField.constant(grid, amplitude / 2 * math.sin(alpha - beta))
    return constant + SpectralField.sine(grid, 2 * n, amplitude=amplitude / 2, phase=alpha + beta)


def _sin_sin(
    grid: PeriodicGrid, n: int, amplitude: float, alpha: float, beta: float
) -> SpectralField:
    # amplitude·sin(nx-α)·sin(nx-β) = (A/2)·cos(α-β) - (A/2)·cos(2nx-α-β)
    constant = SpectralField.constant(grid, amplitude / 2 * math.cos(alpha - beta))
    return constant + SpectralField.cosine(
        grid, 2 * n, amplitude=-amplitude / 2, phase=alpha + beta
    )


def _leading_component(
    grid: PeriodicGrid,
    cfg: ApproxConfig,
    power: int,
    coeff: float,
    carrier_exp: float,
    own_shift: float,
    other_shift: float,
) -> SpectralField:
    """
    Ведущие члены невязки одной компоненты.

    Для E: power = p, coeff = a, carrier_exp = 1/q, собственная фаза φ = nx - ω^p t,
    фаза второй компоненты θ = nx - ω^q t. В v^p оставлен только линейный по волне член.
    """
    n, s, omega = cfg.n, cfg.s, cfg.omega
    wave_scale = omega ** (power - 1) * n ** (1 / power - 2 * s)

    # Бюргерс: -p ω^{p-1} n^{1/p-2s} cosθ sinφ
    burgers = _cos_sin(grid, n, -power * wave_scale, other_shift, own_shift)

    # Локальная часть под (1-∂²)^{-1}
    carrier_wave = SpectralField.sine(
        grid,
        n,
        amplitude=-coeff * omega**power * n ** (1 / power - carrier_exp - s),
        phase=other_shift,
    )
    wave_wave = _cos_sin(
        grid, n, (-coeff + (power - coeff) * n**2) * wave_scale, own_shift, other_shift
    )

    # Поток под (1-∂²)^{-1}∂x: p ω^{p-1} n^{1/p-2s+1} sinφ sinθ
    flux = _sin_sin(grid, n, power * n * wave_scale, own_shift, other_shift)

    return burgers + helmholtz_inverse(carrier_wave + wave_wave) + helmholtz_inverse(
        derivative(flux)
    )


def leading_error_expansion(
    cfg: ApproxConfig, params: SystemParams, t: float, grid: PeriodicGrid
) -> StatePair:
    """
    Замкнутая форма ведущих членов (E, F) с отброшенными пренебрежимыми членами.

    Множители Гельмгольца применяются к каждой моде точно. При p = 1 (q = 1)
    разложение соответствующей компоненты совпадает с полной невязкой.
    """
    check_frequency(cfg.n, grid)
    u_shift = cfg.omega**params.p * t
    v_shift = cfg.omega**params.q * t

    e_lead = _leading_component(grid, cfg, params.p, params.a, 1 / params.q, u_shift, v_shift)
    f_lead = _leading_component(grid, cfg, params.q, params.b, 1 / params.p, v_shift, u_shift)
    return StatePair(e_lead, f_lead)


def roundoff_floor(n: int, s: float, sigma: float) -> float:
    """
    Уровень ошибок округления для ‖E - E_lead‖_{H^σ}.

    Это размер отдельных сокращающихся членов √π n^{-s}(1+n²)^{σ/2}, умноженный на 100ε.
    """
    eps = float(np.finfo(float).eps)
    return 100 * eps * math.sqrt(math.pi) * n ** (-s) * (1 + n**2) ** (sigma / 2)
