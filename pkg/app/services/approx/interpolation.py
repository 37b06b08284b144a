"""Интерполяционное неравенство для соболевских норм."""

import numpy as np

from app.services.errors import ConfigError
from app.services.spectral import PeriodicGrid, SpectralField, sobolev_norm


def interpolation_bound(
    field: SpectralField, s1: float, s: float, s2: float
) -> tuple[float, float]:
    """
    Обе части ‖f‖_{H^s} <= ‖f‖_{H^{s1}}^θ ‖f‖_{H^{s2}}^{1-θ}, θ = (s2-s)/(s2-s1).

    Returns:
        (lhs, rhs)
    """
    if not s1 < s < s2:
        raise ConfigError(f"Need s1 < s < s2, got ({s1}, {s}, {s2})")

    theta = (s2 - s) / (s2 - s1)
    lhs = sobolev_norm(field, s)
    rhs = sobolev_norm(field, s1) ** theta * sobolev_norm(field, s2) ** (1 - theta)
    return lhs, rhs


def random_trig_polynomial(
    grid: PeriodicGrid, modes: int, rng: np.random.Generator
) -> SpectralField:
    """Случайный вещественный тригонометрический многочлен степени modes."""
    if modes >= grid.bandwidth:
        raise ConfigError(f"{modes} modes do not fit on grid N={grid.size}")

    coeffs = np.zeros(grid.size // 2 + 1, dtype=complex)
    coeffs[0] = rng.standard_normal()
    coeffs[1 : modes + 1] = rng.standard_normal(modes) + 1j * rng.standard_normal(modes)
    return SpectralField(grid, coeffs)
