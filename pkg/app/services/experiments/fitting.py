"""Оценка показателя степени по точкам в логарифмическом масштабе."""

import numpy as np

from app.services.errors import ConfigError


def fit_slope(pairs: list[tuple[float, float]]) -> float:
    """
    Наклон МНК-прямой log(value) от log(n).

    Args:
        pairs: список (n, value), values > 0

    Returns:
        наклон (показатель степени)
    """
    if len(pairs) < 2:
        raise ConfigError("Need at least two points to fit a slope")

    abscissae = np.array([n for n, _ in pairs], dtype=float)
    values = np.array([value for _, value in pairs], dtype=float)
    if np.any(abscissae <= 0) or np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise ConfigError(f"Slope fit needs positive finite points, got {pairs}")

    coefficients = np.polyfit(np.log(abscissae), np.log(values), 1)
    return float(coefficients[0])
