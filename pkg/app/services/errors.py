"""Исключения лаборатории."""

import math


class LabError(Exception):
    """Базовое исключение лаборатории."""


class GridError(LabError, ValueError):
    """Некорректная периодическая сетка."""


class GridMismatchError(GridError):
    """Операнды заданы на разных сетках."""


class FrequencyError(LabError, ValueError):
    """Частота превышает возможности сетки (возникнет алиасинг)."""


class ConfigError(LabError, ValueError):
    """Некорректные параметры или нарушенное предусловие."""


class BlowUpError(LabError):
    """
    Решение покинуло режим применимости.

    sup-норма превысила порог или появились не-конечные значения.
    """

    def __init__(self, time: float, sup_value: float, trajectory=None):
        self.time = time
        self.sup_value = sup_value
        # Траектория до момента взрыва (если известна)
        self.trajectory = trajectory

        value = "non-finite" if not math.isfinite(sup_value) else f"{sup_value:.3e}"
        super().__init__(f"Blow-up at t={time:.6g}: sup|u|,|v| = {value}")
