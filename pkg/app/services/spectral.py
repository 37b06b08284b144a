"""Периодическая сетка, спектральные поля и фурье-мультипликаторы."""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from app.services.errors import ConfigError, FrequencyError, GridError, GridMismatchError

logger = logging.getLogger(__name__)

MIN_GRID_SIZE = 8


@dataclass(frozen=True)
class PeriodicGrid:
    """Равномерная сетка x_j = 2πj/N на [0, 2π)."""

    size: int

    def __post_init__(self) -> None:
        if self.size < MIN_GRID_SIZE or self.size % 2 != 0:
            raise GridError(f"Grid size must be even and >= {MIN_GRID_SIZE}, got {self.size}")

    @property
    def spacing(self) -> float:
        return 2 * np.pi / self.size

    @property
    def points(self) -> np.ndarray:
        return self.spacing * np.arange(self.size)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Неотрицательные волновые числа k = 0..N/2."""
        return np.arange(self.size // 2 + 1, dtype=float)

    @property
    def bandwidth(self) -> int:
        return self.size // 2

    @property
    def cutoff(self) -> int:
        """Граница правила 2/3: моды с |k| > N/3 обнуляются."""
        return self.size // 3

    @property
    def multiplicity(self) -> np.ndarray:
        """Сколько раз мода k входит в полный спектр (k и -k)."""
        weights = np.full(self.size // 2 + 1, 2.0)
        weights[0] = 1.0
        weights[-1] = 1.0
        return weights


@dataclass(frozen=True, eq=False)
class SpectralField:
    """
    Вещественное периодическое поле в виде коэффициентов Фурье.

    Хранится неотрицательная половина спектра k = 0..N/2 с нормировкой
    c(k) = (1/2π)∫ f(x) e^{-ikx} dx; отрицательные моды восстанавливаются
    эрмитовой симметрией c(-k) = conj(c(k)).
    """

    grid: PeriodicGrid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=complex)
        expected = (self.grid.size // 2 + 1,)
        if coeffs.shape != expected:
            raise GridError(
                f"Expected {expected[0]} coefficients for N={self.grid.size}, got {coeffs.shape}"
            )

        # Нулевая мода и мода Найквиста у вещественного поля вещественны
        coeffs[0] = coeffs[0].real
        coeffs[-1] = coeffs[-1].real
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zeros(cls, grid: PeriodicGrid) -> "SpectralField":
        return cls(grid, np.zeros(grid.size // 2 + 1, dtype=complex))

    @classmethod
    def constant(cls, grid: PeriodicGrid, value: float) -> "SpectralField":
        coeffs = np.zeros(grid.size // 2 + 1, dtype=complex)
        coeffs[0] = value
        return cls(grid, coeffs)

    @classmethod
    def from_values(cls, grid: PeriodicGrid, values: np.ndarray) -> "SpectralField":
        """Построить поле по значениям в узлах сетки."""
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.size,):
            raise GridError(f"Expected {grid.size} grid values, got shape {values.shape}")
        return cls(grid, np.fft.rfft(values) / grid.size)

    @classmethod
    def from_function(
        cls, grid: PeriodicGrid, func: Callable[[np.ndarray], np.ndarray]
    ) -> "SpectralField":
        """Построить поле, вычислив функцию в узлах сетки."""
        points = grid.points
        return cls.from_values(grid, np.broadcast_to(func(points), points.shape))

    @classmethod
    def cosine(
        cls, grid: PeriodicGrid, k: int, amplitude: float = 1.0, phase: float = 0.0
    ) -> "SpectralField":
        """Мода amplitude·cos(kx - phase), заданная точно в спектре."""
        cls._check_mode(grid, k)
        coeffs = np.zeros(grid.size // 2 + 1, dtype=complex)
        coeffs[k] = 0.5 * amplitude * np.exp(-1j * phase)
        return cls(grid, coeffs)

    @classmethod
    def sine(
        cls, grid: PeriodicGrid, k: int, amplitude: float = 1.0, phase: float = 0.0
    ) -> "SpectralField":
        """Мода amplitude·sin(kx - phase), заданная точно в спектре."""
        cls._check_mode(grid, k)
        coeffs = np.zeros(grid.size // 2 + 1, dtype=complex)
        coeffs[k] = -0.5j * amplitude * np.exp(-1j * phase)
        return cls(grid, coeffs)

    @staticmethod
    def _check_mode(grid: PeriodicGrid, k: int) -> None:
        if not 0 < k < grid.bandwidth:
            raise FrequencyError(f"Mode k={k} is not representable on grid N={grid.size}")

    def values(self) -> np.ndarray:
        """Значения поля в узлах сетки."""
        return np.fft.irfft(self.coeffs * self.grid.size, n=self.grid.size)

    @property
    def mean(self) -> float:
        return float(self.coeffs[0].real)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values())))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.coeffs)))

    def shift(self, x0: float) -> "SpectralField":
        """Сдвиг f(x) -> f(x - x0): коэффициенты поворачиваются на e^{-ikx0}."""
        rotation = np.exp(-1j * self.grid.wavenumbers * x0)
        return SpectralField(self.grid, self.coeffs * rotation)

    def max_active_frequency(self, rel_tol: float = 1e-13) -> int:
        """Наибольшее k с заметной амплитудой (0 для постоянного поля)."""
        magnitudes = np.abs(self.coeffs[1:])
        if magnitudes.size == 0 or magnitudes.max() == 0.0:
            return 0
        active = np.nonzero(magnitudes > rel_tol * magnitudes.max())[0]
        return int(active[-1]) + 1

    def __add__(self, other: "SpectralField") -> "SpectralField":
        check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __neg__(self) -> "SpectralField":
        return SpectralField(self.grid, -self.coeffs)

    def __mul__(self, scalar: float) -> "SpectralField":
        # Поле на поле умножается только через pointwise_product
        if not isinstance(scalar, (int, float, np.integer, np.floating)):
            return NotImplemented
        return SpectralField(self.grid, self.coeffs * float(scalar))

    __rmul__ = __mul__


def check_same_grid(*fields: SpectralField) -> None:
    """Проверить, что все поля заданы на одной сетке."""
    grids = {field.grid for field in fields}
    if len(grids) > 1:
        sizes = sorted(grid.size for grid in grids)
        raise GridMismatchError(f"Fields live on different grids: N={sizes}")


def derivative(field: SpectralField, order: int = 1) -> SpectralField:
    """
    Производная по x порядка order: c(k) -> (ik)^order c(k).

    Для нечётных порядков мода Найквиста обнуляется, иначе поле перестало бы
    быть вещественным.
    """
    if order < 1:
        raise ConfigError(f"Derivative order must be positive, got {order}")

    coeffs = field.coeffs * (1j * field.grid.wavenumbers) ** order
    if order % 2 == 1:
        coeffs[-1] = 0.0
    return SpectralField(field.grid, coeffs)


def helmholtz_inverse(field: SpectralField) -> SpectralField:
    """(1 - ∂x²)^{-1}: свёртка с функцией Грина, мультипликатор 1/(1+k²)."""
    k = field.grid.wavenumbers
    return SpectralField(field.grid, field.coeffs / (1.0 + k**2))


def lambda_power(field: SpectralField, s: float) -> SpectralField:
    """(1 - ∂x²)^{s/2}: мультипликатор (1+k²)^{s/2}."""
    k = field.grid.wavenumbers
    return SpectralField(field.grid, field.coeffs * (1.0 + k**2) ** (s / 2))


def sobolev_norm(field: SpectralField, s: float) -> float:
    """Норма H^s: ‖f‖² = 2π Σ_k (1+k²)^s |c(k)|²."""
    grid = field.grid
    weights = grid.multiplicity * (1.0 + grid.wavenumbers**2) ** s
    return float(np.sqrt(2 * np.pi * np.sum(weights * np.abs(field.coeffs) ** 2)))


def pair_norm(u: SpectralField, v: SpectralField, s: float) -> float:
    """‖(u,v)‖_s = ‖u‖_{H^s} + ‖v‖_{H^s}."""
    check_same_grid(u, v)
    return sobolev_norm(u, s) + sobolev_norm(v, s)


def dealias(field: SpectralField) -> SpectralField:
    """Правило 2/3: обнулить моды с |k| > N/3."""
    coeffs = np.array(field.coeffs)
    coeffs[field.grid.cutoff + 1 :] = 0.0
    return SpectralField(field.grid, coeffs)


def pointwise_product(f: SpectralField, g: SpectralField) -> SpectralField:
    """
    Произведение полей с деалиасингом.

    Средние (нулевые моды) обоих сомножителей перемножаются точно в спектре,
    через узлы сетки проходит только произведение осциллирующих частей.
    Алгебраически это то же произведение, но без потери точности, когда
    малая высокочастотная волна сидит на большой постоянной несущей.
    """
    check_same_grid(f, g)
    grid = f.grid
    size = grid.size

    f_mean, g_mean = f.coeffs[0].real, g.coeffs[0].real
    f_osc = np.array(f.coeffs)
    g_osc = np.array(g.coeffs)
    f_osc[0] = 0.0
    g_osc[0] = 0.0

    osc_product = np.fft.irfft(f_osc * size, n=size) * np.fft.irfft(g_osc * size, n=size)
    coeffs = np.fft.rfft(osc_product) / size + f_mean * g_osc + g_mean * f_osc
    coeffs[0] += f_mean * g_mean

    return dealias(SpectralField(grid, coeffs))
