"""Правая часть обобщённой двухкомпонентной системы Камассы–Холма в нелокальной форме."""

import logging
from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, Field

from app.constants import SYSTEM_PRESETS
from app.services.errors import ConfigError
from app.services.spectral import (
    SpectralField,
    check_same_grid,
    derivative,
    helmholtz_inverse,
    lambda_power,
    pointwise_product,
)

logger = logging.getLogger(__name__)


class SystemParams(BaseModel):
    """Параметры системы (p, q, a, b)."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    p: int = Field(ge=1)
    q: int = Field(ge=1)
    a: float
    b: float

    @classmethod
    def preset(cls, name: str) -> "SystemParams":
        """Именованный член семейства (ccch, dp2, novikov2, mixed)."""
        try:
            return cls(**SYSTEM_PRESETS[name])
        except KeyError:
            known = ", ".join(sorted(SYSTEM_PRESETS))
            raise ConfigError(f"Unknown system preset '{name}', expected one of: {known}")

    def swapped(self) -> "SystemParams":
        """Параметры после перестановки компонент (u,p,a) <-> (v,q,b)."""
        return SystemParams(p=self.q, q=self.p, a=self.b, b=self.a)

    @property
    def max_power(self) -> int:
        return max(self.p, self.q)

    @property
    def both_even(self) -> bool:
        return self.p % 2 == 0 and self.q % 2 == 0


@dataclass(frozen=True)
class StatePair:
    """Пара полей (u, v) на общей сетке."""

    u: SpectralField
    v: SpectralField

    def __post_init__(self) -> None:
        check_same_grid(self.u, self.v)

    @property
    def grid(self):
        return self.u.grid

    def swap(self) -> "StatePair":
        return StatePair(self.v, self.u)

    def shift(self, x0: float) -> "StatePair":
        return StatePair(self.u.shift(x0), self.v.shift(x0))

    def max_abs(self) -> float:
        return max(self.u.max_abs(), self.v.max_abs())

    def is_finite(self) -> bool:
        return self.u.is_finite() and self.v.is_finite()

    def __add__(self, other: "StatePair") -> "StatePair":
        return StatePair(self.u + other.u, self.v + other.v)

    def __sub__(self, other: "StatePair") -> "StatePair":
        return StatePair(self.u - other.u, self.v - other.v)

    def __mul__(self, scalar: float) -> "StatePair":
        return StatePair(self.u * scalar, self.v * scalar)

    __rmul__ = __mul__


def field_power(field: SpectralField, power: int) -> SpectralField:
    """Степень поля повторным произведением с деалиасингом после каждого шага."""
    if power < 1:
        raise ConfigError(f"Power must be positive, got {power}")

    result = field
    for _ in range(power - 1):
        result = pointwise_product(result, field)
    return result


def _nonlocal_term(
    own: SpectralField, other_power: SpectralField, power: int, coeff: float
) -> SpectralField:
    """
    Нелокальный член одной компоненты.

    Для первой компоненты own = u, other_power = v^p:
    (1-∂²)^{-1}[(a/p)(v^p)_x u + ((p-a)/p)(v^p)_x u_xx] + (1-∂²)^{-1}∂x[(v^p)_x u_x].
    """
    power_x = derivative(other_power)
    own_x = derivative(own)
    own_xx = derivative(own, 2)

    local = (coeff / power) * pointwise_product(power_x, own) + (
        (power - coeff) / power
    ) * pointwise_product(power_x, own_xx)
    flux = derivative(pointwise_product(power_x, own_x))

    return helmholtz_inverse(local) + helmholtz_inverse(flux)


def nonlocal_I1(state: StatePair, params: SystemParams) -> SpectralField:
    """Нелокальный член I₁(u, v) уравнения для u."""
    v_power = field_power(state.v, params.p)
    return _nonlocal_term(state.u, v_power, params.p, params.a)


def nonlocal_I2(state: StatePair, params: SystemParams) -> SpectralField:
    """Нелокальный член I₂(u, v): зеркальная формула с (v, q, b)."""
    u_power = field_power(state.u, params.q)
    return _nonlocal_term(state.v, u_power, params.q, params.b)


def rhs(state: StatePair, params: SystemParams) -> StatePair:
    """
    Производная по времени (-v^p u_x - I₁, -u^q v_x - I₂).

    Args:
        state: текущие поля (u, v)
        params: параметры системы

    Returns:
        StatePair с производными по времени обеих компонент
    """
    v_power = field_power(state.v, params.p)
    u_power = field_power(state.u, params.q)

    u_t = -pointwise_product(v_power, derivative(state.u)) - _nonlocal_term(
        state.u, v_power, params.p, params.a
    )
    v_t = -pointwise_product(u_power, derivative(state.v)) - _nonlocal_term(
        state.v, u_power, params.q, params.b
    )
    return StatePair(u_t, v_t)


def momentum(state: StatePair) -> tuple[SpectralField, SpectralField]:
    """Импульсы m = u - u_xx и n = v - v_xx."""
    return lambda_power(state.u, 2), lambda_power(state.v, 2)
