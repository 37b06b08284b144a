"""Настройки конфигурации."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.constants import ARTIFACTS_DIR, DEFAULT_BLOWUP_THRESHOLD, DEFAULT_CFL


class Config(BaseSettings):
    """Конфигурация приложения (переменные окружения с префиксом GCH2_ и .env)."""

    model_config = SettingsConfigDict(
        env_file=".env", env_prefix="GCH2_", case_sensitive=False, extra="ignore"
    )

    # Параллельные запуски по n (fallback для --jobs)
    jobs: int = Field(default=1, ge=1)

    # Интегратор
    cfl: float = Field(default=DEFAULT_CFL, gt=0)
    blowup_threshold: float = Field(default=DEFAULT_BLOWUP_THRESHOLD, gt=0)

    # Вывод
    artifacts_dir: str = Field(default=ARTIFACTS_DIR)
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"

    @field_validator("log_level", mode="before")
    @classmethod
    def _normalize_log_level(cls, value):
        return value.upper() if isinstance(value, str) else value


class RunConfig(BaseModel):
    """
    Эффективная конфигурация запуска подкоманды.

    Собирается из JSON-файла конфигурации и флагов командной строки (флаги важнее).
    Неизвестные ключи файла конфигурации считаются ошибкой.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    subcommand: Literal[
        "residual-scan", "diff-growth", "nud", "solve", "check-interp", "make-acceptance"
    ]

    # Система
    system: str | None = None
    p: int | None = Field(default=None, ge=1)
    q: int | None = Field(default=None, ge=1)
    a: float | None = None
    b: float | None = None

    # План
    s: float | None = None
    sigma: float | None = None
    n: tuple[int, ...] | None = None
    T: float | None = Field(default=None, gt=0)
    omega: int | None = None
    cfl: float | None = Field(default=None, gt=0)
    jobs: int | None = Field(default=None, ge=1)

    # Интерполяционная проверка
    count: int | None = Field(default=None, ge=1)
    seed: int | None = None
    modes: int | None = Field(default=None, ge=1)
    triple: tuple[tuple[float, float, float], ...] | None = None

    # Вывод
    out: str | None = None
    summary: str | None = None
    format: Literal["csv", "json"] = "csv"
    fast: bool = False

    @field_validator("n", mode="before")
    @classmethod
    def _parse_n(cls, value):
        if isinstance(value, str):
            return tuple(int(item) for item in value.split(",") if item.strip())
        return value

    @field_validator("triple", mode="before")
    @classmethod
    def _parse_triple(cls, value):
        if value is None:
            return value
        if isinstance(value, str):
            value = [value]
        return tuple(
            tuple(float(item) for item in entry.split(",")) if isinstance(entry, str) else entry
            for entry in value
        )
