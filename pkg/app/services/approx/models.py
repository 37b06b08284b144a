"""Модели данных для приближённых решений."""

from dataclasses import asdict, dataclass

from pydantic import BaseModel, ConfigDict, Field, field_validator


class ApproxConfig(BaseModel):
    """Член семейства приближённых решений: знак несущей ω, частота n, гладкость s."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    omega: int = 1
    n: int = Field(ge=1)
    s: float

    @field_validator("omega")
    @classmethod
    def _check_omega(cls, value: int) -> int:
        if value not in (-1, 0, 1):
            raise ValueError(f"omega must be one of -1, 0, 1, got {value}")
        return value


@dataclass
class ExponentReport:
    """Предсказанные показатели убывания невязки и разности."""

    s: float
    sigma: float
    r: float
    j: float
    r_branch: str
    j_branch: str

    # Точные показатели с учётом множителя Гельмгольца
    sharp_r: float
    sharp_j: float

    beta: float
    alpha: float
    k: int

    def to_dict(self) -> dict:
        return asdict(self)
