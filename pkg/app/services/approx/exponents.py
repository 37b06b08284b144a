"""Предсказанные показатели степени для невязок и разностей."""

import logging
import math

from app.services.errors import ConfigError
from app.services.model import SystemParams

from .models import ExponentReport

logger = logging.getLogger(__name__)

WAVE_WAVE = "wave-wave"
CARRIER_WAVE = "carrier-wave"


def regularity_index(s: float) -> int:
    """k = ⌊s⌋ + 2."""
    return math.floor(s) + 2


def _branch_exponent(
    s: float, sigma: float, own: int, other: int
) -> tuple[float, str]:
    # own - степень в уравнении компоненты (p для E), other - вторая степень
    threshold = 1 / other - sigma + 4
    if s < threshold:
        return 1 / own - 2 * s + 2, WAVE_WAVE
    return 1 / own - 1 / other - s + sigma - 2, CARRIER_WAVE


def predicted_r_j(
    s: float, sigma: float, params: SystemParams
) -> tuple[float, float, tuple[str, str]]:
    """
    Верхние показатели убывания ‖E‖_{H^σ} ≲ n^r и ‖F‖_{H^σ} ≲ n^j.

    На пороге s = 1/q - σ + 4 обе ветви совпадают, граница отнесена
    к ветви carrier-wave.

    Returns:
        (r, j, (ветвь r, ветвь j))
    """
    r, r_branch = _branch_exponent(s, sigma, params.p, params.q)
    j, j_branch = _branch_exponent(s, sigma, params.q, params.p)
    return r, j, (r_branch, j_branch)


def _sharp_exponent(s: float, sigma: float, own: int, other: int, coeff: float) -> float:
    terms = []
    # Мода 2n: вклад Бюргерса и нелокальной части, сокращается при a = -p
    if coeff != -own:
        terms.append(1 / own - 2 * s)
    # Мода n: несущая на волне, под множителем 1/(1+n²), исчезает при a = 0
    if coeff != 0:
        terms.append(1 / own - 1 / other - s - 2)
    return sigma + max(terms)


def sharp_r_j(s: float, sigma: float, params: SystemParams) -> tuple[float, float]:
    """
    Точные показатели невязки при t = 0.

    Ведущие члены E содержат моду 2n с амплитудой
    ((p+a)/2)·((1+n²)/(1+4n²))·n^{1/p-2s} и моду n с амплитудой a·n^{1/p-1/q-s}/(1+n²),
    откуда ‖E‖_{H^σ} ≍ n^{σ + max(1/p-2s, 1/p-1/q-s-2)}. F зеркально.
    """
    sharp_r = _sharp_exponent(s, sigma, params.p, params.q, params.a)
    sharp_j = _sharp_exponent(s, sigma, params.q, params.p, params.b)
    return sharp_r, sharp_j


def predicted_beta(s: float, sigma: float, params: SystemParams) -> float:
    """
    Показатель β для ‖(w,y)‖_σ ≲ n^β: r при p <= q, j при p > q.

    Вне окна 5/2 < σ+1 < s, σ < 2 оценка не гарантирована, пишем предупреждение.
    """
    if not (2.5 < sigma + 1 < s and sigma < 2):
        logger.warning(
            f"[Exponents] sigma={sigma:g}, s={s:g} outside the window 5/2 < sigma+1 < s, sigma < 2"
        )

    r, j, _ = predicted_r_j(s, sigma, params)
    return j if params.p > params.q else r


def predicted_alpha(s: float, sigma: float, beta: float) -> float:
    """α = ((k-s)/(k-σ))(β + s - σ), k = ⌊s⌋+2."""
    if sigma >= s:
        raise ConfigError(f"sigma must be below s, got sigma={sigma}, s={s}")

    k = regularity_index(s)
    return (k - s) / (k - sigma) * (beta + s - sigma)


def exponent_report(s: float, sigma: float, params: SystemParams) -> ExponentReport:
    """Собрать все предсказанные показатели для (s, σ, params)."""
    r, j, (r_branch, j_branch) = predicted_r_j(s, sigma, params)
    sharp_r, sharp_j = sharp_r_j(s, sigma, params)
    beta = predicted_beta(s, sigma, params)

    return ExponentReport(
        s=s,
        sigma=sigma,
        r=r,
        j=j,
        r_branch=r_branch,
        j_branch=j_branch,
        sharp_r=sharp_r,
        sharp_j=sharp_j,
        beta=beta,
        alpha=predicted_alpha(s, sigma, beta),
        k=regularity_index(s),
    )
