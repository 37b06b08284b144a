"""Приёмочный прогон: полная сетка экспериментов одной командой."""

import logging
import math

import numpy as np

from app.constants import (
    ACCEPTANCE_DIFF_N,
    ACCEPTANCE_S,
    ACCEPTANCE_SIGMAS,
    ACCEPTANCE_SYSTEMS,
    CLOSED_FORM_MAX_MODE,
    CLOSED_FORM_PHASES,
    CLOSED_FORM_RTOL,
    CLOSED_FORM_SIGMAS,
    DEFAULT_CFL,
    DEFAULT_N_LIST,
    DEFAULT_SIGMA,
    INTERPOLATION_COUNT,
    INTERPOLATION_MODES,
    INTERPOLATION_TRIPLES,
)
from app.services.model import SystemParams
from app.services.spectral import PeriodicGrid, SpectralField, sobolev_norm

from .config import ExperimentPlan
from .service import ExperimentService

logger = logging.getLogger(__name__)


def sobolev_closed_form_check(
    max_mode: int = CLOSED_FORM_MAX_MODE,
    sigmas: tuple[float, ...] = CLOSED_FORM_SIGMAS,
    phases: int = CLOSED_FORM_PHASES,
    seed: int = 0,
) -> dict:
    """
    ‖cos(nx - α)‖_{H^σ} = √π(1+n²)^{σ/2} для выборки с сетки.

    Returns:
        словарь с максимальной относительной ошибкой и флагом passed
    """
    grid = PeriodicGrid(4 * max_mode)
    rng = np.random.default_rng(seed)
    alphas = rng.uniform(0, 2 * np.pi, size=phases)

    max_error = 0.0
    for n in range(1, max_mode + 1):
        for alpha in alphas:
            field = SpectralField.from_function(grid, lambda x: np.cos(n * x - alpha))
            for sigma in sigmas:
                expected = math.sqrt(math.pi) * (1 + n**2) ** (sigma / 2)
                max_error = max(max_error, abs(sobolev_norm(field, sigma) / expected - 1))

    return {"max_relative_error": max_error, "passed": max_error <= CLOSED_FORM_RTOL}


def _system(p: int, q: int, a: float, b: float) -> SystemParams:
    return SystemParams(p=p, q=q, a=a, b=b)


def run_acceptance(
    service: ExperimentService,
    fast: bool = False,
    cfl: float = DEFAULT_CFL,
    seed: int = 0,
) -> dict:
    """
    Прогнать приёмочную сетку.

    Args:
        service: сервис экспериментов
        fast: только быстрые критерии (замкнутые формы, невязки, интерполяция)
        cfl: константа CFL для прогонов решателя
        seed: зерно для случайных выборок

    Returns:
        словарь {критерий: {"passed": ..., ...}}
    """
    total = 4 if fast else 7
    criteria: dict[str, dict] = {}

    logger.info(f"[1/{total}] Spectral closed forms")
    criteria["closed_forms"] = sobolev_closed_form_check(seed=seed)

    logger.info(f"[2/{total}] Residual decay and leading-term fidelity")
    scans = []
    for system in ACCEPTANCE_SYSTEMS:
        for s in ACCEPTANCE_S:
            for sigma in ACCEPTANCE_SIGMAS:
                plan = ExperimentPlan(
                    params=_system(*system), s=s, sigma=sigma, n_list=DEFAULT_N_LIST
                )
                scans.append(service.residual_decay_scan(plan))

    criteria["residual_decay"] = {
        "passed": all(v.bound_ok and v.sharp_ok for scan in scans for v in scan.verdicts),
        "scans": [scan.to_dict() for scan in scans],
    }
    criteria["leading_fidelity"] = {
        "passed": all(v.fidelity_ok for scan in scans for v in scan.verdicts),
    }

    logger.info(f"[3/{total}] Interpolation inequality")
    interpolation = service.interpolation_check(
        INTERPOLATION_TRIPLES, INTERPOLATION_COUNT, seed, INTERPOLATION_MODES
    )
    criteria["interpolation"] = interpolation.to_dict()

    if fast:
        logger.info(f"[4/{total}] Solver criteria skipped (--fast)")
        return criteria

    ccch = SystemParams.preset("ccch")
    logger.info(f"[4/{total}] Size estimate and difference growth")
    growth = service.difference_growth(
        ExperimentPlan(params=ccch, s=3.0, sigma=DEFAULT_SIGMA, n_list=ACCEPTANCE_DIFF_N, cfl=cfl)
    )
    criteria["difference_growth"] = growth.to_dict()
    size_runs = [
        {"experiment": "diff-growth", "n": run.n, "passed": run.size_check.passed}
        for run in growth.runs
    ]

    for step, system in ((5, ccch), (6, SystemParams.preset("novikov2"))):
        logger.info(f"[{step}/{total}] Nonuniform dependence for p={system.p}, q={system.q}")
        plan = ExperimentPlan(
            params=system, s=3.0, sigma=DEFAULT_SIGMA, n_list=DEFAULT_N_LIST, cfl=cfl
        )
        report = service.nonuniform_dependence(plan)
        name = f"nonuniform_dependence_p{system.p}q{system.q}"
        criteria[name] = report.to_dict()
        size_runs.extend(
            {"experiment": name, "n": run.n, "passed": run.size_checks_passed}
            for run in report.runs
        )

    # Оценка размера проверяется на всех прогонах решателя
    criteria["size_estimate"] = {
        "passed": all(entry["passed"] for entry in size_runs),
        "runs": size_runs,
    }

    logger.info(f"[7/{total}] Acceptance grid finished")
    return criteria
