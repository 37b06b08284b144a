"""Командная строка лаборатории: эксперименты над обобщённой системой Камассы–Холма."""

import json
import logging
import sys
from pathlib import Path

import click
from pydantic import ValidationError

from app.config import Config, RunConfig
from app.constants import (
    DEFAULT_N_LIST,
    DEFAULT_SIGMA,
    DEFAULT_T,
    EXIT_BLOWUP,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERDICT_FAILED,
    INTERPOLATION_COUNT,
    INTERPOLATION_MODES,
    INTERPOLATION_TRIPLES,
    PROBE_TIME,
)
from app.services.approx import ApproxConfig, initial_data
from app.services.errors import BlowUpError, ConfigError, LabError
from app.services.experiments import (
    ExperimentPlan,
    ExperimentService,
    artifacts_folder,
    write_csv,
    write_json,
)
from app.services.experiments.acceptance import run_acceptance
from app.services.integrator import IntegratorConfig, cfl_time_step, integrate, size_check
from app.services.model import SystemParams

logging.basicConfig(level=logging.INFO, format="%(message)s")
logger = logging.getLogger(__name__)

PROG_NAME = "gench-lab"


def _banner(title: str) -> None:
    logger.info("╔═══════════════════════════════════════════════════════════╗")
    logger.info(f"║  {title:<57}║")
    logger.info("╚═══════════════════════════════════════════════════════════╝")


def load_run_config(subcommand: str, flags: dict, config_path: str | None) -> RunConfig:
    """
    Собрать эффективную конфигурацию: файл конфигурации, поверх него флаги.

    Args:
        subcommand: имя подкоманды
        flags: значения флагов click (None - флаг не задан)
        config_path: путь к JSON-файлу конфигурации

    Returns:
        RunConfig
    """
    data: dict = {}
    if config_path:
        try:
            data = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Cannot read config file {config_path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {config_path} must hold a flat JSON object")
        # Подкоманда задаётся только командной строкой
        if "subcommand" in data:
            raise ConfigError(f"Config file {config_path} must not set 'subcommand'")

    for key, value in flags.items():
        if value is None or value == () or value is False:
            continue
        data[key] = value

    return RunConfig(subcommand=subcommand, **data)


def build_params(run_cfg: RunConfig) -> SystemParams:
    """Параметры системы из пресета и/или флагов --p --q --a --b."""
    values: dict = {}
    if run_cfg.system:
        values = SystemParams.preset(run_cfg.system).model_dump()

    for key in ("p", "q", "a", "b"):
        value = getattr(run_cfg, key)
        if value is not None:
            values[key] = value

    missing = [key for key in ("p", "q", "a", "b") if key not in values]
    if missing:
        flags = ", ".join(f"--{key}" for key in missing)
        raise click.UsageError(f"Missing system parameters: {flags} (or use --system)")
    return SystemParams(**values)


def build_plan(run_cfg: RunConfig, settings: Config) -> ExperimentPlan:
    """План эксперимента из конфигурации запуска."""
    if run_cfg.s is None:
        raise click.UsageError("Missing option '--s'")

    T = run_cfg.T if run_cfg.T is not None else DEFAULT_T
    fields: dict = {
        "params": build_params(run_cfg),
        "s": run_cfg.s,
        "sigma": run_cfg.sigma if run_cfg.sigma is not None else DEFAULT_SIGMA,
        "n_list": run_cfg.n or DEFAULT_N_LIST,
        "T": T,
        # Короткие прогоны проверяют разделение в конечный момент
        "probe_time": min(PROBE_TIME, T),
        "cfl": run_cfg.cfl if run_cfg.cfl is not None else settings.cfl,
        "blowup_threshold": settings.blowup_threshold,
    }
    if run_cfg.omega is not None:
        fields["omega"] = run_cfg.omega
    return ExperimentPlan(**fields)


class OutputWriter:
    """Запись таблицы и сводки для подкоманды."""

    def __init__(self, run_cfg: RunConfig, settings: Config):
        self.run_cfg = run_cfg
        self.settings = settings
        self._folder: Path | None = None

    def _artifacts(self) -> Path:
        if self._folder is None:
            self._folder = artifacts_folder(self.settings.artifacts_dir, self.run_cfg.subcommand)
        return self._folder

    def _summary_path(self) -> Path:
        if self.run_cfg.summary:
            return Path(self.run_cfg.summary)
        if self.run_cfg.out:
            out = Path(self.run_cfg.out)
            return out if self.run_cfg.format == "json" else out.with_suffix(".json")
        return self._artifacts() / "summary.json"

    def save(self, header: list[str] | None, rows: list[list] | None, summary: dict) -> None:
        """Записать CSV (если есть таблица и формат csv) и JSON-сводку с эхом конфигурации."""
        if header is not None and rows is not None and self.run_cfg.format == "csv":
            table = (
                Path(self.run_cfg.out)
                if self.run_cfg.out
                else self._artifacts() / f"{self.run_cfg.subcommand}.csv"
            )
            write_csv(table, header, rows)

        write_json(self._summary_path(), {"config": self.run_cfg.model_dump(), **summary})


def _verdict_code(passed: bool) -> int:
    logger.info(f"\n{'✓' if passed else '✗'} Verdict: {'passed' if passed else 'FAILED'}")
    return EXIT_OK if passed else EXIT_VERDICT_FAILED


def _context(ctx: click.Context, subcommand: str, flags: dict) -> tuple[RunConfig, Config]:
    settings: Config = ctx.obj
    config_path = flags.pop("config", None)
    run_cfg = load_run_config(subcommand, flags, config_path)
    return run_cfg, settings


def _service(run_cfg: RunConfig, settings: Config) -> ExperimentService:
    return ExperimentService(jobs=run_cfg.jobs or settings.jobs)


def common_options(func):
    """Общие флаги системы, плана и вывода."""
    options = [
        click.option("--system", type=click.Choice(["ccch", "dp2", "novikov2", "mixed"])),
        click.option("--p", "p", type=int),
        click.option("--q", "q", type=int),
        click.option("--a", "a", type=float),
        click.option("--b", "b", type=float),
        click.option("--s", "s", type=float, help="Data regularity s."),
        click.option("--sigma", type=float, help="Measurement index σ."),
        click.option("--n", "n", type=str, help="Comma-separated frequencies, e.g. 64,128."),
        click.option("--T", "T", type=float, help="Final time."),
        click.option("--omega", type=int),
        click.option("--cfl", type=float),
        click.option("--config", type=str, help="Flat JSON config file; flags win."),
        click.option("--out", type=str, help="Output table (or summary for --format json)."),
        click.option("--summary", type=str, help="JSON summary path."),
        click.option("--format", "format", type=click.Choice(["csv", "json"])),
        click.option("--jobs", type=int, help="Concurrent per-n runs (fallback: GCH2_JOBS)."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@click.group()
@click.pass_context
def cli(ctx: click.Context) -> None:
    """Численная лаборатория для обобщённой двухкомпонентной системы Камассы–Холма."""
    settings = Config()
    logging.getLogger().setLevel(settings.log_level.upper())
    ctx.obj = settings


@cli.command("residual-scan")
@common_options
@click.pass_context
def residual_scan(ctx: click.Context, **flags) -> int:
    """Скан убывания невязок приближённых решений."""
    run_cfg, settings = _context(ctx, "residual-scan", flags)
    plan = build_plan(run_cfg, settings)
    _banner("RESIDUAL DECAY SCAN")

    report = _service(run_cfg, settings).residual_decay_scan(plan)
    header, rows = report.table()
    OutputWriter(run_cfg, settings).save(header, rows, report.to_dict())
    return _verdict_code(report.passed)


@cli.command("diff-growth")
@common_options
@click.pass_context
def diff_growth(ctx: click.Context, **flags) -> int:
    """Рост разности приближённого и точного решений."""
    run_cfg, settings = _context(ctx, "diff-growth", flags)
    plan = build_plan(run_cfg, settings)
    _banner("DIFFERENCE GROWTH")

    report = _service(run_cfg, settings).difference_growth(plan, omega=plan.omega)
    header, rows = report.table()
    OutputWriter(run_cfg, settings).save(header, rows, report.to_dict())
    return _verdict_code(report.passed)


@cli.command("nud")
@common_options
@click.pass_context
def nud(ctx: click.Context, **flags) -> int:
    """Неравномерная зависимость от начальных данных."""
    run_cfg, settings = _context(ctx, "nud", flags)
    plan = build_plan(run_cfg, settings)
    _banner("NONUNIFORM DEPENDENCE")

    report = _service(run_cfg, settings).nonuniform_dependence(plan)
    header, rows = report.table()
    OutputWriter(run_cfg, settings).save(header, rows, report.to_dict())
    return _verdict_code(report.passed)


@cli.command("solve")
@common_options
@click.pass_context
def solve(ctx: click.Context, **flags) -> int:
    """Проинтегрировать систему из начальных данных семейства и проверить оценку размера."""
    run_cfg, settings = _context(ctx, "solve", flags)
    plan = build_plan(run_cfg, settings)
    n = plan.n_list[0]
    _banner("SOLVE")
    if len(plan.n_list) > 1:
        logger.warning(f"[Solver] solve runs a single frequency; using n={n}, ignoring the rest")

    grid = plan.grid(n)
    cfg = ApproxConfig(omega=plan.omega, n=n, s=plan.s)
    start = initial_data(cfg, plan.params, grid)
    frequency = max(start.u.max_active_frequency(), start.v.max_active_frequency(), 1)
    dt = cfl_time_step(start, plan.params, plan.cfl, frequency)
    logger.info(f"[Solver] n={n}, N={grid.size}, dt={dt:.3e}, T={plan.T:g}")

    trajectory = integrate(
        start.u,
        start.v,
        plan.params,
        IntegratorConfig(
            dt=dt,
            t_end=plan.T,
            blowup_threshold=plan.blowup_threshold,
            record_times=plan.record_times,
        ),
    )
    norm_s = trajectory.norm_series(plan.s)
    norm_sigma = trajectory.norm_series(plan.sigma)
    report = size_check(trajectory, plan.s)
    logger.info(
        f"[Solver] max |(u,v)|_s = {report.max_norm:.6f}, bound {report.bound:.6f}"
    )

    rows = [
        [t, a, b] for t, a, b in zip(norm_s.times, norm_s.values, norm_sigma.values)
    ]
    OutputWriter(run_cfg, settings).save(
        ["t", "norm_s", "norm_sigma"],
        rows,
        {
            "plan": plan.to_dict(),
            "n": n,
            "dt": dt,
            "size_check": report.to_dict(),
            "passed": report.passed,
        },
    )
    return _verdict_code(report.passed)


@cli.command("check-interp")
@click.option("--count", type=int, help="Random fields per triple.")
@click.option("--seed", type=int)
@click.option("--modes", type=int, help="Degree of the random trig polynomials.")
@click.option("--triple", multiple=True, help="s1,s,s2 (repeatable).")
@click.option("--config", type=str)
@click.option("--out", type=str)
@click.option("--summary", type=str)
@click.option("--format", "format", type=click.Choice(["csv", "json"]))
@click.pass_context
def check_interp(ctx: click.Context, **flags) -> int:
    """Интерполяционное неравенство на случайных тригонометрических многочленах."""
    run_cfg, settings = _context(ctx, "check-interp", flags)
    _banner("INTERPOLATION CHECK")

    report = ExperimentService().interpolation_check(
        run_cfg.triple or INTERPOLATION_TRIPLES,
        run_cfg.count or INTERPOLATION_COUNT,
        run_cfg.seed if run_cfg.seed is not None else 0,
        run_cfg.modes or INTERPOLATION_MODES,
    )
    header, rows = report.table()
    OutputWriter(run_cfg, settings).save(header, rows, report.to_dict())
    return _verdict_code(report.passed)


@cli.command("make-acceptance")
@click.option("--fast", is_flag=True, help="Skip the solver criteria.")
@click.option("--cfl", type=float)
@click.option("--seed", type=int)
@click.option("--jobs", type=int)
@click.option("--config", type=str)
@click.option("--summary", type=str)
@click.pass_context
def make_acceptance(ctx: click.Context, **flags) -> int:
    """Прогнать всю приёмочную сетку одной командой."""
    run_cfg, settings = _context(ctx, "make-acceptance", flags)
    _banner("ACCEPTANCE GRID")

    criteria = run_acceptance(
        _service(run_cfg, settings),
        fast=run_cfg.fast,
        cfl=run_cfg.cfl if run_cfg.cfl is not None else settings.cfl,
        seed=run_cfg.seed if run_cfg.seed is not None else 0,
    )
    passed = all(criterion["passed"] for criterion in criteria.values())

    logger.info("───────────────────────────────────────────────────────────")
    for name, criterion in criteria.items():
        logger.info(f"  {'✓' if criterion['passed'] else '✗'} {name}")
    logger.info("───────────────────────────────────────────────────────────")

    OutputWriter(run_cfg, settings).save(None, None, {"criteria": criteria, "passed": passed})
    return _verdict_code(passed)


def parse_and_dispatch(argv: list[str] | None = None) -> int:
    """
    Разобрать аргументы, выполнить подкоманду и вернуть код выхода.

    Returns:
        0 - успех, 1 - вердикт не прошёл, 2 - ошибка использования/конфигурации, 3 - взрыв решения
    """
    try:
        result = cli.main(args=argv, prog_name=PROG_NAME, standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        return EXIT_USAGE
    except BlowUpError as e:
        logger.error(f"✗ {e}")
        return EXIT_BLOWUP
    except (LabError, ValidationError, OSError) as e:
        logger.error(f"✗ Configuration error: {e}")
        return EXIT_USAGE

    return result if isinstance(result, int) else EXIT_OK


def run() -> None:
    """Точка входа консольного скрипта."""
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    run()
