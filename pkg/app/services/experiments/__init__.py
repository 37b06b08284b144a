"""Сервис экспериментов."""

from .config import ExperimentPlan
from .fitting import fit_slope
from .models import (
    DifferenceGrowthReport,
    InterpolationReport,
    NudReport,
    ResidualScanReport,
)
from .report_writer import artifacts_folder, write_csv, write_json
from .service import ExperimentService
