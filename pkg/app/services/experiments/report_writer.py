"""Запись таблиц (CSV) и сводок (JSON)."""

import csv
import json
import logging
from datetime import datetime
from pathlib import Path

from app.constants import CSV_FLOAT_FORMAT

logger = logging.getLogger(__name__)


def artifacts_folder(base_dir: str | Path, subcommand: str) -> Path:
    """Папка артефактов текущего запуска: <base>/<timestamp>.<subcommand>."""
    timestamp = datetime.now().strftime("%Y-%m-%d_%H-%M-%S")
    folder = Path(base_dir) / f"{timestamp}.{subcommand}"
    folder.mkdir(parents=True, exist_ok=True)
    return folder


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, CSV_FLOAT_FORMAT)
    return str(value)


def write_csv(path: str | Path, header: list[str], rows: list[list]) -> Path:
    """
    Записать таблицу: строка заголовка, запятые, LF, числа с 17 значащими цифрами.

    Args:
        path: путь к файлу
        header: названия колонок
        rows: строки таблицы

    Returns:
        путь к записанному файлу
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(value) for value in row])

    logger.info(f"  ↳ Table: {path} ({len(rows)} rows)")
    return path


def write_json(path: str | Path, payload: dict) -> Path:
    """Записать JSON-сводку."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(payload, ensure_ascii=False, indent=2, default=str)
    path.write_text(text, encoding="utf-8")

    logger.info(f"  ↳ Summary: {path}")
    return path
