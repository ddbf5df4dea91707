"""Persisted defaults for primes, enumeration caps and workers."""

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

from groupoidal.constants import (
    CONFIG_DIR_MODE,
    CONFIG_FILE_MODE,
    DEFAULT_CHECK_WORKERS,
    DEFAULT_MAX_MORPHISMS,
    DEFAULT_MAX_SG_SUBSETS,
    DEFAULT_PRIME,
    get_logger,
)

logger = get_logger("config")

CONFIG_DIR = Path.home() / ".config" / "ggal"
CONFIG_FILE = CONFIG_DIR / "config.json"


def _secure_mkdir(path: Path) -> None:
    """Create directory with owner-only permissions."""
    path.mkdir(parents=True, exist_ok=True)
    try:
        os.chmod(path, CONFIG_DIR_MODE)
    except OSError as e:
        logger.warning(f"Не удалось установить права на директорию {path}: {e}")


def _secure_write(path: Path, data: dict) -> None:
    """Write JSON file with owner-only permissions."""
    _secure_mkdir(path.parent)

    with open(path, "w") as f:
        json.dump(data, f, indent=2, sort_keys=True)

    try:
        os.chmod(path, CONFIG_FILE_MODE)
    except OSError as e:
        logger.warning(f"Не удалось установить права на файл {path}: {e}")


@dataclass
class Config:
    prime: int = DEFAULT_PRIME
    max_morphisms: int = DEFAULT_MAX_MORPHISMS
    max_sg_subsets: int = DEFAULT_MAX_SG_SUBSETS
    workers: int = DEFAULT_CHECK_WORKERS
    search_coordinates: bool = True

    def save(self, path: Path = CONFIG_FILE) -> None:
        _secure_write(path, asdict(self))
        logger.debug(f"Конфигурация сохранена в {path}")

    @classmethod
    def load(cls, path: Path = CONFIG_FILE) -> "Config":
        """Load config from file; a missing or broken file yields defaults."""
        if not path.exists():
            return cls()

        try:
            with open(path) as f:
                data = json.load(f)
            known = {f.name for f in fields(cls)}
            unknown = set(data) - known
            if unknown:
                logger.warning(f"Неизвестные ключи конфигурации пропущены: {sorted(unknown)}")
            logger.debug(f"Конфигурация загружена из {path}")
            return cls(**{k: v for k, v in data.items() if k in known})
        except (json.JSONDecodeError, TypeError) as e:
            logger.warning(f"Ошибка чтения конфигурации: {e}")
            return cls()

    def with_overrides(
        self,
        prime: Optional[int] = None,
        max_morphisms: Optional[int] = None,
        max_sg_subsets: Optional[int] = None,
        workers: Optional[int] = None,
    ) -> "Config":
        """Return a copy with every non-None argument applied."""
        overrides = {
            "prime": prime,
            "max_morphisms": max_morphisms,
            "max_sg_subsets": max_sg_subsets,
            "workers": workers,
        }
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})
