from __future__ import annotations

import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()

__all__ = ["Settings", "settings"]


@dataclass(frozen=True)
class Settings:
    # Field used when --field is omitted ("Q", "Q(z5)", "Fp:101")
    default_field: str = os.getenv("DEFAULT_FIELD", "Q")
    default_seed: int = int(os.getenv("DEFAULT_SEED", "0"))
    default_height: int = int(os.getenv("DEFAULT_HEIGHT", "9"))
    # Torsion search bound defaults to nmax_factor * k
    nmax_factor: int = int(os.getenv("NMAX_FACTOR", "4"))
    shear_retries: int = int(os.getenv("SHEAR_RETRIES", "8"))
    survey_workers: int = int(os.getenv("SURVEY_WORKERS", "1"))
    # Survey store; empty disables persistence
    database_url: str = os.getenv("DATABASE_URL", "")
    # Logging
    log_level: str = os.getenv("LOG_LEVEL", "WARNING")
    log_file: str = os.getenv("LOG_FILE", "")
    log_max_bytes: int = int(os.getenv("LOG_MAX_BYTES", "1048576"))  # 1MB
    log_backup_count: int = int(os.getenv("LOG_BACKUP_COUNT", "3"))

    def default_nmax(self, k: int) -> int:
        return self.nmax_factor * k


settings = Settings()
