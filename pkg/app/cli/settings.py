# Process-level settings using pydantic-settings
from pathlib import Path
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="MAXBLOCH_", env_file=".env", extra="ignore")

    # Root directory for relative output directories; empty means the working directory
    OUTPUT_ROOT: str = ""

    def resolve_output_dir(self, directory: str) -> Path:
        """Resolve a configured output directory against the output root."""

        path = Path(directory)
        if path.is_absolute() or not self.OUTPUT_ROOT:
            return path
        return Path(self.OUTPUT_ROOT) / path


def get_settings(env_file: Optional[str] = ".env") -> Settings:
    """Read settings from the environment at call time."""

    return Settings(_env_file=env_file)

