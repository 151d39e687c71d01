import os
from pathlib import Path
from typing import Any

from click import UsageError

CONFIG_FOLDER = os.path.expanduser("~/.config")
GEOINT_CONFIG_FOLDER = Path(CONFIG_FOLDER) / "geoint"
GEOINT_CONFIG_PATH = Path(
    os.getenv("GEOINT_CONFIG_PATH", str(GEOINT_CONFIG_FOLDER / ".geointrc"))
)

DEFAULT_CONFIG = {
    "GEOINT_PRECISION": os.getenv("GEOINT_PRECISION", "256"),
    "GEOINT_SAMPLES": os.getenv("GEOINT_SAMPLES", "7"),
    "GEOINT_SEED": os.getenv("GEOINT_SEED", "0"),
    "GEOINT_TOLERANCE": os.getenv("GEOINT_TOLERANCE", "1e-30"),
    "GEOINT_DENOMINATOR": os.getenv("GEOINT_DENOMINATOR", "64"),
    "GEOINT_MAX_BASIS": os.getenv("GEOINT_MAX_BASIS", "400"),
    "GEOINT_LOG_LEVEL": os.getenv("GEOINT_LOG_LEVEL", "WARNING"),
    "GEOINT_LOG_DIR": os.getenv("GEOINT_LOG_DIR", ""),
}

# Keys that may legitimately be empty.
OPTIONAL_KEYS = {"GEOINT_LOG_DIR"}


class Config(dict):  # type: ignore
    def __init__(self, config_path: Path, **defaults: Any):
        self.config_path = config_path
        super().__init__(**defaults)
        if self._exists:
            self._read()

    @property
    def _exists(self) -> bool:
        return self.config_path.exists()

    def save(self) -> None:
        self.config_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_path, "w", encoding="utf-8") as file:
            string_config = ""
            for key, value in self.items():
                string_config += f"{key}={value}\n"
            file.write(string_config)

    def _read(self) -> None:
        with open(self.config_path, "r", encoding="utf-8") as file:
            for line in file:
                if line.strip() and not line.startswith("#"):
                    key, value = line.strip().split("=", 1)
                    self[key.strip()] = value.strip()

    def get(self, key: str) -> str:  # type: ignore
        # Prioritize environment variables over config file.
        value = os.getenv(key) or super().get(key)
        if not value and key not in OPTIONAL_KEYS:
            raise UsageError(f"Missing config key: {key}")
        return value or ""

    def get_int(self, key: str) -> int:
        value = self.get(key)
        try:
            return int(value)
        except ValueError:
            raise UsageError(f"Config key {key} must be an integer, got {value!r}")

    def get_float(self, key: str) -> float:
        value = self.get(key)
        try:
            return float(value)
        except ValueError:
            raise UsageError(f"Config key {key} must be a number, got {value!r}")


cfg = Config(GEOINT_CONFIG_PATH, **DEFAULT_CONFIG)
