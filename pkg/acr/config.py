"""
Configuration management utility.

Loads analysis settings and numeric tolerances from an optional YAML file at
the project root. Every key has a built-in default, so the tool runs without
any configuration file at all.
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml


DEFAULTS: Dict[str, Any] = {
    "analysis": {
        "seed": 0,
        "samples": 64,
        "sample_max": 97,
    },
    "tolerances": {
        "rank": 1e-9,
        "residual": 1e-9,
        "agreement": 1e-9,
        "zero": 1e-8,
        "newton_tol": 1e-12,
        "newton_max_iter": 50,
    },
    "environment": {
        "log_level": "WARNING",
        "color": True,
    },
}


class ConfigManager:
    """
    Manages configuration loading from a YAML file.
    """

    def __init__(self, config_file: str = "acr_scan.yaml"):
        """
        Initialize the configuration manager.

        Args:
            config_file: Config file name, resolved against the project root
                (absolute paths are used as given)
        """
        self.project_root = self._find_project_root()
        path = Path(config_file)
        self.config_file = path if path.is_absolute() else self.project_root / path
        self._config: Optional[Dict[str, Any]] = None
        self._overrides: Dict[str, Any] = {}

    def _find_project_root(self) -> Path:
        """Find the project root directory by looking for marker files."""
        current = Path.cwd()
        markers = ['acr_scan.example.yaml', 'pyproject.toml', 'README.md']

        while current != current.parent:
            if any((current / marker).exists() for marker in markers):
                return current
            current = current.parent

        return Path.cwd()

    def load_config(self) -> Dict[str, Any]:
        """
        Load configuration from the YAML file.

        Returns:
            Dictionary with the file contents, empty when the file is absent

        Raises:
            yaml.YAMLError: If the YAML file is malformed
        """
        if self._config is None:
            if self.config_file.exists():
                with open(self.config_file, 'r') as f:
                    self._config = yaml.safe_load(f) or {}
            else:
                self._config = {}
        return self._config

    def reload(self) -> None:
        self._config = None

    def set_override(self, key_path: str, value: Any) -> None:
        """Override a key for this process (command-line flags)."""
        self._overrides[key_path] = value

    def clear_overrides(self) -> None:
        self._overrides.clear()

    def get_config(self, key_path: str, default: Any = None) -> Any:
        """
        Get a config value using dot notation.

        Lookup order: overrides, the config file, DEFAULTS.

        Args:
            key_path: Dot-separated path (e.g., 'analysis.samples')
            default: Value returned when no layer has the key

        Returns:
            The config value or default
        """
        if key_path in self._overrides:
            return self._overrides[key_path]
        value = self._get_nested_value(self.load_config(), key_path)
        if value is None:
            value = self._get_nested_value(DEFAULTS, key_path)
        return default if value is None else value

    def _get_nested_value(self, data: Dict[str, Any], key_path: str) -> Any:
        current: Any = data
        try:
            for key in key_path.split('.'):
                current = current[key]
            return current
        except (KeyError, TypeError):
            return None

    def get_analysis_config(self) -> Dict[str, Any]:
        """Settings for the family-level analysis (sampling stage)."""
        return {
            'seed': int(self.get_config('analysis.seed')),
            'samples': int(self.get_config('analysis.samples')),
            'sample_max': int(self.get_config('analysis.sample_max')),
        }

    def get_tolerance_config(self) -> Dict[str, float]:
        """Floating tolerances for the pointwise numerics."""
        return {
            'rank': float(self.get_config('tolerances.rank')),
            'residual': float(self.get_config('tolerances.residual')),
            'agreement': float(self.get_config('tolerances.agreement')),
            'zero': float(self.get_config('tolerances.zero')),
            'newton_tol': float(self.get_config('tolerances.newton_tol')),
            'newton_max_iter': int(self.get_config('tolerances.newton_max_iter')),
        }

    def get_environment_config(self) -> Dict[str, Any]:
        """
        Get environment configuration.

        ACR_SCAN_COLOR=0 in the process environment disables color regardless
        of the file setting.
        """
        color = bool(self.get_config('environment.color'))
        if os.environ.get('ACR_SCAN_COLOR') == '0':
            color = False
        return {
            'log_level': str(self.get_config('environment.log_level')).upper(),
            'color': color,
        }


# Global configuration manager instance
config_manager = ConfigManager()


def get_config(key_path: str, default: Any = None) -> Any:
    """Convenience function to get a config value."""
    return config_manager.get_config(key_path, default)


def get_analysis_config() -> Dict[str, Any]:
    return config_manager.get_analysis_config()


def get_tolerance_config() -> Dict[str, float]:
    return config_manager.get_tolerance_config()


def get_environment_config() -> Dict[str, Any]:
    return config_manager.get_environment_config()
