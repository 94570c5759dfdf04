"""Study defaults: mesh-law constants per degree, frequency list, worker count."""

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..core.errors import ParameterError

CONFIG_ENV_VAR = "HELMFEM_STUDY_CONFIG"


class StudyConfig:
    """
    Defaults for wavenumber sweeps.

    The built-in table can be replaced by a JSON file named in the
    HELMFEM_STUDY_CONFIG environment variable (same keys as the defaults).
    """

    # C in k^(2p+1) h^(2p) = C; reference lines h = 2k^(-5/4), 3k^(-7/6), 6k^(-9/8)
    _DEFAULT_STUDY_CONFIGS: Dict[str, Any] = {
        "mesh_law": {
            "2": {"C": 16.0},
            "3": {"C": 729.0},
            "4": {"C": 1679616.0},
        },
        "frequencies": [0.5, 1.0, 2.0, 4.0, 8.0],
        "max_workers": 1,
        "mie_radius": 2.5,
        "max_h": 0.5,
        "refinement_h": [0.5, 0.25, 0.125],
    }

    def __init__(self, config_path: Optional[str] = None):
        self.configs = self._load_configs(config_path)

    def _load_configs(self, config_path: Optional[str]) -> Dict[str, Any]:
        configs = json.loads(json.dumps(self._DEFAULT_STUDY_CONFIGS))
        path = config_path or os.getenv(CONFIG_ENV_VAR)
        if path:
            try:
                config_file = Path(path)
                if not config_file.exists():
                    raise FileNotFoundError(f"Configuration file not found: {path}")
                with config_file.open("r", encoding="utf-8") as f:
                    configs = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                raise ParameterError(f"Error loading configuration from {path}: {e}") from e
        return configs

    def mesh_constant(self, p: int) -> float:
        table = self.configs.get("mesh_law", {})
        entry = table.get(str(p))
        if entry is None:
            supported = ", ".join(sorted(table))
            raise ParameterError(f"No default C for p={p}. Configured degrees: {supported}")
        return float(entry["C"])

    @property
    def frequencies(self) -> List[float]:
        return [float(f) for f in self.configs.get("frequencies", [])]

    @property
    def max_workers(self) -> int:
        return int(self.configs.get("max_workers", 1))

    @property
    def mie_radius(self) -> float:
        return float(self.configs.get("mie_radius", 2.5))

    @property
    def max_h(self) -> float:
        return float(self.configs.get("max_h", 0.5))

    @property
    def refinement_h(self) -> List[float]:
        """Mesh sizes of the fixed-k refinement and sampling-difference studies."""
        return [float(h) for h in self.configs.get("refinement_h", [0.5, 0.25, 0.125])]

    @classmethod
    def create_config_template(cls, config_path: str) -> None:
        """Write the built-in defaults as a JSON template."""
        config_file = Path(config_path)
        config_file.parent.mkdir(parents=True, exist_ok=True)
        with config_file.open("w", encoding="utf-8") as f:
            json.dump(cls._DEFAULT_STUDY_CONFIGS, f, indent=2, ensure_ascii=False)
