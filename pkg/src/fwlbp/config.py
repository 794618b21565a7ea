"""Pipeline configuration shared by the CLI and the evaluation harness."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields

from .errors import InvalidParameter


@dataclass
class PipelineConfig:
    r_min: int = 2
    r_max: int = 7
    radii: tuple = ((1, 8), (2, 8), (3, 8))
    pca_k: int = 300
    subspace_energy: float = 0.95
    subspace_dim: int | None = None  # overrides the energy policy when set
    norm_mean: float = 128.0
    norm_std: float = 20.0
    seed: int = 0
    regression_mode: str = "loglog"  # "loglog" | "linear"
    sqrt_placement: str = "before"  # "before" | "after" | "none" (relative to PCA)
    noise_before_normalize: bool = False
    folds: int = 10

    def __post_init__(self):
        if self.r_min < 2:
            raise InvalidParameter("r_min must be >= 2")
        if self.r_max <= self.r_min:
            raise InvalidParameter("r_max must exceed r_min")
        if self.pca_k < 1:
            raise InvalidParameter("pca_k must be >= 1")
        if self.regression_mode not in ("loglog", "linear"):
            raise InvalidParameter(f"unknown regression mode {self.regression_mode!r}")
        if self.sqrt_placement not in ("before", "after", "none"):
            raise InvalidParameter(f"unknown sqrt placement {self.sqrt_placement!r}")
        self.radii = tuple((float(r), int(n)) for r, n in self.radii)

    @property
    def descriptor_length(self) -> int:
        return sum(1 << n for _, n in self.radii)

    def to_json(self) -> str:
        obj = asdict(self)
        obj["radii"] = [list(rn) for rn in self.radii]
        return json.dumps(obj, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "PipelineConfig":
        obj = json.loads(text)
        known = {f.name for f in fields(cls)}
        obj = {k: v for k, v in obj.items() if k in known}
        if "radii" in obj:
            obj["radii"] = tuple(tuple(rn) for rn in obj["radii"])
        return cls(**obj)
