import os
from pathlib import Path
from typing import List, Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from trafficweb.core.errors import ParameterDomainError

load_dotenv()

LOG_LEVEL = os.getenv("TRAFFICWEB_LOG_LEVEL", "INFO").upper()
DEFAULT_OUT_DIR = os.getenv("TRAFFICWEB_OUT_DIR", "out")
DEFAULT_WORKERS = int(os.getenv("TRAFFICWEB_WORKERS", "1"))
DEFAULT_BIN_RATIO = float(os.getenv("TRAFFICWEB_BIN_RATIO", "1.3"))
DEFAULT_XMIN = float(os.getenv("TRAFFICWEB_XMIN", "10"))

# Relative tolerance for every exact invariant of the growth model
INVARIANT_TOLERANCE = 1e-9

# Spectrum classes with fewer members are emitted but flagged unreliable
RELIABLE_CLASS_SIZE = 5

# Minimum class size used when measuring the strength-degree slope A
STRENGTH_CLASS_SIZE = 10

# Minimum tail size for a power-law fit
MIN_TAIL_SIZE = 50

SEED_LIMIT = 2**64

# Reinforcement values tabulated by predict and grown by sweep
SWEEP_DELTAS = (0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0)

Command = Literal["generate", "analyze", "predict", "ensemble", "compare", "sweep"]


class ModelParams(BaseModel):
    """Dimensionless model knobs. w0 is fixed to 1; every quantity is rescaled by it."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(default=2, ge=1)
    delta: float = Field(default=0.5, ge=0)
    n0: int = Field(default=3, ge=1)
    n_final: int = Field(default=1000, ge=1)
    rng_seed: int = Field(default=0, ge=0, lt=SEED_LIMIT)

    @model_validator(mode="before")
    @classmethod
    def default_seed_size(cls, data):
        # Seed defaults to the smallest ring that can host m distinct out-links
        if isinstance(data, dict) and data.get("n0") is None:
            m = data.get("m", 2)
            if isinstance(m, int):
                data = {**data, "n0": m + 1}
        return data

    @model_validator(mode="after")
    def check_sizes(self) -> "ModelParams":
        if self.n0 < self.m + 1:
            raise ValueError(f"n0={self.n0} cannot host {self.m} distinct out-links per seed node (need n0 >= m + 1)")
        if self.n_final < self.n0:
            raise ValueError(f"n_final={self.n_final} is smaller than the seed size n0={self.n0}")
        return self


class RunConfig(BaseModel):
    """Everything a CLI invocation needs"""

    command: Command
    params: ModelParams = Field(default_factory=ModelParams)
    runs: int = Field(default=1, ge=1)
    out_dir: Path = Field(default_factory=lambda: Path(DEFAULT_OUT_DIR))
    bin_ratio: float = Field(default=DEFAULT_BIN_RATIO, gt=1)
    x_min: float = Field(default=DEFAULT_XMIN, gt=0)
    track: List[int] = Field(default_factory=list)
    input: Optional[Path] = None
    a: Optional[float] = Field(default=None, gt=0)
    workers: int = Field(default=DEFAULT_WORKERS, ge=1)
    deltas: List[float] = Field(default_factory=lambda: list(SWEEP_DELTAS), min_length=1)

    @model_validator(mode="after")
    def check_lists(self) -> "RunConfig":
        if any(node < 0 for node in self.track):
            raise ValueError("tracked node ids must be non-negative")
        if any(not delta >= 0 for delta in self.deltas):
            raise ValueError(f"sweep values of delta must be non-negative, got {self.deltas}")
        # one output directory per value, named delta_{value:g}
        if len({f"{delta:g}" for delta in self.deltas}) != len(self.deltas):
            raise ValueError(f"sweep values of delta must be distinct, got {self.deltas}")
        return self


def _describe(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(segment) for segment in item.get("loc", ())) or "params"
        parts.append(f"{location}: {item.get('msg')}")
    return "; ".join(parts)


def build_params(**fields) -> ModelParams:
    """
    Validate model parameters.
    Raises ParameterDomainError instead of pydantic's ValidationError.
    """
    try:
        return ModelParams(**fields)
    except ValidationError as e:
        raise ParameterDomainError(f"Invalid model parameters: {_describe(e)}") from e


def build_config(**fields) -> RunConfig:
    try:
        return RunConfig(**fields)
    except ValidationError as e:
        raise ParameterDomainError(f"Invalid run configuration: {_describe(e)}") from e


def ensure_out_dir(path: Path) -> Path:
    """Create the output directory if needed and make sure it is writable"""
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ParameterDomainError(f"Cannot create output directory {path}: {str(e)}") from e
    if not os.access(path, os.W_OK):
        raise ParameterDomainError(f"Output directory {path} is not writable")
    return path
