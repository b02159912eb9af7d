"""Configuration module using pydantic-settings."""

import logging
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

logger = logging.getLogger(__name__)

GateMode = Literal["off", "pseudo", "euclidean", "mahalanobis"]


class SensorConfig(BaseModel):
    """Placement and noise of one bearing-range sensor."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    position: tuple[float, float] = Field(..., description="Sensor position (px, py) in meters")
    bearing_std: float = Field(0.25, gt=0, description="Bearing noise std in radians")
    range_std: float = Field(10.0, gt=0, description="Range noise std in meters")
    detect_prob: float = Field(0.95, ge=0, le=1, description="Constant detection probability")
    clutter_rate: float = Field(10.0, ge=0, description="Expected clutter count per scan")
    range_max: float = Field(20000.0, gt=0, description="Observation volume range bound")


class SensorDefaults(BaseModel):
    """Values used for every sensor of the default layout."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    bearing_std: float = Field(0.25, gt=0)
    range_std: float = Field(10.0, gt=0)
    detect_prob: float = Field(0.95, ge=0, le=1)
    clutter_rate: float = Field(10.0, ge=0)
    range_max: float = Field(20000.0, gt=0)


class SectionSettings(BaseSettings):
    """Config section whose environment variables outrank values passed in (YAML)."""

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return env_settings, dotenv_settings, init_settings, file_secret_settings


class ScenarioConfig(SectionSettings):
    """Ground-truth and measurement generation configuration."""

    duration: int = Field(100, ge=1, description="Number of timesteps")
    dt: float = Field(1.0, gt=0, description="Sampling interval in seconds")
    region: tuple[float, float, float, float] = Field(
        (0.0, 10000.0, 0.0, 10000.0),
        description="Surveillance region (xmin, xmax, ymin, ymax) in meters",
    )
    birth_period: int = Field(5, ge=1, description="Steps between truth birth epochs")
    max_births_per_epoch: int = Field(3, ge=0, description="Births per epoch ~ U{0..max}")
    speed: float = Field(50.0, ge=0, description="Initial target speed in m/s")
    accel_noise: tuple[float, float] = Field((5.0, 5.0), description="Acceleration noise std")
    seed: int = Field(2024, ge=0, description="Root seed of every random stream")
    sensors: list[SensorConfig] = Field(default_factory=list, description="Explicit sensors")
    sensor_defaults: SensorDefaults = Field(default_factory=SensorDefaults)

    model_config = SettingsConfigDict(env_prefix="SCENARIO_", case_sensitive=False, extra="forbid")

    @model_validator(mode="after")
    def _check_geometry(self) -> "ScenarioConfig":
        xmin, xmax, ymin, ymax = self.region
        if not (xmin < xmax and ymin < ymax):
            raise ValueError(f"Degenerate region: {self.region}")
        if min(self.accel_noise) < 0:
            raise ValueError(f"Acceleration noise must be nonnegative: {self.accel_noise}")
        return self

    def resolved_sensors(self) -> list[SensorConfig]:
        """Get explicit sensors, or the default corner + edge-midpoint layout."""
        if self.sensors:
            return list(self.sensors)

        xmin, xmax, ymin, ymax = self.region
        xmid, ymid = (xmin + xmax) / 2, (ymin + ymax) / 2
        positions = [
            (xmin, ymin), (xmid, ymin), (xmax, ymin), (xmax, ymid),
            (xmax, ymax), (xmid, ymax), (xmin, ymax), (xmin, ymid),
        ]
        defaults = self.sensor_defaults.model_dump()
        return [SensorConfig(position=pos, **defaults) for pos in positions]


class FilterConfig(SectionSettings):
    """Particle LMB filter configuration."""

    survival_prob: float = Field(0.99, ge=0, le=1, description="Survival probability p_s")
    track_particles: int = Field(1000, ge=1, description="Particles per track")
    assoc_samples: int = Field(200, ge=1, description="Gibbs sweeps for association events")
    belief_prune: float = Field(1e-3, ge=0, le=1, description="Belief existence prune threshold")
    belief_cap: int | None = Field(100, ge=1, description="Belief cardinality cap (None = no cap)")
    extract_threshold: float = Field(0.5, ge=0, le=1, description="Estimate extraction threshold")

    model_config = SettingsConfigDict(env_prefix="FILTER_", case_sensitive=False, extra="forbid")


class BirthConfig(SectionSettings):
    """Adaptive birth configuration (Gibbs sampler and efficiency mechanisms)."""

    num_chains: int = Field(20, ge=1, description="Independent short Gibbs chains")
    chain_length: int = Field(5, ge=1, description="Full sweeps per chain")
    r_b_max: float = Field(1.0, ge=0, le=1, description="Maximum newborn existence")
    lambda_b: float = Field(0.5, ge=0, description="Expected births per step")
    tau_assoc: float = Field(0.01, ge=0, le=1, description="Pre-prune association threshold")
    gate_mode: GateMode = Field("euclidean", description="Pairwise gate variant")
    gate_threshold: float = Field(
        500.0,
        ge=0,
        description="pseudo: min pair psi-bar; euclidean: meters; mahalanobis: gate probability",
    )
    memoize: bool = Field(True, description="Cache psi-bar per measurement tuple")
    max_missed: int | None = Field(4, ge=0, description="Skip tuples with more misses")
    prune_threshold: float = Field(1e-3, ge=0, le=1, description="Birth existence prune threshold")
    cap: int | None = Field(100, ge=1, description="Birth cardinality cap (None = no cap)")
    num_particles: int = Field(1000, ge=1, description="Importance samples per psi-bar estimate")
    posterior_particles: int = Field(1000, ge=1, description="Particles per birth component")
    velocity_std: float = Field(35.0, ge=0, description="Birth prior velocity std per axis")
    workers: int = Field(1, ge=1, description="Threads running Gibbs chains")

    model_config = SettingsConfigDict(env_prefix="BIRTH_", case_sensitive=False, extra="forbid")

    @model_validator(mode="after")
    def _check_gate(self) -> "BirthConfig":
        if self.gate_mode == "mahalanobis" and not 0 < self.gate_threshold < 1:
            raise ValueError(
                f"Mahalanobis gate probability must lie in (0, 1), got {self.gate_threshold}"
            )
        return self


class ToggleConfig(SectionSettings):
    """On/off switches for the five efficiency mechanisms."""

    preprune: bool = Field(False, description="Associated measurement pre-pruning")
    gate: bool = Field(False, description="Pairwise measurement gating")
    memoize: bool = Field(False, description="Psi-bar memoization")
    prune_cap: bool = Field(False, description="Prune and cap the birth LMB")
    skip_miss: bool = Field(False, description="Missed-detection sample skipping")

    model_config = SettingsConfigDict(env_prefix="TOGGLES_", case_sensitive=False, extra="forbid")

    @classmethod
    def all_on(cls) -> "ToggleConfig":
        return cls(preprune=True, gate=True, memoize=True, prune_cap=True, skip_miss=True)

    def as_dict(self) -> dict[str, bool]:
        return {
            "preprune": self.preprune,
            "gate": self.gate,
            "memoize": self.memoize,
            "prune_cap": self.prune_cap,
            "skip_miss": self.skip_miss,
        }


class OutputConfig(SectionSettings):
    """Run output configuration."""

    dir: Path = Field(Path("runs/baseline"), description="Report output directory")
    label: str = Field("baseline", description="Run name")
    dump_scenario: bool = Field(False, description="Write the scenario dump next to the report")

    model_config = SettingsConfigDict(env_prefix="OUTPUT_", case_sensitive=False, extra="forbid")


class LoggingConfig(SectionSettings):
    """Logging configuration."""

    level: str = Field("INFO", description="Logging level")

    model_config = SettingsConfigDict(env_prefix="LOG_", case_sensitive=False, extra="forbid")


class AppConfig(BaseSettings):
    """Main application configuration; also the harness run configuration."""

    scenario: ScenarioConfig = Field(default_factory=ScenarioConfig)
    filter: FilterConfig = Field(default_factory=FilterConfig)
    birth: BirthConfig = Field(default_factory=BirthConfig)
    toggles: ToggleConfig = Field(default_factory=ToggleConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    model_config = SettingsConfigDict(case_sensitive=False, extra="forbid")

    @classmethod
    def from_yaml(cls, yaml_path: Path | str) -> "AppConfig":
        """Load configuration from YAML file.

        Raises:
            FileNotFoundError: If the file does not exist
            pydantic.ValidationError: On unknown keys or out-of-range values
        """
        yaml_path = Path(yaml_path)
        if not yaml_path.exists():
            raise FileNotFoundError(f"Config file not found: {yaml_path}")

        import yaml

        with yaml_path.open("r", encoding="utf-8") as f:
            yaml_data = yaml.safe_load(f) or {}

        sections: dict[str, type[SectionSettings]] = {
            "scenario": ScenarioConfig,
            "filter": FilterConfig,
            "birth": BirthConfig,
            "toggles": ToggleConfig,
            "output": OutputConfig,
            "logging": LoggingConfig,
        }
        unknown = sorted(set(yaml_data) - set(sections))
        if unknown:
            raise ValueError(f"Unknown config sections in {yaml_path}: {', '.join(unknown)}")

        # Env variables with the section prefix outrank the YAML values
        config_data: dict[str, Any] = {
            key: sections[key](**(value or {})) for key, value in yaml_data.items()
        }
        return cls(**config_data)

    def with_updates(self, **sections: dict[str, Any]) -> "AppConfig":
        """Return a validated copy with per-section field updates applied."""
        data = {name: getattr(self, name).model_dump() for name in type(self).model_fields}
        for name, update in sections.items():
            data[name].update(update)
        return type(self).model_validate(data)

    def effective_birth(self) -> BirthConfig:
        """Resolve toggles into the birth configuration actually run.

        A disabled mechanism is run at its neutral setting, so toggling never
        changes anything but the mechanism it names.
        """
        update: dict[str, Any] = {}
        if not self.toggles.preprune:
            update["tau_assoc"] = 1.0
        if not self.toggles.gate:
            update["gate_mode"] = "off"
        if not self.toggles.memoize:
            update["memoize"] = False
        if not self.toggles.prune_cap:
            update["prune_threshold"] = 0.0
            update["cap"] = None
        if not self.toggles.skip_miss:
            update["max_missed"] = None
        return BirthConfig.model_validate({**self.birth.model_dump(), **update})


# Global config instance
_config: AppConfig | None = None


def get_config() -> AppConfig:
    """Get application configuration (singleton)."""
    global _config
    if _config is None:
        config_path = Path("config.yaml")
        if config_path.exists():
            _config = AppConfig.from_yaml(config_path)
        else:
            _config = AppConfig()
        logger.info("Configuration loaded successfully")
    return _config


def set_config(config: AppConfig) -> None:
    """Install an explicit configuration (CLI and tests)."""
    global _config
    _config = config


def reset_config() -> None:
    """Forget the cached configuration."""
    global _config
    _config = None
