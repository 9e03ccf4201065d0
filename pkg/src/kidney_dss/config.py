"""Experiment configuration: a flat ``key = value`` text format.

Grammar: one ``key = value`` pair per line; blank lines and lines starting
with ``#`` are ignored; keys are dotted lowercase; values are integers,
floats, ``true``/``false``, ``none`` (for optional limits) or plain strings.
A parsed config re-serializes to a canonical text, so a run is reproducible
from its config alone.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .boosting import BoostingConfig
from .errors import ConfigError
from .forest import ForestConfig
from .logistic import LogisticConfig
from .synthetic import DEFAULT_POSITIVE_FRACTION, SyntheticSpec


def _parse_int(token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ConfigError(f"expected an integer, got {token!r}") from None


def _parse_float(token: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ConfigError(f"expected a number, got {token!r}") from None


def _parse_bool(token: str) -> bool:
    lowered = token.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    raise ConfigError(f"expected true or false, got {token!r}")


def _parse_opt_int(token: str):
    return None if token.lower() == "none" else _parse_int(token)


def _parse_opt_str(token: str):
    return None if token.lower() == "none" else token


def _show(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


#: key -> (attribute, parser); order defines the serialized layout.
KEY_SPECS: dict[str, tuple[str, object]] = {
    "data": ("data", _parse_opt_str),
    "out": ("out", _parse_opt_str),
    "seed": ("seed", _parse_int),
    "train_fraction": ("train_fraction", _parse_float),
    "threshold": ("threshold", _parse_float),
    "stratify": ("stratify", _parse_bool),
    "winsorize": ("winsorize", _parse_bool),
    "mad_cutoff": ("mad_cutoff", _parse_float),
    "synthetic.n": ("synthetic_n", _parse_int),
    "synthetic.positive_fraction": ("synthetic_positive_fraction", _parse_float),
    "synthetic.noise_columns": ("synthetic_noise_columns", _parse_int),
    "logistic.learning_rate": ("logistic_learning_rate", _parse_float),
    "logistic.max_iters": ("logistic_max_iters", _parse_int),
    "logistic.tolerance": ("logistic_tolerance", _parse_float),
    "forest.n_tree": ("forest_n_tree", _parse_int),
    "forest.mtry": ("forest_mtry", _parse_opt_int),
    "forest.max_depth": ("forest_max_depth", _parse_opt_int),
    "forest.min_samples_leaf": ("forest_min_samples_leaf", _parse_int),
    "boosting.n_stages": ("boosting_n_stages", _parse_int),
    "boosting.learning_rate": ("boosting_learning_rate", _parse_float),
    "boosting.max_depth": ("boosting_max_depth", _parse_opt_int),
    "boosting.min_samples_leaf": ("boosting_min_samples_leaf", _parse_int),
}


@dataclass
class ExperimentConfig:
    data: str | None = None  # CSV path; absent means synthetic generation
    out: str | None = None
    seed: int = 0
    train_fraction: float = 0.9
    threshold: float = 0.5
    stratify: bool = False
    winsorize: bool = False
    mad_cutoff: float = 3.0
    synthetic_n: int = 584
    synthetic_positive_fraction: float = DEFAULT_POSITIVE_FRACTION
    synthetic_noise_columns: int = 0
    logistic_learning_rate: float = 0.1
    logistic_max_iters: int = 5000
    logistic_tolerance: float = 1e-8
    forest_n_tree: int = 500
    forest_mtry: int | None = None
    forest_max_depth: int | None = None
    forest_min_samples_leaf: int = 1
    boosting_n_stages: int = 200
    boosting_learning_rate: float = 0.1
    boosting_max_depth: int | None = 3
    boosting_min_samples_leaf: int = 5

    def validate(self, require_out: bool = False) -> "ExperimentConfig":
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold must be in [0, 1], got {self.threshold}")
        if self.mad_cutoff <= 0:
            raise ConfigError(f"mad_cutoff must be > 0, got {self.mad_cutoff}")
        if require_out and not self.out:
            raise ConfigError("an output directory is required (key 'out' or flag --out)")
        # Constructing the component configs runs their own validation.
        self.logistic_config()
        self.forest_config()
        self.boosting_config()
        if self.data is None:
            self.synthetic_spec()
        return self

    def logistic_config(self) -> LogisticConfig:
        return LogisticConfig(
            learning_rate=self.logistic_learning_rate,
            max_iters=self.logistic_max_iters,
            tolerance=self.logistic_tolerance,
        )

    def forest_config(self) -> ForestConfig:
        return ForestConfig(
            n_tree=self.forest_n_tree,
            mtry=self.forest_mtry,
            max_depth=self.forest_max_depth,
            min_samples_leaf=self.forest_min_samples_leaf,
        )

    def boosting_config(self) -> BoostingConfig:
        return BoostingConfig(
            n_stages=self.boosting_n_stages,
            learning_rate=self.boosting_learning_rate,
            max_depth=self.boosting_max_depth,
            min_samples_leaf=self.boosting_min_samples_leaf,
        )

    def synthetic_spec(self) -> SyntheticSpec:
        return SyntheticSpec(
            n_rows=self.synthetic_n,
            positive_fraction=self.synthetic_positive_fraction,
            noise_columns=self.synthetic_noise_columns,
        )

    def to_text(self) -> str:
        lines = [f"{key} = {_show(getattr(self, attr))}" for key, (attr, _) in KEY_SPECS.items()]
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def parse_config(text: str) -> ExperimentConfig:
    config = ExperimentConfig()
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KEY_SPECS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        attr, parser = KEY_SPECS[key]
        try:
            setattr(config, attr, parser(value))
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: key {key!r}: {exc}") from None
    return config


def load_config(path) -> ExperimentConfig:
    from pathlib import Path

    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text)
