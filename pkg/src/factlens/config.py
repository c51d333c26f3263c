"""Run configuration: one flat key-value file plus environment overrides.

Defaults follow the analysis constants baked into the pipeline: a +/-15
day window, similarity threshold 0.75, 10,000 bootstrap resamples at a
20% sample fraction and 95% level, top-100 entity sets, top-5 polarity
entities, and negative-class precision 0.706. Secrets (the API key) are
read from the environment only and never serialized.
"""

from __future__ import annotations

import datetime as dt
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Mapping

from .polarity import PrecisionConfig
from .providers import ProviderConfig

ENV_PREFIX = "FACTLENS_"
API_KEY_ENV = "FACTLENS_API_KEY"


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class AnalysisConfig:
    window_days: int = 15
    tau: float = 0.75
    bootstrap_resamples: int = 10000
    bootstrap_fraction: float = 0.2
    confidence_level: float = 0.95
    seed: int = 0

    def __post_init__(self) -> None:
        if self.window_days < 0:
            raise ConfigError("window_days: must be >= 0")
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError("tau: must be in [0, 1]")
        if self.bootstrap_resamples < 1:
            raise ConfigError("bootstrap_resamples: must be >= 1")
        if not 0.0 < self.bootstrap_fraction <= 1.0:
            raise ConfigError("bootstrap_fraction: must be in (0, 1]")
        if not 0.0 < self.confidence_level < 1.0:
            raise ConfigError("confidence_level: must be in (0, 1)")


@dataclass(frozen=True)
class RunConfig:
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    precisions: PrecisionConfig = field(default_factory=PrecisionConfig)
    top_k_entities: int = 100
    top_k_polarity: int = 5
    min_support: int = 10
    date_from: dt.date = dt.date(2018, 1, 1)
    date_to: dt.date = dt.date(2023, 12, 31)
    provider_kind: str = "synthetic"  # synthetic | fixtures | http
    provider_endpoint: str = ""
    provider_model: str = "gpt-3.5-turbo"
    provider_max_retries: int = 3
    provider_rate_limit: float = 5.0
    provider_fixtures_dir: str = ""
    embedding_kind: str = "hashed"  # hashed | http
    embedding_endpoint: str = ""
    embedding_dim: int = 64
    store_dir: str = "store"
    cache_dir: str = "cache"
    output_dir: str = "out"
    aliases_file: str = ""
    input_file: str = ""
    api_key: str | None = None  # env only; never serialized

    def provider_config(self, cache_dir: str | Path | None = None) -> ProviderConfig:
        return ProviderConfig(
            endpoint=self.provider_endpoint,
            model_name=self.provider_model,
            max_retries=self.provider_max_retries,
            rate_limit=self.provider_rate_limit,
            cache_dir=Path(cache_dir if cache_dir is not None else self.cache_dir),
        )


_SIMPLE_KEYS: dict[str, tuple[str, type]] = {
    "top_k_entities": ("top_k_entities", int),
    "top_k_polarity": ("top_k_polarity", int),
    "min_support": ("min_support", int),
    "provider_kind": ("provider_kind", str),
    "provider_endpoint": ("provider_endpoint", str),
    "provider_model": ("provider_model", str),
    "provider_max_retries": ("provider_max_retries", int),
    "provider_rate_limit": ("provider_rate_limit", float),
    "provider_fixtures_dir": ("provider_fixtures_dir", str),
    "embedding_kind": ("embedding_kind", str),
    "embedding_endpoint": ("embedding_endpoint", str),
    "embedding_dim": ("embedding_dim", int),
    "store_dir": ("store_dir", str),
    "cache_dir": ("cache_dir", str),
    "output_dir": ("output_dir", str),
    "aliases_file": ("aliases_file", str),
    "input_file": ("input_file", str),
}

_ANALYSIS_KEYS: dict[str, type] = {
    "window_days": int,
    "tau": float,
    "bootstrap_resamples": int,
    "bootstrap_fraction": float,
    "confidence_level": float,
    "seed": int,
}

_PRECISION_KEYS = {
    "precision_positive": "positive",
    "precision_negative": "negative",
    "precision_neutral": "neutral",
}

_DATE_KEYS = ("date_from", "date_to")

KNOWN_KEYS = (
    set(_SIMPLE_KEYS) | set(_ANALYSIS_KEYS) | set(_PRECISION_KEYS) | set(_DATE_KEYS)
)


def _parse_value(key: str, raw: str, kind: type):
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind.__name__}") from None


def parse_config_text(text: str) -> dict[str, str]:
    """Parse `key = value` lines; '#' starts a comment."""
    values: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {line_no}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        values[key.strip()] = value.strip()
    return values


def load_config(
    path: str | Path | None = None, env: Mapping[str, str] | None = None
) -> RunConfig:
    """Load, override from the environment, and validate the run config."""
    env = os.environ if env is None else env
    values: dict[str, str] = {}
    if path is not None:
        p = Path(path)
        try:
            values = parse_config_text(p.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {p}: {exc}") from exc
    for env_key, env_value in env.items():
        if env_key == API_KEY_ENV or not env_key.startswith(ENV_PREFIX):
            continue
        key = env_key[len(ENV_PREFIX) :].lower()
        if key in KNOWN_KEYS:
            values[key] = env_value

    unknown = sorted(set(values) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")

    analysis_kwargs = {}
    for key, kind in _ANALYSIS_KEYS.items():
        if key in values:
            analysis_kwargs[key] = _parse_value(key, values[key], kind)
    precision_kwargs = {}
    for key, attr in _PRECISION_KEYS.items():
        if key in values:
            precision_kwargs[attr] = _parse_value(key, values[key], float)
    simple_kwargs = {}
    for key, (attr, kind) in _SIMPLE_KEYS.items():
        if key in values:
            simple_kwargs[attr] = _parse_value(key, values[key], kind)
    date_kwargs = {}
    for key in _DATE_KEYS:
        if key in values:
            try:
                date_kwargs[key] = dt.date.fromisoformat(values[key])
            except ValueError:
                raise ConfigError(f"{key}: invalid date {values[key]!r}") from None

    try:
        analysis = AnalysisConfig(**analysis_kwargs)
        precisions = PrecisionConfig(**precision_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    cfg = RunConfig(
        analysis=analysis,
        precisions=precisions,
        api_key=env.get(API_KEY_ENV),
        **simple_kwargs,
        **date_kwargs,
    )
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.top_k_entities < 1:
        raise ConfigError("top_k_entities: must be >= 1")
    if cfg.top_k_polarity < 1:
        raise ConfigError("top_k_polarity: must be >= 1")
    if cfg.min_support < 1:
        raise ConfigError("min_support: must be >= 1")
    if cfg.date_from > cfg.date_to:
        raise ConfigError("date_from: must not be after date_to")
    if cfg.provider_kind not in ("synthetic", "fixtures", "http"):
        raise ConfigError(f"provider_kind: unknown kind {cfg.provider_kind!r}")
    if cfg.embedding_kind not in ("hashed", "http"):
        raise ConfigError(f"embedding_kind: unknown kind {cfg.embedding_kind!r}")
    if cfg.embedding_dim < 1:
        raise ConfigError("embedding_dim: must be >= 1")
    if cfg.provider_kind == "http" and not cfg.provider_endpoint:
        raise ConfigError("provider_endpoint: required when provider_kind = http")
    if cfg.embedding_kind == "http" and not cfg.embedding_endpoint:
        raise ConfigError("embedding_endpoint: required when embedding_kind = http")
    if cfg.provider_max_retries < 0:
        raise ConfigError("provider_max_retries: must be >= 0")
    if cfg.provider_rate_limit <= 0:
        raise ConfigError("provider_rate_limit: must be > 0")


def serialize_config(cfg: RunConfig) -> str:
    """Effective config as sorted `key = value` lines (API key excluded)."""
    pairs: dict[str, str] = {}
    for f in fields(AnalysisConfig):
        pairs[f.name] = str(getattr(cfg.analysis, f.name))
    pairs["precision_positive"] = str(cfg.precisions.positive)
    pairs["precision_negative"] = str(cfg.precisions.negative)
    pairs["precision_neutral"] = str(cfg.precisions.neutral)
    for key, (attr, _) in _SIMPLE_KEYS.items():
        pairs[key] = str(getattr(cfg, attr))
    pairs["date_from"] = cfg.date_from.isoformat()
    pairs["date_to"] = cfg.date_to.isoformat()
    return "".join(f"{key} = {pairs[key]}\n" for key in sorted(pairs))


def with_seed(cfg: AnalysisConfig, seed: int) -> AnalysisConfig:
    return replace(cfg, seed=seed)
