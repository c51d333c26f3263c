import datetime as dt

import pytest

from factlens.config import (
    AnalysisConfig,
    ConfigError,
    load_config,
    serialize_config,
)


def test_empty_file_gives_reference_defaults(tmp_path):
    path = tmp_path / "empty.cfg"
    path.write_text("")
    cfg = load_config(path, env={})
    assert cfg.analysis.window_days == 15
    assert cfg.analysis.tau == 0.75
    assert cfg.analysis.bootstrap_resamples == 10000
    assert cfg.analysis.bootstrap_fraction == 0.2
    assert cfg.analysis.confidence_level == 0.95
    assert cfg.top_k_entities == 100
    assert cfg.top_k_polarity == 5
    assert cfg.precisions.positive == 1.0
    assert cfg.precisions.negative == 0.706
    assert cfg.precisions.neutral == 1.0
    assert cfg.date_from == dt.date(2018, 1, 1)
    assert cfg.date_to == dt.date(2023, 12, 31)


def test_missing_path_gives_defaults():
    assert load_config(None, env={}) == load_config(None, env={})


def test_invalid_tau_names_the_field(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("tau = 1.5\n")
    with pytest.raises(ConfigError, match="tau"):
        load_config(path, env={})


def test_unknown_key_is_fatal(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("windowdays = 10\n")
    with pytest.raises(ConfigError, match="windowdays"):
        load_config(path, env={})


def test_unparseable_value_names_the_field(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("bootstrap_resamples = lots\n")
    with pytest.raises(ConfigError, match="bootstrap_resamples"):
        load_config(path, env={})


def test_env_override_replaces_only_that_key(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("provider_endpoint = http://file-endpoint\ntau = 0.5\n")
    cfg = load_config(path, env={"FACTLENS_PROVIDER_ENDPOINT": "http://env-endpoint"})
    assert cfg.provider_endpoint == "http://env-endpoint"
    assert cfg.analysis.tau == 0.5


def test_api_key_comes_from_env_and_never_serializes(tmp_path):
    cfg = load_config(None, env={"FACTLENS_API_KEY": "sekret"})
    assert cfg.api_key == "sekret"
    assert "sekret" not in serialize_config(cfg)
    assert "api_key" not in serialize_config(cfg)


def test_round_trip_fixed_point(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "window_days = 10\ntau = 0.6\nseed = 42\nprovider_model = other-model\n"
        "date_from = 2019-02-03\nmin_support = 4\n"
    )
    cfg = load_config(path, env={})
    reserialized = tmp_path / "round.cfg"
    reserialized.write_text(serialize_config(cfg))
    assert load_config(reserialized, env={}) == cfg


def test_comments_and_blank_lines_ignored(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# a comment\n\nseed = 9\n")
    assert load_config(path, env={}).analysis.seed == 9


def test_http_kinds_require_endpoints(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("provider_kind = http\n")
    with pytest.raises(ConfigError, match="provider_endpoint"):
        load_config(path, env={})
    path.write_text("embedding_kind = http\n")
    with pytest.raises(ConfigError, match="embedding_endpoint"):
        load_config(path, env={})


def test_analysis_config_validation_direct():
    with pytest.raises(ConfigError):
        AnalysisConfig(window_days=-1)
    with pytest.raises(ConfigError):
        AnalysisConfig(bootstrap_fraction=0.0)
    with pytest.raises(ConfigError):
        AnalysisConfig(confidence_level=1.0)


def test_date_order_validated(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("date_from = 2022-01-01\ndate_to = 2020-01-01\n")
    with pytest.raises(ConfigError, match="date_from"):
        load_config(path, env={})
