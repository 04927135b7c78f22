"""Configuration defaults, environment overrides and logger setup"""

import logging

import pytest

from topk_hui.cli import main
from topk_hui.config import DEFAULT_CONFIG, get_config
from topk_hui.utils.logger import ROOT_LOGGER_NAME, get_logger, setup_logging


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for var in ("HUI_LOG_LEVEL", "HUI_LOG_FILE", "HUI_RSD_N", "HUI_COV_CAP", "HUI_ORACLE_MAX_ITEMS",
                "HUI_BENCH_REPETITIONS", "HUI_BENCH_WORKERS", "HUI_STRICT_INGEST", "HUI_DEFAULT_ALGO",
                "HUI_REPORT_FORMAT"):
        monkeypatch.delenv(var, raising=False)
    monkeypatch.setattr("topk_hui.config.load_dotenv", lambda: False)


def test_defaults():
    config = get_config()
    assert config["mining"] == {"default_algo": "tko", "rsd_n": 4, "cov_cap": 1024, "oracle_max_items": 20}
    assert config["ingest"]["strict"] is True
    assert config["logging"]["file"] is None


def test_get_config_returns_a_copy():
    config = get_config()
    config["mining"]["rsd_n"] = 99
    assert DEFAULT_CONFIG["mining"]["rsd_n"] == 4


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("HUI_LOG_LEVEL", "debug")
    monkeypatch.setenv("HUI_COV_CAP", "64")
    monkeypatch.setenv("HUI_BENCH_WORKERS", "4")
    monkeypatch.setenv("HUI_STRICT_INGEST", "false")
    config = get_config()
    assert config["logging"]["level"] == "DEBUG"
    assert config["mining"]["cov_cap"] == 64
    assert config["bench"]["workers"] == 4
    assert config["ingest"]["strict"] is False


def test_malformed_integer_is_ignored(monkeypatch, caplog):
    monkeypatch.setenv("HUI_RSD_N", "four")
    with caplog.at_level(logging.WARNING):
        config = get_config()
    assert config["mining"]["rsd_n"] == 4
    assert "HUI_RSD_N" in caplog.text


def test_logger_namespace():
    assert get_logger("topk_hui.miners").name == "topk_hui.miners"
    assert get_logger("bench").name == "topk_hui.bench"
    assert get_logger().name == ROOT_LOGGER_NAME


def test_setup_logging_handlers(tmp_path):
    logger = setup_logging("WARNING")
    assert logger.level == logging.WARNING
    assert len(logger.handlers) == 1

    log_file = tmp_path / "nested" / "hui.log"
    logger = setup_logging("INFO", log_file=str(log_file))
    assert len(logger.handlers) == 2
    get_logger("ingest").info("hello")
    assert "hello" in log_file.read_text(encoding="utf-8")


def test_cli_defaults_follow_config(monkeypatch, sample_path, capsys):
    monkeypatch.setenv("HUI_DEFAULT_ALGO", "khmc")
    monkeypatch.setenv("HUI_REPORT_FORMAT", "json")
    assert main(["mine", "--input", sample_path, "--k", "1", "--stats"]) == 0
    out = capsys.readouterr().out
    assert '"algo": "khmc"' in out
