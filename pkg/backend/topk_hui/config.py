#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Configuration settings for the top-k high-utility itemset miner
"""

import copy
import logging
import os
from typing import Any, Dict

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# Default configuration
DEFAULT_CONFIG = {
    # Logging configuration
    "logging": {
        "level": "INFO",
        "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        "file": None  # Set to a path to enable file logging
    },

    # Miner defaults
    "mining": {
        "default_algo": "tko",
        "rsd_n": 4,
        "cov_cap": 1024,
        "oracle_max_items": 20,
    },

    # Dataset ingest
    "ingest": {
        "strict": True,
    },

    # Benchmark harness
    "bench": {
        "repetitions": 3,
        "workers": 1,
        "measure_memory": True,
    },

    # Report emission
    "report": {
        "format": "text",
    },
}

_INT_OVERRIDES = {
    "HUI_RSD_N": ("mining", "rsd_n"),
    "HUI_COV_CAP": ("mining", "cov_cap"),
    "HUI_ORACLE_MAX_ITEMS": ("mining", "oracle_max_items"),
    "HUI_BENCH_REPETITIONS": ("bench", "repetitions"),
    "HUI_BENCH_WORKERS": ("bench", "workers"),
}


def _env_bool(value: str) -> bool:
    return value.strip().lower() in {"1", "true", "yes", "on"}


def get_config() -> Dict[str, Any]:
    """
    Get configuration with environment variable overrides

    Returns:
        Configuration dictionary (a private copy, safe to mutate)
    """
    load_dotenv()
    config = copy.deepcopy(DEFAULT_CONFIG)

    if os.getenv("HUI_LOG_LEVEL"):
        config["logging"]["level"] = os.getenv("HUI_LOG_LEVEL").upper()

    if os.getenv("HUI_LOG_FILE"):
        config["logging"]["file"] = os.getenv("HUI_LOG_FILE")

    for var_name, (section, key) in _INT_OVERRIDES.items():
        raw = os.getenv(var_name)
        if not raw:
            continue
        try:
            config[section][key] = int(raw)
        except ValueError:
            logger.warning(f"Ignoring malformed {var_name}={raw!r}; keeping {config[section][key]}")

    if os.getenv("HUI_DEFAULT_ALGO"):
        config["mining"]["default_algo"] = os.getenv("HUI_DEFAULT_ALGO").lower()

    if os.getenv("HUI_REPORT_FORMAT"):
        config["report"]["format"] = os.getenv("HUI_REPORT_FORMAT").lower()

    if os.getenv("HUI_STRICT_INGEST"):
        config["ingest"]["strict"] = _env_bool(os.getenv("HUI_STRICT_INGEST"))

    return config
