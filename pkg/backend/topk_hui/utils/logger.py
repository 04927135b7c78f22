#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Logging for the topk_hui namespace

Every module logs through get_logger(__name__); only entry points call
setup_logging. Console records go to stderr so that mined itemsets written
to stdout stay machine-readable.
"""

import logging
import os
import sys
from typing import List, Optional

ROOT_LOGGER_NAME = "topk_hui"
DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s'


def _handlers(log_file: Optional[str]) -> List[logging.Handler]:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        os.makedirs(os.path.dirname(log_file) or ".", exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding='utf-8', mode='a'))
    return handlers


def setup_logging(
    level: str = "INFO",
    log_file: Optional[str] = None,
    format_string: Optional[str] = None
) -> logging.Logger:
    """
    (Re)configure the miner namespace; previous handlers are closed and replaced

    Args:
        level: DEBUG, INFO, WARNING, ERROR or CRITICAL
        log_file: Append records to this file as well; parent directories are created
        format_string: logging.Formatter pattern, DEFAULT_FORMAT when omitted
    """
    numeric_level = getattr(logging, level.upper(), logging.INFO)
    formatter = logging.Formatter(format_string or DEFAULT_FORMAT)

    logger = logging.getLogger(ROOT_LOGGER_NAME)
    for old in logger.handlers:
        old.close()
    logger.handlers.clear()
    logger.setLevel(numeric_level)

    for handler in _handlers(log_file):
        handler.setLevel(numeric_level)
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    logger.debug(f"Logging initialized - Level: {level}, File: {log_file}")
    return logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Logger under the miner namespace; dotted module paths inside it pass through"""
    if not name:
        return logging.getLogger(ROOT_LOGGER_NAME)
    if name == ROOT_LOGGER_NAME or name.startswith(ROOT_LOGGER_NAME + "."):
        return logging.getLogger(name)
    return logging.getLogger(f'{ROOT_LOGGER_NAME}.{name}')
