import logging
import sys

from topk_hui.utils.logger import ROOT_LOGGER_NAME

SERVICE_FORMAT = "%(asctime)s %(levelname)s %(name)s - %(message)s"


def configure_logging(level: str = "INFO", mining_level: str | None = None) -> None:
    """Route service and miner logs to one stdout handler on the root logger.

    The miner namespace gets no handler of its own here, so its records
    propagate to the root handler; mining_level only tunes its verbosity.
    """
    numeric_level = getattr(logging, str(level).upper(), logging.INFO)
    root = logging.getLogger()
    root.setLevel(numeric_level)
    logging.getLogger(ROOT_LOGGER_NAME).setLevel(
        getattr(logging, str(mining_level).upper(), numeric_level) if mining_level else numeric_level
    )
    if root.handlers:
        return

    handler = logging.StreamHandler(sys.stdout)
    handler.setFormatter(logging.Formatter(SERVICE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
    root.addHandler(handler)
